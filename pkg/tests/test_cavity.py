from dataclasses import replace

import numpy as np
import pytest

from qdecode import cavity
from qdecode.cavity import (
    CONTROLLED_SQRT_X,
    PulseParams,
    anchor_first_pulse,
    apply_on_resonant,
    composite_csqrtx,
    default_pulse_params,
    fidelity_report,
    jc_off_resonant,
    jc_on_resonant,
    phase_condition_residual,
    phase_condition_variants,
    ramsey_unitary,
    single_qubit_rotation,
    solve_phase_condition,
)
from qdecode.errors import DomainError, InfeasibleError, SubspaceViolation
from qdecode.gates import ry, rz

NU = 2 * np.pi * 50e9
S = 1 / np.sqrt(2)


@pytest.fixture(scope="module")
def pp():
    return default_pulse_params()


def test_ramsey_examples():
    assert np.allclose(ramsey_unitary(0.0, 0.0, 0.0), np.eye(2))
    assert np.allclose(ramsey_unitary(1.0, np.pi / 4, 0.0), [[S, S], [-S, S]])
    assert np.allclose(ramsey_unitary(1.0, np.pi / 2, 0.0), [[0, 1], [-1, 0]], atol=1e-15)
    assert np.allclose(ramsey_unitary(1.0, np.pi / 4, 0.0), ry(np.pi / 2))


def test_ramsey_large_phase_is_reduced_exactly():
    # nu * tau is an exact multiple of 4 pi: the free-precession factor is the identity
    tau = 2 / 50e9
    u = ramsey_unitary(tau, 0.0, NU)
    assert np.max(np.abs(u - np.eye(2))) < 1e-9


def test_single_qubit_rotations():
    assert np.allclose(single_qubit_rotation("y", 0.0), np.eye(2))
    assert np.allclose(single_qubit_rotation("z", np.pi), np.diag([1j, -1j]))
    assert np.allclose(single_qubit_rotation("x", np.pi), [[0, 1j], [1j, 0]])
    with pytest.raises(DomainError):
        single_qubit_rotation("w", 1.0)


def test_rx_identity_random_angles():
    rng = np.random.default_rng(11)
    for th in rng.uniform(-2 * np.pi, 2 * np.pi, 100):
        c, s = np.cos(th / 2), np.sin(th / 2)
        closed = np.array([[c, 1j * s], [1j * s, c]])
        assert np.allclose(rz(np.pi / 2) @ ry(th) @ rz(-np.pi / 2), closed)
        assert np.allclose(single_qubit_rotation("x", th), closed)


def test_off_resonant(pp):
    zero_t = jc_off_resonant(pp, 0.0)
    assert np.allclose(zero_t, np.eye(4))
    # g_eff t = pi with nu t = 0
    q = PulseParams(0.0, 1.0, 1.0, 0, 0, 0, 0, np.pi, 1.0)
    m = jc_off_resonant(q)
    assert m[0, 0] == pytest.approx(-1.0)
    off = m - np.diag(np.diag(m))
    assert np.all(off == 0)
    with pytest.raises(DomainError):
        jc_off_resonant(replace(pp, delta=0.0))


def test_on_resonant():
    m = jc_on_resonant()
    down0 = np.eye(4)[2]
    up0 = np.eye(4)[0]
    assert np.allclose(m @ down0, down0)
    assert np.allclose(m @ up0, -1j * np.eye(4)[3])
    assert np.allclose(m @ m @ up0, -up0)
    # self-inverse up to -1 on the operational subspace {up0, down0 is fixed, down1}
    ops = [0, 3]
    assert np.allclose((m @ m)[np.ix_(ops, ops)], -np.eye(2))
    with pytest.raises(SubspaceViolation):
        apply_on_resonant(np.eye(4)[1])


def test_composite_fidelity(pp):
    gate = composite_csqrtx(pp)
    assert gate.fidelity >= 1 - 1e-9
    assert gate.leak < 1e-9
    assert gate.passed
    assert abs(gate.phase_residual) < 1e-9 and abs(gate.anchor_residual) < 1e-9
    assert gate.coupling_phase == pytest.approx(np.pi / 4)
    # unitary on the cavity-vacuum subspace
    r = gate.restricted
    assert np.max(np.abs(r.conj().T @ r - np.eye(4))) < 1e-10


def test_composite_branches(pp):
    r = composite_csqrtx(pp).restricted
    ph = r[0, 0]
    # control up: target returns to itself
    assert np.allclose(r[:2, :2] / ph, np.eye(2), atol=1e-9)
    # control down: square-root-of-NOT block
    assert np.allclose(r[2:, 2:] / ph, CONTROLLED_SQRT_X[2:, 2:], atol=1e-9)


def test_composite_up_variant():
    pp = default_pulse_params(fire_on="up")
    gate = composite_csqrtx(pp, fire_on="up")
    assert gate.passed
    r = gate.restricted / gate.restricted[2, 2]
    # control up, target up -> ((1+i)|up> + (1-i)|down>)/2
    assert np.allclose(r[:2, 0], [(1 + 1j) / 2, (1 - 1j) / 2], atol=1e-9)
    assert np.allclose(r[2:, 2:], np.eye(2), atol=1e-9)


def test_square_is_cnot(pp):
    r = composite_csqrtx(pp).restricted
    sq = r @ r
    cnot = np.eye(4)[[0, 1, 3, 2]]
    ph = sq[0, 0]
    assert np.max(np.abs(sq / ph - cnot)) < 1e-8
    assert fidelity_report(pp)["square_vs_cnot"] == pytest.approx(1.0, abs=1e-9)


def test_sensitivity_to_phase_condition(pp):
    bad = replace(pp, tau_prime=pp.tau_prime + (np.pi / 2) / pp.nu)
    assert abs(phase_condition_residual(bad)) == pytest.approx(np.pi / 2, abs=1e-6)
    assert composite_csqrtx(bad).fidelity < 0.99


def test_coupling_phase_pi_over_two_gives_cnot():
    pp = default_pulse_params()
    geff = (np.pi / 2) / pp.t
    q = replace(pp, delta=pp.g**2 / geff)
    q = solve_phase_condition(anchor_first_pulse(q), near=pp.tau_prime)
    r = composite_csqrtx(q, rz_angle=np.pi / 2).restricted
    ph = r[0, 0]
    assert np.max(np.abs(r / ph - np.eye(4)[[0, 1, 3, 2]])) < 1e-8


def test_solve_trivial():
    q = PulseParams(NU, 1.0, 1.0, 1.0, 1.0, 1e-6, 1e-6, 0.0, 1.0)
    assert abs(phase_condition_residual(q)) < 1e-9
    out = solve_phase_condition(q, near=1e-6)
    assert out.tau_prime == pytest.approx(1e-6, rel=1e-12)


def test_solve_generic_t():
    # t chosen so nu t is not a multiple of 2 pi
    pp = default_pulse_params(t=100.0000123e-6)
    base = replace(pp, tau_prime=0.9e-6)
    out = solve_phase_condition(base)
    assert 0 < out.tau_prime <= 2 * np.pi / NU
    assert abs(phase_condition_residual(out)) < 1e-9
    near = solve_phase_condition(base, near=1e-6)
    assert abs(near.tau_prime - 1e-6) <= np.pi / NU
    assert near.eps_prime * near.tau_prime == pytest.approx(np.pi / 4)
    assert composite_csqrtx(near).passed


def test_phase_condition_readings():
    pp = default_pulse_params(t=100.0000123e-6)
    rows = {(r["form"], r["g_sign"]): r for r in phase_condition_variants(pp)}
    assert rows[("derived", 1)]["passed"]
    assert not rows[("printed", 1)]["passed"]
    assert not rows[("printed", -1)]["passed"]


def test_solve_infeasible():
    q = PulseParams(0.0, 1.0, 1.0, 1.0, 1.0, 1e-6, 1e-6, 1.0, 1.0)
    with pytest.raises(InfeasibleError) as err:
        solve_phase_condition(q)
    assert len(err.value.tried) > 0


def test_fidelity_report_fields(pp):
    rep = fidelity_report(pp)
    for key in ("fidelity", "cavity_leak", "phase_condition_residual", "branches", "params"):
        assert key in rep
    assert set(rep["branches"]) == {"up,up", "up,down", "down,up", "down,down"}
