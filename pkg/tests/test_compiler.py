import numpy as np
import pytest
from scipy.stats import special_ortho_group

from qdecode.capacity import GAIN_CODE
from qdecode.codebook import make_codebook, sequence_ket
from qdecode.compiler import (
    TwoLevelRotation,
    adaptor_from_basis,
    build_adaptor,
    compile_codebook,
    decoding_basis,
    diagonal_gates,
    factor_phase_layer,
    gray_mapper,
    lower_two_level,
    mc_x_gates,
    product_order,
    reck_decompose,
    rotations_to_matrix,
)
from qdecode.decoder import optimal_measurement, square_root_measurement
from qdecode.errors import ContractError
from qdecode.gates import GateNetlist, netlist_to_matrix
from qdecode.linalg import global_phase_distance
from qdecode.reference import gain_code_sqrt_gram, pair_adaptor, pair_measurement, pair_rotation_angles

P2 = 0.03352384841237588


def test_decoding_basis_pair():
    cb = make_codebook(0.6, ["++", "--"])
    for completion in ("schmidt", "symmetric"):
        basis = decoding_basis(cb, square_root_measurement(cb), completion)
        b = basis.matrix
        assert b.shape == (4, 4)
        assert np.allclose(b.conj().T @ b, np.eye(4), atol=1e-12)
        w1, w2 = pair_measurement(0.6)
        assert np.allclose(b[:, 0], w1) and np.allclose(b[:, 1], w2)


def test_decoding_basis_full_code_needs_no_extension():
    cb = make_codebook(0.4, ["++", "+-", "-+", "--"])
    basis = decoding_basis(cb, square_root_measurement(cb))
    assert len(basis.vectors) == 4 and basis.skipped == ()


def test_adaptor_pair_closed_form():
    cb = make_codebook(0.6, ["++", "--"])
    basis = decoding_basis(cb, square_root_measurement(cb), "symmetric")
    u = build_adaptor(cb, basis)
    assert np.max(np.abs(u - pair_adaptor(0.6))) < 1e-12
    assert u[0, 0] == pytest.approx(0.928746, abs=1e-6)
    assert u[0, 1] == pytest.approx(-0.257248, abs=1e-6)
    assert u[0, 3] == pytest.approx(-0.071254, abs=1e-6)
    assert np.allclose(u, adaptor_from_basis(cb, basis), atol=1e-12)


def test_adaptor_identity_at_zero_overlap():
    cb = make_codebook(0.0, ["++", "--"])
    basis = decoding_basis(cb, square_root_measurement(cb), "symmetric")
    assert np.allclose(build_adaptor(cb, basis), np.eye(4))


def test_adaptor_output_lands_on_assigned_kets():
    cb = make_codebook(0.6, ["++", "--"])
    res = compile_codebook(cb)
    out = res.unitary @ sequence_ket(cb.letters, "++")
    assert abs(out[1]) < 1e-9 and abs(out[2]) < 1e-9
    assert abs(out[3]) ** 2 == pytest.approx(P2, abs=1e-12)


def test_adaptor_maps_measurement_to_product_kets():
    cb = make_codebook(0.8, GAIN_CODE)
    res = compile_codebook(cb)
    order = product_order(cb)
    for i, w in enumerate(res.measurement.vectors):
        assert np.allclose(res.unitary.conj().T[:, order[i]], w, atol=1e-9)


def test_reck_trivial_cases():
    assert reck_decompose(np.eye(4)) == []
    one = TwoLevelRotation(4, 3, 0.3)
    rots = reck_decompose(one.matrix(4))
    assert len(rots) == 1
    assert (rots[0].j, rots[0].i) == (4, 3) and rots[0].gamma == pytest.approx(0.3)


def test_reck_pair_angles():
    rots = reck_decompose(pair_adaptor(0.6))
    assert np.allclose(rotations_to_matrix(rots, 4), pair_adaptor(0.6), atol=1e-12)
    ref = pair_rotation_angles(0.6)
    assert [(r.j, r.i) for r in rots] == [(2, 1), (3, 1), (3, 2), (4, 1), (4, 2), (4, 3)]
    for r in rots:
        c, s = ref[(r.j, r.i)]
        assert np.cos(r.gamma) == pytest.approx(c, abs=1e-12)
        assert np.sin(r.gamma) == pytest.approx(s, abs=1e-12)


def test_reck_rejects_bad_input():
    with pytest.raises(ContractError):
        reck_decompose(np.array([[1, 1], [0, 1]]))
    with pytest.raises(ContractError):
        reck_decompose(np.diag([1.0, -1.0]))


def test_factor_phase_layer():
    rng = np.random.default_rng(4)
    o = special_ortho_group.rvs(4, random_state=rng)
    ph = np.exp(1j * rng.uniform(-np.pi, np.pi, 4))
    phases, oo = factor_phase_layer(ph[:, None] * o)
    assert np.allclose(phases[:, None] * oo, ph[:, None] * o)
    assert np.allclose(oo.imag, 0)


@pytest.mark.parametrize("a,b,n", [(2, 5, 3), (0, 7, 3), (1, 2, 2), (3, 12, 4)])
def test_gray_mapper_targets(a, b, n):
    gates, t, a_bit = gray_mapper(a, b, n)
    m = netlist_to_matrix(GateNetlist(n, tuple(gates)))
    ia, ib = np.argmax(np.abs(m[:, a])), np.argmax(np.abs(m[:, b]))
    others = [q for q in range(n) if q != t]
    for idx in (ia, ib):
        assert all((idx >> (n - 1 - q)) & 1 for q in others)
    assert ((ia >> (n - 1 - t)) & 1) == a_bit and ia != ib


def test_lower_single_qubit():
    nl = lower_two_level(TwoLevelRotation(2, 1, 0.4), 1)
    assert len(nl) == 1 and nl.gates[0].kind == "RY"
    assert np.allclose(netlist_to_matrix(nl), TwoLevelRotation(2, 1, 0.4).matrix(2))


def test_lower_43_is_controlled_on_qubit0():
    rot = TwoLevelRotation(4, 3, 0.7)
    for kw in ({}, {"controlled_ry": True}, {"sqrt_cnot": True}):
        nl = lower_two_level(rot, 2, **kw)
        assert np.max(np.abs(netlist_to_matrix(nl) - rot.matrix(4))) < 1e-10
    nl = lower_two_level(rot, 2, controlled_ry=True)
    assert [(g.kind, g.control, g.target) for g in nl.gates] == [("C_RY", 0, 1)]


def test_lower_63_three_qubits():
    rot = TwoLevelRotation(6, 3, 0.3)
    nl = lower_two_level(rot, 3)
    assert global_phase_distance(netlist_to_matrix(nl), rot.matrix(8)) < 1e-9
    nl = lower_two_level(rot, 3, sqrt_cnot=True)
    assert global_phase_distance(netlist_to_matrix(nl), rot.matrix(8)) < 1e-9


def test_lowering_all_planes_n3():
    rng = np.random.default_rng(9)
    for j in range(2, 9):
        for i in range(1, j):
            rot = TwoLevelRotation(j, i, rng.uniform(-np.pi, np.pi))
            nl = lower_two_level(rot, 3)
            assert np.max(np.abs(netlist_to_matrix(nl) - rot.matrix(8))) < 1e-9


def test_toffoli_pattern():
    m = netlist_to_matrix(GateNetlist(3, tuple(mc_x_gates([0, 1], 2))))
    assert global_phase_distance(m, np.eye(8)[[0, 1, 2, 3, 4, 5, 7, 6]]) < 1e-12


def test_diagonal_gates():
    rng = np.random.default_rng(5)
    ph = rng.uniform(-np.pi, np.pi, 8)
    m = netlist_to_matrix(GateNetlist(3, tuple(diagonal_gates(ph, [0, 1, 2]))))
    assert global_phase_distance(m, np.diag(np.exp(1j * ph))) < 1e-12


def test_compile_pair():
    res = compile_codebook(make_codebook(0.6, ["++", "--"]))
    assert res.expected_error == pytest.approx(0.0335239, abs=1e-7)
    assert res.reconstruction_error < 1e-9
    assert res.assignment == {0: 0, 3: 1}
    assert res.decode(1) is None


def test_compile_orthogonal_is_identity():
    cb = make_codebook(0.0, ["++", "--"])
    res = compile_codebook(cb, completion="symmetric")
    assert len(res.netlist) == 0
    # the index-order completion keeps the signs of the letter kets: a signed identity
    m = netlist_to_matrix(compile_codebook(cb).netlist)
    assert np.allclose(np.abs(m), np.eye(4), atol=1e-12)


def test_compile_gain_code():
    res = compile_codebook(make_codebook(0.9, GAIN_CODE))
    diag, _ = gain_code_sqrt_gram(0.9)
    assert res.unitary.shape == (8, 8)
    assert res.reconstruction_error < 1e-9
    assert res.expected_error == pytest.approx(1 - 4 * diag**2, abs=1e-10)
    assert res.expected_error == pytest.approx(1 - 0.62398, abs=1e-5)


def test_compile_with_unequal_priors_uses_cost_reduction():
    cb = make_codebook(0.6, ["++", "--"], [0.7, 0.3])
    res = compile_codebook(cb)
    assert res.expected_error == pytest.approx(0.028, abs=1e-10)
    assert res.reconstruction_error < 1e-9


def test_compile_full_code_with_reflection():
    cb = make_codebook(0.5, ["++", "+-", "-+", "--"], [0.4, 0.3, 0.2, 0.1])
    res = compile_codebook(cb, ms=optimal_measurement(cb))
    assert res.reconstruction_error < 1e-9


def test_compile_sqrt_cnot_variant():
    res = compile_codebook(make_codebook(0.6, ["++", "--"]), sqrt_cnot=True)
    assert "CNOT" not in res.netlist.counts()
    assert res.reconstruction_error < 1e-9
