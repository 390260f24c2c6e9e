"""Pulse-level model of the atomic gate layer.

Single-atom rotations come from Ramsey zones; the controlled square root of
NOT uses two atoms and a cavity mode restricted to ``{|0>, |1>}``::

    Rz_a(-5pi/4) Rx_a(pi) Uon_ac UR_b(tau', eps') Uoff_bc(t) UR_b(tau, eps) Uon_ac Rx_a(pi)

(rightmost acts first).  Subsystem order is atom a, atom b, cavity c, each
big-endian with ``|up> = 0`` and ``|n=0> = 0``.  Control fires on ``a = |down>``.

Working the sequence through shows three requirements for an exact gate
firing on ``a = |down>``:

* ``g_eff t = pi/4`` (``pi/2`` with ``Rz_a(pi/2)`` gives a full controlled-NOT);
* the pulse-to-pulse phase relation ``nu (tau - tau') + nu t + g_eff t = 0 (mod 2 pi)``;
* the first-pulse anchor ``nu (tau + t) + g_eff t = pi (mod 2 pi)``.

The same sequence fires on ``a = |up>`` with a negative detuning
(``g_eff t = -pi/4``), ``Rz_a(+5pi/4)`` and anchor ``-pi/2``; see ``VARIANTS``.

Large phase products such as ``nu t`` (~1e7 rad) are reduced with mpmath so
that residuals are meaningful at the 1e-9 rad level.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Literal

import mpmath
import numpy as np

from .errors import DomainError, InfeasibleError, SubspaceViolation
from .gates import SQRT_X_MAT, X_MAT, ry, rz

QUARTER = np.pi / 4
LEAK_TOL = 1e-9
_DPS = 40

CONTROLLED_SQRT_X = np.eye(4, dtype=complex)
CONTROLLED_SQRT_X[2:, 2:] = SQRT_X_MAT
CONTROLLED_SQRT_X_UP = np.eye(4, dtype=complex)
CONTROLLED_SQRT_X_UP[:2, :2] = SQRT_X_MAT


def _wrap(x, period):
    """``x mod period`` in ``[-period/2, period/2)``, evaluated in extended precision."""
    with mpmath.workdps(_DPS):
        p = mpmath.mpf(period) if not isinstance(period, mpmath.mpf) else period
        r = mpmath.fmod(x, p)
        if r >= p / 2:
            r -= p
        elif r < -p / 2:
            r += p
        return float(r)


def _prod(a: float, b: float):
    with mpmath.workdps(_DPS):
        return mpmath.mpf(a) * mpmath.mpf(b)


def _expi(*terms) -> complex:
    """``exp(i * sum(terms))`` with the sum reduced mod 2 pi in extended precision."""
    with mpmath.workdps(_DPS):
        total = mpmath.fsum(terms)
        ph = _wrap(total, 2 * mpmath.pi)
    return complex(np.exp(1j * ph))


@dataclass(frozen=True)
class PulseParams:
    """Physical parameters (rad/s and s).

    ``delta`` is the detuning ``nu - omega`` used by the off-resonant pulse,
    ``g_eff = g**2 / delta``.  ``t0`` is the on-resonant pulse length
    (``g t0 = pi/2``).
    """

    nu: float
    g: float
    delta: float
    eps: float
    eps_prime: float
    tau: float
    tau_prime: float
    t: float
    t0: float

    @property
    def g_eff(self) -> float:
        return self.g * self.g / self.delta

    def pulse_areas(self) -> tuple[float, float]:
        return self.eps * self.tau, self.eps_prime * self.tau_prime


def ramsey_unitary(tau: float, eps: float, nu: float) -> np.ndarray:
    """Ramsey-zone evolution for duration ``tau`` and pump amplitude ``|eps|``."""
    if tau < 0:
        raise DomainError("tau must be nonnegative")
    c, s = np.cos(abs(eps) * tau), np.sin(abs(eps) * tau)
    half = _prod(nu, tau) / 2
    em, ep = _expi(-half), _expi(half)
    return np.array([[em * c, em * s], [-ep * s, ep * c]], dtype=complex)


def single_qubit_rotation(axis: Literal["x", "y", "z"], theta: float) -> np.ndarray:
    if axis == "y":
        return ry(theta)
    if axis == "z":
        return rz(theta)
    if axis == "x":
        return rz(np.pi / 2) @ ry(theta) @ rz(-np.pi / 2)
    raise DomainError(f"unknown axis {axis!r}")


def jc_off_resonant(pp: PulseParams, t: float | None = None) -> np.ndarray:
    """Dispersive atom-cavity evolution on atom x cavity{0,1} (diagonal)."""
    if pp.delta == 0:
        raise DomainError("off-resonant evolution needs a nonzero detuning")
    t = pp.t if t is None else t
    geff = pp.g_eff
    nut = _prod(pp.nu, t)
    gt = _prod(geff, t)
    d = []
    for atom in (0, 1):
        for n in (0, 1):
            if atom == 0:
                d.append(_expi(-nut / 2, -gt, -n * gt))
            else:
                d.append(_expi(nut / 2, n * gt))
    return np.diag(d)


def jc_on_resonant() -> np.ndarray:
    """Resonant swap with ``g t0 = pi/2`` on atom x cavity{0,1}.

    ``|up,0> -> -i|down,1>``, ``|down,1> -> -i|up,0>``, ``|down,0>`` fixed.
    ``|up,1>`` (index 1) lies outside the operational subspace and is left
    in place; :func:`apply_on_resonant` refuses states that populate it.
    """
    m = np.zeros((4, 4), dtype=complex)
    m[3, 0] = -1j
    m[0, 3] = -1j
    m[2, 2] = 1.0
    m[1, 1] = 1.0
    return m


LEAK_INDEX = 1


def apply_on_resonant(state: np.ndarray, tol: float = LEAK_TOL) -> np.ndarray:
    state = np.asarray(state, dtype=complex)
    if abs(state[LEAK_INDEX]) ** 2 > tol:
        raise SubspaceViolation("state populates |up,1>, outside the two-level cavity model")
    return jc_on_resonant() @ state


# --- embedding into atoms a, b and cavity c -----------------------------------------

_I2 = np.eye(2, dtype=complex)


def _on_a(u2):
    return np.kron(u2, np.eye(4))


def _on_b(u2):
    return np.kron(np.kron(_I2, u2), _I2)


def _on_bc(u4):
    return np.kron(_I2, u4)


def _on_ac(u4):
    # reorder (a, c) x b into a, b, c
    t = u4.reshape(2, 2, 2, 2)
    full = np.einsum("acde,bf->abcdfe", t, _I2)
    return full.reshape(8, 8)


_VACUUM = [0, 2, 4, 6]


Control = Literal["down", "up"]


@dataclass(frozen=True)
class Variant:
    """Discrete choices that select which control level fires."""

    target: np.ndarray
    coupling_phase: float  # required g_eff t
    anchor: float  # required nu (tau + t) + g_eff t, mod 2 pi
    rz_angle: float


VARIANTS: dict[str, Variant] = {
    "down": Variant(CONTROLLED_SQRT_X, QUARTER, np.pi, -1.25 * np.pi),
    "up": Variant(CONTROLLED_SQRT_X_UP, -QUARTER, -np.pi / 2, 1.25 * np.pi),
}


def _variant(fire_on: str) -> Variant:
    try:
        return VARIANTS[fire_on]
    except KeyError:
        raise DomainError(f"fire_on must be one of {sorted(VARIANTS)}") from None


@dataclass(frozen=True)
class CompositeGate:
    matrix: np.ndarray
    restricted: np.ndarray
    fidelity: float
    leak: float
    phase_residual: float
    anchor_residual: float
    coupling_phase: float
    fire_on: str = "down"

    @property
    def passed(self) -> bool:
        return self.fidelity >= 1 - 1e-9 and self.leak < LEAK_TOL


def composite_steps(pp: PulseParams, rz_angle: float = -1.25 * np.pi) -> list[tuple[str, np.ndarray]]:
    """The pulse sequence in temporal order as ``(label, 8x8 matrix)``."""
    rx = single_qubit_rotation("x", np.pi)
    return [
        ("Rx_a(pi)", _on_a(rx)),
        ("Uon_ac", _on_ac(jc_on_resonant())),
        ("UR_b(tau)", _on_b(ramsey_unitary(pp.tau, pp.eps, pp.nu))),
        ("Uoff_bc(t)", _on_bc(jc_off_resonant(pp))),
        ("UR_b(tau')", _on_b(ramsey_unitary(pp.tau_prime, pp.eps_prime, pp.nu))),
        ("Uon_ac", _on_ac(jc_on_resonant())),
        ("Rx_a(pi)", _on_a(rx)),
        ("Rz_a", _on_a(single_qubit_rotation("z", rz_angle))),
    ]


def _ac_leak_mass(state8: np.ndarray) -> float:
    # amplitude on a=up, c=1 for either b
    return float(abs(state8[1]) ** 2 + abs(state8[3]) ** 2)


def gate_fidelity(restricted: np.ndarray, target: np.ndarray = CONTROLLED_SQRT_X) -> float:
    return float(abs(np.trace(restricted.conj().T @ target)) / target.shape[0])


def composite_csqrtx(pp: PulseParams, fire_on: Control = "down", rz_angle: float | None = None) -> CompositeGate:
    """Compose the pulse sequence and compare it with the controlled square root of NOT.

    The cavity-vacuum inputs are propagated step by step so that any
    population of the ``|up,1>`` coordinate before a resonant pulse is
    reported as a :class:`SubspaceViolation`.
    """
    var = _variant(fire_on)
    steps = composite_steps(pp, var.rz_angle if rz_angle is None else rz_angle)
    m = np.eye(8, dtype=complex)
    for label, u in steps:
        if label == "Uon_ac":
            for col in _VACUUM:
                if _ac_leak_mass(m[:, col]) > LEAK_TOL:
                    raise SubspaceViolation(f"{label}: |up,1> populated during the sequence")
        m = u @ m
    restricted = m[np.ix_(_VACUUM, _VACUUM)]
    leak = max(float(np.sum(np.abs(m[[1, 3, 5, 7], col]) ** 2)) for col in _VACUUM)
    return CompositeGate(
        matrix=m,
        restricted=restricted,
        fidelity=gate_fidelity(restricted, var.target),
        leak=leak,
        phase_residual=phase_condition_residual(pp, fire_on=fire_on),
        anchor_residual=anchor_residual(pp, fire_on),
        coupling_phase=_wrap(_prod(pp.g_eff, pp.t), 2 * mpmath.pi),
        fire_on=fire_on,
    )


# --- timing conditions -----------------------------------------------------------------

Form = Literal["derived", "printed"]


def phase_condition_residual(pp: PulseParams, form: Form = "derived", g_sign: int = 1, fire_on: Control = "down") -> float:
    """Residual (rad, wrapped to [-pi, pi)) of the pulse-to-pulse phase relation.

    ``derived``: ``nu (tau - tau') + nu t + s g_eff t`` minus the variant offset
    (0 for ``down``, ``pi/2`` for ``up``).
    ``printed``: ``nu (tau - tau')/2 - nu t/2 - s g_eff t/2`` (no offset).
    """
    offset = _variant(fire_on).anchor - np.pi
    with mpmath.workdps(_DPS):
        nu = mpmath.mpf(pp.nu)
        dtau = mpmath.mpf(pp.tau) - mpmath.mpf(pp.tau_prime)
        nut = nu * mpmath.mpf(pp.t)
        gt = mpmath.mpf(pp.g) ** 2 / mpmath.mpf(pp.delta) * mpmath.mpf(pp.t)
        if form == "derived":
            val = nu * dtau + nut + g_sign * gt - mpmath.mpf(offset)
        elif form == "printed":
            val = nu * dtau / 2 - nut / 2 - g_sign * gt / 2
        else:
            raise DomainError(f"unknown form {form!r}")
        return _wrap(val, 2 * mpmath.pi)


def anchor_residual(pp: PulseParams, fire_on: Control = "down") -> float:
    """Residual of ``nu (tau + t) + g_eff t = anchor (mod 2 pi)``."""
    target = _variant(fire_on).anchor
    with mpmath.workdps(_DPS):
        nu = mpmath.mpf(pp.nu)
        gt = mpmath.mpf(pp.g) ** 2 / mpmath.mpf(pp.delta) * mpmath.mpf(pp.t)
        val = nu * (mpmath.mpf(pp.tau) + mpmath.mpf(pp.t)) + gt - mpmath.mpf(target)
        return _wrap(val, 2 * mpmath.pi)


def _solve_linear(residual_fn, pp, field_name, slope, near, min_value):
    """Solve ``residual(x) = 0 (mod 2 pi)`` for one duration; ``slope`` is d(residual)/dx."""
    x0 = getattr(pp, field_name)
    r0 = residual_fn(pp)
    if slope == 0:
        if abs(r0) < 1e-12:
            return x0
        raise InfeasibleError(f"residual does not depend on {field_name}", tried=list(range(-3, 4)))
    period = 2 * np.pi / abs(slope)
    base = x0 - r0 / slope
    if near is not None:
        x = base + round((near - base) / period) * period
    else:
        x = base + (np.floor((min_value - base) / period) + 1) * period
    if x <= min_value:
        x += period * np.ceil((min_value - x) / period + 1e-12)
    if not x > min_value:
        raise InfeasibleError(f"no admissible {field_name}", tried=[0, 1, 2])
    # x is large relative to the period, so polish against the extended-precision residual
    for _ in range(3):
        r = residual_fn(replace(pp, **{field_name: float(x)}))
        if abs(r) < 1e-12:
            break
        x = x - r / slope
    return float(x)


def solve_phase_condition(
    pp: PulseParams,
    free: Literal["tau_prime", "tau"] = "tau_prime",
    form: Form = "derived",
    g_sign: int = 1,
    near: float | None = None,
    fire_on: Control = "down",
) -> PulseParams:
    """Solve the free Ramsey duration so the phase relation holds mod 2 pi.

    By default the smallest positive solution is returned; pass ``near`` to
    pick the solution closest to a nominal duration.  The matching pump
    amplitude is reset so the pulse area stays ``pi/4``.
    """

    def resid(p):
        return phase_condition_residual(p, form, g_sign, fire_on)

    if form == "derived":
        slope = -pp.nu if free == "tau_prime" else pp.nu
    else:
        slope = -pp.nu / 2 if free == "tau_prime" else pp.nu / 2
    x = _solve_linear(resid, pp, free, slope, near, 0.0)
    out = replace(pp, **{free: float(x)})
    amp = "eps_prime" if free == "tau_prime" else "eps"
    out = replace(out, **{amp: QUARTER / getattr(out, free)})
    if abs(resid(out)) > 1e-9:
        raise InfeasibleError("phase relation could not be met to 1e-9 rad", tried=[0])
    return out


def anchor_first_pulse(pp: PulseParams, near: float | None = None, fire_on: Control = "down") -> PulseParams:
    """Adjust ``tau`` (and ``eps``) so the first-pulse anchor condition holds."""
    tau = _solve_linear(lambda p: anchor_residual(p, fire_on), pp, "tau", pp.nu, pp.tau if near is None else near, 0.0)
    return replace(pp, tau=float(tau), eps=QUARTER / float(tau))


def default_pulse_params(
    nu: float = 2 * np.pi * 50e9,
    g: float = 2 * np.pi * 25e3,
    t: float = 100e-6,
    tau_nominal: float = 1e-6,
    fire_on: Control = "down",
) -> PulseParams:
    """Placeholder parameters: 50 GHz transition, 25 kHz coupling, 100 us dispersive
    pulse with ``|g_eff t| = pi/4``, ~1 us Ramsey pulses; both timing conditions met."""
    geff = _variant(fire_on).coupling_phase / t
    delta = g * g / geff
    t0 = (np.pi / 2) / g
    pp = PulseParams(nu, g, delta, QUARTER / tau_nominal, QUARTER / tau_nominal, tau_nominal, tau_nominal, t, t0)
    pp = anchor_first_pulse(pp, fire_on=fire_on)
    return solve_phase_condition(pp, near=tau_nominal, fire_on=fire_on)


def phase_condition_variants(pp: PulseParams) -> list[dict]:
    """Solve ``tau'`` under each reading of the phase relation and report the gate fidelity."""
    rows = []
    for form in ("derived", "printed"):
        for s in (1, -1):
            solved = solve_phase_condition(pp, form=form, g_sign=s, near=pp.tau_prime)
            gate = composite_csqrtx(solved)
            rows.append({"form": form, "g_sign": s, "tau_prime": solved.tau_prime, "fidelity": gate.fidelity, "passed": gate.passed})
    return rows


def fidelity_report(pp: PulseParams, fire_on: Control = "down") -> dict:
    """JSON-ready summary of the composite gate for one parameter set."""
    gate = composite_csqrtx(pp, fire_on)
    labels = ["up,up", "up,down", "down,up", "down,down"]
    # remove the global phase using the overlap with the target
    ov = np.trace(gate.restricted.conj().T @ _variant(fire_on).target)
    ref = ov / abs(ov) if abs(ov) > 1e-12 else 1.0
    branches = {}
    for k, lab in enumerate(labels):
        col = gate.restricted[:, k] * ref
        branches[lab] = [[float(z.real), float(z.imag)] for z in col]
    squared = gate.restricted @ gate.restricted
    cnot = np.eye(4, dtype=complex)
    sl = slice(2, 4) if fire_on == "down" else slice(0, 2)
    cnot[sl, sl] = X_MAT
    return {
        "fire_on": fire_on,
        "fidelity": gate.fidelity,
        "passed": gate.passed,
        "cavity_leak": gate.leak,
        "phase_condition_residual": gate.phase_residual,
        "anchor_residual": gate.anchor_residual,
        "coupling_phase": gate.coupling_phase,
        "square_vs_cnot": gate_fidelity(squared, cnot),
        "branches": branches,
        "params": {k: float(v) for k, v in pp.__dict__.items()},
    }
