"""Adaptor unitary construction and compilation to an elementary netlist.

Pipeline: optimal measurement -> completion to a full orthonormal basis ->
adaptor ``U`` with ``U^dagger |A_i> = |w_i>`` -> two-level (Reck) rotations
-> Gray-code mapped multi-controlled ``RY`` gates -> RY/RZ/X/CNOT/C_SQRT_X.

Two-level rotations use 1-based basis indices ``j > i`` and the generator
``exp[-gamma (|A_i><A_j| - |A_j><A_i|)]``, i.e. the block
``[[cos g, -sin g], [sin g, cos g]]`` on coordinates ``(i, j)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from .codebook import Codebook, sequence_ket, word_index
from .decoder import MeasurementSet, optimal_measurement
from .errors import ContractError, DegeneracyError, SizeError
from .gates import Gate, GateNetlist, netlist_to_matrix
from .linalg import MAX_DIM, RANK_TOL, global_phase_distance, gram_schmidt_extend, is_unitary, lowdin_orthonormalize

ANGLE_EPS = 1e-14


@dataclass(frozen=True)
class TwoLevelRotation:
    j: int
    i: int
    gamma: float

    def __post_init__(self):
        if not 1 <= self.i < self.j:
            raise ContractError(f"two-level rotation needs 1 <= i < j, got ({self.j}, {self.i})")

    def matrix(self, dim: int) -> np.ndarray:
        if self.j > dim:
            raise ContractError(f"index {self.j} outside dimension {dim}")
        m = np.eye(dim, dtype=complex)
        a, b = self.i - 1, self.j - 1
        c, s = np.cos(self.gamma), np.sin(self.gamma)
        m[a, a], m[a, b], m[b, a], m[b, b] = c, -s, s, c
        return m


# --- basis and adaptor ----------------------------------------------------------


def default_assignment(cb: Codebook) -> list[int]:
    """Product-ket index for each codeword: the same bit pattern (``+ -> up``)."""
    return [word_index(w) for w in cb.words]


def product_order(cb: Codebook, assignment: Sequence[int] | None = None) -> list[int]:
    """Computational indices of ``A_1..A_{2^n}``: the assigned kets, then the rest in index order."""
    assignment = list(default_assignment(cb) if assignment is None else assignment)
    if len(assignment) != cb.M or len(set(assignment)) != cb.M:
        raise ContractError("assignment must give a distinct product ket to every codeword")
    if any(not 0 <= a < cb.dim for a in assignment):
        raise ContractError("assignment index out of range")
    rest = [k for k in range(cb.dim) if k not in set(assignment)]
    return assignment + rest


def sequence_order(cb: Codebook) -> list[str]:
    """``S_1..S_{2^n}``: codewords first, then the other sequences in index order."""
    return list(cb.words) + cb.complement_words()


@dataclass(frozen=True)
class DecodingBasis:
    vectors: tuple[np.ndarray, ...]
    skipped: tuple[int, ...] = ()
    completion: str = "schmidt"

    @property
    def matrix(self) -> np.ndarray:
        return np.column_stack(self.vectors)


def decoding_basis(
    cb: Codebook,
    ms: MeasurementSet,
    completion: str = "schmidt",
    assignment: Sequence[int] | None = None,
    rank_tol: float = RANK_TOL,
) -> DecodingBasis:
    """Extend the measurement vectors to an orthonormal basis of the register.

    ``completion="schmidt"`` orthogonalizes the non-codeword sequences in index
    order.  ``completion="symmetric"`` instead projects the unassigned product
    kets onto the complement and orthonormalizes them symmetrically, giving
    the completion closest to the product basis (the adaptor then acts as the
    identity wherever it can).
    """
    if not ms.is_orthonormal():
        raise ContractError("measurement set is not orthonormal")
    given = list(ms.vectors)
    if given and given[0].shape[0] != cb.dim:
        raise ContractError("measurement vectors do not live in the register space")
    if completion == "schmidt":
        cands = [sequence_ket(cb.letters, w) for w in cb.complement_words()]
        vecs, skipped = gram_schmidt_extend(given, cands, rank_tol)
        if len(vecs) < cb.dim:
            # degenerate sequences: finish with computational basis kets
            extra = list(np.eye(cb.dim, dtype=complex))
            vecs, _ = gram_schmidt_extend(vecs, extra, 1e-6)
        return DecodingBasis(tuple(vecs[: cb.dim]), tuple(skipped), completion)
    if completion == "symmetric":
        order = product_order(cb, assignment)
        w = np.column_stack(given) if given else np.zeros((cb.dim, 0), complex)
        proj = np.eye(cb.dim) - w @ w.conj().T
        rest = [proj[:, k] for k in order[cb.M:]]
        if not rest:
            return DecodingBasis(tuple(given), (), completion)
        try:
            comp = lowdin_orthonormalize(rest)
        except ContractError:
            return decoding_basis(cb, ms, "schmidt", assignment, rank_tol)
        return DecodingBasis(tuple(given) + tuple(comp.T), (), completion)
    raise ContractError(f"unknown completion {completion!r}")


def build_adaptor(
    cb: Codebook,
    basis: DecodingBasis | Sequence[np.ndarray],
    assignment: Sequence[int] | None = None,
) -> np.ndarray:
    """Adaptor ``U`` (computational basis) with ``U^dagger |A_i> = |w_i>``.

    Built as ``u_ji = (B^{-1} C)_ij`` where ``B_ij = <w_j|S_i>`` and
    ``C_ij = <A_j|S_i>``.
    """
    vecs = basis.vectors if isinstance(basis, DecodingBasis) else tuple(basis)
    w = np.column_stack(vecs)
    if w.shape != (cb.dim, cb.dim):
        raise ContractError("basis must have 2**n vectors of length 2**n")
    if np.max(np.abs(w.conj().T @ w - np.eye(cb.dim))) > 1e-9:
        raise ContractError("basis is not orthonormal")
    order = product_order(cb, assignment)
    s = np.column_stack([sequence_ket(cb.letters, x) for x in sequence_order(cb)])
    a = np.eye(cb.dim, dtype=complex)[:, order]
    b_mat = s.T @ w.conj()
    c_mat = s.T @ a.conj()
    if np.linalg.cond(b_mat) > 1e12:
        raise DegeneracyError("expansion matrix B is singular")
    u_coef = np.linalg.solve(b_mat, c_mat)
    # U^dagger |A_i> = sum_j u_ji |A_j>, with u_ji = u_coef[i, j]
    u_dag = np.zeros((cb.dim, cb.dim), dtype=complex)
    for i in range(cb.dim):
        for j in range(cb.dim):
            u_dag[order[j], order[i]] = u_coef[i, j]
    return u_dag.conj().T


def adaptor_from_basis(cb: Codebook, basis: DecodingBasis, assignment=None) -> np.ndarray:
    """Direct form ``U = sum_i |A_i><w_i|``; used to cross-check ``build_adaptor``."""
    order = product_order(cb, assignment)
    u = np.zeros((cb.dim, cb.dim), dtype=complex)
    for k, vec in enumerate(basis.vectors):
        u[order[k], :] = vec.conj()
    return u


# --- Reck decomposition ---------------------------------------------------------


def factor_phase_layer(u: np.ndarray, tol: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    """Write ``u = diag(phases) @ o`` with ``o`` real orthogonal.

    Each row phase is taken from the row's largest entry, folded into the right
    half-plane so real input gives ``phases == 1``.
    """
    u = np.asarray(u, dtype=complex)
    if not is_unitary(u, tol):
        raise ContractError("matrix is not unitary")
    phases = np.ones(u.shape[0], dtype=complex)
    for r in range(u.shape[0]):
        x = u[r, np.argmax(np.abs(u[r]))]
        ph = x / abs(x)
        if ph.real < -1e-12 or (abs(ph.real) <= 1e-12 and ph.imag < 0):
            ph = -ph
        phases[r] = ph
    o = phases.conj()[:, None] * u
    if np.max(np.abs(o.imag)) > tol:
        raise ContractError("unitary is not a row-phased real orthogonal matrix")
    return phases, o.real


def reck_decompose(u: np.ndarray, tol: float = 1e-10) -> list[TwoLevelRotation]:
    """Two-level factors with ``u = T[2,1] T[3,1] T[3,2] ... T[N,N-1]``.

    Rows are cleared bottom-up: for row ``r`` the entries ``r-1, ..., 1`` are
    zeroed by right-multiplying with ``T[r,c]^T``, which leaves a positive
    diagonal.  Angles below 1e-14 are dropped.
    """
    u = np.asarray(u)
    if np.iscomplexobj(u):
        if np.max(np.abs(u.imag)) > tol:
            raise ContractError("reck_decompose expects a real orthogonal matrix; factor phases first")
        u = u.real
    if not is_unitary(u, tol):
        raise ContractError("matrix is not orthogonal")
    if np.linalg.det(u) < 0:
        raise ContractError("matrix is a reflection (det -1)")
    a = u.astype(float).copy()
    dim = a.shape[0]
    found: dict[tuple[int, int], float] = {}
    for r in range(dim - 1, 0, -1):
        for c in range(r - 1, -1, -1):
            xi, xj = a[r, c], a[r, r]
            gamma = float(np.arctan2(xi, xj))
            if abs(gamma) < ANGLE_EPS:
                continue
            cg, sg = np.cos(gamma), np.sin(gamma)
            col_c, col_r = a[:, c].copy(), a[:, r].copy()
            a[:, c] = cg * col_c - sg * col_r
            a[:, r] = sg * col_c + cg * col_r
            found[(r + 1, c + 1)] = gamma
    rots = [TwoLevelRotation(j, i, found[(j, i)]) for j in range(2, dim + 1) for i in range(1, j) if (j, i) in found]
    return rots


def rotations_to_matrix(rots: Sequence[TwoLevelRotation], dim: int) -> np.ndarray:
    m = np.eye(dim, dtype=complex)
    for r in rots:
        m = m @ r.matrix(dim)
    return m


# --- lowering -------------------------------------------------------------------


def _bit(x: int, q: int, n: int) -> int:
    return (x >> (n - 1 - q)) & 1


def gray_mapper(a: int, b: int, n: int) -> tuple[list[Gate], int, int]:
    """X/CNOT permutation taking states ``a``, ``b`` to two states that differ only
    in the target qubit and have every other qubit set to 1.

    Returns the mapper gates, the target qubit and the target bit of ``a``'s image.
    """
    diff = [q for q in range(n) if _bit(a, q, n) != _bit(b, q, n)]
    if not diff:
        raise ContractError("a two-level plane needs two distinct states")
    t = max(diff)
    gates = [Gate("CNOT", q, control=t) for q in sorted(diff[:-1], reverse=True)]
    a_img = a
    if _bit(a, t, n):
        for q in diff[:-1]:
            a_img ^= 1 << (n - 1 - q)
    for q in range(n):
        if q != t and not _bit(a_img, q, n):
            gates.append(Gate("X", q))
    return gates, t, _bit(a_img, t, n)


def _cnot(control, target, sqrt_cnot):
    if sqrt_cnot:
        return [Gate("C_SQRT_X", target, control=control)] * 2
    return [Gate("CNOT", target, control=control)]


def diagonal_gates(phases: np.ndarray, qubits: Sequence[int]) -> list[Gate]:
    """Gates for ``diag(exp(i phases))`` on ``qubits`` (big-endian), up to global phase.

    Phases are expanded in parities ``prod_q (-1)^{x_q}``; each parity term is
    a CNOT ladder onto the highest qubit of the subset, an RZ, and the ladder
    undone.
    """
    qubits = list(qubits)
    k = len(qubits)
    phases = np.asarray(phases, dtype=float)
    xs = np.arange(2**k)
    bits = np.array([[(x >> (k - 1 - p)) & 1 for p in range(k)] for x in xs])
    gates: list[Gate] = []
    for size in range(1, k + 1):
        for subset in combinations(range(k), size):
            z = np.prod(1 - 2 * bits[:, list(subset)], axis=1)
            coef = float(np.dot(phases, z)) / 2**k
            if abs(coef) < ANGLE_EPS:
                continue
            last = qubits[subset[-1]]
            ladder = [Gate("CNOT", last, control=qubits[p]) for p in subset[:-1]]
            gates += ladder + [Gate("RZ", last, angle=2 * coef)] + ladder[::-1]
    return gates


def mc_ry_gates(controls: Sequence[int], target: int, theta: float, controlled_ry=False, sqrt_cnot=False) -> list[Gate]:
    """``RY(theta)`` on ``target`` conditioned on every control being 1."""
    controls = list(controls)
    k = len(controls)
    if k == 0:
        return [Gate("RY", target, angle=theta)]
    if k == 1:
        c = controls[0]
        if controlled_ry:
            return [Gate("C_RY", target, control=c, angle=theta)]
        return (
            [Gate("RY", target, angle=theta / 2)]
            + _cnot(c, target, sqrt_cnot)
            + [Gate("RY", target, angle=-theta / 2)]
            + _cnot(c, target, sqrt_cnot)
        )
    head, last = controls[:-1], controls[-1]
    half = theta / 2
    return (
        mc_ry_gates([last], target, half, controlled_ry, sqrt_cnot)
        + mc_x_gates(head, last, sqrt_cnot)
        + mc_ry_gates([last], target, -half, controlled_ry, sqrt_cnot)
        + mc_x_gates(head, last, sqrt_cnot)
        + mc_ry_gates(head, target, half, controlled_ry, sqrt_cnot)
    )


def mc_x_gates(controls: Sequence[int], target: int, sqrt_cnot=False) -> list[Gate]:
    """Multi-controlled NOT, exact up to global phase."""
    controls = list(controls)
    k = len(controls)
    if k == 0:
        return [Gate("X", target)]
    if k == 1:
        return _cnot(controls[0], target, sqrt_cnot)
    if k == 2:
        a, b = controls
        v = [Gate("C_SQRT_X", target, control=b)]
        v_dag = _cnot(b, target, sqrt_cnot) + v
        return v + _cnot(a, b, sqrt_cnot) + v_dag + _cnot(a, b, sqrt_cnot) + [Gate("C_SQRT_X", target, control=a)]
    # X = Z RY(pi): controlled RY(pi), then the controlled sign
    sign = np.zeros(2 ** (k + 1))
    sign[-1] = np.pi
    return mc_ry_gates(controls, target, np.pi, sqrt_cnot=sqrt_cnot) + diagonal_gates(sign, sorted(controls + [target]))


def lower_two_level(
    rot: TwoLevelRotation,
    n: int,
    controlled_ry: bool = False,
    sqrt_cnot: bool = False,
) -> GateNetlist:
    """Netlist equal to ``rot.matrix(2**n)`` (up to global phase for n >= 5)."""
    if 2**n > MAX_DIM:
        raise SizeError(f"{n} qubits exceeds the register cap")
    if rot.j > 2**n:
        raise ContractError(f"rotation ({rot.j}, {rot.i}) does not fit in {n} qubits")
    a, b = rot.i - 1, rot.j - 1
    mapper, t, a_bit = gray_mapper(a, b, n)
    theta = -2 * rot.gamma if a_bit == 0 else 2 * rot.gamma
    controls = [q for q in range(n) if q != t]
    core = mc_ry_gates(controls, t, theta, controlled_ry, sqrt_cnot)
    gates = mapper + core + mapper[::-1]
    return GateNetlist(n, tuple(_expand_cnots(gates) if sqrt_cnot else gates))


def _expand_cnots(gates: Sequence[Gate]) -> list[Gate]:
    out = []
    for g in gates:
        out += _cnot(g.control, g.target, True) if g.kind == "CNOT" else [g]
    return out


# --- full pipeline --------------------------------------------------------------


@dataclass(frozen=True)
class CompileResult:
    netlist: GateNetlist
    measurement: MeasurementSet
    expected_error: float
    unitary: np.ndarray
    basis: DecodingBasis
    rotations: tuple[TwoLevelRotation, ...]
    phases: np.ndarray
    assignment: dict[int, int] = field(default_factory=dict)
    reconstruction_error: float = 0.0

    def decode(self, outcome_index: int) -> int | None:
        """Codeword index for a product-basis outcome, ``None`` for an erasure."""
        return self.assignment.get(outcome_index)


def _eq9_error(cb: Codebook, u: np.ndarray, order: Sequence[int]) -> float:
    hit = 0.0
    for i in range(cb.M):
        s = sequence_ket(cb.letters, cb.words[i])
        hit += cb.priors[i] * abs((u @ s)[order[i]]) ** 2
    return float(1.0 - hit)


def compile_unitary(
    u: np.ndarray, controlled_ry: bool = False, sqrt_cnot: bool = False
) -> tuple[GateNetlist, list[TwoLevelRotation], np.ndarray]:
    """Netlist for ``u = diag(phases) O`` with ``O`` real orthogonal.

    A reflection (``det O = -1``) is moved into the phase layer.  Returns the
    netlist, the plane rotations of ``O`` and the phases.
    """
    u = np.asarray(u, dtype=complex)
    n = int(np.log2(u.shape[0]))
    if u.shape != (2**n, 2**n):
        raise ContractError("matrix size must be a power of two")
    phases, o = factor_phase_layer(u)
    if np.linalg.det(o) < 0:
        phases = phases.copy()
        phases[-1] *= -1
        o = o.copy()
        o[-1] *= -1
    rots = reck_decompose(o)
    gates: list[Gate] = []
    for rot in reversed(rots):
        gates += lower_two_level(rot, n, controlled_ry, sqrt_cnot).gates
    if np.max(np.abs(phases - 1)) > 1e-14:
        diag = diagonal_gates(np.angle(phases), range(n))
        gates += _expand_cnots(diag) if sqrt_cnot else diag
    return GateNetlist(n, tuple(gates)), rots, phases


def compile_codebook(
    cb: Codebook,
    completion: str = "schmidt",
    assignment: Sequence[int] | None = None,
    controlled_ry: bool = False,
    sqrt_cnot: bool = False,
    ms: MeasurementSet | None = None,
) -> CompileResult:
    """Optimal measurement, completion, adaptor, Reck factors and gate lowering."""
    if ms is None:
        ms = optimal_measurement(cb)
    basis = decoding_basis(cb, ms, completion, assignment)
    u = build_adaptor(cb, basis, assignment)
    _, o = factor_phase_layer(u)
    if np.linalg.det(o) < 0 and cb.M < cb.dim:
        # flipping a completion vector leaves every decision unchanged
        vecs = list(basis.vectors)
        vecs[-1] = -vecs[-1]
        basis = DecodingBasis(tuple(vecs), basis.skipped, basis.completion)
        u = build_adaptor(cb, basis, assignment)
    nl, rots, phases = compile_unitary(u, controlled_ry, sqrt_cnot)
    order = product_order(cb, assignment)
    expected = _eq9_error(cb, u, order)
    recon = global_phase_distance(netlist_to_matrix(nl), u)
    return CompileResult(
        netlist=nl,
        measurement=ms,
        expected_error=expected,
        unitary=u,
        basis=basis,
        rotations=tuple(rots),
        phases=phases,
        assignment={order[i]: i for i in range(cb.M)},
        reconstruction_error=recon,
    )

