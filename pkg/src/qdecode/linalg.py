"""Dense complex linear algebra on kets and matrices.

Kets are 1-D complex numpy arrays and matrices are 2-D complex arrays.
Composite systems use a big-endian ordering throughout the package: the
leftmost tensor factor (qubit 0, the first letter of a word) is the most
significant bit of the basis index, and ``|up> = index 0``, ``|down> = index 1``.
"""

from __future__ import annotations

from functools import reduce
from typing import Callable, Sequence

import numpy as np

from .errors import ContractError, DomainError, SizeError

MAX_DIM = 2**12
RANK_TOL = 1e-10
PHASE_TOL = 1e-8


def as_ket(v) -> np.ndarray:
    ket = np.asarray(v, dtype=complex)
    if ket.ndim != 1 or ket.size == 0:
        raise ContractError(f"a ket must be a non-empty 1-D array, got shape {ket.shape}")
    return ket


def as_matrix(m) -> np.ndarray:
    mat = np.asarray(m, dtype=complex)
    if mat.ndim != 2 or 0 in mat.shape:
        raise ContractError(f"expected a non-empty 2-D array, got shape {mat.shape}")
    return mat


def fix_phase(v: np.ndarray, tol: float = PHASE_TOL) -> np.ndarray:
    """Rotate ``v`` so its first amplitude with modulus above ``tol`` is real positive."""
    v = np.asarray(v, dtype=complex)
    big = np.flatnonzero(np.abs(v) > tol)
    if big.size == 0:
        return v.copy()
    a = v[big[0]]
    return v * (abs(a) / a)


def normalize(v: np.ndarray) -> np.ndarray:
    v = as_ket(v)
    nrm = np.linalg.norm(v)
    if nrm == 0:
        raise DomainError("cannot normalize the zero vector")
    return fix_phase(v / nrm)


def tensor(*operands, max_dim: int = MAX_DIM) -> np.ndarray:
    """Kronecker product of kets or matrices, left operand most significant.

    >>> tensor([1, 0], [1, 0]).real
    array([1., 0., 0., 0.])
    """
    if not operands:
        raise ContractError("tensor needs at least one operand")
    arrs = [np.asarray(x, dtype=complex) for x in operands]
    ndims = {a.ndim for a in arrs}
    if len(ndims) != 1 or ndims.pop() not in (1, 2):
        raise ContractError("operands must all be kets or all be matrices")
    dim = int(np.prod([a.shape[0] for a in arrs]))
    cols = int(np.prod([a.shape[-1] for a in arrs]))
    if max(dim, cols) > max_dim:
        raise SizeError(f"tensor product dimension {max(dim, cols)} exceeds cap {max_dim}")
    return reduce(np.kron, arrs)


def is_hermitian(m: np.ndarray, tol: float = 1e-10) -> bool:
    m = np.asarray(m)
    return m.shape[0] == m.shape[1] and bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= tol)


def is_unitary(m: np.ndarray, tol: float = 1e-10) -> bool:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return bool(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))) < tol)


def herm_eig(m, tol: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix.

    Returns ascending eigenvalues and a unitary whose columns are the
    eigenvectors, each rotated to the package phase convention.
    """
    m = as_matrix(m)
    if not is_hermitian(m, tol):
        raise ContractError("herm_eig requires a Hermitian matrix")
    h = 0.5 * (m + m.conj().T)
    w, v = np.linalg.eigh(h)
    v = np.column_stack([fix_phase(v[:, k]) for k in range(v.shape[1])])
    return w, v


def func_on_span(m, f: Callable[[np.ndarray], np.ndarray], rank_tol: float = RANK_TOL) -> np.ndarray:
    """Apply ``f`` to a PSD matrix on its support; the numerical null space maps to 0.

    Eigenvalues at or below ``rank_tol * lambda_max`` are treated as zero.
    """
    w, v = herm_eig(m)
    lam_max = max(float(w[-1]), 0.0)
    keep = w > rank_tol * lam_max
    if not np.any(keep):
        return np.zeros_like(v)
    with np.errstate(all="ignore"):
        fw = np.asarray(f(w[keep]), dtype=complex)
    if not np.all(np.isfinite(fw)):
        raise DomainError("function undefined on a retained eigenvalue")
    vk = v[:, keep]
    return (vk * fw) @ vk.conj().T


def sqrtm_psd(m, rank_tol: float = RANK_TOL) -> np.ndarray:
    return func_on_span(m, np.sqrt, rank_tol)


def inv_sqrtm_psd(m, rank_tol: float = RANK_TOL) -> np.ndarray:
    return func_on_span(m, lambda x: 1.0 / np.sqrt(x), rank_tol)


def span_projector(m, rank_tol: float = RANK_TOL) -> np.ndarray:
    return func_on_span(m, np.ones_like, rank_tol)


def gram_schmidt_extend(
    given: Sequence[np.ndarray],
    candidates: Sequence[np.ndarray],
    rank_tol: float = RANK_TOL,
) -> tuple[list[np.ndarray], list[int]]:
    """Extend an orthonormal set by orthogonalizing ``candidates`` in order.

    Each candidate ``s`` contributes ``(s - sum_k w_k <w_k|s>) / norm`` where the
    sum runs over everything accumulated so far.  The phase is fixed by the
    construction itself (the overlap with the originating candidate is real
    and positive).  Candidates whose residual norm falls below ``rank_tol``
    are skipped; their positions in ``candidates`` are returned alongside the
    extended set.
    """
    basis = [as_ket(g) for g in given]
    if basis:
        g = np.array(basis)
        if np.max(np.abs(g.conj() @ g.T - np.eye(len(basis)))) > 1e-9:
            raise ContractError("the given set is not orthonormal")
    skipped: list[int] = []
    for idx, cand in enumerate(candidates):
        s = as_ket(cand)
        s = s / np.linalg.norm(s)
        r = s.copy()
        # second pass guards against cancellation when r is small
        for _ in range(2):
            for w in basis:
                r = r - w * np.vdot(w, r)
        nrm = np.linalg.norm(r)
        if nrm < rank_tol:
            skipped.append(idx)
            continue
        basis.append(r / nrm)
    return basis, skipped


def lowdin_orthonormalize(vectors: Sequence[np.ndarray]) -> np.ndarray:
    """Symmetric orthonormalization ``X (X^H X)^{-1/2}``; columns of the result.

    Among all orthonormal sets spanning the same space, this one is closest
    to the input vectors in Frobenius norm.
    """
    x = np.column_stack([as_ket(v) for v in vectors])
    u, s, vh = np.linalg.svd(x, full_matrices=False)
    if s[-1] <= RANK_TOL * s[0]:
        raise ContractError("vectors are linearly dependent")
    return u @ vh


def max_abs(a) -> float:
    return float(np.max(np.abs(a), initial=0.0))


def global_phase_distance(a, b) -> float:
    """``min_phi max|a - e^{i phi} b|`` approximated by aligning on the trace overlap."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    ov = np.vdot(b, a)
    phase = ov / abs(ov) if abs(ov) > 1e-300 else 1.0
    return max_abs(a - phase * b)
