"""Minimum-error collective measurements for codeword states.

The square-root measurement is computed first; when it is not already
optimal the measurement vectors are revised pairwise (Helstrom's
Bayes-cost reduction) until the average error stops decreasing.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .codebook import Codebook, build_codeword, codeword_matrix, overlap_matrix
from .errors import ContractError, DegeneracyError
from .linalg import RANK_TOL, herm_eig, inv_sqrtm_psd, sqrtm_psd

log = logging.getLogger(__name__)

ORTHO_TOL = 1e-9


@dataclass(frozen=True)
class MeasurementSet:
    """Orthonormal measurement vectors; ``vectors[k]`` decides for word ``labels[k]``."""

    vectors: tuple[np.ndarray, ...]
    labels: tuple[int, ...]
    iterations: int = 0

    def __post_init__(self):
        vecs = tuple(np.asarray(v, dtype=complex) for v in self.vectors)
        object.__setattr__(self, "vectors", vecs)
        object.__setattr__(self, "labels", tuple(int(x) for x in self.labels))
        if len(vecs) != len(self.labels):
            raise ContractError("one label per measurement vector")

    @property
    def matrix(self) -> np.ndarray:
        """Columns are the measurement vectors."""
        return np.column_stack(self.vectors)

    def orthonormality_error(self) -> float:
        w = self.matrix
        return float(np.max(np.abs(w.conj().T @ w - np.eye(w.shape[1]))))

    def is_orthonormal(self, tol: float = ORTHO_TOL) -> bool:
        return self.orthonormality_error() < tol


@dataclass(frozen=True)
class DecodeReport:
    error_prob: float
    channel: np.ndarray
    mutual_info_bits: float
    optimal_flag: bool
    iterations: int
    complete: bool = True


def _align_to_codewords(w: np.ndarray, s: np.ndarray) -> np.ndarray:
    """Rephase column ``w[:, k]`` so that ``<S_k|w_k>`` is real and nonnegative."""
    out = w.copy()
    for k in range(w.shape[1]):
        ov = np.vdot(s[:, k], w[:, k])
        if abs(ov) > 1e-12:
            out[:, k] *= abs(ov) / ov
    return out


def square_root_measurement(cb: Codebook, rank_tol: float = RANK_TOL) -> MeasurementSet:
    """``|mu_i> = rho^{-1/2} sqrt(z_i)|S_i>`` with ``rho = sum_i z_i |S_i><S_i|``."""
    s = codeword_matrix(cb)
    st = s * np.sqrt(cb.priors)
    gram = st.conj().T @ st
    w, v = herm_eig(gram)
    if w[0] <= rank_tol * w[-1]:
        null = v[:, 0]
        bad = [cb.words[k] for k in np.flatnonzero(np.abs(null) > 1e-6)]
        raise DegeneracyError(f"codewords are linearly dependent: {bad}", bad)
    rho = st @ st.conj().T
    mu = inv_sqrtm_psd(rho, rank_tol) @ st
    mu = _align_to_codewords(mu, s)
    return MeasurementSet(tuple(mu.T), tuple(range(cb.M)))


def srm_optimality_check(cb: Codebook, tol: float = 1e-9) -> bool:
    """True when every diagonal entry of ``Gamma^{1/2}`` is the same."""
    d = np.real(np.diag(sqrtm_psd(overlap_matrix(cb))))
    return bool(d.max() - d.min() < tol)


def helstrom_binary(s1, s2, z1: float, z2: float) -> tuple[float, tuple[np.ndarray, np.ndarray]]:
    """Minimum error for two pure states and the optimal orthonormal pair in their span.

    Error is ``(1 - sqrt(1 - 4 z1 z2 |<s1|s2>|^2)) / 2``.  If the states are
    parallel the second vector is any unit vector orthogonal to ``s1``.
    """
    s1 = np.asarray(s1, dtype=complex)
    s2 = np.asarray(s2, dtype=complex)
    if abs(z1 + z2 - 1) > 1e-12 or min(z1, z2) < 0:
        raise ContractError("priors must be nonnegative and sum to 1")
    ov = np.vdot(s1, s2)
    x = min(1.0, 4 * z1 * z2 * abs(ov) ** 2)
    err = 0.5 * x / (1.0 + np.sqrt(1.0 - x))
    e1 = s1 / np.linalg.norm(s1)
    r = s2 - e1 * np.vdot(e1, s2)
    if np.linalg.norm(r) < 1e-12:
        # pick any direction orthogonal to s1
        k = int(np.argmin(np.abs(e1)))
        r = np.zeros_like(e1)
        r[k] = 1.0
        r = r - e1 * np.vdot(e1, r)
    e2 = r / np.linalg.norm(r)
    w1, w2 = _plane_helstrom(s1, s2, z1, z2, e1, e2)
    return float(err), (w1, w2)


def _plane_helstrom(s1, s2, z1, z2, e1, e2):
    """Optimal orthonormal pair inside span{e1, e2} for deciding s1 vs s2.

    ``s1`` and ``s2`` need not lie in the plane; only their projections matter.
    """
    basis = np.column_stack([e1, e2])
    a = basis.conj().T @ s1
    b = basis.conj().T @ s2
    d = z1 * np.outer(a, a.conj()) - z2 * np.outer(b, b.conj())
    _, vecs = herm_eig(0.5 * (d + d.conj().T))
    w1 = basis @ vecs[:, 1]
    w2 = basis @ vecs[:, 0]
    for w, s in ((w1, s1), (w2, s2)):
        ov = np.vdot(s, w)
        if abs(ov) > 1e-12:
            w *= abs(ov) / ov
    return w1, w2


def error_probability(cb: Codebook, ms: MeasurementSet) -> float:
    """``1 - sum_i z_i |<S_i|w_i>|^2``."""
    s = codeword_matrix(cb)
    w = ms.matrix
    if w.shape[0] != s.shape[0]:
        raise ContractError("measurement and codeword dimensions differ")
    hit = 0.0
    for k, label in enumerate(ms.labels):
        if label < cb.M:
            hit += cb.priors[label] * abs(np.vdot(s[:, label], w[:, k])) ** 2
    return float(1.0 - hit)


def _pair_success(cb, s, w, i, j):
    return cb.priors[i] * abs(np.vdot(s[:, i], w[:, i])) ** 2 + cb.priors[j] * abs(np.vdot(s[:, j], w[:, j])) ** 2


def bayes_cost_reduction(
    cb: Codebook,
    start: MeasurementSet,
    tol: float = 1e-10,
    max_sweeps: int = 10_000,
) -> MeasurementSet:
    """Pairwise revision of the measurement vectors, starting from ``start``.

    Each step takes the pair ``(w_i, w_j)``, solves the binary decision problem
    for ``(S_i, S_j)`` inside their plane and keeps the revised pair only if
    the error strictly decreases.  Pairs are visited in lexicographic order;
    iteration stops when a full sweep gains less than ``tol``.
    """
    if not start.is_orthonormal():
        raise ContractError("starting measurement set is not orthonormal")
    if list(start.labels) != list(range(cb.M)):
        raise ContractError("bayes_cost_reduction expects one vector per codeword, in order")
    s = codeword_matrix(cb)
    w = start.matrix.copy()
    pe = error_probability(cb, start)
    sweeps = 0
    while sweeps < max_sweeps:
        sweeps += 1
        pe_sweep = pe
        for i, j in combinations(range(cb.M), 2):
            zi, zj = cb.priors[i], cb.priors[j]
            tot = zi + zj
            if tot == 0:
                continue
            old = _pair_success(cb, s, w, i, j)
            w1, w2 = _plane_helstrom(s[:, i], s[:, j], zi / tot, zj / tot, w[:, i], w[:, j])
            trial = w.copy()
            trial[:, i], trial[:, j] = w1, w2
            new = _pair_success(cb, s, trial, i, j)
            if new > old:
                w = trial
                pe_new = pe - (new - old)
                assert pe_new <= pe, "Bayes-cost step increased the error"
                pe = pe_new
        if pe_sweep - pe < tol:
            break
    log.debug("bayes_cost_reduction: %d sweeps, Pe=%.12g", sweeps, pe)
    return MeasurementSet(tuple(w.T), start.labels, iterations=sweeps)


def optimal_measurement(cb: Codebook, tol: float = 1e-10, max_sweeps: int = 10_000) -> MeasurementSet:
    """Square-root measurement refined by Bayes-cost reduction."""
    return bayes_cost_reduction(cb, square_root_measurement(cb), tol, max_sweeps)


def is_pairwise_optimal(cb: Codebook, ms: MeasurementSet, tol: float = 1e-9) -> bool:
    """No single pairwise revision lowers the error by more than ``tol``."""
    s = codeword_matrix(cb)
    w = ms.matrix
    m = min(cb.M, w.shape[1])
    for i, j in combinations(range(m), 2):
        zi, zj = cb.priors[i], cb.priors[j]
        if zi + zj == 0:
            continue
        w1, w2 = _plane_helstrom(s[:, i], s[:, j], zi / (zi + zj), zj / (zi + zj), w[:, i], w[:, j])
        trial = w.copy()
        trial[:, i], trial[:, j] = w1, w2
        if _pair_success(cb, s, trial, i, j) - _pair_success(cb, s, w, i, j) > tol:
            return False
    return True


def mutual_information(priors, channel) -> float:
    """``I(X;Y)`` in bits for input distribution ``priors`` and rows ``P(y|x)``."""
    priors = np.asarray(priors, dtype=float)
    channel = np.asarray(channel, dtype=float)
    joint = priors[:, None] * channel
    py = joint.sum(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(joint > 0, channel / py[None, :], 1.0)
        terms = np.where(joint > 0, joint * np.log2(ratio), 0.0)
    return float(max(terms.sum(), 0.0))


def channel_matrix(cb: Codebook, ms: MeasurementSet, completeness_tol: float = 1e-9) -> tuple[np.ndarray, bool]:
    """Rows ``P(j|i) = |<w_j|S_i>|^2``; an inconclusive column is appended if mass is missing."""
    s = codeword_matrix(cb)
    w = ms.matrix
    p = np.abs(w.conj().T @ s).T ** 2
    residual = 1.0 - p.sum(axis=1)
    complete = bool(np.all(np.abs(residual) <= completeness_tol))
    if not complete:
        p = np.column_stack([p, np.clip(residual, 0.0, None)])
    return p, complete


def channel_and_information(cb: Codebook, ms: MeasurementSet) -> DecodeReport:
    p, complete = channel_matrix(cb, ms)
    return DecodeReport(
        error_prob=error_probability(cb, ms),
        channel=p,
        mutual_info_bits=mutual_information(cb.priors, p),
        optimal_flag=is_pairwise_optimal(cb, ms),
        iterations=ms.iterations,
        complete=complete,
    )
