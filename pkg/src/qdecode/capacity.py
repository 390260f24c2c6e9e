"""Single-letter capacity and the block-coding information gain."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .codebook import make_codebook, make_letter_pair
from .decoder import channel_and_information, square_root_measurement

#: length-3 code whose collective decoding beats the single-letter capacity
GAIN_CODE = ("+++", "+--", "--+", "-+-")

_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0


def binary_entropy(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        h = -p * np.log2(p) - (1 - p) * np.log2(1 - p)
    return np.where((p <= 0) | (p >= 1), 0.0, h)


def _letter_information(kappa: float, zeta, phi) -> np.ndarray:
    """Mutual information of one letter sent with prior ``zeta`` on ``+`` and
    measured in the real basis rotated by ``phi``.  Broadcasts."""
    lp = make_letter_pair(kappa)
    plus, minus = lp.plus.real, lp.minus.real
    c, s = np.cos(phi), np.sin(phi)
    # probability of outcome 0 for each letter
    q_plus = (c * plus[0] + s * plus[1]) ** 2
    q_minus = (c * minus[0] + s * minus[1]) ** 2
    q_out = zeta * q_plus + (1 - zeta) * q_minus
    return binary_entropy(q_out) - zeta * binary_entropy(q_plus) - (1 - zeta) * binary_entropy(q_minus)


def golden_section_max(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-12) -> float:
    a, b = lo, hi
    x1 = b - _INVPHI * (b - a)
    x2 = a + _INVPHI * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > tol:
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INVPHI * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INVPHI * (b - a)
            f1 = f(x1)
    return 0.5 * (a + b)


def letter_capacity_C1(kappa: float, grid: int = 401, rounds: int = 40) -> float:
    """Best single-letter information over priors and projective letter measurements.

    Coarse ``grid x grid`` search over (prior, basis angle), then alternating
    golden-section refinement of each coordinate within one grid cell.
    """
    zs = np.linspace(0.0, 1.0, grid)
    phis = np.linspace(0.0, np.pi, grid)
    table = _letter_information(kappa, zs[:, None], phis[None, :])
    iz, ip = np.unravel_index(np.argmax(table), table.shape)
    z, phi = zs[iz], phis[ip]
    dz, dphi = zs[1] - zs[0], phis[1] - phis[0]
    best = float(table[iz, ip])
    for _ in range(rounds):
        z = golden_section_max(lambda x: float(_letter_information(kappa, x, phi)), max(0.0, z - dz), min(1.0, z + dz))
        phi = golden_section_max(lambda x: float(_letter_information(kappa, z, x)), phi - dphi, phi + dphi)
        val = float(_letter_information(kappa, z, phi))
        if val - best < 1e-15:
            best = max(best, val)
            break
        best = val
    return best


def block_information(kappa: float, words: Iterable[str] = GAIN_CODE) -> float:
    """Information per block for equiprobable ``words`` decoded with the square-root measurement."""
    cb = make_codebook(kappa, tuple(words))
    return channel_and_information(cb, square_root_measurement(cb)).mutual_info_bits


@dataclass(frozen=True)
class SweepRow:
    kappa: float
    C1: float
    I3: float

    @property
    def gain(self) -> float:
        return self.I3 / 3.0 - self.C1


def superadditivity_sweep(kappas: Iterable[float]) -> list[SweepRow]:
    rows = []
    for k in kappas:
        rows.append(SweepRow(float(k), letter_capacity_C1(k), block_information(k)))
    return rows


def sweep_to_csv(rows: Iterable[SweepRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["kappa", "C1", "I3", "gain"])
    for r in rows:
        writer.writerow([f"{v:.9g}" for v in (r.kappa, r.C1, r.I3, r.gain)])
    return buf.getvalue()
