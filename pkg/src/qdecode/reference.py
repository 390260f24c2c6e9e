"""Closed-form values used as independent oracles.

Everything here is written out by hand rather than computed by the general
machinery, so tests can compare the two.
"""

from __future__ import annotations

import numpy as np

from .capacity import binary_entropy


def letter_error(kappa: float) -> float:
    """Minimum error for one binary letter, ``(1 - sqrt(1 - k^2)) / 2``."""
    return 0.5 * (1.0 - np.sqrt(1.0 - kappa**2))


def pair_error(kappa: float) -> float:
    """Minimum error for ``{++, --}`` with equal priors, ``(1 - sqrt(1 - k^4)) / 2``."""
    return 0.5 * (1.0 - np.sqrt(1.0 - kappa**4))


def binary_helstrom(z1: float, z2: float, overlap: float) -> float:
    return 0.5 * (1.0 - np.sqrt(1.0 - 4.0 * z1 * z2 * overlap**2))


def pair_adaptor(kappa: float) -> np.ndarray:
    """Adaptor for ``{++, --}`` with the symmetric completion; rows are ``<A_k| U``."""
    d0 = np.sqrt(1.0 + kappa**2)
    k = kappa
    return np.array(
        [
            [1 + d0, -k, -k, 1 - d0],
            [k, 1 + d0, 1 - d0, k],
            [k, 1 - d0, 1 + d0, k],
            [1 - d0, -k, -k, 1 + d0],
        ]
    ) / (2 * d0)


def pair_measurement(kappa: float) -> tuple[np.ndarray, np.ndarray]:
    """Optimal vectors for ``++`` and ``--`` in the product basis."""
    d0 = np.sqrt(1.0 + kappa**2)
    w1 = np.array([1 + d0, -kappa, -kappa, 1 - d0]) / (2 * d0)
    w2 = np.array([1 - d0, -kappa, -kappa, 1 + d0]) / (2 * d0)
    return w1, w2


def pair_rotation_angles(kappa: float) -> dict[tuple[int, int], tuple[float, float]]:
    """``(cos g, sin g)`` of each plane rotation in the factorization of :func:`pair_adaptor`.

    Keys are 1-based ``(j, i)``; ``g`` is half the RY gate angle.
    """
    k = kappa
    d0 = np.sqrt(1 + k * k)
    d1 = np.sqrt((d0 + 1) ** 2 + k * k)
    d2 = np.sqrt(d1 * d1 + k * k)
    c43, s43 = (d0 + 1) / d1, -k / d1
    c42, s42 = d1 / d2, -k / d2
    c41, s41 = d2 / (2 * d0), -(d0 - 1) / (2 * d0)
    return {
        (4, 3): (c43, s43),
        (4, 2): (c42, s42),
        (4, 1): (c41, s41),
        (3, 2): (c41, s41),
        (3, 1): (c42, -s42),
        (2, 1): (c43, -s43),
    }


def gain_code_sqrt_gram(kappa: float) -> tuple[float, float]:
    """Diagonal and off-diagonal entries of ``Gamma^{1/2}`` for the length-3 gain code."""
    a = np.sqrt(1 - kappa**2)
    b = np.sqrt(1 + 3 * kappa**2)
    return (3 * a + b) / 8, (b - a) / 8


def gain_code_information(kappa: float) -> float:
    """Block information (bits) of the gain code under the square-root measurement."""
    diag, off = gain_code_sqrt_gram(kappa)
    p = 4 * diag**2
    q = 4 * off**2
    with np.errstate(divide="ignore", invalid="ignore"):
        h = -(p * np.log2(p) if p > 0 else 0.0) - 3 * (q * np.log2(q) if q > 0 else 0.0)
    return float(2.0 - h)


def letter_capacity(kappa: float) -> float:
    """Single-letter capacity for the symmetric binary pure-state channel."""
    return float(1.0 - binary_entropy(letter_error(kappa)))
