"""Letter states, codeword states and priors.

Two letter families are supported:

* two-level letters obtained by rotating ``|up>`` about the y axis, so that
  ``<+|-> = kappa`` (atoms or photon polarizations);
* BPSK coherent-state letters ``{|alpha>, |-alpha>}``, displaced to
  ``{|0>, |-2 alpha>}`` and expressed in the measurement qubit ``{|a>, |b>}``.

Words are strings over ``{'+', '-'}``.  The 2**n sequences are indexed
big-endian with ``'+' -> 0`` and ``'-' -> 1``.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.special import gammaln
from scipy.stats import poisson

from .errors import ContractError, DomainError, SizeError
from .linalg import MAX_DIM, tensor

TAIL_TOL = 1e-12
N_MAX_CAP = 64

_LETTER_ALIASES = {"+": "+", "-": "-", "−": "-", "0": "+", "1": "-"}


@dataclass(frozen=True)
class LetterPair:
    """Binary letter states as real 2-vectors in the measurement basis."""

    kappa: float
    plus: np.ndarray
    minus: np.ndarray

    def __post_init__(self):
        for ket in (self.plus, self.minus):
            if abs(np.linalg.norm(ket) - 1) > 1e-12:
                raise ContractError("letter kets must be unit vectors")
        ov = np.vdot(self.plus, self.minus)
        if abs(ov.imag) > 1e-12 or abs(ov.real - self.kappa) > 1e-12:
            raise ContractError(f"letter overlap {ov} does not equal kappa={self.kappa}")

    def ket(self, letter: str) -> np.ndarray:
        return self.plus if letter == "+" else self.minus


def letter_error_probability(kappa: float) -> float:
    """``p = (1 - sqrt(1 - kappa^2)) / 2``: rotation parameter of the letters,
    and also the equal-prior Helstrom error for a single letter."""
    # rationalized form: no cancellation for small kappa
    return kappa * kappa / (2.0 * (1.0 + np.sqrt(1.0 - kappa * kappa)))


def make_letter_pair(kappa: float) -> LetterPair:
    """Letters ``R_y(theta)|up>`` and ``R_y(pi - theta)|up>`` with overlap ``kappa``."""
    kappa = float(kappa)
    if not 0.0 <= kappa < 1.0:
        raise DomainError(f"kappa must lie in [0, 1), got {kappa}")
    p = letter_error_probability(kappa)
    plus = np.array([np.sqrt(1 - p), -np.sqrt(p)], dtype=complex)
    minus = np.array([np.sqrt(p), -np.sqrt(1 - p)], dtype=complex)
    return LetterPair(kappa, plus, minus)


def normalize_word(word: str) -> str:
    try:
        return "".join(_LETTER_ALIASES[ch] for ch in word)
    except KeyError as exc:
        raise ContractError(f"word {word!r} contains a letter outside '+'/'-'") from exc


def word_index(word: str) -> int:
    """Big-endian sequence index of a word (``'+' -> 0``)."""
    return int("".join("0" if ch == "+" else "1" for ch in word), 2) if word else 0


def all_sequences(n: int) -> list[str]:
    return ["".join(w) for w in product("+-", repeat=n)]


def hamming(u: str, v: str) -> int:
    return sum(a != b for a, b in zip(u, v))


@dataclass(frozen=True)
class Codebook:
    letters: LetterPair
    words: tuple[str, ...]
    priors: np.ndarray = field(default=None)

    def __post_init__(self):
        words = tuple(normalize_word(w) for w in self.words)
        if not words:
            raise ContractError("a codebook needs at least one word")
        n = len(words[0])
        if n == 0 or any(len(w) != n for w in words):
            raise ContractError("all words must have the same positive length")
        if 2**n > MAX_DIM:
            raise SizeError(f"word length {n} exceeds the register cap")
        if len(set(words)) != len(words):
            raise ContractError("codewords must be distinct")
        priors = self.priors
        if priors is None:
            priors = np.full(len(words), 1.0 / len(words))
        priors = np.asarray(priors, dtype=float)
        if priors.shape != (len(words),):
            raise ContractError("one prior per word is required")
        if np.any(priors < 0) or abs(priors.sum() - 1) > 1e-12:
            raise ContractError("priors must be nonnegative and sum to 1")
        object.__setattr__(self, "words", words)
        object.__setattr__(self, "priors", priors)

    @property
    def n(self) -> int:
        return len(self.words[0])

    @property
    def M(self) -> int:
        return len(self.words)

    @property
    def kappa(self) -> float:
        return self.letters.kappa

    @property
    def dim(self) -> int:
        return 2**self.n

    def complement_words(self) -> list[str]:
        """Non-codeword sequences in index order."""
        used = set(self.words)
        return [w for w in all_sequences(self.n) if w not in used]

    def with_priors(self, priors) -> "Codebook":
        return Codebook(self.letters, self.words, np.asarray(priors, dtype=float))


def make_codebook(kappa: float, words: Sequence[str], priors=None) -> Codebook:
    return Codebook(make_letter_pair(kappa), tuple(words), priors)


def sequence_ket(letters: LetterPair, word: str) -> np.ndarray:
    return tensor(*(letters.ket(ch) for ch in normalize_word(word)))


def build_codeword(cb: Codebook, index: int) -> np.ndarray:
    if not 0 <= index < cb.M:
        raise IndexError(f"word index {index} out of range for M={cb.M}")
    return sequence_ket(cb.letters, cb.words[index])


def codeword_matrix(cb: Codebook) -> np.ndarray:
    """Columns are the codeword kets ``|S_i>``."""
    return np.column_stack([build_codeword(cb, i) for i in range(cb.M)])


def overlap_matrix(cb: Codebook) -> np.ndarray:
    """Gram matrix of prior-weighted codewords, ``sqrt(z_i z_j) kappa^d(i,j)``."""
    d = np.array([[hamming(u, v) for v in cb.words] for u in cb.words])
    w = np.sqrt(cb.priors)
    return (np.outer(w, w) * cb.kappa**d).astype(complex)


# --- BPSK coherent-state frontend -------------------------------------------


def coherent_ket(beta: float, n_max: int) -> np.ndarray:
    """Fock amplitudes ``exp(-|b|^2/2) b^n / sqrt(n!)`` for n = 0..n_max (real beta)."""
    n = np.arange(n_max + 1)
    if beta == 0:
        return (n == 0).astype(complex)
    mag = np.exp(-0.5 * beta * beta + n * np.log(abs(beta)) - 0.5 * gammaln(n + 1))
    return (mag * np.sign(beta) ** n).astype(complex)


@dataclass(frozen=True)
class FockLetterPair:
    alpha: float
    n_max: int
    zero_ket: np.ndarray
    displaced_ket: np.ndarray
    a_ket: np.ndarray
    b_ket: np.ndarray
    tail_mass: float

    @property
    def overlap(self) -> float:
        """``<0|-2 alpha>``."""
        return float(np.vdot(self.zero_ket, self.displaced_ket).real)

    def qubit_letters(self) -> LetterPair:
        """The displaced letters written in the ``{|a>, |b>}`` qubit."""
        k = self.overlap
        plus = np.array([1.0, 0.0], dtype=complex)
        minus = np.array([np.vdot(self.a_ket, self.displaced_ket), np.vdot(self.b_ket, self.displaced_ket)])
        return LetterPair(k, plus, minus)

    def photon_counting_residuals(self) -> dict[str, float]:
        """Compare ``{|a><a|, |b><b|}`` with vacuum / non-vacuum counting on the letter span."""
        d = self.n_max + 1
        p_span = np.outer(self.a_ket, self.a_ket.conj()) + np.outer(self.b_ket, self.b_ket.conj())
        vac = np.zeros((d, d), dtype=complex)
        vac[0, 0] = 1.0
        click = np.eye(d) - vac
        pa = np.outer(self.a_ket, self.a_ket.conj())
        pb = np.outer(self.b_ket, self.b_ket.conj())
        letters = np.column_stack([self.zero_ket, self.displaced_ket])
        q, _ = np.linalg.qr(letters)
        p_letters = q @ q.conj().T
        return {
            "vacuum": float(np.max(np.abs(p_span @ vac @ p_span - pa))),
            "click": float(np.max(np.abs(p_span @ click @ p_span - pb))),
            "span": float(np.max(np.abs(p_letters - p_span))),
            "ab_overlap": float(abs(np.vdot(self.a_ket, self.b_ket))),
        }


def make_bpsk_letters(alpha: float, tail_tol: float = TAIL_TOL, n_max_cap: int = N_MAX_CAP) -> FockLetterPair:
    alpha = float(alpha)
    if not alpha > 0:
        raise DomainError("alpha must be positive")
    beta = -2.0 * alpha
    mu = beta * beta
    n_max = 0
    while poisson.sf(n_max, mu) >= tail_tol:
        n_max += 1
        if n_max > n_max_cap:
            raise SizeError(
                f"alpha={alpha}: tail mass below {tail_tol} needs more than {n_max_cap} Fock levels"
            )
    tail = float(poisson.sf(n_max, mu))
    disp = coherent_ket(beta, n_max)
    disp = disp / np.linalg.norm(disp)
    zero = np.zeros(n_max + 1, dtype=complex)
    zero[0] = 1.0
    ov = np.vdot(zero, disp)
    b = (disp - zero * ov) / np.sqrt(1.0 - abs(ov) ** 2)
    return FockLetterPair(alpha, n_max, zero, disp, zero.copy(), b, tail)


# --- JSON documents -----------------------------------------------------------


def codebook_from_dict(doc: dict) -> Codebook:
    """Build a codebook from ``{"kappa"|"bpsk": ..., "words": [...], "priors": [...]}``."""
    if "words" not in doc:
        raise ContractError("codebook document needs a 'words' list")
    if "bpsk" in doc:
        letters = make_bpsk_letters(float(doc["bpsk"]["alpha"])).qubit_letters()
    elif "kappa" in doc:
        letters = make_letter_pair(float(doc["kappa"]))
    else:
        raise ContractError("codebook document needs 'kappa' or 'bpsk'")
    return Codebook(letters, tuple(doc["words"]), doc.get("priors"))


def load_codebook(source) -> Codebook:
    if isinstance(source, dict):
        return codebook_from_dict(source)
    if isinstance(source, (str, os.PathLike)):
        return codebook_from_dict(json.loads(Path(source).read_text()))
    return codebook_from_dict(json.load(source))


def codebook_to_dict(cb: Codebook) -> dict:
    return {"kappa": cb.kappa, "words": list(cb.words), "priors": [float(z) for z in cb.priors]}
