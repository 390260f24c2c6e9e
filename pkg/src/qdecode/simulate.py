"""State-vector execution of netlists and separate (letter-wise) measurement."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractError
from .gates import GateNetlist, apply_gates

NORM_TOL = 1e-10


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Counter-based generator for one trial: Philox keyed by ``seed``, counter ``trial``.

    Block ``trial`` of the sequential ``Philox(key=seed)`` stream, so a
    vectorized draw of ``4 * N`` doubles reproduces every per-trial stream.
    """
    return np.random.Generator(np.random.Philox(key=seed, counter=trial))


def trial_uniforms(seed: int, trials: int) -> np.ndarray:
    """``(trials, 4)`` uniforms; row ``k`` equals the first four draws of ``trial_rng(seed, k)``."""
    gen = np.random.Generator(np.random.Philox(key=seed))
    return gen.random(4 * trials).reshape(trials, 4)


def apply_netlist(state, nl: GateNetlist) -> np.ndarray:
    state = np.asarray(state, dtype=complex)
    if state.ndim != 1 or state.shape[0] != 2**nl.n:
        raise ContractError(f"state of shape {state.shape} does not fit {nl.n} qubits")
    out = apply_gates(state, nl.gates, nl.n)
    drift = abs(np.linalg.norm(out) - np.linalg.norm(state))
    if drift > NORM_TOL:
        raise ContractError(f"netlist changed the norm by {drift:.3g}")
    return out


def outcome_distribution(state) -> np.ndarray:
    p = np.abs(np.asarray(state)) ** 2
    return p / p.sum()


def bits(index: int, n: int) -> str:
    return format(index, f"0{n}b")


def sample_outcome(probs: np.ndarray, u: float) -> int:
    cdf = np.cumsum(probs)
    return int(min(np.searchsorted(cdf, u * cdf[-1], side="right"), len(probs) - 1))


def measure_separate(state, rng: np.random.Generator) -> str:
    """Measure every qubit in the ``{|up>, |down>}`` basis; returns e.g. ``"01"``."""
    state = np.asarray(state, dtype=complex)
    n = int(np.log2(state.shape[0]))
    if 2**n != state.shape[0]:
        raise ContractError("state length is not a power of two")
    if abs(np.linalg.norm(state) - 1) > 1e-8:
        raise ContractError("state is not normalized")
    return bits(sample_outcome(outcome_distribution(state), rng.random()), n)


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    sent_index: int
    outcome_bits: str
    decoded_index: int | None

    @property
    def erased(self) -> bool:
        return self.decoded_index is None

    @property
    def correct(self) -> bool:
        return self.decoded_index == self.sent_index
