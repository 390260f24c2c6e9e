"""Collective decoding of binary pure-state codewords.

Optimal measurements, their compilation into gate netlists, a pulse-level
model of the controlled gate, and a Monte Carlo harness.
"""

from .codebook import (
    Codebook,
    LetterPair,
    build_codeword,
    load_codebook,
    make_bpsk_letters,
    make_codebook,
    make_letter_pair,
    overlap_matrix,
)
from .compiler import CompileResult, compile_codebook, reck_decompose
from .decoder import (
    MeasurementSet,
    bayes_cost_reduction,
    channel_and_information,
    error_probability,
    helstrom_binary,
    optimal_measurement,
    square_root_measurement,
    srm_optimality_check,
)
from .errors import (
    ConfigError,
    ContractError,
    DegeneracyError,
    DomainError,
    InfeasibleError,
    QDecodeError,
    SizeError,
    SubspaceViolation,
)
from .gates import Gate, GateNetlist, netlist_to_matrix

__version__ = "0.1.0"

__all__ = [
    "Codebook",
    "CompileResult",
    "ConfigError",
    "ContractError",
    "DegeneracyError",
    "DomainError",
    "Gate",
    "GateNetlist",
    "InfeasibleError",
    "LetterPair",
    "MeasurementSet",
    "QDecodeError",
    "SizeError",
    "SubspaceViolation",
    "bayes_cost_reduction",
    "build_codeword",
    "channel_and_information",
    "compile_codebook",
    "error_probability",
    "helstrom_binary",
    "load_codebook",
    "make_bpsk_letters",
    "make_codebook",
    "make_letter_pair",
    "netlist_to_matrix",
    "optimal_measurement",
    "overlap_matrix",
    "reck_decompose",
    "square_root_measurement",
    "srm_optimality_check",
]
