"""Elementary gates, netlists and a state-vector kernel.

Qubit 0 is the leftmost (most significant) tensor factor.  Controlled gates
fire when the control qubit is ``|down> = |1>``.  Rotation conventions::

    RY(t) = [[cos t/2,  sin t/2], [-sin t/2, cos t/2]]
    RZ(t) = diag(exp(i t/2), exp(-i t/2))
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import ContractError, SizeError
from .linalg import MAX_DIM

KINDS = ("RY", "RZ", "X", "CNOT", "C_SQRT_X", "C_RY")
_CONTROLLED = {"CNOT", "C_SQRT_X", "C_RY"}
_ROTATIONS = {"RY", "RZ", "C_RY"}

X_MAT = np.array([[0, 1], [1, 0]], dtype=complex)
SQRT_X_MAT = 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]])


def ry(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, s], [-s, c]], dtype=complex)


def rz(theta: float) -> np.ndarray:
    return np.diag([np.exp(0.5j * theta), np.exp(-0.5j * theta)])


@dataclass(frozen=True)
class Gate:
    kind: str
    target: int
    control: int | None = None
    angle: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ContractError(f"unknown gate kind {self.kind!r}")
        if (self.kind in _CONTROLLED) != (self.control is not None):
            raise ContractError(f"{self.kind} control qubit mismatch")
        if (self.kind in _ROTATIONS) != (self.angle is not None):
            raise ContractError(f"{self.kind} angle mismatch")
        if self.control is not None and self.control == self.target:
            raise ContractError("control and target must differ")

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.target,) if self.control is None else (self.control, self.target)

    def target_matrix(self) -> np.ndarray:
        """2x2 block applied to the target (when the control fires)."""
        if self.kind in ("RY", "C_RY"):
            return ry(self.angle)
        if self.kind == "RZ":
            return rz(self.angle)
        if self.kind in ("X", "CNOT"):
            return X_MAT
        return SQRT_X_MAT

    def to_dict(self) -> dict:
        d: dict = {"kind": self.kind}
        if self.control is not None:
            d["control"] = self.control
        d["target"] = self.target
        if self.angle is not None:
            d["angle"] = float(self.angle)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Gate":
        angle = d.get("angle")
        return cls(d["kind"], int(d["target"]), d.get("control"), None if angle is None else float(angle))


@dataclass(frozen=True)
class GateNetlist:
    n: int
    gates: tuple[Gate, ...] = field(default=())

    def __post_init__(self):
        if self.n < 1 or 2**self.n > MAX_DIM:
            raise SizeError(f"register of {self.n} qubits outside [1, 12]")
        gates = tuple(self.gates)
        for g in gates:
            if any(not 0 <= q < self.n for q in g.qubits):
                raise ContractError(f"gate {g} addresses a qubit outside 0..{self.n - 1}")
        object.__setattr__(self, "gates", gates)

    def __len__(self):
        return len(self.gates)

    def __add__(self, other: "GateNetlist") -> "GateNetlist":
        if other.n != self.n:
            raise ContractError("cannot concatenate netlists of different width")
        return GateNetlist(self.n, self.gates + other.gates)

    def inverse(self) -> "GateNetlist":
        inv = []
        for g in reversed(self.gates):
            if g.kind in _ROTATIONS:
                inv.append(Gate(g.kind, g.target, g.control, -g.angle))
            elif g.kind == "C_SQRT_X":
                # (sqrt X)^dagger = X sqrt X
                inv += [Gate("C_SQRT_X", g.target, g.control), Gate("CNOT", g.target, g.control)]
            else:
                inv.append(g)
        return GateNetlist(self.n, tuple(inv))

    def counts(self) -> dict[str, int]:
        out = {k: 0 for k in KINDS}
        for g in self.gates:
            out[g.kind] += 1
        return {k: v for k, v in out.items() if v}

    def to_jsonl(self) -> str:
        return "".join(json.dumps(g.to_dict()) + "\n" for g in self.gates)

    @classmethod
    def from_jsonl(cls, n: int, text: str) -> "GateNetlist":
        gates = [Gate.from_dict(json.loads(line)) for line in text.splitlines() if line.strip()]
        return cls(n, tuple(gates))


def _apply_gate(psi: np.ndarray, g: Gate) -> np.ndarray:
    """``psi`` has shape ``(2,)*n + (batch,)``; returns the updated array."""
    u = g.target_matrix()
    t = g.target
    if g.control is None:
        moved = np.moveaxis(psi, t, 0)
        out = np.tensordot(u, moved, axes=([1], [0]))
        return np.moveaxis(out, 0, t)
    out = psi.copy()
    idx = [slice(None)] * psi.ndim
    idx[g.control] = 1
    sub = psi[tuple(idx)]
    # target axis index shifts down by one when the control axis precedes it
    ta = t - 1 if g.control < t else t
    moved = np.moveaxis(sub, ta, 0)
    new = np.moveaxis(np.tensordot(u, moved, axes=([1], [0])), 0, ta)
    out[tuple(idx)] = new
    return out


def apply_gates(states: np.ndarray, gates: Iterable[Gate], n: int) -> np.ndarray:
    """Apply gates in temporal order to a ket or to the columns of a matrix."""
    states = np.asarray(states, dtype=complex)
    single = states.ndim == 1
    mat = states[:, None] if single else states
    if mat.shape[0] != 2**n:
        raise ContractError(f"state dimension {mat.shape[0]} does not match {n} qubits")
    psi = mat.reshape((2,) * n + (mat.shape[1],))
    for g in gates:
        psi = _apply_gate(psi, g)
    out = psi.reshape(2**n, mat.shape[1])
    return out[:, 0] if single else out


def netlist_to_matrix(nl: GateNetlist) -> np.ndarray:
    """Unitary of the netlist; the first gate acts first."""
    return apply_gates(np.eye(2**nl.n, dtype=complex), nl.gates, nl.n)


def gate_matrix(g: Gate, n: int) -> np.ndarray:
    return netlist_to_matrix(GateNetlist(n, (g,)))


def matrix_to_csv(m: np.ndarray) -> str:
    """One row per matrix row; each entry written as ``re,im``."""
    lines = []
    for row in np.asarray(m, dtype=complex):
        lines.append(",".join(f"{z.real:.17g},{z.imag:.17g}" for z in row))
    return "\n".join(lines) + "\n"


def csv_to_matrix(text: str) -> np.ndarray:
    rows = []
    for line in text.strip().splitlines():
        vals = [float(x) for x in line.split(",")]
        rows.append([complex(vals[k], vals[k + 1]) for k in range(0, len(vals), 2)])
    return np.array(rows, dtype=complex)

