"""Gate-level IR: a flat gate list over a fixed line of qubits."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum

CONNECTIVITIES = ("all_to_all", "linear")
STAGES = ("prep", "reorder", "ancilla_route", "ccU", "ancilla_unroute")


class GateKind(str, Enum):
    X = "x"
    H = "h"
    T = "t"
    TDG = "tdg"
    RY = "ry"
    CNOT = "cx"
    SWAP = "swap"
    FSWAP = "fswap"
    CRY = "cry"
    CCRY = "ccry"
    MEASURE = "measure"

    @property
    def arity(self) -> int:
        return _ARITY[self]

    @property
    def parametric(self) -> bool:
        return self in (GateKind.RY, GateKind.CRY, GateKind.CCRY)


_ARITY = {
    GateKind.X: 1, GateKind.H: 1, GateKind.T: 1, GateKind.TDG: 1, GateKind.RY: 1,
    GateKind.CNOT: 2, GateKind.SWAP: 2, GateKind.FSWAP: 2, GateKind.CRY: 2,
    GateKind.CCRY: 3, GateKind.MEASURE: 1,
}

BASE_GATES = frozenset({GateKind.X, GateKind.H, GateKind.T, GateKind.TDG, GateKind.RY, GateKind.CNOT})
MACRO_GATES = frozenset({GateKind.SWAP, GateKind.FSWAP, GateKind.CRY, GateKind.CCRY})


class ConnectivityError(ValueError):
    pass


@dataclass(frozen=True)
class Gate:
    """One gate.  Controls come first in ``qubits``; the target is last."""

    kind: GateKind
    qubits: tuple[int, ...]
    angle: float | None = None
    stage: str | None = None

    def __post_init__(self):
        kind = GateKind(self.kind)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if len(self.qubits) != kind.arity:
            raise ValueError(f"{kind.name} takes {kind.arity} qubit(s), got {self.qubits}")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"repeated operand in {kind.name}{self.qubits}")
        if kind.parametric and self.angle is None:
            raise ValueError(f"{kind.name} needs an angle")
        if not kind.parametric and self.angle is not None:
            raise ValueError(f"{kind.name} takes no angle")

    def with_stage(self, stage: str | None) -> "Gate":
        return replace(self, stage=stage)


@dataclass
class Circuit:
    width: int
    gates: list[Gate] = field(default_factory=list)
    connectivity: str = "linear"
    qubit_labels: list[str] | None = None

    def __post_init__(self):
        if self.connectivity not in CONNECTIVITIES:
            raise ValueError(f"connectivity must be one of {CONNECTIVITIES}, got {self.connectivity!r}")
        if self.qubit_labels is None:
            self.qubit_labels = [f"q{i}" for i in range(self.width)]
        if len(self.qubit_labels) != self.width or len(set(self.qubit_labels)) != self.width:
            raise ValueError("qubit_labels must be distinct, one per line")
        for g in self.gates:
            self._check(g)

    def _check(self, gate: Gate) -> None:
        if any(not 0 <= q < self.width for q in gate.qubits):
            raise ValueError(f"{gate.kind.name}{gate.qubits} outside width {self.width}")

    def append(self, gate: Gate) -> None:
        self._check(gate)
        self.gates.append(gate)

    def add(self, kind: GateKind, *qubits: int, angle: float | None = None, stage: str | None = None) -> None:
        self.append(Gate(kind, qubits, angle, stage))

    def extend(self, gates) -> None:
        for g in gates:
            self.append(g)

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def count(self, kind: GateKind) -> int:
        return sum(1 for g in self.gates if g.kind == kind)

    def output_labels(self) -> list[str]:
        """Labels per line after every SWAP/FSWAP has moved its qubits."""
        labels = list(self.qubit_labels)
        for g in self.gates:
            if g.kind in (GateKind.SWAP, GateKind.FSWAP):
                a, b = g.qubits
                labels[a], labels[b] = labels[b], labels[a]
        return labels

    def measured_qubits(self) -> list[int]:
        return [g.qubits[0] for g in self.gates if g.kind == GateKind.MEASURE]

    def embedded(self, width: int, labels: list[str] | None = None) -> "Circuit":
        """Same gates on the first lines of a wider register."""
        if width < self.width:
            raise ValueError("cannot embed into a narrower register")
        if labels is None:
            labels = list(self.qubit_labels) + [f"q{i}" for i in range(self.width, width)]
        return Circuit(width, list(self.gates), self.connectivity, labels)

    def compose(self, other: "Circuit") -> "Circuit":
        if other.width != self.width:
            raise ValueError("widths differ")
        return Circuit(self.width, self.gates + other.gates, self.connectivity, list(self.qubit_labels))

    def structurally_equal(self, other: "Circuit", atol: float = 0.0) -> bool:
        if self.width != other.width or len(self.gates) != len(other.gates):
            return False
        for a, b in zip(self.gates, other.gates):
            if a.kind != b.kind or a.qubits != b.qubits:
                return False
            if (a.angle is None) != (b.angle is None):
                return False
            if a.angle is not None and abs(a.angle - b.angle) > atol:
                return False
        return True


def audit_connectivity(circuit: Circuit) -> list[Gate]:
    """Gates that touch non-adjacent lines; empty for a legal linear circuit."""
    if circuit.connectivity == "all_to_all":
        return []
    bad = []
    for g in circuit.gates:
        if g.kind.arity >= 2:
            qs = sorted(g.qubits)
            if qs[-1] - qs[0] != len(qs) - 1:
                bad.append(g)
    return bad
