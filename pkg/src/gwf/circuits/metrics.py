"""CNOT count and CNOT-only depth, overall and per stage."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

from .ir import STAGES, Circuit, GateKind
from .lowering import lower


@dataclass
class StageMetrics:
    cnot_count: int = 0
    cnot_depth: int = 0


@dataclass
class MetricsReport:
    cnot_count: int
    cnot_depth: int
    width: int
    stages: dict[str, StageMetrics] = field(default_factory=dict)

    def __post_init__(self):
        assert self.cnot_count == sum(s.cnot_count for s in self.stages.values())
        assert self.cnot_depth <= self.cnot_count

    def stage_count(self, *names: str) -> int:
        return sum(self.stages[n].cnot_count for n in names if n in self.stages)

    def stage_depth(self, *names: str) -> int:
        return sum(self.stages[n].cnot_depth for n in names if n in self.stages)

    def to_dict(self) -> dict:
        return {
            "cnot_count": self.cnot_count,
            "cnot_depth": self.cnot_depth,
            "width": self.width,
            "stages": {k: asdict(v) for k, v in self.stages.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _asap_depth(gates, width: int) -> int:
    front = [0] * width
    depth = 0
    for g in gates:
        if g.kind != GateKind.CNOT:
            continue
        a, b = g.qubits
        layer = max(front[a], front[b]) + 1
        front[a] = front[b] = layer
        depth = max(depth, layer)
    return depth


def metrics(circuit: Circuit) -> MetricsReport:
    """Lower, then schedule CNOTs greedily per stage.

    Stages are treated as barriers: each stage is scheduled on its own and the
    stage depths add up.  This matches how the closed-form depths are counted
    (no overlap between, e.g., the tail of one network and the head of the next).
    """
    lowered = lower(circuit)
    order: list[str] = []
    groups: dict[str, list] = {}
    for g in lowered.gates:
        key = g.stage or "other"
        if key not in groups:
            order.append(key)
            groups[key] = []
        groups[key].append(g)
    stages = {name: StageMetrics() for name in STAGES}
    for name in order:
        gates = groups[name]
        stages.setdefault(name, StageMetrics())
        stages[name].cnot_count += sum(1 for g in gates if g.kind == GateKind.CNOT)
        stages[name].cnot_depth += _asap_depth(gates, circuit.width)
    stages = {k: v for k, v in stages.items() if k in STAGES or v.cnot_count}
    return MetricsReport(
        cnot_count=sum(s.cnot_count for s in stages.values()),
        cnot_depth=sum(s.cnot_depth for s in stages.values()),
        width=circuit.width,
        stages=stages,
    )


def asap_cnot_depth(circuit: Circuit) -> int:
    """Depth with no stage barriers, for comparison."""
    return _asap_depth(lower(circuit).gates, circuit.width)


def prep_cnot_count(n_sites: int, n_filled: int | None = None) -> int:
    ns = n_sites // 2 if n_filled is None else n_filled
    return 8 * ns * (n_sites - ns) + 2 * n_sites * (n_sites - 1)


def prep_cnot_depth(n_sites: int) -> int:
    return 8 * n_sites - 8


def projection_cnot_count(n_sites: int) -> int:
    return 6 * n_sites**2 + 18 * n_sites


def projection_cnot_depth(n_sites: int) -> int:
    return 12 * n_sites + 12
