"""Gate IR, circuit builders, lowering, metrics and QASM."""

from .builders import build_gwf_circuit, build_prep_circuit, build_projection_circuit, gutzwiller_angle
from .givens import GivensRotation, givens_decompose
from .ir import Circuit, ConnectivityError, Gate, GateKind, audit_connectivity
from .lowering import lower
from .metrics import MetricsReport, metrics

__all__ = [
    "Circuit", "ConnectivityError", "Gate", "GateKind", "GivensRotation", "MetricsReport",
    "audit_connectivity", "build_gwf_circuit", "build_prep_circuit", "build_projection_circuit",
    "givens_decompose", "gutzwiller_angle", "lower", "metrics",
]
