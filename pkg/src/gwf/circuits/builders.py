"""Circuits for the noninteracting state and the ancilla-based Gutzwiller projection.

Register layout.  Lines ``0..2N-1`` hold the 2N spin-orbital qubits, first
spin-blocked (up sites then down sites) and, after the reorder stage,
site-interleaved (``2i`` = site i up, ``2i+1`` = site i down).  Ancilla
``A_i`` starts on line ``2N + i``.
"""

from __future__ import annotations

import math

from ..hubbard import ModelSpec
from ..reference import OrbitalBasis
from .givens import givens_decompose
from .ir import Circuit, GateKind

K = GateKind


def up_label(i: int) -> str:
    return f"u{i}"


def down_label(i: int) -> str:
    return f"d{i}"


def ancilla_label(i: int) -> str:
    return f"a{i}"


def mode_of_label(label: str) -> tuple[int, int] | None:
    """``(site, spin)`` with spin 0 = up, 1 = down; None for ancillas."""
    if label[0] == "u":
        return int(label[1:]), 0
    if label[0] == "d":
        return int(label[1:]), 1
    return None


def blocked_labels(n_sites: int) -> list[str]:
    return [up_label(i) for i in range(n_sites)] + [down_label(i) for i in range(n_sites)]


def interleaved_labels(n_sites: int) -> list[str]:
    out = []
    for i in range(n_sites):
        out += [up_label(i), down_label(i)]
    return out


def gutzwiller_angle(g: float) -> float:
    """Ry angle with cos(a/2) = 1 - g, i.e. 2 arctan(sqrt(2g - g^2) / (1 - g)) for g < 1."""
    if not 0.0 <= g <= 1.0:
        raise ValueError(f"g must lie in [0, 1], got {g}")
    return 2.0 * math.acos(1.0 - g)


def add_givens(circuit: Circuit, p: int, q: int, theta: float, stage: str) -> None:
    """Givens rotation as CNOT(q->p), CRy(2 theta; p->q), CNOT(q->p)."""
    circuit.add(K.CNOT, q, p, stage=stage)
    circuit.add(K.CRY, p, q, angle=2.0 * theta, stage=stage)
    circuit.add(K.CNOT, q, p, stage=stage)


def interleave_swaps(n_sites: int) -> list[list[tuple[int, int]]]:
    """Layers of adjacent FSWAPs turning spin-blocked order into site order."""
    layers = []
    for k in range(1, n_sites):
        start = n_sites - k
        layers.append([(start + 2 * m, start + 2 * m + 1) for m in range(k)])
    return layers


def build_prep_circuit(
    spec: ModelSpec,
    orbitals: OrbitalBasis,
    connectivity: str = "linear",
    reorder: bool = True,
) -> Circuit:
    n = spec.n_sites
    circuit = Circuit(2 * n, [], connectivity, blocked_labels(n))
    for offset, n_occ in ((0, spec.n_up), (n, spec.n_down)):
        for j in range(n_occ):
            circuit.add(K.X, offset + j, stage="prep")
    up = givens_decompose(orbitals, spec.n_up)
    down = givens_decompose(orbitals, spec.n_down)
    # the two spin networks act on disjoint lines; emit them interleaved
    for k in range(max(len(up), len(down))):
        if k < len(up):
            add_givens(circuit, up[k].p, up[k].q, up[k].theta, "prep")
        if k < len(down):
            add_givens(circuit, n + down[k].p, n + down[k].q, down[k].theta, "prep")
    if reorder:
        for layer in interleave_swaps(n):
            for a, b in layer:
                circuit.add(K.FSWAP, a, b, stage="reorder")
    return circuit


def ancilla_route_swaps(n_sites: int) -> list[list[tuple[int, int]]]:
    """SWAP layers parking ancilla ``A_i`` directly below the site-i pair.

    ``A_i`` travels from line ``2N + i`` to ``3i + 2``; it starts moving in
    layer ``i`` and advances one line per layer, so the network has
    ``N(N-1)`` SWAPs in ``2(N-1)`` layers.
    """
    pos = [2 * n_sites + i for i in range(n_sites)]
    target = [3 * i + 2 for i in range(n_sites)]
    layers = []
    layer_idx = 0
    while any(p != t for p, t in zip(pos, target)):
        layer = []
        for i in range(n_sites):
            if i <= layer_idx and pos[i] > target[i]:
                layer.append((pos[i] - 1, pos[i]))
                pos[i] -= 1
        layers.append(layer)
        layer_idx += 1
    return layers


def build_projection_circuit(
    spec: ModelSpec,
    g: float,
    connectivity: str = "linear",
    measure: bool = True,
) -> Circuit:
    """Ancilla register, controlled-controlled Ry(alpha(g)) per site, terminal measurements."""
    n = spec.n_sites
    alpha = gutzwiller_angle(g)
    labels = interleaved_labels(n) + [ancilla_label(i) for i in range(n)]
    circuit = Circuit(3 * n, [], connectivity, labels)
    if connectivity == "all_to_all":
        for i in range(n):
            circuit.add(K.CCRY, 2 * i, 2 * i + 1, 2 * n + i, angle=alpha, stage="ccU")
    else:
        layers = ancilla_route_swaps(n)
        for layer in layers:
            for a, b in layer:
                circuit.add(K.SWAP, a, b, stage="ancilla_route")
        for i in range(n):
            circuit.add(K.CCRY, 3 * i, 3 * i + 1, 3 * i + 2, angle=alpha, stage="ccU")
        for layer in reversed(layers):
            for a, b in layer:
                circuit.add(K.SWAP, a, b, stage="ancilla_unroute")
    if measure:
        for i in range(n):
            circuit.add(K.MEASURE, 2 * n + i, stage="measure")
    return circuit


def build_gwf_circuit(
    spec: ModelSpec,
    orbitals: OrbitalBasis,
    g: float,
    connectivity: str = "linear",
    measure: bool = True,
) -> Circuit:
    """Full routine: prepare the noninteracting state, then project (width 3N)."""
    prep = build_prep_circuit(spec, orbitals, connectivity)
    proj = build_projection_circuit(spec, g, connectivity, measure)
    labels = blocked_labels(spec.n_sites) + proj.qubit_labels[2 * spec.n_sites:]
    return prep.embedded(proj.width, labels).compose(proj)
