"""Exact lowering of macro gates to {X, H, T, Tdg, Ry, CNOT}."""

from __future__ import annotations

from .ir import BASE_GATES, Circuit, ConnectivityError, Gate, GateKind

K = GateKind


def _cx(c: int, t: int, stage) -> Gate:
    return Gate(K.CNOT, (c, t), stage=stage)


def _one(kind: GateKind, q: int, stage, angle: float | None = None) -> Gate:
    return Gate(kind, (q,), angle, stage)


def lower_swap(a: int, b: int, stage=None) -> list[Gate]:
    return [_cx(a, b, stage), _cx(b, a, stage), _cx(a, b, stage)]


def lower_fswap(a: int, b: int, stage=None) -> list[Gate]:
    """SWAP followed by CZ (H-CNOT-H): the -1 lands on |11>."""
    return lower_swap(a, b, stage) + [_one(K.H, a, stage), _cx(b, a, stage), _one(K.H, a, stage)]


def lower_cry(c: int, t: int, angle: float, stage=None) -> list[Gate]:
    return [
        _one(K.RY, t, stage, angle / 2),
        _cx(c, t, stage),
        _one(K.RY, t, stage, -angle / 2),
        _cx(c, t, stage),
    ]


def toffoli_all_to_all(c1: int, c2: int, t: int, stage=None) -> list[Gate]:
    """Standard 6-CNOT Toffoli with T gates."""
    return [
        _one(K.H, t, stage),
        _cx(c2, t, stage), _one(K.TDG, t, stage),
        _cx(c1, t, stage), _one(K.T, t, stage),
        _cx(c2, t, stage), _one(K.TDG, t, stage),
        _cx(c1, t, stage), _one(K.T, c2, stage), _one(K.T, t, stage), _one(K.H, t, stage),
        _cx(c1, c2, stage), _one(K.T, c1, stage), _one(K.TDG, c2, stage),
        _cx(c1, c2, stage),
    ]


def toffoli_linear(c1: int, c2: int, t: int, stage=None) -> list[Gate]:
    """12-CNOT Toffoli on three consecutive lines with the target at one end.

    The target is swapped onto the middle line for the four target CNOTs and
    swapped back before the control-control part.
    """
    lines = sorted((c1, c2, t))
    if lines[2] - lines[0] != 2:
        raise ConnectivityError(f"linear Toffoli needs consecutive lines, got {(c1, c2, t)}")
    mid = lines[1]
    if t == mid:
        raise ConnectivityError("linear Toffoli lowering expects the target at an end of the block")
    near, far = (c1, c2) if c1 == mid else (c2, c1)
    # after the swap: target on `mid`, near control on `t`
    tt, nn = mid, t
    return (
        [_one(K.H, t, stage)]
        + lower_swap(mid, t, stage)
        + [
            _cx(nn, tt, stage), _one(K.TDG, tt, stage),
            _cx(far, tt, stage), _one(K.T, tt, stage),
            _cx(nn, tt, stage), _one(K.TDG, tt, stage),
            _cx(far, tt, stage), _one(K.T, nn, stage), _one(K.T, tt, stage), _one(K.H, tt, stage),
        ]
        + lower_swap(mid, t, stage)
        + [
            _cx(far, near, stage), _one(K.T, far, stage), _one(K.TDG, near, stage),
            _cx(far, near, stage),
        ]
    )


def toffoli(c1: int, c2: int, t: int, connectivity: str, stage=None) -> list[Gate]:
    if connectivity == "linear":
        return toffoli_linear(c1, c2, t, stage)
    return toffoli_all_to_all(c1, c2, t, stage)


def lower_ccry(c1: int, c2: int, t: int, angle: float, connectivity: str, stage=None) -> list[Gate]:
    """Ry(a/2), Toffoli, Ry(-a/2), Toffoli: rotates the target by ``a`` iff both controls are 1."""
    return (
        [_one(K.RY, t, stage, angle / 2)]
        + toffoli(c1, c2, t, connectivity, stage)
        + [_one(K.RY, t, stage, -angle / 2)]
        + toffoli(c1, c2, t, connectivity, stage)
    )


def lower_gate(gate: Gate, connectivity: str = "all_to_all", keep_swap: bool = False) -> list[Gate]:
    k, q, s = gate.kind, gate.qubits, gate.stage
    if k in BASE_GATES or k == K.MEASURE or (keep_swap and k == K.SWAP):
        return [gate]
    if k == K.SWAP:
        return lower_swap(*q, stage=s)
    if k == K.FSWAP:
        return lower_fswap(*q, stage=s)
    if k == K.CRY:
        return lower_cry(q[0], q[1], gate.angle, s)
    if k == K.CCRY:
        return lower_ccry(q[0], q[1], q[2], gate.angle, connectivity, s)
    raise ValueError(f"no lowering for {k}")


def lower(circuit: Circuit, keep_swap: bool = False) -> Circuit:
    out = Circuit(circuit.width, [], circuit.connectivity, list(circuit.qubit_labels))
    for g in circuit.gates:
        out.extend(lower_gate(g, circuit.connectivity, keep_swap))
    return out


def is_lowered(circuit: Circuit, allow_swap: bool = False) -> bool:
    ok = set(BASE_GATES) | {K.MEASURE}
    if allow_swap:
        ok.add(K.SWAP)
    return all(g.kind in ok for g in circuit.gates)
