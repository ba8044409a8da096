"""OpenQASM 2.0 export and a parser for the subset we emit."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .ir import Circuit, Gate, GateKind

K = GateKind
HEADER = 'OPENQASM 2.0;\ninclude "qelib1.inc";\n'
_EMITTABLE = {K.X, K.H, K.T, K.TDG, K.RY, K.CNOT, K.SWAP, K.MEASURE}


class QasmError(ValueError):
    pass


def emit_qasm(circuit: Circuit) -> str:
    """Text for a circuit already lowered to {x, h, t, tdg, ry, cx, swap, measure}.

    Measurements write into a classical register ``c`` indexed in order of the
    measured qubits; the register is declared only if something is measured.
    """
    bad = sorted({g.kind.name for g in circuit.gates if g.kind not in _EMITTABLE})
    if bad:
        raise QasmError(f"lower the circuit first; unlowered gates: {', '.join(bad)}")
    lines = [HEADER.rstrip("\n"), f"qreg q[{circuit.width}];"]
    measured = circuit.measured_qubits()
    if measured:
        lines.append(f"creg c[{len(measured)}];")
    bit = 0
    for g in circuit.gates:
        args = ",".join(f"q[{q}]" for q in g.qubits)
        if g.kind == K.MEASURE:
            lines.append(f"measure {args} -> c[{bit}];")
            bit += 1
        elif g.kind == K.RY:
            lines.append(f"ry({g.angle!r}) {args};")
        else:
            lines.append(f"{g.kind.value} {args};")
    return "\n".join(lines) + "\n"


@dataclass
class ParseResult:
    circuit: Circuit
    diagnostics: list[str] = field(default_factory=list)


_QREG = re.compile(r"qreg\s+(\w+)\[(\d+)\]$")
_CREG = re.compile(r"creg\s+(\w+)\[(\d+)\]$")
_MEAS = re.compile(r"measure\s+(\w+)\[(\d+)\]\s*->\s*(\w+)\[(\d+)\]$")
_GATE = re.compile(r"(\w+)(?:\(([^)]*)\))?\s+(.+)$")
_ARG = re.compile(r"(\w+)\[(\d+)\]$")


def parse_qasm(text: str, connectivity: str = "linear") -> ParseResult:
    """Parse emitted QASM back into a Circuit; problems go to ``diagnostics``."""
    diags: list[str] = []
    body = re.sub(r"//[^\n]*", "", text)
    stmts = [s.strip() for s in body.split(";")]
    if not stmts or stmts[0] != "OPENQASM 2.0":
        diags.append("missing 'OPENQASM 2.0' header")
    qname, width, gates = None, 0, []
    cname, csize = None, 0
    for lineno, s in enumerate(stmts[1:], 2):
        if not s or s == 'include "qelib1.inc"':
            continue
        if m := _QREG.match(s):
            if qname is not None:
                diags.append(f"stmt {lineno}: only one qreg is supported")
            qname, width = m.group(1), int(m.group(2))
            continue
        if m := _CREG.match(s):
            cname, csize = m.group(1), int(m.group(2))
            continue
        if m := _MEAS.match(s):
            if m.group(1) != qname or m.group(3) != cname or int(m.group(4)) >= csize:
                diags.append(f"stmt {lineno}: bad measure target {s!r}")
                continue
            gates.append(Gate(K.MEASURE, (int(m.group(2)),)))
            continue
        m = _GATE.match(s)
        if not m:
            diags.append(f"stmt {lineno}: cannot parse {s!r}")
            continue
        name, param, argtext = m.groups()
        try:
            kind = K(name)
        except ValueError:
            diags.append(f"stmt {lineno}: unknown gate {name!r}")
            continue
        if kind not in _EMITTABLE or kind == K.MEASURE:
            diags.append(f"stmt {lineno}: gate {name!r} not in the dialect")
            continue
        qubits = []
        for a in argtext.split(","):
            am = _ARG.match(a.strip())
            if not am or am.group(1) != qname:
                diags.append(f"stmt {lineno}: bad operand {a.strip()!r}")
                break
            qubits.append(int(am.group(2)))
        else:
            try:
                angle = float(param) if param is not None else None
                gates.append(Gate(kind, tuple(qubits), angle))
            except ValueError as exc:
                diags.append(f"stmt {lineno}: {exc}")
    if qname is None:
        diags.append("no qreg declared")
    circuit = Circuit(width, [], connectivity)
    for g in gates:
        try:
            circuit.append(g)
        except ValueError as exc:
            diags.append(str(exc))
    return ParseResult(circuit, diags)


def write_qasm(circuit: Circuit, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(emit_qasm(circuit))
