"""Dense statevector simulation with ancilla post-selection.

Little-endian: qubit q is bit q of the amplitude index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuits.builders import mode_of_label
from .circuits.ir import Circuit, Gate, GateKind
from .circuits.lowering import lower
from .hubbard import FockBasis, SectorState

K = GateKind
DEFAULT_MAX_QUBITS = 20
LARGE_MAX_QUBITS = 24
LEAKAGE_TOL = 1e-10
ZERO_PROB = 1e-300


class MemoryCapError(ValueError):
    pass


class ZeroProbabilityError(ValueError):
    pass


class SectorLeakageError(ValueError):
    pass


_SQ2 = 1 / math.sqrt(2)
_FIXED = {
    K.X: np.array([[0, 1], [1, 0]], dtype=complex),
    K.H: np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex),
    K.T: np.diag([1, np.exp(1j * math.pi / 4)]),
    K.TDG: np.diag([1, np.exp(-1j * math.pi / 4)]),
}


def ry(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _check_width(n_qubits: int, allow_large: bool) -> None:
    cap = LARGE_MAX_QUBITS if allow_large else DEFAULT_MAX_QUBITS
    if n_qubits > cap:
        hint = "" if allow_large else " (pass allow_large=True for up to 24)"
        raise MemoryCapError(f"{n_qubits} qubits exceeds the cap of {cap}{hint}")


@dataclass
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (1 << self.n_qubits,):
            raise ValueError(f"expected {1 << self.n_qubits} amplitudes, got {self.amplitudes.shape}")

    @classmethod
    def zero(cls, n_qubits: int, allow_large: bool = False) -> "StateVector":
        _check_width(n_qubits, allow_large)
        amps = np.zeros(1 << n_qubits, dtype=complex)
        amps[0] = 1.0
        return cls(n_qubits, amps)

    @classmethod
    def basis_state(cls, n_qubits: int, index: int) -> "StateVector":
        amps = np.zeros(1 << n_qubits, dtype=complex)
        amps[index] = 1.0
        return cls(n_qubits, amps)

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amplitudes.copy())

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def fidelity(self, other: "StateVector") -> float:
        return float(abs(np.vdot(self.amplitudes, other.amplitudes)) ** 2)

    def dump(self, path) -> None:
        """Raw little-endian complex doubles, index order."""
        self.amplitudes.astype("<c16").tofile(path)

    @classmethod
    def load(cls, path) -> "StateVector":
        amps = np.fromfile(path, dtype="<c16")
        n = int(amps.size).bit_length() - 1
        return cls(n, amps)

    # kernels

    def _tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((2,) * self.n_qubits)

    def _axis(self, q: int) -> int:
        return self.n_qubits - 1 - q

    def apply_1q(self, q: int, m: np.ndarray, controls: tuple[int, ...] = ()) -> None:
        t = self._tensor()
        index = [slice(None)] * self.n_qubits
        for c in controls:
            index[self._axis(c)] = 1
        i0, i1 = list(index), list(index)
        i0[self._axis(q)] = 0
        i1[self._axis(q)] = 1
        i0, i1 = tuple(i0), tuple(i1)
        a0 = t[i0].copy()
        a1 = t[i1].copy()
        t[i0] = m[0, 0] * a0 + m[0, 1] * a1
        t[i1] = m[1, 0] * a0 + m[1, 1] * a1

    def swap(self, a: int, b: int, fermionic: bool = False) -> None:
        t = self._tensor()
        index = [slice(None)] * self.n_qubits
        i01, i10 = list(index), list(index)
        i01[self._axis(a)], i01[self._axis(b)] = 0, 1
        i10[self._axis(a)], i10[self._axis(b)] = 1, 0
        i01, i10 = tuple(i01), tuple(i10)
        x = t[i01].copy()
        t[i01] = t[i10]
        t[i10] = x
        if fermionic:
            i11 = list(index)
            i11[self._axis(a)] = i11[self._axis(b)] = 1
            t[tuple(i11)] *= -1

    def apply(self, gate: Gate) -> None:
        k, q = gate.kind, gate.qubits
        if k in _FIXED:
            self.apply_1q(q[0], _FIXED[k])
        elif k == K.RY:
            self.apply_1q(q[0], ry(gate.angle))
        elif k == K.CNOT:
            self.apply_1q(q[1], _FIXED[K.X], controls=(q[0],))
        elif k == K.CRY:
            self.apply_1q(q[1], ry(gate.angle), controls=(q[0],))
        elif k == K.CCRY:
            self.apply_1q(q[2], ry(gate.angle), controls=q[:2])
        elif k == K.SWAP:
            self.swap(*q)
        elif k == K.FSWAP:
            self.swap(*q, fermionic=True)
        elif k == K.MEASURE:
            pass  # measurement is handled by post_select
        else:  # pragma: no cover
            raise ValueError(f"unknown gate {k}")


def run(
    circuit: Circuit,
    initial: StateVector | None = None,
    allow_large: bool = False,
    lowered: bool = True,
) -> StateVector:
    """Apply the circuit's gates in order; MEASURE is a no-op here.

    ``lowered=False`` applies macro gates by their defining matrices, which is
    how the lowering itself gets checked.
    """
    _check_width(circuit.width, allow_large)
    if initial is None:
        state = StateVector.zero(circuit.width, allow_large)
    else:
        if initial.n_qubits != circuit.width:
            raise ValueError(f"state has {initial.n_qubits} qubits, circuit has width {circuit.width}")
        state = initial.copy()
    gates = lower(circuit).gates if lowered else circuit.gates
    for g in gates:
        state.apply(g)
    return state


@dataclass
class PostSelection:
    qubits: tuple[int, ...]
    outcomes: tuple[int, ...]
    probability: float
    collapsed: StateVector
    kept: tuple[int, ...]  # original indices of the surviving qubits, in order


def post_select(v: StateVector, qubits, outcomes=None) -> PostSelection:
    """Project the listed qubits onto the given outcomes (default all zero) and drop them."""
    qubits = tuple(int(q) for q in qubits)
    outcomes = tuple(0 for _ in qubits) if outcomes is None else tuple(int(o) for o in outcomes)
    if len(outcomes) != len(qubits) or len(set(qubits)) != len(qubits):
        raise ValueError("qubits must be distinct and match outcomes one-to-one")
    if any(not 0 <= q < v.n_qubits for q in qubits) or any(o not in (0, 1) for o in outcomes):
        raise ValueError("qubit index or outcome out of range")
    index = [slice(None)] * v.n_qubits
    for q, o in zip(qubits, outcomes):
        index[v.n_qubits - 1 - q] = o
    sub = v._tensor()[tuple(index)].reshape(-1)
    prob = float(np.vdot(sub, sub).real)
    if prob < ZERO_PROB:
        raise ZeroProbabilityError(f"outcome {outcomes} on {qubits} has probability {prob:.3g}")
    kept = tuple(q for q in range(v.n_qubits) if q not in qubits)
    # removing axes keeps the relative order, so the surviving qubits stay little-endian
    return PostSelection(qubits, outcomes, prob, StateVector(len(kept), sub / math.sqrt(prob)), kept)


def _line_of_orbital(basis: FockBasis, labels) -> np.ndarray:
    n = basis.n_sites
    line = np.full(2 * n, -1, dtype=np.int64)
    for pos, lab in enumerate(labels):
        mode = mode_of_label(lab)
        if mode is None:
            raise ValueError(f"line {pos} carries non-mode label {lab!r}")
        site, spin = mode
        line[site + spin * n] = pos
    if (line < 0).any() or len(labels) != 2 * n:
        raise ValueError("label map must cover every spin orbital exactly once")
    return line


def _sector_layout(basis: FockBasis, labels) -> tuple[np.ndarray, np.ndarray]:
    """Register index and JW reordering sign for every sector word."""
    line = _line_of_orbital(basis, labels)
    words = basis.states
    n_orb = len(line)
    bits = (words[:, None] >> np.arange(n_orb, dtype=np.int64)) & 1
    index = (bits << line).sum(axis=1)
    inversions = np.zeros(len(words), dtype=np.int64)
    for j in range(n_orb):
        for k in range(j + 1, n_orb):
            if line[j] > line[k]:
                inversions += bits[:, j] & bits[:, k]
    sign = np.where(inversions % 2, -1.0, 1.0)
    return index, sign


def sector_project(v: StateVector, basis: FockBasis, labels, tol: float = LEAKAGE_TOL) -> SectorState:
    """Read sector amplitudes off a register whose line ``p`` holds mode ``labels[p]``.

    The sign converts from line-ordered JW strings to the spin-blocked order of
    the sector basis.
    """
    index, sign = _sector_layout(basis, labels)
    amps = v.amplitudes[index] * sign
    leak = 1.0 - float(np.vdot(amps, amps).real) / max(v.norm ** 2, ZERO_PROB)
    if leak > tol:
        raise SectorLeakageError(f"{leak:.3e} of the weight lies outside the sector")
    return SectorState(basis, amps)


def sector_embed(state: SectorState, labels) -> StateVector:
    """Inverse of ``sector_project``: place sector amplitudes on a register."""
    index, sign = _sector_layout(state.basis, labels)
    amps = np.zeros(1 << len(labels), dtype=complex)
    amps[index] = state.amplitudes * sign
    return StateVector(len(labels), amps)
