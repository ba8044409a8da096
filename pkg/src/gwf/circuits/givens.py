"""Adjacent-mode Givens network that prepares a Slater determinant.

A rotation ``(p, p + 1, theta)`` acts on modes ``p, p + 1`` as

    a_p^dag -> cos(theta) a_p^dag + sin(theta) a_{p+1}^dag
    a_{p+1}^dag -> -sin(theta) a_p^dag + cos(theta) a_{p+1}^dag

i.e. on the qubit pair it rotates ``span{|1_p 0_q>, |0_p 1_q>}`` by theta and
leaves ``|00>`` and ``|11>`` alone.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from ..reference import OrbitalBasis


class GivensRotation(NamedTuple):
    p: int
    q: int
    theta: float


def _column_matrix(orbitals, n_filled: int) -> np.ndarray:
    q = orbitals.orbitals if isinstance(orbitals, OrbitalBasis) else np.asarray(orbitals)
    return np.array(q[:, :n_filled], dtype=float)


def givens_decompose(orbitals, n_filled: int, prune: bool = False) -> list[GivensRotation]:
    """Rotations, in circuit order, mapping ``|1^n 0^(N-n)>`` to the Slater state.

    Always ``n (N - n)`` rotations; ``prune=True`` drops exact identities.
    """
    phi = _column_matrix(orbitals, n_filled)
    n_sites = phi.shape[0]
    if not 0 <= n_filled <= n_sites:
        raise ValueError(f"n_filled={n_filled} outside [0, {n_sites}]")
    w = phi.T.copy()  # rows = occupied orbitals
    gap = n_sites - n_filled

    # free row rotations: row i ends up zero beyond column gap + i
    for col in range(n_sites - 1, gap, -1):
        pivot = col - gap
        for row in range(pivot):
            a, b = w[pivot, col], w[row, col]
            r = np.hypot(a, b)
            if r == 0:
                continue
            c, s = a / r, b / r
            w[pivot], w[row] = c * w[pivot] + s * w[row], -s * w[pivot] + c * w[row]

    eliminated = []
    for row in range(n_filled):
        for col in range(gap + row, row, -1):
            a, b = w[row, col - 1], w[row, col]
            r = np.hypot(a, b)
            c, s = (1.0, 0.0) if r == 0 else (a / r, b / r)
            left, right = w[:, col - 1].copy(), w[:, col].copy()
            w[:, col - 1] = c * left + s * right
            w[:, col] = -s * left + c * right
            eliminated.append(GivensRotation(col - 1, col, float(np.arctan2(s, c))))

    residual = np.abs(np.abs(w[:, :n_filled]) - np.eye(n_filled)).max(initial=0.0)
    assert residual < 1e-9 and np.abs(w[:, n_filled:]).max(initial=0.0) < 1e-9, "rank-deficient orbitals"
    rotations = eliminated[::-1]
    if prune:
        rotations = [r for r in rotations if abs(np.sin(r.theta)) > 1e-15 or np.cos(r.theta) < 0]
    return rotations


def apply_rotations(rotations, n_sites: int, n_filled: int) -> np.ndarray:
    """Orbital matrix produced by the rotations from the reference columns (for checks)."""
    cols = np.eye(n_sites)[:, :n_filled]
    for p, q, theta in rotations:
        c, s = np.cos(theta), np.sin(theta)
        rp, rq = cols[p].copy(), cols[q].copy()
        cols[p] = c * rp - s * rq
        cols[q] = s * rp + c * rq
    return cols
