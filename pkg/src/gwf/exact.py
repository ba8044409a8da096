"""Lowest eigenpair of a sector Hamiltonian.

`ground_state` is a thick-restart Lanczos with full reorthogonalisation;
`ground_state_dense` is the small-dimension oracle used to check it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh

from .hubbard import SectorState, SparseHamiltonian

SEED = 0x5EED
DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 2000
DENSE_CAP = 5000
DEGENERACY_GAP = 1e-8


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, best: "GroundStateResult"):
        super().__init__(message)
        self.best = best


@dataclass
class GroundStateResult:
    energy: float
    state: SectorState
    residual_norm: float
    iterations: int
    gap: float = np.inf
    # orthonormal columns spanning the (numerically) degenerate ground space
    ground_space: np.ndarray | None = None

    @property
    def degenerate(self) -> bool:
        return self.gap < DEGENERACY_GAP

    def overlap_with(self, v: np.ndarray) -> float:
        """Squared overlap of ``v`` with the ground space (projector form)."""
        v = np.asarray(v)
        if self.degenerate and self.ground_space is not None:
            coeffs = self.ground_space.conj().T @ v
            return float(np.real(np.vdot(coeffs, coeffs)))
        return float(abs(np.vdot(self.state.amplitudes, v)) ** 2)


def canonical_phase(v: np.ndarray) -> np.ndarray:
    """Rescale so the largest-magnitude entry is real and positive."""
    k = int(np.argmax(np.abs(v)))
    if v[k] == 0:
        return v
    return v * (abs(v[k]) / v[k])


def _wrap(h: SparseHamiltonian, vec: np.ndarray) -> SectorState:
    if h.basis is None:
        raise ValueError("Hamiltonian has no basis attached")
    return SectorState(h.basis, vec / np.linalg.norm(vec), normalized=True)


def ground_state_dense(h: SparseHamiltonian, cap: int = DENSE_CAP) -> GroundStateResult:
    if h.dim > cap:
        raise ValueError(f"dense diagonalisation capped at dimension {cap}, got {h.dim}")
    evals, evecs = eigh(h.to_dense())
    vec = canonical_phase(evecs[:, 0])
    gap = float(evals[1] - evals[0]) if h.dim > 1 else np.inf
    space = evecs[:, evals - evals[0] < DEGENERACY_GAP]
    residual = float(np.linalg.norm(h.matvec(vec) - evals[0] * vec))
    return GroundStateResult(float(evals[0]), _wrap(h, vec), residual, 0, gap, space)


def ground_state(
    h: SparseHamiltonian,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    krylov_dim: int = 48,
    n_keep: int = 12,
    seed: int = SEED,
) -> GroundStateResult:
    """Lanczos ground state; ``max_iter`` counts Hamiltonian applications."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    dim = h.dim
    if dim < 1:
        raise ValueError("empty Hamiltonian")
    if dim == 1:
        return ground_state_dense(h)

    m = min(krylov_dim, dim)
    n_keep = min(n_keep, m - 1)
    dtype = np.result_type(h.offdiag.dtype, h.diagonal.dtype)
    basis = np.empty((m + 1, dim), dtype=dtype)
    proj = np.zeros((m, m), dtype=dtype)

    v0 = np.random.default_rng(seed).standard_normal(dim).astype(dtype)
    basis[0] = v0 / np.linalg.norm(v0)
    start = 0
    n_matvec = 0
    best = None

    while True:
        beta = 0.0
        end = m
        for j in range(start, m):
            w = h.matvec(basis[j])
            n_matvec += 1
            coeffs = basis[: j + 1].conj() @ w
            w = w - coeffs @ basis[: j + 1]
            again = basis[: j + 1].conj() @ w
            w = w - again @ basis[: j + 1]
            coeffs = coeffs + again
            proj[: j + 1, j] = coeffs
            proj[j, : j + 1] = coeffs.conj()
            beta = float(np.linalg.norm(w))
            if beta <= 1e-14 * max(1.0, abs(coeffs[j])):
                end = j + 1
                beta = 0.0
                break
            basis[j + 1] = w / beta

        theta, y = np.linalg.eigh(proj[:end, :end])
        ritz = y[:, 0] @ basis[:end]
        ritz /= np.linalg.norm(ritz)
        hx = h.matvec(ritz)
        energy = float(np.real(np.vdot(ritz, hx)))
        residual = float(np.linalg.norm(hx - energy * ritz))
        gap = float(theta[1] - theta[0]) if end > 1 else np.inf
        best = GroundStateResult(energy, _wrap(h, canonical_phase(ritz)), residual, n_matvec, gap)

        if residual <= tol or (beta == 0.0 and end == dim):
            if best.degenerate:
                space = (y[:, theta - theta[0] < DEGENERACY_GAP].T @ basis[:end]).T
                best.ground_space, _ = np.linalg.qr(space)
            return best
        if beta == 0.0:
            # invariant subspace that misses part of the spectrum: reseed orthogonally
            fresh = np.random.default_rng(seed + n_matvec).standard_normal(dim).astype(dtype)
            fresh -= (basis[:end].conj() @ fresh) @ basis[:end]
            beta = float(np.linalg.norm(fresh))
            basis[end] = fresh / beta
            beta = 0.0
        if n_matvec >= max_iter:
            raise ConvergenceError(
                f"Lanczos not converged after {n_matvec} matvecs (residual {residual:.3e})", best)

        # thick restart: keep the lowest Ritz vectors plus the residual direction
        k = min(n_keep, end - 1)
        kept = y[:, :k].T @ basis[:end]
        basis[:k] = kept
        basis[k] = basis[end]
        proj[:] = 0
        proj[np.arange(k), np.arange(k)] = theta[:k]
        proj[k, :k] = beta * y[end - 1, :k].conj()
        proj[:k, k] = proj[k, :k].conj()
        start = k
