"""Self-consistent Hartree-Fock for the Hubbard chain (site-density decoupling).

The on-site term is decoupled as ``U n_up n_dn -> U <n_dn> n_up + U <n_up> n_dn
- U <n_up><n_dn>``; no bond (Fock) terms appear.  Densities may differ
between spins (collinear unrestricted HF) unless ``restricted=True``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .exact import canonical_phase
from .hubbard import FockBasis, ModelSpec, SectorState
from .reference import hopping_matrix, fix_column_phases, product_amplitudes

MIXING = 0.5
SCF_TOL = 1e-10
MAX_SWEEPS = 10_000
N_RESTARTS = 50
ENERGY_TIE = 1e-9


class HartreeFockError(RuntimeError):
    pass


@dataclass
class HfSolution:
    densities: np.ndarray  # shape (2, N): [up, down]
    orbitals: np.ndarray  # shape (2, N, N), columns ascending in energy
    energies: np.ndarray  # shape (2, N)
    energy: float
    converged: bool
    trial_index: int = 0
    sweeps: int = 0
    n_up: int = 0
    n_down: int = 0

    @property
    def magnetization(self) -> np.ndarray:
        return self.densities[0] - self.densities[1]

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["site", "n_up", "n_down"])
            for i, (a, b) in enumerate(self.densities.T):
                writer.writerow([i, repr(float(a)), repr(float(b))])


def _diagonalize(hop: np.ndarray, hubbard_u: float, dens: np.ndarray):
    """Eigen-decompose the mean-field Hamiltonians for a stack of trials.

    ``dens`` has shape (..., 2, N); spin sigma feels ``U * <n_{i,-sigma}>``.
    """
    mats = np.broadcast_to(hop, dens.shape[:-1] + hop.shape).copy()
    idx = np.arange(len(hop))
    mats[..., idx, idx] += hubbard_u * dens[..., ::-1, :]
    return np.linalg.eigh(mats)


def _occupations(evecs: np.ndarray, n_occ: tuple[int, int]) -> np.ndarray:
    up = np.sum(evecs[..., 0, :, : n_occ[0]] ** 2, axis=-1)
    down = np.sum(evecs[..., 1, :, : n_occ[1]] ** 2, axis=-1)
    return np.stack([up, down], axis=-2)


def _check_init(spec: ModelSpec, dens: np.ndarray) -> None:
    if np.any(dens < -1e-12) or np.any(dens > 1 + 1e-12):
        raise ValueError("initial densities must lie in [0, 1]")
    if not np.allclose(dens.sum(axis=-1), (spec.n_up, spec.n_down), atol=1e-9):
        raise ValueError(f"initial densities sum to {dens.sum(axis=-1)}, expected {(spec.n_up, spec.n_down)}")


def _scf(spec, inits, mixing, tol, max_sweeps, restricted, first_index=0) -> list[HfSolution]:
    """Iterate a stack of independent trials; each stops at its own fixed point."""
    dens = np.array(inits, dtype=float).reshape(-1, 2, spec.n_sites)
    _check_init(spec, dens)
    if restricted and spec.n_up != spec.n_down:
        raise ValueError("restricted HF needs n_up == n_down")
    if restricted:
        dens[:] = dens.mean(axis=1, keepdims=True)
    n_occ = (spec.n_up, spec.n_down)
    hop = hopping_matrix(spec)
    active = np.ones(len(dens), dtype=bool)
    sweeps = np.full(len(dens), max_sweeps)
    for sweep in range(1, max_sweeps + 1):
        if not active.any():
            break
        cur = dens[active]
        _, evecs = _diagonalize(hop, spec.hubbard_u, cur)
        new = _occupations(evecs, n_occ)
        if restricted:
            new[:] = new.mean(axis=1, keepdims=True)
        done = np.max(np.abs(new - cur), axis=(1, 2)) < tol
        cur = np.where(done[:, None, None], new, (1 - mixing) * cur + mixing * new)
        dens[active] = cur
        idx = np.nonzero(active)[0]
        sweeps[idx[done]] = sweep
        active[idx[done]] = False

    evals, evecs = _diagonalize(hop, spec.hubbard_u, dens)
    out = []
    for k in range(len(dens)):
        band = evals[k, 0, : n_occ[0]].sum() + evals[k, 1, : n_occ[1]].sum()
        energy = float(band - spec.hubbard_u * np.dot(dens[k, 0], dens[k, 1]))
        orbitals = np.array([fix_column_phases(q) for q in evecs[k]])
        out.append(HfSolution(dens[k], orbitals, evals[k], energy, not active[k],
                              first_index + k, int(sweeps[k]), spec.n_up, spec.n_down))
    return out


def hf_single_shot(
    spec: ModelSpec,
    init_densities,
    mixing: float = MIXING,
    tol: float = SCF_TOL,
    max_sweeps: int = MAX_SWEEPS,
    restricted: bool = False,
    trial_index: int = 0,
) -> HfSolution:
    """Self-consistent loop from one density guess (shape (2, N): up, down).

    Linear mixing; stops when the max-norm density change drops below
    ``tol``.  An unconverged run is returned with ``converged=False``.
    """
    return _scf(spec, [init_densities], mixing, tol, max_sweeps, restricted, trial_index)[0]


def _random_densities(rng: np.random.Generator, spec: ModelSpec) -> np.ndarray:
    """Occupations of a random orthonormal orbital set (always valid)."""
    out = []
    for n_occ in (spec.n_up, spec.n_down):
        q, _ = np.linalg.qr(rng.standard_normal((spec.n_sites, spec.n_sites)))
        out.append(np.sum(q[:, :n_occ] ** 2, axis=1))
    return np.array(out)


def initial_guesses(spec: ModelSpec, n_restarts: int, seed: int = 0) -> list[np.ndarray]:
    """Uniform, Neel-like, then ``n_restarts`` random density patterns."""
    n = spec.n_sites
    uniform = np.array([np.full(n, spec.n_up / n), np.full(n, spec.n_down / n)])
    neel = np.zeros((2, n))
    neel[0, 0::2][: spec.n_up] = 1.0
    neel[1, 1::2][: spec.n_down] = 1.0
    guesses = [uniform]
    if np.allclose(neel.sum(axis=1), (spec.n_up, spec.n_down)):
        guesses.append(neel)
    rng = np.random.default_rng(seed)
    guesses += [_random_densities(rng, spec) for _ in range(n_restarts)]
    return guesses


def hf_ground_state(
    spec: ModelSpec,
    n_restarts: int = N_RESTARTS,
    seed: int = 0,
    restricted: bool = False,
    mixing: float = MIXING,
    tol: float = SCF_TOL,
    max_sweeps: int = MAX_SWEEPS,
) -> HfSolution:
    """Best converged solution over uniform, Neel and random starting densities."""
    if n_restarts < 1:
        raise ValueError("n_restarts must be >= 1")
    inits = initial_guesses(spec, n_restarts, seed)
    solutions = _scf(spec, inits, mixing, tol, max_sweeps, restricted)
    good = [s for s in solutions if s.converged]
    if not good:
        raise HartreeFockError(f"none of {len(solutions)} HF trials converged for {spec}")
    e_min = min(s.energy for s in good)
    ties = [s for s in good if s.energy - e_min < ENERGY_TIE]
    # degenerate minima (e.g. the two Neel patterns): lexicographically smallest densities
    return min(ties, key=lambda s: (tuple(np.round(s.densities.ravel(), 8)), s.trial_index))


def hf_state_vector(sol: HfSolution, basis: FockBasis) -> SectorState:
    if not sol.converged:
        raise HartreeFockError("refusing to expand an unconverged HF solution")
    amps = product_amplitudes(sol.orbitals[0][:, : basis.n_up], sol.orbitals[1][:, : basis.n_down], basis)
    return SectorState(basis, canonical_phase(amps / np.linalg.norm(amps)), normalized=True)
