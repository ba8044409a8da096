"""Gutzwiller projection, optimal g, post-selection probability and repetition counts."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .hubbard import FockBasis, ModelSpec, SectorState, SparseHamiltonian
from .exact import DENSE_CAP

GRID_POINTS = 101
G_TOL = 1e-8
_INVPHI = (math.sqrt(5) - 1) / 2


def _check_g(g: float) -> None:
    if not 0.0 <= g <= 1.0:
        raise ValueError(f"g must lie in [0, 1], got {g}")


def apply_projector(g: float, v: SectorState) -> SectorState:
    """Multiply each amplitude by ``(1 - g) ** d``; the result is not renormalised."""
    _check_g(g)
    scale = (1.0 - g) ** v.basis.double_occupancies()
    return SectorState(v.basis, v.amplitudes * scale)


def multiplicities(basis: FockBasis) -> np.ndarray:
    """Number of sector words with n doubly occupied sites, n = 0..min(n_up, n_down).

    Closed form at half filling, enumeration otherwise.
    """
    n_max = min(basis.n_up, basis.n_down)
    N = basis.n_sites
    if N % 2 == 0 and basis.n_up == basis.n_down == N // 2:
        return np.array([comb(N, n) * comb(N - n, n) * comb(N - 2 * n, (N - 2 * n) // 2)
                         for n in range(n_max + 1)], dtype=np.int64)
    return np.bincount(basis.double_occupancies(), minlength=n_max + 1).astype(np.int64)


@dataclass
class DoubleOccSpectrum:
    weights: np.ndarray  # w_n = sum of |c|^2 over words with n doubly occupied sites
    multiplicities: np.ndarray

    @property
    def n_max(self) -> int:
        return len(self.weights) - 1


def double_occ_spectrum(v: SectorState) -> DoubleOccSpectrum:
    basis = v.basis
    n_max = min(basis.n_up, basis.n_down)
    w = np.bincount(basis.double_occupancies(), weights=np.abs(v.amplitudes) ** 2, minlength=n_max + 1)
    return DoubleOccSpectrum(w, multiplicities(basis))


def success_probability(g: float, spectrum: DoubleOccSpectrum) -> float:
    """Probability that every ancilla reads 0: ``sum_n (1-g)^(2n) w_n``."""
    _check_g(g)
    n = np.arange(len(spectrum.weights))
    return float(np.sum((1.0 - g) ** (2 * n) * spectrum.weights))


def fidelity(a: SectorState, b: SectorState) -> float:
    return float(abs(a.vdot(b)) ** 2)


class EnergyLandscape:
    """``E(g)`` for the projected reference state as a rational function of ``x = 1 - g``.

    With ``psi_n`` the part of the reference supported on words with n doubly
    occupied sites, ``E = sum_nm x^(n+m) <psi_n|H|psi_m> / sum_n x^(2n) w_n``.
    Building it costs one Hamiltonian application per n.
    """

    def __init__(self, psi0: SectorState, h: SparseHamiltonian):
        d = psi0.basis.double_occupancies()
        n_max = min(psi0.basis.n_up, psi0.basis.n_down)
        amps = psi0.amplitudes
        self.weights = np.bincount(d, weights=np.abs(amps) ** 2, minlength=n_max + 1)
        self.coupling = np.zeros((n_max + 1, n_max + 1))
        masks = [d == n for n in range(n_max + 1)]
        for m in range(n_max + 1):
            if not masks[m].any():
                continue
            h_m = h.matvec(np.where(masks[m], amps, 0))
            for n in range(n_max + 1):
                self.coupling[n, m] = np.real(np.vdot(amps[masks[n]], h_m[masks[n]]))
        self.coupling = 0.5 * (self.coupling + self.coupling.T)

    def norm2(self, g: float) -> float:
        x = 1.0 - g
        return float(np.sum(self.weights * x ** (2 * np.arange(len(self.weights)))))

    def energy(self, g: float) -> float:
        x = 1.0 - g
        powers = x ** np.arange(len(self.weights))
        norm2 = float(np.sum(self.weights * powers**2))
        if norm2 <= 0:
            return math.inf
        return float(powers @ self.coupling @ powers) / norm2


def golden_section(f, lo: float, hi: float, tol: float = G_TOL) -> tuple[float, float]:
    """Minimise a unimodal ``f`` on ``[lo, hi]`` to interval width ``tol``."""
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


@dataclass
class GwfResult:
    g_opt: float
    energy: float
    fidelity_exact: float
    success_prob: float
    repetitions: float
    state: SectorState = field(repr=False)
    n_sites: int = 0
    u_over_t: float = 0.0

    def to_dict(self) -> dict:
        return {
            "n": self.n_sites,
            "u_over_t": self.u_over_t,
            "g_opt": self.g_opt,
            "energy": self.energy,
            "fidelity": self.fidelity_exact,
            "success_prob": self.success_prob,
            "repetitions": self.repetitions,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False)


def minimize_energy(landscape: EnergyLandscape, grid_points: int = GRID_POINTS,
                    tol: float = G_TOL) -> tuple[float, float]:
    """Grid scan over [0, 1] then golden-section refinement around the best grid point."""
    grid = np.linspace(0.0, 1.0, grid_points)
    energies = np.array([landscape.energy(g) for g in grid])
    k = int(np.argmin(energies))
    lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, grid_points - 1)]
    g, e = golden_section(landscape.energy, lo, hi, tol)
    # endpoints and the grid point are always candidates and win ties within roundoff
    cands = [(c, landscape.energy(c)) for c in (0.0, 1.0, float(grid[k]))] + [(g, e)]
    e_min = min(ec for _, ec in cands)
    return next((c, ec) for c, ec in cands if ec <= e_min + 1e-13 * max(1.0, abs(e_min)))


def optimal_g(
    spec: ModelSpec,
    psi0: SectorState,
    h: SparseHamiltonian,
    exact: SectorState | None = None,
    landscape: EnergyLandscape | None = None,
) -> GwfResult:
    """Energy-minimising Gutzwiller parameter for the projected reference state.

    ``fidelity_exact`` is NaN when no exact state is supplied.
    """
    if landscape is None:
        landscape = EnergyLandscape(psi0, h)
    g, energy = minimize_energy(landscape)
    projected = apply_projector(g, psi0)
    p = landscape.norm2(g)
    state = projected.normalize()
    fid = fidelity(state, exact) if exact is not None else math.nan
    return GwfResult(g, energy, fid, p, 1.0 / p, state, spec.n_sites, spec.u_over_t)


def qpe_qite_repetitions(
    trial: SectorState,
    exact: SectorState,
    include_prep_overhead: bool = False,
    prep_reps: float = 1.0,
) -> float:
    """Expected repetitions ``1/|<exact|trial>|^2`` (times ``prep_reps`` if requested).

    Returns ``math.inf`` when the overlap vanishes.
    """
    f = fidelity(trial, exact)
    if f == 0.0:
        return math.inf
    reps = 1.0 / f
    return reps * prep_reps if include_prep_overhead else reps


def qite_success_curve(trial: SectorState, h: SparseHamiltonian, tau_grid, cap: int = DENSE_CAP) -> np.ndarray:
    """Probability of landing in the exact ground state after imaginary time tau."""
    if h.dim > cap:
        raise ValueError(f"dense spectral decomposition capped at dimension {cap}, got {h.dim}")
    evals, evecs = np.linalg.eigh(h.to_dense())
    weights = np.abs(evecs.conj().T @ trial.amplitudes) ** 2
    gaps = evals - evals[0]
    tau = np.asarray(tau_grid, dtype=float)
    # N^2(tau) e^{-2 e0 tau} |c0|^2 written relative to e0 to avoid overflow
    denom = np.exp(-2.0 * np.outer(tau, gaps)) @ weights
    return weights[0] / denom
