"""Noninteracting ground state of the chain and Slater-determinant amplitudes."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hubbard import FockBasis, ModelSpec, SectorState

FERMI_DEGENERACY_TOL = 1e-10


class DegenerateFermiLevelError(ValueError):
    """The lowest-n orbital choice is ambiguous; pass ``occupied`` explicitly."""


@dataclass(frozen=True, eq=False)
class OrbitalBasis:
    energies: np.ndarray
    orbitals: np.ndarray  # column alpha is phi_alpha(i)

    @property
    def n_sites(self) -> int:
        return self.orbitals.shape[0]


def hopping_matrix(spec: ModelSpec) -> np.ndarray:
    h = np.zeros((spec.n_sites, spec.n_sites))
    for i, j in spec.bonds():
        h[i, j] = h[j, i] = -spec.hopping
    return h


def fix_column_phases(q: np.ndarray) -> np.ndarray:
    q = q.copy()
    rows = np.argmax(np.abs(q), axis=0)
    signs = np.sign(q[rows, np.arange(q.shape[1])])
    signs[signs == 0] = 1.0
    return q * signs


def single_particle_modes(spec: ModelSpec) -> OrbitalBasis:
    energies, q = np.linalg.eigh(hopping_matrix(spec))
    return OrbitalBasis(energies, fix_column_phases(q))


def determinant_amplitudes(columns: np.ndarray, configs: np.ndarray) -> np.ndarray:
    """``det(columns[occupied rows of w, :])`` for every single-spin word ``w``.

    Rows are taken in ascending site order, which is the creation-operator
    order of the Jordan-Wigner basis states.
    """
    n_sites, n_occ = columns.shape
    if n_occ == 0:
        return np.ones(len(configs), dtype=columns.dtype)
    bits = (configs[:, None] >> np.arange(n_sites)) & 1
    rows = np.nonzero(bits)[1].reshape(len(configs), n_occ)
    return np.linalg.det(columns[rows, :])


def product_amplitudes(up_columns: np.ndarray, down_columns: np.ndarray, basis: FockBasis) -> np.ndarray:
    """Sector amplitudes of ``prod(up creators) prod(down creators)|0>``."""
    a_up = determinant_amplitudes(up_columns, basis.up_configs)
    a_dn = determinant_amplitudes(down_columns, basis.down_configs)
    return np.outer(a_dn, a_up).ravel()


def lowest_columns(orbitals: OrbitalBasis, n_occ: int) -> np.ndarray:
    e = orbitals.energies
    if 0 < n_occ < len(e) and abs(e[n_occ] - e[n_occ - 1]) < FERMI_DEGENERACY_TOL:
        raise DegenerateFermiLevelError(
            f"orbitals {n_occ - 1} and {n_occ} are degenerate at the Fermi level "
            f"(e={e[n_occ - 1]:.12g}); choose the occupied orbitals explicitly")
    return orbitals.orbitals[:, :n_occ]


def slater_amplitudes(
    orbitals: OrbitalBasis,
    spec: ModelSpec,
    basis: FockBasis,
    occupied: tuple[list[int], list[int]] | None = None,
) -> SectorState:
    if occupied is None:
        up = lowest_columns(orbitals, spec.n_up)
        down = lowest_columns(orbitals, spec.n_down)
    else:
        up = orbitals.orbitals[:, list(occupied[0])]
        down = orbitals.orbitals[:, list(occupied[1])]
        if up.shape[1] != spec.n_up or down.shape[1] != spec.n_down:
            raise ValueError("occupied orbital lists do not match the particle numbers")
    amps = product_amplitudes(up, down, basis)
    norm = np.linalg.norm(amps)
    assert abs(norm - 1.0) < 1e-10, f"Slater determinant norm {norm} (orbitals not orthonormal?)"
    return SectorState(basis, amps / norm, normalized=True)


def noninteracting_state(spec: ModelSpec, basis: FockBasis) -> SectorState:
    return slater_amplitudes(single_particle_modes(spec), spec, basis)


def noninteracting_energy(spec: ModelSpec) -> float:
    modes = single_particle_modes(spec)
    return float(modes.energies[: spec.n_up].sum() + modes.energies[: spec.n_down].sum())
