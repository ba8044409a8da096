"""Fermi-Hubbard chain in a fixed (n_up, n_down) particle-number sector.

Orbitals are spin-blocked: orbital ``j < N`` is site ``j`` spin up and
orbital ``N + j`` is site ``j`` spin down.  An occupation word stores
orbital ``j`` in bit ``j``.  Because every up orbital precedes every down
orbital, the sector factorises as ``down_configs x up_configs`` and the
canonical (sorted-by-word) position of a word is
``idx_down * dim_up + idx_up``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import comb
from pathlib import Path

import numpy as np
import scipy.sparse as sp
import yaml

BOUNDARIES = ("open", "periodic")


class CapacityError(ValueError):
    """Sector too large for the index type or the requested memory cap."""


@dataclass(frozen=True)
class ModelSpec:
    n_sites: int
    hopping: float = 1.0
    hubbard_u: float = 0.0
    boundary: str = "open"
    n_up: int | None = None
    n_down: int | None = None

    def __post_init__(self):
        if self.n_up is None:
            object.__setattr__(self, "n_up", self.n_sites // 2)
        if self.n_down is None:
            object.__setattr__(self, "n_down", self.n_sites // 2)
        if self.n_sites < 1:
            raise ValueError(f"n_sites must be positive, got {self.n_sites}")
        if self.hopping < 0:
            raise ValueError(f"hopping must be >= 0, got {self.hopping}")
        if self.hubbard_u < 0:
            raise ValueError(f"hubbard_u must be >= 0, got {self.hubbard_u}")
        if self.boundary not in BOUNDARIES:
            raise ValueError(f"boundary must be one of {BOUNDARIES}, got {self.boundary!r}")
        for name in ("n_up", "n_down"):
            n = getattr(self, name)
            if not 0 <= n <= self.n_sites:
                raise ValueError(f"{name}={n} outside [0, {self.n_sites}]")

    @property
    def u_over_t(self) -> float:
        if self.hopping == 0:
            return math.inf if self.hubbard_u else 0.0
        return self.hubbard_u / self.hopping

    @property
    def half_filled(self) -> bool:
        return self.n_sites % 2 == 0 and self.n_up == self.n_down == self.n_sites // 2

    def with_u(self, hubbard_u: float) -> "ModelSpec":
        return ModelSpec(self.n_sites, self.hopping, hubbard_u, self.boundary, self.n_up, self.n_down)

    def bonds(self) -> list[tuple[int, int]]:
        """Nearest-neighbour bonds ``(i, j)`` with ``i < j``."""
        n = self.n_sites
        bonds = [(i, i + 1) for i in range(n - 1)]
        if self.boundary == "periodic" and n > 2:
            bonds.append((0, n - 1))
        return bonds

    # flat key-value config: n_sites, t, u, boundary, n_up, n_down
    def to_config(self) -> dict:
        return {
            "n_sites": self.n_sites,
            "t": float(self.hopping),
            "u": float(self.hubbard_u),
            "boundary": self.boundary,
            "n_up": self.n_up,
            "n_down": self.n_down,
        }

    @classmethod
    def from_config(cls, cfg: dict) -> "ModelSpec":
        unknown = set(cfg) - {"n_sites", "t", "u", "boundary", "n_up", "n_down"}
        if unknown:
            raise ValueError(f"unknown ModelSpec keys: {sorted(unknown)}")
        return cls(
            n_sites=int(cfg["n_sites"]),
            hopping=float(cfg.get("t", 1.0)),
            hubbard_u=float(cfg.get("u", 0.0)),
            boundary=str(cfg.get("boundary", "open")),
            n_up=None if cfg.get("n_up") is None else int(cfg["n_up"]),
            n_down=None if cfg.get("n_down") is None else int(cfg["n_down"]),
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(yaml.safe_dump(self.to_config(), sort_keys=False), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "ModelSpec":
        return cls.from_config(yaml.safe_load(Path(path).read_text(encoding="utf-8")))


def spin_configs(n_sites: int, n_particles: int) -> np.ndarray:
    """All ``n_sites``-bit words with ``n_particles`` bits set, ascending."""
    if n_particles == 0:
        return np.zeros(1, dtype=np.int64)
    words = np.arange(1 << n_sites, dtype=np.int64)
    return words[np.bitwise_count(words) == n_particles]


@dataclass(frozen=True, eq=False)
class FockBasis:
    n_sites: int
    n_up: int
    n_down: int
    up_configs: np.ndarray = field(repr=False)
    down_configs: np.ndarray = field(repr=False)
    states: np.ndarray = field(repr=False)

    @property
    def sector(self) -> tuple[int, int]:
        return (self.n_up, self.n_down)

    @property
    def dim(self) -> int:
        return len(self.states)

    def __len__(self) -> int:
        return len(self.states)

    def index(self, words) -> np.ndarray | int:
        """Position of each word in the canonical order; raises KeyError if absent."""
        w = np.asarray(words, dtype=np.int64)
        pos = np.searchsorted(self.states, w)
        bad = (pos >= len(self.states)) | (self.states[np.minimum(pos, len(self.states) - 1)] != w)
        if np.any(bad):
            raise KeyError(f"word(s) not in sector {self.sector}: {np.atleast_1d(w)[np.atleast_1d(bad)][:5]}")
        return int(pos) if np.ndim(words) == 0 else pos

    def same_sector(self, other: "FockBasis") -> bool:
        return self is other or (self.n_sites, self.n_up, self.n_down) == (
            other.n_sites, other.n_up, other.n_down)

    def double_occupancies(self) -> np.ndarray:
        mask = (1 << self.n_sites) - 1
        return np.bitwise_count((self.states & mask) & (self.states >> self.n_sites)).astype(np.int64)


def sector_dimension(spec: ModelSpec) -> int:
    return comb(spec.n_sites, spec.n_up) * comb(spec.n_sites, spec.n_down)


def enumerate_basis(spec: ModelSpec, max_dim: int = np.iinfo(np.int32).max) -> FockBasis:
    """Canonically ordered sector basis.

    ``max_dim`` defaults to the int32 limit used by scipy's CSR indices.
    """
    dim = sector_dimension(spec)
    if dim > max_dim or 2 * spec.n_sites > 62:
        raise CapacityError(f"sector dimension {dim} for N={spec.n_sites} exceeds cap {max_dim}")
    up = spin_configs(spec.n_sites, spec.n_up)
    down = spin_configs(spec.n_sites, spec.n_down)
    states = (down[:, None] << spec.n_sites | up[None, :]).ravel()
    return FockBasis(spec.n_sites, spec.n_up, spec.n_down, up, down, states)


def double_occupancy(word: int, spec: ModelSpec) -> int:
    """Number of sites holding both an up and a down electron."""
    mask = (1 << spec.n_sites) - 1
    return ((word & mask) & (word >> spec.n_sites)).bit_count()


@dataclass(eq=False)
class SectorState:
    basis: FockBasis
    amplitudes: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes)
        if self.amplitudes.shape != (self.basis.dim,):
            raise ValueError(
                f"amplitude vector has shape {self.amplitudes.shape}, basis dim is {self.basis.dim}")
        if self.normalized and abs(self.norm() - 1.0) > 1e-12:
            raise ValueError(f"state flagged normalized but has norm {self.norm()!r}")

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalize(self) -> "SectorState":
        nrm = self.norm()
        if nrm == 0:
            raise ZeroDivisionError("cannot normalize the zero vector")
        return SectorState(self.basis, self.amplitudes / nrm, normalized=True)

    def vdot(self, other: "SectorState") -> complex:
        if not self.basis.same_sector(other.basis):
            raise ValueError("states live in different sectors")
        return np.vdot(self.amplitudes, other.amplitudes)


def _hopping_block(n_sites: int, configs: np.ndarray, bonds, t: float) -> sp.csr_matrix:
    """Single-spin hopping matrix with Jordan-Wigner signs."""
    rows, cols, vals = [], [], []
    for i, j in bonds:
        bi, bj = np.int64(1) << i, np.int64(1) << j
        movable = ((configs & bi) != 0) != ((configs & bj) != 0)
        src = np.nonzero(movable)[0]
        dst_words = configs[src] ^ (bi | bj)
        dst = np.searchsorted(configs, dst_words)
        between = ((np.int64(1) << j) - 1) & ~((np.int64(1) << (i + 1)) - 1)
        parity = np.bitwise_count(configs[src] & between) & 1
        rows.append(dst)
        cols.append(src)
        vals.append(-t * (1.0 - 2.0 * parity))
    d = len(configs)
    if not rows:
        return sp.csr_matrix((d, d))
    return sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(d, d))


@dataclass(eq=False)
class SparseHamiltonian:
    """``H = offdiag + diag(diagonal)``; offdiag holds the hopping terms in CSR."""

    offdiag: sp.csr_matrix
    diagonal: np.ndarray
    basis: FockBasis | None = None
    spec: ModelSpec | None = None

    @property
    def dim(self) -> int:
        return self.offdiag.shape[0]

    def matvec(self, v: np.ndarray) -> np.ndarray:
        return self.offdiag @ v + self.diagonal * v

    def to_dense(self) -> np.ndarray:
        return self.offdiag.toarray() + np.diag(self.diagonal)

    def to_csr(self) -> sp.csr_matrix:
        return (self.offdiag + sp.diags(self.diagonal)).tocsr()

    def with_u(self, hubbard_u: float) -> "SparseHamiltonian":
        """Same hopping part, new on-site interaction (no rebuild)."""
        if self.basis is None or self.spec is None:
            raise ValueError("with_u needs a Hamiltonian built from a ModelSpec")
        spec = self.spec.with_u(hubbard_u)
        return SparseHamiltonian(self.offdiag, hubbard_u * self.basis.double_occupancies().astype(float),
                                 self.basis, spec)

    def expectation(self, v: np.ndarray) -> float:
        return float(np.real(np.vdot(v, self.matvec(v))))


def build_hamiltonian(spec: ModelSpec, basis: FockBasis | None = None) -> SparseHamiltonian:
    if basis is None:
        basis = enumerate_basis(spec)
    if (basis.n_sites, basis.n_up, basis.n_down) != (spec.n_sites, spec.n_up, spec.n_down):
        raise ValueError(f"basis sector {basis.sector} does not match spec")
    bonds = spec.bonds()
    t_up = _hopping_block(spec.n_sites, basis.up_configs, bonds, spec.hopping)
    t_dn = _hopping_block(spec.n_sites, basis.down_configs, bonds, spec.hopping)
    eye_up = sp.identity(len(basis.up_configs), format="csr")
    eye_dn = sp.identity(len(basis.down_configs), format="csr")
    offdiag = (sp.kron(t_dn, eye_up, format="csr") + sp.kron(eye_dn, t_up, format="csr")).tocsr()
    offdiag.sum_duplicates()
    diagonal = spec.hubbard_u * basis.double_occupancies().astype(float)
    return SparseHamiltonian(offdiag, diagonal, basis, spec)


def apply_hamiltonian(h: SparseHamiltonian, v: SectorState) -> SectorState:
    if len(v.amplitudes) != h.dim:
        raise ValueError(f"dimension mismatch: H is {h.dim}, state is {len(v.amplitudes)}")
    return SectorState(v.basis, h.matvec(v.amplitudes))
