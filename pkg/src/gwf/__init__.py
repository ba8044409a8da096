"""Gutzwiller wave functions on Hubbard chains: classical oracles and quantum circuits."""

from .hubbard import FockBasis, ModelSpec, SectorState, SparseHamiltonian, build_hamiltonian, enumerate_basis

__version__ = "0.1.0"

__all__ = ["FockBasis", "ModelSpec", "SectorState", "SparseHamiltonian", "build_hamiltonian", "enumerate_basis"]
