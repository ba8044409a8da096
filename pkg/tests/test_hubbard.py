import numpy as np
import pytest
from hypothesis import given, strategies as st
from math import comb

from gwf.hubbard import (
    CapacityError, FockBasis, ModelSpec, SectorState, apply_hamiltonian, build_hamiltonian,
    double_occupancy, enumerate_basis, sector_dimension,
)
from oracles import dimer_energy, sector_block


def test_basis_sizes():
    assert enumerate_basis(ModelSpec(2)).dim == 4
    assert enumerate_basis(ModelSpec(4)).dim == 36
    assert sector_dimension(ModelSpec(12)) == 853_776 == comb(12, 6) ** 2


def test_basis_is_sorted_and_indexable():
    b = enumerate_basis(ModelSpec(6, n_up=2, n_down=3))
    assert np.all(np.diff(b.states) > 0)
    assert np.array_equal(b.index(b.states), np.arange(b.dim))
    up = b.states & ((1 << 6) - 1)
    dn = b.states >> 6
    assert all(bin(w).count("1") == 2 for w in up)
    assert all(bin(w).count("1") == 3 for w in dn)
    with pytest.raises(KeyError):
        b.index(0)


def test_capacity_guard():
    with pytest.raises(CapacityError):
        enumerate_basis(ModelSpec(12), max_dim=1000)


def test_double_occupancy_examples():
    s2, s4 = ModelSpec(2), ModelSpec(4)
    # word bit j = site j up, bit N + j = site j down
    assert double_occupancy(0b10_01, s2) == 0       # up on 0, down on 1
    assert double_occupancy(0b01_01, s2) == 1       # both on site 0
    assert double_occupancy(0b0101_0101, s4) == 2   # sites 0 and 2 doubly occupied


@pytest.mark.parametrize("n,periodic,u", [(2, False, 3.0), (3, False, 2.0), (4, False, 7.0), (4, True, 1.5)])
def test_matches_full_fock_space_oracle(n, periodic, u):
    spec = ModelSpec(n, 1.0, u, "periodic" if periodic else "open")
    basis = enumerate_basis(spec)
    words, ref = sector_block(n, 1.0, u, periodic, spec.n_up, spec.n_down)
    assert np.array_equal(words, basis.states)
    assert np.allclose(build_hamiltonian(spec, basis).to_dense(), ref, atol=1e-14)


def test_dimer_spectra():
    ev = np.linalg.eigvalsh(build_hamiltonian(ModelSpec(2, 1.0, 0.0)).to_dense())
    assert np.allclose(ev, [-2, 0, 0, 2])
    atomic = build_hamiltonian(ModelSpec(2, 0.0, 4.0))
    assert sorted(atomic.diagonal) == [0, 0, 4, 4]
    ev = np.linalg.eigvalsh(build_hamiltonian(ModelSpec(2, 1.0, 8.0)).to_dense())
    assert ev[0] == pytest.approx(dimer_energy(1.0, 8.0), abs=1e-12)
    assert ev[0] == pytest.approx(-0.47214, abs=1e-5)


@given(st.sampled_from([2, 3, 4, 5, 6]), st.floats(0, 20), st.booleans(), st.data())
def test_hermitian_and_diagonal_counts_doubles(n, u, periodic, data):
    n_up = data.draw(st.integers(0, n))
    n_down = data.draw(st.integers(0, n))
    spec = ModelSpec(n, 1.0, u, "periodic" if periodic else "open", n_up, n_down)
    h = build_hamiltonian(spec)
    csr = h.to_csr()
    assert abs(csr - csr.T).max() < 1e-14 if csr.nnz else True
    assert np.allclose(h.diagonal, u * h.basis.double_occupancies())


@given(st.integers(0, 2**32 - 1))
def test_apply_hamiltonian_eigen_and_real_expectation(seed):
    spec = ModelSpec(4, 1.0, 3.0)
    h = build_hamiltonian(spec)
    dense = h.to_dense()
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(h.dim) + 1j * rng.standard_normal(h.dim)
    assert abs(np.vdot(v, dense @ v).imag) < 1e-10
    ev, vecs = np.linalg.eigh(dense)
    k = rng.integers(h.dim)
    out = apply_hamiltonian(h, SectorState(h.basis, vecs[:, k]))
    assert np.allclose(out.amplitudes, ev[k] * vecs[:, k], atol=1e-10)


def test_apply_hamiltonian_zero_and_mismatch():
    h = build_hamiltonian(ModelSpec(4, 1.0, 2.0))
    zero = SectorState(h.basis, np.zeros(h.dim))
    assert not apply_hamiltonian(h, zero).amplitudes.any()
    other = enumerate_basis(ModelSpec(2))
    with pytest.raises(ValueError):
        apply_hamiltonian(h, SectorState(other, np.ones(other.dim)))


def test_with_u_reuses_hopping():
    h = build_hamiltonian(ModelSpec(4, 1.0, 2.0))
    assert np.allclose(h.with_u(9.0).to_dense(), build_hamiltonian(ModelSpec(4, 1.0, 9.0)).to_dense())


def test_sector_state_normalized_flag():
    b = enumerate_basis(ModelSpec(2))
    with pytest.raises(ValueError):
        SectorState(b, np.ones(4), normalized=True)
    assert SectorState(b, np.ones(4)).normalize().norm() == pytest.approx(1.0)


def test_spec_roundtrip(tmp_path):
    spec = ModelSpec(6, 1.0, 4.0, "periodic", 2, 3)
    spec.save(tmp_path / "m.yaml")
    assert ModelSpec.load(tmp_path / "m.yaml") == spec
    assert spec.u_over_t == 4.0 and not spec.half_filled


@pytest.mark.parametrize("kwargs", [dict(n_sites=0), dict(n_sites=4, n_up=5), dict(n_sites=4, boundary="twisted")])
def test_spec_rejects_bad_input(kwargs):
    with pytest.raises(ValueError):
        ModelSpec(**kwargs)
