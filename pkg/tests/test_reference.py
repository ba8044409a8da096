import numpy as np
import pytest
from hypothesis import given, strategies as st

from gwf.hubbard import ModelSpec, build_hamiltonian, enumerate_basis
from gwf.reference import (
    DegenerateFermiLevelError, determinant_amplitudes, noninteracting_energy, noninteracting_state,
    single_particle_modes, slater_amplitudes,
)
from oracles import slater_full


def test_dimer_modes():
    orb = single_particle_modes(ModelSpec(2))
    assert np.allclose(orb.energies, [-1, 1])
    s = 1 / np.sqrt(2)
    assert np.allclose(orb.orbitals, [[s, s], [s, -s]])


def test_open_chain_spectrum():
    orb = single_particle_modes(ModelSpec(4))
    expected = sorted(-2 * np.cos(np.pi * k / 5) for k in range(1, 5))
    assert np.allclose(orb.energies, expected)
    assert np.allclose(orb.energies, [-1.61803, -0.61803, 0.61803, 1.61803], atol=1e-5)
    assert noninteracting_energy(ModelSpec(4)) == pytest.approx(-4.47214, abs=1e-5)


@pytest.mark.parametrize("n", [2, 4, 6, 8, 12])
def test_modes_orthonormal_and_phase_fixed(n):
    orb = single_particle_modes(ModelSpec(n))
    q = orb.orbitals
    assert np.abs(q.T @ q - np.eye(n)).max() <= 1e-12
    assert np.all(np.diff(orb.energies) > 0)
    cols = q[np.argmax(np.abs(q), axis=0), np.arange(n)]
    assert np.all(cols > 0)


def test_dimer_amplitudes():
    spec = ModelSpec(2)
    psi = noninteracting_state(spec, enumerate_basis(spec))
    assert np.allclose(np.abs(psi.amplitudes), 0.5)


@pytest.mark.parametrize("n", [2, 4])
def test_amplitudes_match_creation_operator_oracle(n):
    spec = ModelSpec(n)
    basis = enumerate_basis(spec)
    orb = single_particle_modes(spec)
    full = slater_full(orb.orbitals[:, : n // 2], orb.orbitals[:, : n // 2])
    psi = noninteracting_state(spec, basis)
    assert abs(abs(np.vdot(full[basis.states], psi.amplitudes)) - 1) < 1e-12


def test_off_half_filling_against_oracle():
    spec = ModelSpec(4, n_up=1, n_down=3)
    basis = enumerate_basis(spec)
    orb = single_particle_modes(spec)
    full = slater_full(orb.orbitals[:, :1], orb.orbitals[:, :3])
    psi = slater_amplitudes(orb, spec, basis)
    assert abs(abs(np.vdot(full[basis.states], psi.amplitudes)) - 1) < 1e-12


@pytest.mark.parametrize("n", [2, 4, 6, 8, 10, 12])
def test_norm_and_energy(n):
    spec = ModelSpec(n)
    basis = enumerate_basis(spec)
    psi = noninteracting_state(spec, basis)
    assert psi.norm() == pytest.approx(1.0, abs=1e-12)
    if n <= 10:
        h = build_hamiltonian(spec, basis)
        e = np.vdot(psi.amplitudes, h.matvec(psi.amplitudes)).real
        orb = single_particle_modes(spec)
        assert e == pytest.approx(2 * orb.energies[: n // 2].sum(), abs=1e-10)


def test_degenerate_fermi_level_raises():
    # 4-site ring at half filling: the k = +-pi/2 pair straddles the Fermi level
    spec = ModelSpec(4, boundary="periodic")
    with pytest.raises(DegenerateFermiLevelError):
        noninteracting_state(spec, enumerate_basis(spec))


def test_explicit_occupation_bypasses_degeneracy():
    spec = ModelSpec(4, boundary="periodic")
    basis = enumerate_basis(spec)
    orb = single_particle_modes(spec)
    psi = slater_amplitudes(orb, spec, basis, occupied=([0, 1], [0, 1]))
    assert psi.norm() == pytest.approx(1.0)


@given(st.integers(0, 2**31), st.integers(1, 5))
def test_determinants_of_random_orthonormal_columns(seed, k):
    n = 6
    q, _ = np.linalg.qr(np.random.default_rng(seed).standard_normal((n, n)))
    cols = q[:, :k]
    from itertools import combinations
    configs = np.array([sum(1 << i for i in c) for c in combinations(range(n), k)])
    amps = determinant_amplitudes(cols, configs)
    # Cauchy-Binet: sum of squared minors = det(C^T C) = 1
    assert np.sum(amps**2) == pytest.approx(1.0, abs=1e-12)
