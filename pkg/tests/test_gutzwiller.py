import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gwf.exact import ground_state, ground_state_dense
from gwf.gutzwiller import (
    EnergyLandscape, apply_projector, double_occ_spectrum, fidelity, golden_section, multiplicities,
    optimal_g, qite_success_curve, qpe_qite_repetitions, success_probability,
)
from gwf.hubbard import ModelSpec, SectorState, build_hamiltonian, enumerate_basis
from gwf.reference import noninteracting_state
from oracles import dimer_energy


def _setup(n, u):
    spec = ModelSpec(n, 1.0, u)
    basis = enumerate_basis(spec)
    return spec, basis, build_hamiltonian(spec, basis), noninteracting_state(spec, basis)


def _word(occ: str, n_sites=4) -> int:
    """Occupation string like 'ud,0,u,d' -> blocked word."""
    w = 0
    for site, token in enumerate(occ.split(",")):
        if "u" in token:
            w |= 1 << site
        if "d" in token:
            w |= 1 << (n_sites + site)
    return w


WORKED = {"a": "u,d,u,d", "b": "u,u,d,d", "c": "ud,0,u,d", "d": "u,d,ud,0", "e": "ud,0,ud,0", "f": "ud,0,0,ud"}


def worked_state(coeffs):
    basis = enumerate_basis(ModelSpec(4))
    amps = np.zeros(basis.dim)
    for key, occ in WORKED.items():
        amps[basis.index(_word(occ))] = coeffs[key]
    return SectorState(basis, amps)


def test_worked_four_site_example():
    coeffs = dict(zip("abcdef", [0.3, -0.2, 0.5, 0.4, -0.6, 0.1]))
    g = 0.37
    out = apply_projector(g, worked_state(coeffs))
    b = out.basis
    powers = {"a": 0, "b": 0, "c": 1, "d": 1, "e": 2, "f": 2}
    for key, occ in WORKED.items():
        assert out.amplitudes[b.index(_word(occ))] == pytest.approx(coeffs[key] * (1 - g) ** powers[key])


def test_projector_endpoints_and_domain():
    _, basis, _, psi = _setup(4, 0.0)
    assert np.array_equal(apply_projector(0.0, psi).amplitudes, psi.amplitudes)
    out = apply_projector(1.0, psi)
    assert not out.amplitudes[basis.double_occupancies() > 0].any()
    for bad in (-0.1, 1.1):
        with pytest.raises(ValueError):
            apply_projector(bad, psi)


def test_multiplicities():
    assert list(multiplicities(enumerate_basis(ModelSpec(4)))) == [6, 24, 6]
    for n in (2, 4, 6, 8, 10):
        b = enumerate_basis(ModelSpec(n))
        m = multiplicities(b)
        assert m.sum() == b.dim
        assert np.array_equal(m, np.bincount(b.double_occupancies()))


def test_dimer_spectrum_and_probability():
    _, _, _, psi = _setup(2, 0.0)
    spec = double_occ_spectrum(psi)
    assert np.allclose(spec.weights, [0.5, 0.5])
    for g in (0.0, 0.3, 1.0):
        assert success_probability(g, spec) == pytest.approx(0.5 * (1 + (1 - g) ** 2))
    assert 1 / success_probability(1.0, spec) == pytest.approx(2.0)


@given(st.integers(0, 2**31), st.floats(0, 1))
def test_two_path_success_probability(seed, g):
    basis = enumerate_basis(ModelSpec(6))
    rng = np.random.default_rng(seed)
    v = SectorState(basis, rng.standard_normal(basis.dim) + 1j * rng.standard_normal(basis.dim)).normalize()
    spec = double_occ_spectrum(v)
    assert spec.weights.sum() == pytest.approx(1.0, abs=1e-12)
    assert success_probability(g, spec) == pytest.approx(apply_projector(g, v).norm() ** 2, abs=1e-12)


@pytest.mark.parametrize("n", [2, 4, 6])
def test_landscape_matches_direct_expectation(n):
    spec, basis, h, psi = _setup(n, 7.0)
    land = EnergyLandscape(psi, h)
    for g in (0.0, 0.25, 0.6, 0.99):
        v = apply_projector(g, psi).normalize()
        assert land.energy(g) == pytest.approx(h.expectation(v.amplitudes), abs=1e-12)
        assert land.norm2(g) == pytest.approx(apply_projector(g, psi).norm() ** 2, abs=1e-14)


def test_u0_gives_g0():
    spec, basis, h, psi = _setup(6, 0.0)
    res = optimal_g(spec, psi, h)
    assert res.g_opt == pytest.approx(0.0, abs=1e-7)
    assert res.repetitions == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("u", [0.0, 1.0, 4.0, 8.0, 50.0])
def test_dimer_gwf_is_exact(u):
    spec, basis, h, psi = _setup(2, u)
    exact = ground_state(h)
    res = optimal_g(spec, psi, h, exact=exact.state)
    assert res.fidelity_exact >= 1 - 1e-9
    assert res.energy == pytest.approx(dimer_energy(1.0, u), abs=1e-9)


@pytest.mark.parametrize("n,u", [(4, 3.0), (6, 10.0), (8, 5.0)])
def test_result_invariants_and_sandwich(n, u):
    spec, basis, h, psi = _setup(n, u)
    exact = ground_state(h)
    res = optimal_g(spec, psi, h, exact=exact.state)
    assert res.repetitions == pytest.approx(1 / res.success_prob, rel=1e-12)
    assert res.energy == pytest.approx(h.expectation(res.state.amplitudes), abs=1e-10)
    assert exact.energy - 1e-10 <= res.energy <= h.expectation(psi.amplitudes) + 1e-12
    assert res.fidelity_exact >= fidelity(psi, exact.state) - 1e-12
    # out-of-sector amplitudes cannot exist: the state lives on the sector basis by construction
    assert res.state.basis.same_sector(basis)
    d = res.to_dict()
    assert list(d) == ["n", "u_over_t", "g_opt", "energy", "fidelity", "success_prob", "repetitions"]


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_g_opt_monotone_in_u(n):
    spec, basis, h, psi = _setup(n, 0.0)
    land_g = []
    for u in range(0, 51):
        hu = h.with_u(float(u))
        land_g.append(optimal_g(spec.with_u(float(u)), psi, hu).g_opt)
    assert all(b >= a - 1e-6 for a, b in zip(land_g, land_g[1:]))


def test_golden_section():
    x, fx = golden_section(lambda t: (t - 0.3141) ** 2, 0.0, 1.0, 1e-10)
    assert x == pytest.approx(0.3141, abs=1e-9) and fx < 1e-18


def test_fidelity_basics():
    _, basis, _, psi = _setup(4, 0.0)
    assert fidelity(psi, psi) == pytest.approx(1.0)
    e0 = np.zeros(basis.dim); e0[0] = 1
    e1 = np.zeros(basis.dim); e1[1] = 1
    assert fidelity(SectorState(basis, e0), SectorState(basis, e1)) == 0.0
    with pytest.raises(ValueError):
        fidelity(psi, noninteracting_state(ModelSpec(2), enumerate_basis(ModelSpec(2))))


def test_qpe_repetitions():
    spec, basis, h, psi = _setup(4, 10.0)
    exact = ground_state(h).state
    assert qpe_qite_repetitions(exact, exact) == pytest.approx(1.0)
    r = qpe_qite_repetitions(psi, exact)
    assert r == pytest.approx(1 / fidelity(psi, exact))
    assert qpe_qite_repetitions(psi, exact, True, 7.0) == pytest.approx(7 * r)
    # an exactly orthogonal trial: swap two amplitudes with a relative sign
    i, j = np.argsort(-np.abs(exact.amplitudes))[:2]
    amps = np.zeros(basis.dim)
    amps[i], amps[j] = exact.amplitudes[j], -exact.amplitudes[i]
    trial = SectorState(basis, amps).normalize()
    if fidelity(trial, exact) == 0.0:
        assert qpe_qite_repetitions(trial, exact) == math.inf


def test_qite_curve():
    spec, basis, h, psi = _setup(4, 10.0)
    exact = ground_state_dense(h)
    taus = np.linspace(0, 50, 201)
    p = qite_success_curve(psi, h, taus)
    assert p[0] == pytest.approx(fidelity(psi, exact.state), abs=1e-12)
    assert p[-1] == pytest.approx(1.0, abs=1e-6)
    assert np.all(np.diff(p) >= -1e-12)
    # oracle: explicit propagator from a dense matrix exponential
    from scipy.linalg import expm
    tau = 0.3
    v = expm(-tau * h.to_dense()) @ psi.amplitudes
    v /= np.linalg.norm(v)
    assert qite_success_curve(psi, h, [tau])[0] == pytest.approx(abs(np.vdot(exact.state.amplitudes, v)) ** 2, abs=1e-10)
    with pytest.raises(ValueError):
        qite_success_curve(psi, h, [0.0], cap=10)
