"""Energy/heat bookkeeping, entropies, fluxes, entropy production."""

import math

import numpy as np
import pytest
from conftest import SX, SZ, ginibre_state

from decotherm.baths import dephasing_bath, stationary_map, thermal_two_level_bath
from decotherm.dynamics import EvolutionSpec, propagate
from decotherm.errors import NotHermitian, SupportViolation
from decotherm.scenarios import bloch_state, two_level_hamiltonian
from decotherm.thermo import (
    energy,
    entropy_flux,
    entropy_production,
    first_law_residuals,
    heat_rate,
    relative_entropy_to_bath,
    sample_thermodynamics,
    von_neumann_entropy,
    work_rate,
)

Z_BASIS = [np.array([1.0, 0.0]), np.array([0.0, 1.0])]


class TestEnergyAndWork:
    def test_sigma_z_on_mixed(self):
        assert energy(SZ, np.eye(2, dtype=complex) / 2) == pytest.approx(0.0, abs=1e-15)

    def test_projector_hamiltonian(self):
        # H = E|E><E| with |E> = (|0>+|1>)/sqrt(2) on rho = (I + x sx)/2
        e, x = 1.7, 0.4
        h = two_level_hamiltonian(e)
        rho = bloch_state(x)
        assert energy(h, rho) == pytest.approx(e * (1 + x) / 2, rel=1e-12)

    def test_diagonal_dot_product(self):
        h = np.diag([0.0, 1.0, 2.0]).astype(complex)
        rho = np.diag([0.5, 0.3, 0.2]).astype(complex)
        assert energy(h, rho) == pytest.approx(0.7, rel=1e-14)

    def test_not_hermitian(self):
        with pytest.raises(NotHermitian):
            energy(np.array([[0, 1], [0, 0]], dtype=complex), np.eye(2, dtype=complex) / 2)

    def test_work_rate_static_is_zero(self):
        assert work_rate(np.zeros((2, 2), dtype=complex), bloch_state(0.3)) == 0.0

    def test_work_rate_pauli_trace(self):
        x = 0.35
        assert work_rate(SX, bloch_state(x)) == pytest.approx(x, rel=1e-12)


class TestHeatRate:
    def test_commuting_case_is_zero(self, rng):
        bath = dephasing_bath(Z_BASIS, gamma=1.3)
        h = np.diag([0.2, 1.4]).astype(complex)  # diagonal in the preferred basis
        for _ in range(5):
            assert heat_rate(h, bath, ginibre_state(rng, 2)) == pytest.approx(0.0, abs=1e-14)

    def test_two_level_magnitude(self):
        gamma, e, x = 1.0, 1.0, 0.5
        bath = dephasing_bath(Z_BASIS, gamma)
        h = two_level_hamiltonian(e)
        for z in (-0.5, 0.0, 0.5):
            q = heat_rate(h, bath, bloch_state(x, 0.0, z))
            assert abs(q) == pytest.approx(gamma * e * abs(x), rel=1e-12)
            # sign fixed by the brute-force oracle with Hermitian sigma_x
            assert q == pytest.approx(-gamma * e * x, rel=1e-12)


class TestVonNeumannEntropy:
    def test_pure_state(self):
        assert von_neumann_entropy(bloch_state(1.0)) == pytest.approx(0.0, abs=1e-12)

    def test_maximally_mixed(self):
        assert von_neumann_entropy(np.eye(2, dtype=complex) / 2) == pytest.approx(np.log(2.0))

    def test_two_thirds(self):
        rho = np.diag([2.0 / 3.0, 1.0 / 3.0]).astype(complex)
        expected = np.log(3.0) - (2.0 / 3.0) * np.log(2.0)
        assert von_neumann_entropy(rho) == pytest.approx(expected, rel=1e-12)
        assert expected == pytest.approx(0.6365, abs=5e-5)


class TestRelativeEntropy:
    def test_zero_at_equilibrium_both_baths(self, rng):
        deph = dephasing_bath(Z_BASIS, 1.0)
        eta = np.diag([0.3, 0.7]).astype(complex)
        assert relative_entropy_to_bath(eta, deph) == pytest.approx(0.0, abs=1e-12)
        therm = thermal_two_level_bath(1.0, 1.0, 1.0)
        g = stationary_map(therm, eta)
        assert relative_entropy_to_bath(g, therm) == pytest.approx(0.0, abs=1e-12)

    def test_plus_state_costs_ln2(self):
        deph = dephasing_bath(Z_BASIS, 1.0)
        plus = bloch_state(1.0)
        assert relative_entropy_to_bath(plus, deph) == pytest.approx(np.log(2.0), rel=1e-12)

    def test_ground_vs_finite_temperature(self):
        # Gibbs = diag(2/3, 1/3): R(ground) = -ln(2/3)
        bath = thermal_two_level_bath(1.0, np.log(2.0), 1.0)
        ground = np.diag([1.0, 0.0]).astype(complex)
        assert relative_entropy_to_bath(ground, bath) == pytest.approx(-np.log(2.0 / 3.0), rel=1e-12)
        assert -np.log(2.0 / 3.0) == pytest.approx(0.4055, abs=5e-5)

    def test_infinity_sentinel_outside_support(self):
        # effectively zero temperature: stationary state is the ground projector
        bath = thermal_two_level_bath(1.0, 900.0, 1.0)
        excited = np.diag([0.0, 1.0]).astype(complex)
        assert relative_entropy_to_bath(excited, bath) == math.inf

    def test_zero_iff_stationary(self, rng):
        bath = dephasing_bath(Z_BASIS, 0.8)
        for _ in range(10):
            rho = ginibre_state(rng, 2)
            r = relative_entropy_to_bath(rho, bath)
            fixed = np.max(np.abs(stationary_map(bath, rho) - rho)) < 1e-8
            assert (r < 1e-12) == fixed


class TestEntropyFlux:
    def test_zero_at_stationary_state(self):
        bath = thermal_two_level_bath(1.0, 1.0, 1.0)
        g = stationary_map(bath, np.eye(2, dtype=complex) / 2)
        assert entropy_flux(bath, g) == pytest.approx(0.0, abs=1e-12)

    def test_thermal_flux_is_beta_times_heat(self, rng):
        e, beta = 1.3, 0.9
        bath = thermal_two_level_bath(e, beta, 1.1)
        h = np.diag([0.0, e]).astype(complex)
        for _ in range(10):
            rho = ginibre_state(rng, 2)
            assert entropy_flux(bath, rho) == pytest.approx(
                beta * heat_rate(h, bath, rho), rel=1e-10, abs=1e-12
            )

    def test_dephasing_flux_vanishes(self, rng):
        # L_d(rho) has zero diagonal while log B_d(rho) is diagonal
        bath = dephasing_bath(Z_BASIS, 1.0)
        for _ in range(5):
            assert entropy_flux(bath, ginibre_state(rng, 2)) == pytest.approx(0.0, abs=1e-13)

    def test_support_violation_raises(self):
        bath = thermal_two_level_bath(1.0, 900.0, 1.0)
        with pytest.raises(SupportViolation):
            entropy_flux(bath, np.eye(2, dtype=complex) / 2)


class TestEntropyProduction:
    def test_zero_at_equilibrium(self):
        bath = thermal_two_level_bath(1.0, 1.0, 1.0)
        g = stationary_map(bath, np.eye(2, dtype=complex) / 2)
        assert entropy_production(g, [bath]) == pytest.approx(0.0, abs=1e-12)

    def test_second_law_random(self, rng):
        baths2 = [thermal_two_level_bath(1.0, 1.0, 1.0), dephasing_bath(Z_BASIS, 0.7)]
        for _ in range(25):
            rho = ginibre_state(rng, 2)
            assert entropy_production(rho, baths2) >= -1e-9

    def test_matches_finite_difference_of_relative_entropy(self, rng):
        # single thermal bath, H = 0: P = -dR/dt, Richardson-extrapolated
        bath = thermal_two_level_bath(1.0, 1.0, 1.0)
        rho0 = ginibre_state(rng, 2, mix=0.2)
        dt = 2e-3
        spec = EvolutionSpec(np.zeros((2, 2), dtype=complex), (bath,), t_max=20 * dt, dt=dt)
        spec_half = EvolutionSpec(np.zeros((2, 2), dtype=complex), (bath,), t_max=20 * dt, dt=dt / 2)
        traj = propagate(rho0, spec)
        traj_half = propagate(rho0, spec_half)
        k = 5
        r = [relative_entropy_to_bath(traj.states[k + s], bath) for s in (-1, 1)]
        fd = (r[1] - r[0]) / (2 * dt)
        rh = [relative_entropy_to_bath(traj_half.states[2 * k + s], bath) for s in (-1, 1)]
        fd_half = (rh[1] - rh[0]) / dt
        richardson = (4.0 * fd_half - fd) / 3.0
        p = entropy_production(traj.states[k], [bath])
        assert p == pytest.approx(-richardson, abs=1e-8)

    def test_balance_identity(self, rng):
        # dS/dt = sum Phi + P, with dS/dt = -Tr[L(rho) log rho]
        from decotherm.operators import matrix_log_on_support
        from decotherm.baths import apply_generator

        bath = thermal_two_level_bath(1.0, 1.0, 1.0)
        for _ in range(10):
            rho = ginibre_state(rng, 2, mix=0.1)
            sdot = -np.trace(
                apply_generator(bath.generator, rho) @ matrix_log_on_support(rho)
            ).real
            lhs = entropy_production(rho, [bath])
            rhs = sdot - entropy_flux(bath, rho)
            assert lhs == pytest.approx(rhs, abs=1e-10)


class TestSampleThermodynamics:
    def test_unitary_only(self):
        spec = EvolutionSpec(SZ.copy(), (), t_max=1.0, dt=0.01)
        traj = propagate(bloch_state(0.6, 0.0, 0.2), spec)
        samples = sample_thermodynamics(traj, spec)
        es = np.array([s.energy for s in samples])
        assert np.max(np.abs(es - es[0])) < 1e-10
        assert all(s.heat_rates == {} for s in samples)
        assert all(s.work_rate == 0.0 for s in samples)

    def test_dephasing_heat_decay(self):
        gamma, e, x0 = 1.0, 1.0, 0.5
        bath = dephasing_bath(Z_BASIS, gamma)
        spec = EvolutionSpec(two_level_hamiltonian(e), (bath,), t_max=2.0)
        traj = propagate(bloch_state(x0, 0.0, 0.2), spec)
        samples = sample_thermodynamics(traj, spec)
        q = np.array([s.heat_rates[bath.name] for s in samples])
        expected = gamma * e * abs(x0) * np.exp(-2.0 * gamma * traj.times)
        assert np.max(np.abs(np.abs(q) - expected)) < 1e-9

    def test_first_law_residuals_interior(self):
        bath = thermal_two_level_bath(1.0, 1.0, 1.0)
        spec = EvolutionSpec(np.diag([0.0, 1.0]).astype(complex), (bath,), t_max=2.0)
        traj = propagate(bloch_state(0.4, 0.0, -0.3), spec)
        samples = sample_thermodynamics(traj, spec)
        resid = first_law_residuals(samples)
        assert np.isnan(resid[0]) and np.isnan(resid[-1])
        assert np.nanmax(resid) < 1e-6

    def test_entropy_production_nonnegative_along_device_run(self, rng):
        from decotherm.scenarios import DEFAULT_DEVICE, DeviceParams, build_device

        assembly = build_device(DeviceParams(**DEFAULT_DEVICE))
        spec = EvolutionSpec(assembly.hamiltonian, assembly.baths, t_max=0.8)
        traj = propagate(ginibre_state(rng, 3), spec)
        samples = sample_thermodynamics(traj, spec)
        ps = np.array([s.entropy_production for s in samples])
        assert np.all(ps >= -1e-9)

    def test_entropy_production_nonnegative_twenty_initial_states(self, rng):
        from decotherm.scenarios import DEFAULT_DEVICE, DeviceParams, build_device

        assembly = build_device(DeviceParams(**DEFAULT_DEVICE))
        spec = EvolutionSpec(assembly.hamiltonian, assembly.baths, t_max=0.15, dt=2e-3)
        for _ in range(20):
            traj = propagate(ginibre_state(rng, 3), spec)
            samples = sample_thermodynamics(traj, spec)
            assert all(s.entropy_production >= -1e-9 for s in samples)

    def test_support_violation_flagged_not_fatal(self):
        bath = thermal_two_level_bath(1.0, 900.0, 1.0)
        spec = EvolutionSpec(np.diag([0.0, 1.0]).astype(complex), (bath,), t_max=0.05, dt=0.01)
        traj = propagate(np.eye(2, dtype=complex) / 2, spec)
        samples = sample_thermodynamics(traj, spec)
        assert not samples[0].support_ok
        assert math.isnan(samples[0].entropy_flux[bath.name])
        assert samples[0].relative_entropies[bath.name] == math.inf

    def test_schedule_work_at_switch(self):
        h0 = np.diag([0.0, 1.0]).astype(complex)
        h1 = two_level_hamiltonian(1.0)
        dt = 0.01
        spec = EvolutionSpec([(0.0, h0), (0.5, h1)], (), t_max=1.0, dt=dt)
        rho0 = bloch_state(0.3, 0.0, 0.5)
        traj = propagate(rho0, spec)
        samples = sample_thermodynamics(traj, spec)
        k = int(round(0.5 / dt))
        rho_k = traj.states[k]
        expected = np.trace((h1 - h0) @ rho_k).real / dt
        assert samples[k].work_rate == pytest.approx(expected, rel=1e-12)
        interior = [s.work_rate for i, s in enumerate(samples) if i != k]
        assert all(w == 0.0 for w in interior)


def test_sample_invariant_bounds(rng):
    from decotherm.scenarios import DEFAULT_DEVICE, DeviceParams, build_device

    assembly = build_device(DeviceParams(**DEFAULT_DEVICE))
    spec = EvolutionSpec(assembly.hamiltonian, assembly.baths, t_max=0.5)
    samples = sample_thermodynamics(propagate(ginibre_state(rng, 3), spec), spec)
    ln_d = np.log(3.0)
    for s in samples:
        assert -1e-12 <= s.entropy <= ln_d + 1e-12
        assert s.entropy_production >= -1e-9
        assert all(r >= -1e-10 for r in s.relative_entropies.values())
