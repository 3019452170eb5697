"""Two-level decoherence heat and the three-level device reproductions."""

import math

import numpy as np
import pytest
from conftest import ginibre_state

from decotherm.baths import apply_generator
from decotherm.dynamics import EvolutionSpec, liouvillian
from decotherm.errors import InvalidBlochVector, InvalidParams
from decotherm.scenarios import (
    DEFAULT_DEVICE,
    DeviceParams,
    TwoLevelDecoherenceParams,
    bloch_state,
    build_device,
    device_report,
    gamma_sweep,
    two_level_decoherence_heat,
    two_level_hamiltonian,
)


def brute_force_heat(gamma, e, x, z):
    """Tr[H L_d(rho)] assembled from scratch with explicit projectors."""
    rho = bloch_state(x, 0.0, z)
    h = two_level_hamiltonian(e)
    p0 = np.diag([1.0, 0.0]).astype(complex)
    p1 = np.diag([0.0, 1.0]).astype(complex)
    ld = sum(
        gamma * (2.0 * p @ rho @ p - p @ rho - rho @ p) for p in (p0, p1)
    )
    return float(np.trace(h @ ld).real)


class TestTwoLevelHeat:
    def test_zero_coherence_zero_heat(self):
        p = TwoLevelDecoherenceParams(gamma=1.3, e_level=0.7, x=0.0, z=0.4)
        assert two_level_decoherence_heat(p) == 0.0

    def test_magnitude_posting(self):
        p = TwoLevelDecoherenceParams(gamma=1.0, e_level=1.0, x=0.5)
        assert abs(two_level_decoherence_heat(p)) == pytest.approx(0.5, abs=1e-12)

    def test_z_independence(self):
        vals = [
            two_level_decoherence_heat(TwoLevelDecoherenceParams(1.0, 1.0, 0.5, z))
            for z in (-0.5, 0.0, 0.5)
        ]
        assert vals[0] == vals[1] == vals[2]

    def test_matches_brute_force(self, rng):
        for _ in range(20):
            gamma = rng.uniform(0.1, 2.0)
            e = rng.uniform(0.5, 2.0)
            x = rng.uniform(-0.7, 0.7)
            z = rng.uniform(-0.7, 0.7)
            p = TwoLevelDecoherenceParams(gamma, e, x, z)
            assert two_level_decoherence_heat(p) == pytest.approx(
                brute_force_heat(gamma, e, x, z), abs=1e-13
            )

    def test_invalid_bloch_vector(self):
        with pytest.raises(InvalidBlochVector):
            TwoLevelDecoherenceParams(gamma=1.0, e_level=1.0, x=0.9, z=0.9)


class TestBuildDevice:
    def test_total_liouvillian_annihilates_trace(self, rng):
        assembly = build_device(DeviceParams(**DEFAULT_DEVICE))
        lv = liouvillian(EvolutionSpec(assembly.hamiltonian, assembly.baths))
        rho = ginibre_state(rng, 3)
        assert abs(np.trace(lv.apply(rho))) < 1e-12

    def test_gamma_zero_two_baths(self):
        params = dict(DEFAULT_DEVICE)
        params["gamma"] = 0.0
        assembly = build_device(DeviceParams(**params))
        assert len(assembly.baths) == 2
        assert assembly.dephasing is None

    def test_dephasing_leaves_zero_level_alone(self):
        assembly = build_device(DeviceParams(**DEFAULT_DEVICE))
        deph = assembly.dephasing
        # |0><0| carries no projector: coherences to |0> decay at gamma, not 2*gamma
        rho = np.zeros((3, 3), dtype=complex)
        rho[0, 1] = rho[1, 0] = 0.5
        out = apply_generator(deph.generator, rho)
        assert out[0, 1] == pytest.approx(-DEFAULT_DEVICE["gamma"] * 0.5, rel=1e-12)
        rho2 = np.zeros((3, 3), dtype=complex)
        rho2[1, 2] = rho2[2, 1] = 0.5
        out2 = apply_generator(deph.generator, rho2)
        assert out2[1, 2] == pytest.approx(-2.0 * DEFAULT_DEVICE["gamma"] * 0.5, rel=1e-12)

    def test_v_zero_kills_coherence_and_heat(self):
        params = dict(DEFAULT_DEVICE)
        params["v"] = 0.0
        rep = device_report(DeviceParams(**params))
        assert abs(rep.coherence) < 1e-12
        assert abs(rep.heat_l) < 1e-12 and abs(rep.heat_r) < 1e-12 and abs(rep.heat_d) < 1e-12
        assert math.isnan(rep.x_l) and math.isnan(rep.x_d)

    def test_ordering_invariant(self):
        with pytest.raises(InvalidParams):
            DeviceParams(e_l=1.0, e_r=1.5, v=0.4, n_l=0.6, n_r=0.2, gamma=0.3)


class TestDeviceReport:
    def test_preset_regression(self):
        rep = device_report(DeviceParams(**DEFAULT_DEVICE), c=1.0)
        assert rep.m_ld == pytest.approx(0.072, abs=1e-12)
        assert rep.m_dl == pytest.approx(0.072, abs=1e-12)
        # regression values pinned from this package's own solver
        assert rep.heat_l == pytest.approx(0.027779726411784646, rel=1e-9)
        assert rep.heat_r == pytest.approx(-0.02525429673798666, rel=1e-9)
        assert rep.heat_d == pytest.approx(-0.002525429673798669, rel=1e-9)
        assert rep.entropy_production == pytest.approx(0.05601582265907108, rel=1e-9)
        assert rep.x_l == pytest.approx(0.08743421938129305, rel=1e-9)

    def test_heat_sum_rule_gamma_zero(self):
        # two baths only: Q_r = -Q_l through the coherent coupling
        params = dict(DEFAULT_DEVICE)
        params["gamma"] = 0.0
        rep = device_report(DeviceParams(**params))
        assert rep.heat_r == pytest.approx(-rep.heat_l, abs=1e-12)
        assert rep.heat_d == 0.0

    def test_symmetric_dead_case_heats_vanish(self):
        p = DeviceParams(e_l=1.5, e_r=1.0, v=0.0, n_l=0.4, n_r=0.4, gamma=0.0)
        rep = device_report(p)
        assert rep.heat_l == pytest.approx(0.0, abs=1e-12)
        assert rep.heat_r == pytest.approx(0.0, abs=1e-12)
        assert rep.heat_d == 0.0
        assert rep.entropy_production == pytest.approx(0.0, abs=1e-10)

    def test_energy_balance_random_draws(self, rng):
        for _ in range(50):
            p = DeviceParams(
                e_l=1.0 + rng.uniform(0.1, 1.0),
                e_r=rng.uniform(0.2, 1.0),
                v=rng.uniform(-0.8, 0.8),
                n_l=rng.uniform(0.05, 1.5),
                n_r=rng.uniform(0.05, 1.5),
                gamma=rng.uniform(0.0, 1.5),
            )
            rep = device_report(p)
            total = rep.heat_l + rep.heat_r + rep.heat_d
            scale = max(abs(rep.heat_l), abs(rep.heat_r), 1e-30)
            assert abs(total) <= 1e-9 * scale + 1e-12
            assert rep.entropy_production >= -1e-9


class TestGammaSweep:
    def test_columns_and_zeno(self):
        base = DeviceParams(**{**DEFAULT_DEVICE, "gamma": 0.0})
        max_rate = 1.0 + DEFAULT_DEVICE["n_l"]
        gammas = [0.0, 1.0, 10.0, 100.0 * max_rate]
        points = gamma_sweep(base, gammas, c=1.0)
        assert [pt.gamma for pt in points] == gammas
        assert all(pt.report is not None for pt in points)
        assert points[0].report.heat_d == 0.0
        cohs = [abs(pt.report.coherence) for pt in points]
        assert cohs[-1] < cohs[0]
        assert all(b <= a for a, b in zip(cohs, cohs[1:]))

    def test_m_ld_linear_in_gamma(self):
        base = DeviceParams(**{**DEFAULT_DEVICE, "gamma": 0.0})
        gammas = [0.0, 0.5, 1.0, 2.0]
        c = 1.7
        points = gamma_sweep(base, gammas, c=c)
        slope = DEFAULT_DEVICE["n_l"] * DEFAULT_DEVICE["v"] * c
        for pt in points:
            assert pt.report.m_ld == pytest.approx(slope * pt.gamma, abs=1e-12)

    def test_unsorted_rejected(self):
        base = DeviceParams(**DEFAULT_DEVICE)
        with pytest.raises(InvalidParams):
            gamma_sweep(base, [1.0, 0.5])


def test_gamma_sweep_flags_failures_and_continues(monkeypatch):
    import decotherm.scenarios as sc
    from decotherm.errors import DegenerateKernel

    real_report = sc.device_report

    def sometimes_boom(p, c=1.0):
        if p.gamma == 0.5:
            raise DegenerateKernel("synthetic failure")
        return real_report(p, c)

    monkeypatch.setattr(sc, "device_report", sometimes_boom)
    base = DeviceParams(**{**DEFAULT_DEVICE, "gamma": 0.0})
    points = sc.gamma_sweep(base, [0.0, 0.5, 1.0])
    assert points[1].report is None and "synthetic" in points[1].failure
    assert points[0].report is not None and points[2].report is not None
