"""Shared test helpers: random states, Paulis, and brute-force oracles."""

import numpy as np
import pytest

SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SY = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SZ = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def random_complex(rng, d):
    return rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))


def random_hermitian(rng, d):
    a = random_complex(rng, d)
    return 0.5 * (a + a.conj().T)


def ginibre_state(rng, d, mix=0.0):
    """Random full-rank density matrix; mix > 0 blends in the maximally
    mixed state to keep the spectrum away from zero."""
    x = random_complex(rng, d)
    rho = x @ x.conj().T
    rho /= np.trace(rho).real
    if mix:
        rho = (1.0 - mix) * rho + mix * np.eye(d) / d
    return rho


def dissipator_oracle(rho, terms):
    """Direct per-term arithmetic: sum r (2 A rho A† - A†A rho - rho A†A)."""
    out = np.zeros_like(rho, dtype=complex)
    for rate, a in terms:
        ad = a.conj().T
        out = out + rate * (2.0 * a @ rho @ ad - ad @ a @ rho - rho @ ad @ a)
    return out


def unitary_evolution_oracle(h, rho0, t):
    """Closed-form e^{-iHt} rho e^{+iHt} through the eigenbasis of H."""
    lam, u = np.linalg.eigh(h)
    phases = np.exp(-1j * lam * t)
    prop = (u * phases) @ u.conj().T
    return prop @ rho0 @ prop.conj().T


def trace_distance(a, b):
    lam = np.linalg.eigvalsh(a - b)
    return 0.5 * float(np.sum(np.abs(lam)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
