"""Hot propagation kernels: master-equation RHS and fixed-step RK4 loops.

The inner loops dominate runtime for long trajectories of small (d <= 16)
density matrices, where per-call numpy overhead outweighs the arithmetic.
They are compiled with numba when it is importable; setting the environment
variable DECOTHERM_NO_NUMBA=1 forces the pure-numpy fallback. Both paths
implement identical semantics (hermitize after every step, cheap Gershgorin
positivity screen with an exact eigenvalue check only when the screen
fires) and are compared by tests and by benchmarks/bench_propagation.py.

Kernel inputs are pre-stacked arrays: h (d, d), jumps (n, d, d),
jjs[k] = jumps[k]† jumps[k], rates (n,). The dissipator convention is
sum_k rate_k (2 A rho A† - A†A rho - rho A†A).
"""

from __future__ import annotations

import os

import numpy as np

_env = os.environ.get("DECOTHERM_NO_NUMBA", "").strip().lower()
_numba_wanted = _env not in ("1", "true", "yes")

try:
    if not _numba_wanted:
        raise ImportError("numba disabled via DECOTHERM_NO_NUMBA")
    from numba import njit

    NUMBA_ENABLED = True
except ImportError:
    NUMBA_ENABLED = False


# ---------------------------------------------------------------------------
# pure-numpy reference path
# ---------------------------------------------------------------------------

def master_rhs_numpy(h, jumps, jjs, rates, rho):
    """-i[H, rho] + dissipator, vectorized over the jump-term stack."""
    out = -1j * (h @ rho - rho @ h)
    for k in range(rates.shape[0]):
        a = jumps[k]
        out += rates[k] * (2.0 * (a @ rho @ a.conj().T) - jjs[k] @ rho - rho @ jjs[k])
    return out


def _gershgorin_min(rho):
    diag = np.real(np.diag(rho))
    offs = np.sum(np.abs(rho), axis=1) - np.abs(np.diag(rho))
    return float(np.min(diag - offs))


def rk4_segment_numpy(h, jumps, jjs, rates, rho0, dt, n_steps, pos_tol):
    """Classical RK4 with fixed step; returns (states, bad_step).

    states has shape (n_steps + 1, d, d); bad_step is the index of the first
    step whose state fell below -pos_tol in its smallest eigenvalue, or -1.
    """
    d = rho0.shape[0]
    states = np.empty((n_steps + 1, d, d), dtype=np.complex128)
    states[0] = rho0
    rho = rho0.copy()
    jdags = np.conj(np.transpose(jumps, (0, 2, 1)))
    r = rates[:, None, None]
    dissipative = rates.shape[0] > 0

    def rhs(m):
        out = -1j * (h @ m - m @ h)
        if dissipative:
            out = out + np.sum(r * (2.0 * ((jumps @ m) @ jdags) - jjs @ m - m @ jjs), axis=0)
        return out

    for s in range(n_steps):
        k1 = rhs(rho)
        k2 = rhs(rho + 0.5 * dt * k1)
        k3 = rhs(rho + 0.5 * dt * k2)
        k4 = rhs(rho + dt * k3)
        rho = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        rho = 0.5 * (rho + rho.conj().T)
        if _gershgorin_min(rho) < -pos_tol:
            if float(np.linalg.eigvalsh(rho)[0]) < -pos_tol:
                return states, s
        states[s + 1] = rho
    return states, -1


# ---------------------------------------------------------------------------
# numba path (explicit loops; small-d matmul beats BLAS call overhead)
# ---------------------------------------------------------------------------

if NUMBA_ENABLED:

    @njit(cache=True)
    def _rhs_nb(h, jumps, jjs, rates, rho, out):
        d = rho.shape[0]
        for i in range(d):
            for j in range(d):
                acc = 0.0 + 0.0j
                for k in range(d):
                    acc += h[i, k] * rho[k, j] - rho[i, k] * h[k, j]
                out[i, j] = -1j * acc
        for t in range(rates.shape[0]):
            a = jumps[t]
            q = jjs[t]
            r = rates[t]
            for i in range(d):
                for j in range(d):
                    acc = 0.0 + 0.0j
                    for k in range(d):
                        arho = 0.0 + 0.0j
                        for m in range(d):
                            arho += a[i, m] * rho[m, k]
                        acc += 2.0 * arho * np.conj(a[j, k])
                        acc -= q[i, k] * rho[k, j] + rho[i, k] * q[k, j]
                    out[i, j] += r * acc

    @njit(cache=True)
    def _rk4_segment_nb(h, jumps, jjs, rates, rho0, dt, n_steps, pos_tol):
        d = rho0.shape[0]
        states = np.empty((n_steps + 1, d, d), np.complex128)
        states[0] = rho0
        rho = rho0.copy()
        k1 = np.empty((d, d), np.complex128)
        k2 = np.empty((d, d), np.complex128)
        k3 = np.empty((d, d), np.complex128)
        k4 = np.empty((d, d), np.complex128)
        tmp = np.empty((d, d), np.complex128)
        for s in range(n_steps):
            _rhs_nb(h, jumps, jjs, rates, rho, k1)
            for i in range(d):
                for j in range(d):
                    tmp[i, j] = rho[i, j] + 0.5 * dt * k1[i, j]
            _rhs_nb(h, jumps, jjs, rates, tmp, k2)
            for i in range(d):
                for j in range(d):
                    tmp[i, j] = rho[i, j] + 0.5 * dt * k2[i, j]
            _rhs_nb(h, jumps, jjs, rates, tmp, k3)
            for i in range(d):
                for j in range(d):
                    tmp[i, j] = rho[i, j] + dt * k3[i, j]
            _rhs_nb(h, jumps, jjs, rates, tmp, k4)
            for i in range(d):
                for j in range(d):
                    rho[i, j] = rho[i, j] + (dt / 6.0) * (
                        k1[i, j] + 2.0 * k2[i, j] + 2.0 * k3[i, j] + k4[i, j]
                    )
            for i in range(d):
                rho[i, i] = complex(rho[i, i].real, 0.0)
                for j in range(i + 1, d):
                    v = 0.5 * (rho[i, j] + np.conj(rho[j, i]))
                    rho[i, j] = v
                    rho[j, i] = np.conj(v)
            gmin = 1.0e300
            for i in range(d):
                offs = 0.0
                for j in range(d):
                    if j != i:
                        offs += abs(rho[i, j])
                b = rho[i, i].real - offs
                if b < gmin:
                    gmin = b
            if gmin < -pos_tol:
                w = np.linalg.eigvalsh(rho)
                if w[0] < -pos_tol:
                    return states, s
            states[s + 1] = rho
        return states, -1

    def master_rhs_numba(h, jumps, jjs, rates, rho):
        out = np.empty_like(rho)
        _rhs_nb(h, jumps, jjs, rates, rho, out)
        return out

    def rk4_segment_numba(h, jumps, jjs, rates, rho0, dt, n_steps, pos_tol):
        return _rk4_segment_nb(h, jumps, jjs, rates, rho0, dt, n_steps, pos_tol)

else:
    master_rhs_numba = None
    rk4_segment_numba = None


def backend_name() -> str:
    return "numba" if NUMBA_ENABLED else "numpy"


if NUMBA_ENABLED:
    master_rhs = master_rhs_numba
    rk4_segment = rk4_segment_numba
else:
    master_rhs = master_rhs_numpy
    rk4_segment = rk4_segment_numpy
