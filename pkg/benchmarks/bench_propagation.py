#!/usr/bin/env python3
"""Benchmark the propagation kernels: numba-jitted loops vs the pure-numpy
fallback, on the three-level transport device.

Usage: python benchmarks/bench_propagation.py [n_steps]

The numpy path is always available; the numba path is skipped when numba
is not importable or DECOTHERM_NO_NUMBA is set. Both paths must agree to
near machine precision on the same trajectory.
"""

import sys
import time

import numpy as np

from decotherm import _kernels
from decotherm.dynamics import EvolutionSpec, default_timestep
from decotherm.scenarios import DEFAULT_DEVICE, DeviceParams, build_device


def main():
    n_steps = int(sys.argv[1]) if len(sys.argv) > 1 else 200_000
    assembly = build_device(DeviceParams(**DEFAULT_DEVICE))
    spec = EvolutionSpec(assembly.hamiltonian, assembly.baths)
    dt = default_timestep(spec.hamiltonian, spec.baths)

    jumps = np.ascontiguousarray(
        np.concatenate([b.generator.jump_stack for b in assembly.baths])
    )
    jjs = np.ascontiguousarray(
        np.concatenate([b.generator.jj_stack for b in assembly.baths])
    )
    rates = np.concatenate([b.generator.rate_stack for b in assembly.baths])
    h = np.ascontiguousarray(assembly.hamiltonian)
    rho0 = np.ascontiguousarray(np.eye(3, dtype=complex) / 3.0)

    print(f"device propagation, d=3, {rates.size} jump terms, dt={dt:.3e}, "
          f"{n_steps} steps")

    t0 = time.perf_counter()
    states_np, bad = _kernels.rk4_segment_numpy(h, jumps, jjs, rates, rho0, dt, n_steps, 1e-6)
    t_np = time.perf_counter() - t0
    assert bad == -1
    print(f"  numpy : {t_np:8.3f} s  ({t_np / n_steps * 1e6:7.2f} us/step)")

    if _kernels.rk4_segment_numba is None:
        print("  numba : unavailable (not installed or DECOTHERM_NO_NUMBA set)")
        return

    # one warm-up call so JIT compilation is not billed to the benchmark
    _kernels.rk4_segment_numba(h, jumps, jjs, rates, rho0, dt, 10, 1e-6)
    t0 = time.perf_counter()
    states_nb, bad = _kernels.rk4_segment_numba(h, jumps, jjs, rates, rho0, dt, n_steps, 1e-6)
    t_nb = time.perf_counter() - t0
    assert bad == -1
    dev = float(np.max(np.abs(states_np - states_nb)))
    print(f"  numba : {t_nb:8.3f} s  ({t_nb / n_steps * 1e6:7.2f} us/step)")
    print(f"  speedup x{t_np / t_nb:.1f}, max |numpy - numba| = {dev:.2e}")
    assert dev < 1e-12


if __name__ == "__main__":
    main()
