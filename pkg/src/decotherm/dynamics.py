"""Time propagation, Liouvillian assembly, and steady-state solving.

    drho/dt = -i [H, rho] + sum_b L_b(rho)

Propagation is classical fixed-step RK4 with the state hermitized after
every step; positivity is checked but never projected back. Steady states
come from the dense eigendecomposition of the vectorized Liouvillian;
long-time propagation is kept only as a cross-check in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from . import _kernels
from .baths import Bath, apply_generator
from .errors import (
    DegenerateKernel,
    DimensionMismatch,
    InvalidParams,
    NoConvergence,
    NonPositiveSolution,
    StateInvariantViolated,
    TimeDependentHamiltonian,
)
from .operators import (
    SuperOperator,
    assert_density_matrix,
    commutator,
    hermitize,
    require_square,
    superop_from_action,
    unvectorize,
    vectorize,
)

#: Step-size safety factor; dt = DT_SAFETY / stiffness. Chosen so that the
#: centered-difference first-law residual stays below 1e-6 on every scenario
#: trajectory (the binding constraint is finite-difference truncation, not
#: integrator stability).
DT_SAFETY = 0.0025

#: Propagation flags states whose smallest eigenvalue falls below -POS_TOL.
POS_TOL = 1e-6

Schedule = Sequence[tuple[float, np.ndarray]]


@dataclass(frozen=True, eq=False)
class EvolutionSpec:
    """Hamiltonian (static array or piecewise-constant [(t_start, H), ...]),
    baths, and integrator controls."""

    hamiltonian: Union[np.ndarray, Schedule]
    baths: tuple[Bath, ...]
    t_max: float | None = None
    dt: float | None = None  # None: default_timestep()

    @property
    def dim(self) -> int:
        return require_square(self._first_hamiltonian())

    def _first_hamiltonian(self) -> np.ndarray:
        if self.is_schedule:
            return np.asarray(self.hamiltonian[0][1])
        return np.asarray(self.hamiltonian)

    @property
    def is_schedule(self) -> bool:
        return not isinstance(self.hamiltonian, np.ndarray)

    def segments(self) -> list[tuple[float, np.ndarray]]:
        """Normalized schedule: [(t_start, H), ...] starting at t = 0."""
        if not self.is_schedule:
            return [(0.0, np.asarray(self.hamiltonian, dtype=complex))]
        segs = [(float(t), np.asarray(h, dtype=complex)) for t, h in self.hamiltonian]
        if not segs:
            raise InvalidParams("empty Hamiltonian schedule")
        segs.sort(key=lambda th: th[0])
        if segs[0][0] != 0.0:
            raise InvalidParams("Hamiltonian schedule must start at t = 0")
        return segs

    def hamiltonian_at(self, t: float) -> np.ndarray:
        """Right-continuous lookup: H(t) = H_j for t in [t_j, t_{j+1})."""
        segs = self.segments()
        current = segs[0][1]
        for t_start, h in segs:
            if t_start <= t + 1e-15:
                current = h
            else:
                break
        return current


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # (n+1, d, d)

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0])

    def __len__(self) -> int:
        return self.times.shape[0]


def default_timestep(hamiltonian: Union[np.ndarray, Schedule], baths: Sequence[Bath]) -> float:
    """DT_SAFETY / max(||H||_2, dissipator stiffness bound 4*sum r_k ||A_k||²)."""
    if isinstance(hamiltonian, np.ndarray):
        hs = [hamiltonian]
    else:
        hs = [h for _, h in hamiltonian]
    h_norm = max((float(np.linalg.norm(h, 2)) for h in hs), default=0.0)
    stiff = 0.0
    for b in baths:
        for k in range(b.generator.rate_stack.shape[0]):
            a_norm = float(np.linalg.norm(b.generator.jump_stack[k], 2))
            stiff += 4.0 * b.generator.rate_stack[k] * a_norm**2
    scale = max(h_norm, stiff)
    if scale <= 0.0:
        return 1.0  # free evolution of nothing; any step is exact
    return DT_SAFETY / scale


def _stack_baths(baths: Sequence[Bath], dim: int):
    jumps = [b.generator.jump_stack for b in baths]
    jjs = [b.generator.jj_stack for b in baths]
    rates = [b.generator.rate_stack for b in baths]
    if jumps:
        return (
            np.ascontiguousarray(np.concatenate(jumps)),
            np.ascontiguousarray(np.concatenate(jjs)),
            np.concatenate(rates),
        )
    empty = np.zeros((0, dim, dim), dtype=np.complex128)
    return empty, empty.copy(), np.zeros(0)


def liouvillian(spec: EvolutionSpec) -> SuperOperator:
    """Vectorized matrix of the full right-hand side (static H only)."""
    if spec.is_schedule:
        raise TimeDependentHamiltonian(
            "liouvillian needs a static Hamiltonian; propagate the schedule instead"
        )
    h = np.asarray(spec.hamiltonian, dtype=complex)
    d = require_square(h, "hamiltonian")
    for b in spec.baths:
        if b.dim != d:
            raise DimensionMismatch(f"bath {b.name} dim {b.dim} does not match H dim {d}")

    def action(a: np.ndarray) -> np.ndarray:
        out = -1j * commutator(h, a)
        for b in spec.baths:
            out = out + apply_generator(b.generator, a)
        return out

    return superop_from_action(d, action)


def propagate(rho0: np.ndarray, spec: EvolutionSpec) -> Trajectory:
    """Fixed-step RK4 trajectory, recording every step.

    Raises StateInvariantViolated if positivity drifts below -1e-6
    (the signature of a step too large for the stiffness).
    """
    d = spec.dim
    if rho0.shape != (d, d):
        raise DimensionMismatch(f"initial state shape {rho0.shape} does not match dim {d}")
    assert_density_matrix(rho0, what="initial state")
    if spec.t_max is None or spec.t_max <= 0:
        raise InvalidParams("propagate needs t_max > 0")
    dt = spec.dt if spec.dt is not None else default_timestep(spec.hamiltonian, spec.baths)
    if dt <= 0:
        raise InvalidParams(f"dt must be > 0, got {dt}")
    if dt >= spec.t_max:
        raise InvalidParams(f"dt = {dt} must be smaller than t_max = {spec.t_max}")
    n_total = int(np.ceil(spec.t_max / dt - 1e-9))

    segs = spec.segments()
    boundaries = [min(int(round(t / dt)), n_total) for t, _ in segs] + [n_total]

    jumps, jjs, rates = _stack_baths(spec.baths, d)
    states = np.empty((n_total + 1, d, d), dtype=np.complex128)
    states[0] = rho0
    rho = np.ascontiguousarray(rho0, dtype=np.complex128)
    for i, (_, h) in enumerate(segs):
        k0, k1 = boundaries[i], boundaries[i + 1]
        if k1 <= k0:
            continue
        seg_states, bad = _kernels.rk4_segment(
            np.ascontiguousarray(h, dtype=np.complex128),
            jumps, jjs, rates, rho, dt, k1 - k0, POS_TOL,
        )
        if bad >= 0:
            raise StateInvariantViolated(
                f"positivity fell below -{POS_TOL:g} at t = {(k0 + bad + 1) * dt:.6g}; "
                f"dt = {dt:g} is too large"
            )
        states[k0 : k1 + 1] = seg_states
        rho = np.ascontiguousarray(seg_states[-1])

    drift = abs(float(np.trace(states[-1]).real) - 1.0)
    if drift > 1e-8:
        raise StateInvariantViolated(f"trace drifted by {drift:.3e} over the trajectory")
    times = np.arange(n_total + 1) * dt
    return Trajectory(times, states)


def steady_state(liouv: SuperOperator) -> np.ndarray:
    """Kernel vector of the Liouvillian as a density matrix.

    Uses the eigenvector with eigenvalue of smallest magnitude; raises
    DegenerateKernel when the kernel is not one-dimensional (e.g. pure
    dephasing, whose stationary set is a manifold) and NonPositiveSolution
    when the kernel vector cannot be normalized to a state.
    """
    d = liouv.dim
    ev, vecs = np.linalg.eig(liouv.matrix)
    order = np.argsort(np.abs(ev))
    radius = float(np.abs(ev[order[-1]]))
    if radius == 0.0:
        raise DegenerateKernel("Liouvillian is identically zero")
    if float(np.abs(ev[order[1]])) < 1e-8 * radius:
        raise DegenerateKernel(
            f"second eigenvalue |{ev[order[1]]:.3e}| < 1e-8 * spectral radius {radius:.3e}; "
            "stationary set is not unique"
        )
    m = unvectorize(vecs[:, order[0]], d)
    tr = complex(np.trace(m))
    if abs(tr) < 1e-10 * float(np.linalg.norm(m)):
        raise NonPositiveSolution("kernel vector is traceless; no stationary state")
    m = m * (tr.conjugate() / abs(tr))  # rotate phase so the trace is real positive
    nu = hermitize(m)
    nu /= np.trace(nu).real
    lam_min = float(np.linalg.eigvalsh(nu)[0])
    if lam_min < -1e-10:
        raise NonPositiveSolution(f"kernel vector has eigenvalue {lam_min:.3e} < -1e-10")
    resid = float(np.linalg.norm(liouv.matrix @ vectorize(nu)))
    if resid > 1e-9:
        raise NoConvergence(f"steady-state residual {resid:.3e} exceeds 1e-9")
    return nu
