"""Lindblad generators and their stationary maps.

A bath is a generator plus a strategy for evaluating its stationary map
B(rho) = lim_{t->inf} exp(t L)(rho): closed-form Gibbs projection for
relaxation baths, pinching for decoherence baths, and exact exponential
propagation for anything else (the three-level pump baths, whose stationary
set depends on the initial state).

Dissipator convention (factor 2, no 1/2 on the anticommutator):

    L(rho) = sum_k rate_k (2 A_k rho A_k† - A_k†A_k rho - rho A_k†A_k)

so a dephasing bath at rate gamma kills off-diagonals at rate 2*gamma.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np
import scipy.linalg

from .errors import (
    DimensionMismatch,
    InvalidParams,
    NoConvergence,
    NonPositiveBeta,
    NonPositiveOccupation,
    NotOrthonormal,
)
from .operators import (
    hermitize,
    matrix_exp_hermitian,
    require_square,
    superop_from_action,
    unvectorize,
    vectorize,
)


@dataclass(frozen=True, eq=False)
class JumpTerm:
    rate: float
    jump: np.ndarray

    def __post_init__(self):
        if self.rate < 0:
            raise InvalidParams(f"jump rate must be >= 0, got {self.rate}")
        require_square(self.jump, "jump operator")


@dataclass(frozen=True, eq=False)
class LindbladGenerator:
    dim: int
    terms: tuple[JumpTerm, ...]

    def __post_init__(self):
        for t in self.terms:
            if t.jump.shape != (self.dim, self.dim):
                raise DimensionMismatch(
                    f"jump operator shape {t.jump.shape} does not match dim {self.dim}"
                )
        n = len(self.terms)
        jumps = np.zeros((n, self.dim, self.dim), dtype=np.complex128)
        for k, t in enumerate(self.terms):
            jumps[k] = t.jump
        jjs = np.einsum("kji,kjl->kil", jumps.conj(), jumps)
        rates = np.array([t.rate for t in self.terms], dtype=float)
        object.__setattr__(self, "_jumps", jumps)
        object.__setattr__(self, "_jjs", jjs)
        object.__setattr__(self, "_rates", rates)

    # pre-stacked views used by the propagation kernels
    @property
    def jump_stack(self) -> np.ndarray:
        return self._jumps

    @property
    def jj_stack(self) -> np.ndarray:
        return self._jjs

    @property
    def rate_stack(self) -> np.ndarray:
        return self._rates


def apply_generator(gen: LindbladGenerator, a: np.ndarray) -> np.ndarray:
    """Schrodinger-picture action: sum_k r_k (2 A a A† - A†A a - a A†A)."""
    if a.shape != (gen.dim, gen.dim):
        raise DimensionMismatch(f"operator shape {a.shape} does not match dim {gen.dim}")
    out = np.zeros_like(a, dtype=complex)
    jumps, jjs, rates = gen.jump_stack, gen.jj_stack, gen.rate_stack
    for k in range(rates.shape[0]):
        aa = jumps[k]
        out += rates[k] * (2.0 * (aa @ a @ aa.conj().T) - jjs[k] @ a - a @ jjs[k])
    return out


def apply_generator_heisenberg(gen: LindbladGenerator, x: np.ndarray) -> np.ndarray:
    """Heisenberg-picture (Hilbert-Schmidt adjoint) action on observables:
    sum_k r_k (2 A† x A - A†A x - x A†A)."""
    if x.shape != (gen.dim, gen.dim):
        raise DimensionMismatch(f"operator shape {x.shape} does not match dim {gen.dim}")
    out = np.zeros_like(x, dtype=complex)
    jumps, jjs, rates = gen.jump_stack, gen.jj_stack, gen.rate_stack
    for k in range(rates.shape[0]):
        aa = jumps[k]
        out += rates[k] * (2.0 * (aa.conj().T @ x @ aa) - jjs[k] @ x - x @ jjs[k])
    return out


def generator_superop(gen: LindbladGenerator):
    """Vectorized matrix of the generator's Schrodinger action."""
    return superop_from_action(gen.dim, lambda m: apply_generator(gen, m))


# ---------------------------------------------------------------------------
# stationary-map strategies
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GibbsClosedForm:
    hamiltonian: np.ndarray
    beta: float


@dataclass(frozen=True, eq=False)
class PinchingClosedForm:
    basis: np.ndarray  # unitary matrix whose columns are the preferred basis


@dataclass(frozen=True, eq=False)
class PropagateToFixedPoint:
    tol: float = 1e-11
    t_max: float | None = None  # None: 1e3 / smallest nonzero rate


StationaryStrategy = Union[GibbsClosedForm, PinchingClosedForm, PropagateToFixedPoint]


@dataclass(frozen=True, eq=False)
class Bath:
    name: str
    generator: LindbladGenerator
    stationary_strategy: StationaryStrategy
    _fp_map: np.ndarray | None = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return self.generator.dim


def gibbs_state(hamiltonian: np.ndarray, beta: float) -> np.ndarray:
    g = matrix_exp_hermitian(-beta * hamiltonian)
    return g / np.trace(g).real


def _fixed_point_map(bath: Bath) -> np.ndarray:
    """exp(L * t_eff) as a d²×d² matrix, cached on the bath."""
    if bath._fp_map is not None:
        return bath._fp_map
    strat = bath.stationary_strategy
    rates = bath.generator.rate_stack
    positive = rates[rates > 0]
    if strat.t_max is not None:
        t_eff = strat.t_max
    elif positive.size:
        t_eff = 1e3 / float(positive.min())
    else:
        t_eff = 0.0  # no dissipation: every state already stationary
    lmat = generator_superop(bath.generator).matrix
    fp = scipy.linalg.expm(lmat * t_eff)
    object.__setattr__(bath, "_fp_map", fp)
    return fp


def stationary_map(bath: Bath, rho: np.ndarray) -> np.ndarray:
    """Evaluate B(rho), the infinite-time limit of the bath's dynamical map."""
    if rho.shape != (bath.dim, bath.dim):
        raise DimensionMismatch(f"state shape {rho.shape} does not match bath dim {bath.dim}")
    strat = bath.stationary_strategy
    if isinstance(strat, GibbsClosedForm):
        return gibbs_state(strat.hamiltonian, strat.beta)
    if isinstance(strat, PinchingClosedForm):
        u = strat.basis
        probs = np.diag(u.conj().T @ rho @ u).copy()
        return (u * probs) @ u.conj().T
    out = unvectorize(_fixed_point_map(bath) @ vectorize(rho), bath.dim)
    out = hermitize(out)
    out /= np.trace(out).real
    resid = float(np.linalg.norm(apply_generator(bath.generator, out)))
    if resid >= strat.tol:
        raise NoConvergence(
            f"stationary_map({bath.name}): residual {resid:.3e} >= tol {strat.tol:.1e} "
            f"after propagating to t_max"
        )
    return out


# ---------------------------------------------------------------------------
# bath constructors
# ---------------------------------------------------------------------------

def thermal_occupation(beta: float, energy: float) -> float:
    """Bose factor 1/(exp(beta*energy) - 1), overflow-safe."""
    if beta <= 0:
        raise NonPositiveBeta(f"beta must be > 0, got {beta}")
    if energy <= 0:
        raise InvalidParams(f"occupation needs a positive level splitting, got {energy}")
    e = np.exp(-beta * energy)
    return float(e / (1.0 - e))


def dephasing_bath(basis: Sequence[np.ndarray], gamma: float, name: str = "dephasing") -> Bath:
    """Continuous measurement along an orthonormal basis {|j>}.

    One jump |j><j| per basis vector, all at the same rate.
    """
    if gamma <= 0:
        raise InvalidParams(f"dephasing rate must be > 0, got {gamma}")
    u = np.column_stack([np.asarray(v, dtype=complex).reshape(-1) for v in basis])
    d = u.shape[0]
    if u.shape != (d, d):
        raise NotOrthonormal(f"need {d} basis vectors of length {d}, got matrix shape {u.shape}")
    gram = u.conj().T @ u
    if np.max(np.abs(gram - np.eye(d))) > 1e-12:
        raise NotOrthonormal("basis is not orthonormal within 1e-12")
    terms = tuple(JumpTerm(gamma, np.outer(u[:, j], u[:, j].conj())) for j in range(d))
    gen = LindbladGenerator(d, terms)
    return Bath(name, gen, PinchingClosedForm(u))


def thermal_two_level_bath(
    e_excited: float, beta: float, rate_scale: float, name: str = "thermal"
) -> Bath:
    """Two-level relaxation bath with Gibbs stationary state.

    Decay |g><e| at rate_scale*(1+n), excitation |e><g| at rate_scale*n, with
    n = 1/(exp(beta*e_excited) - 1). Basis order (|g>, |e>), H = diag(0, E).
    """
    if beta <= 0:
        raise NonPositiveBeta(f"beta must be > 0, got {beta}")
    if rate_scale <= 0:
        raise InvalidParams(f"rate_scale must be > 0, got {rate_scale}")
    n = thermal_occupation(beta, e_excited)
    decay = np.array([[0, 1], [0, 0]], dtype=complex)   # |g><e|
    excite = np.array([[0, 0], [1, 0]], dtype=complex)  # |e><g|
    gen = LindbladGenerator(
        2, (JumpTerm(rate_scale * (1.0 + n), decay), JumpTerm(rate_scale * n, excite))
    )
    h = np.diag([0.0, e_excited]).astype(complex)
    return Bath(name, gen, GibbsClosedForm(h, beta))


def _three_level_unit(i: int, j: int) -> np.ndarray:
    m = np.zeros((3, 3), dtype=complex)
    m[i, j] = 1.0
    return m


def left_pump_bath(n_l: float, name: str = "left") -> Bath:
    """Left relaxation bath of the three-level device, basis (|0>, |L>, |R>).

    Pumping term |L><0| carries the (1+n) factor, verbatim from the model
    this implements; the placement is opposite to the usual thermal
    convention and is intentional.
    """
    if n_l <= 0:
        raise NonPositiveOccupation(f"n_l must be > 0, got {n_l}")
    gen = LindbladGenerator(
        3,
        (
            JumpTerm(1.0 + n_l, _three_level_unit(1, 0)),  # |L><0|
            JumpTerm(n_l, _three_level_unit(0, 1)),        # |0><L|
        ),
    )
    return Bath(name, gen, PropagateToFixedPoint())


def right_pump_bath(n_r: float, name: str = "right") -> Bath:
    """Right relaxation bath of the three-level device, basis (|0>, |L>, |R>)."""
    if n_r <= 0:
        raise NonPositiveOccupation(f"n_r must be > 0, got {n_r}")
    gen = LindbladGenerator(
        3,
        (
            JumpTerm(n_r, _three_level_unit(2, 0)),        # |R><0|
            JumpTerm(1.0 + n_r, _three_level_unit(0, 2)),  # |0><R|
        ),
    )
    return Bath(name, gen, PropagateToFixedPoint())


def left_pump_bath_from_beta(beta: float, e_l: float, name: str = "left") -> Bath:
    return left_pump_bath(thermal_occupation(beta, e_l), name=name)


def right_pump_bath_from_beta(beta: float, e_r: float, name: str = "right") -> Bath:
    return right_pump_bath(thermal_occupation(beta, e_r), name=name)
