"""Steady-state flows and forces, linear-response super-operators, and
reciprocal transport/decoherence coefficients.

At a non-equilibrium steady state nu, each bath b carries a flow
J_b = L_b(nu) and a force X_b = log B_b(nu) - log nu; their Hilbert-
Schmidt pairing sums to the entropy production rate. The linear-response
map M_{b,a} = c * L_b . L_a† predicts flows from forces and satisfies the
reciprocity M_{b,a} = M_{a,b}† exactly by construction. The constant c is
an explicit parameter (default 1); reciprocity and the coefficient
equality below do not depend on it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, NamedTuple, Sequence

import numpy as np

from .baths import (
    Bath,
    apply_generator,
    apply_generator_heisenberg,
    generator_superop,
    stationary_map,
)
from .errors import DimensionMismatch, MissingPair, SupportViolation, ZeroCoherence
from .operators import (
    DEFAULT_EIG_CUT,
    SuperOperator,
    hermitize,
    hs_inner,
    matrix_log_on_support,
)
from .thermo import SUPPORT_TOL, _Spectral


@dataclass(frozen=True, eq=False)
class ForceFlowPair:
    bath_name: str
    flow: np.ndarray
    force: np.ndarray


def flow(bath: Bath, nu: np.ndarray) -> np.ndarray:
    """J_b = L_b(nu), hermitized."""
    if nu.shape != (bath.dim, bath.dim):
        raise DimensionMismatch(f"state shape {nu.shape} does not match bath dim {bath.dim}")
    return hermitize(apply_generator(bath.generator, nu))


def force(bath: Bath, nu: np.ndarray, eig_cut: float = DEFAULT_EIG_CUT) -> np.ndarray:
    """X_b = log B_b(nu) - log nu, logs taken on the support."""
    if nu.shape != (bath.dim, bath.dim):
        raise DimensionMismatch(f"state shape {nu.shape} does not match bath dim {bath.dim}")
    b = _Spectral(stationary_map(bath, nu), eig_cut)
    leak = b.leak_of(nu)
    if leak > SUPPORT_TOL:
        raise SupportViolation(
            f"state has weight {leak:.3e} outside supp(B(nu)) for bath {bath.name}"
        )
    return b.log - matrix_log_on_support(hermitize(nu), eig_cut)


def force_flow_pairs(baths: Sequence[Bath], nu: np.ndarray) -> list[ForceFlowPair]:
    return [ForceFlowPair(b.name, flow(b, nu), force(b, nu)) for b in baths]


def ness_entropy_production(baths: Sequence[Bath], nu: np.ndarray) -> float:
    """P = sum_b Tr[J_b X_b]; agrees with thermo.entropy_production."""
    total = 0.0 + 0.0j
    for b in baths:
        total += hs_inner(flow(b, nu), force(b, nu))
    if abs(total.imag) > 1e-10:
        raise ValueError(f"entropy production picked up imaginary part {total.imag:.3e}")
    return float(total.real)


def onsager_superop(b: Bath, a: Bath, c: float = 1.0) -> SuperOperator:
    """M_{b,a}: X -> c * L_b(L_a†(X)), with L_a† the Heisenberg adjoint."""
    if b.dim != a.dim:
        raise DimensionMismatch(f"bath dims differ: {b.dim} vs {a.dim}")
    sb = generator_superop(b.generator)
    sa = generator_superop(a.generator)
    return SuperOperator(b.dim, c * (sb.matrix @ sa.matrix.conj().T))


@dataclass(frozen=True, eq=False)
class LinearResponse:
    pairs: dict[tuple[str, str], SuperOperator]
    coupling_constant: float


def linear_response(baths: Sequence[Bath], c: float = 1.0) -> LinearResponse:
    pairs = {(b.name, a.name): onsager_superop(b, a, c) for b in baths for a in baths}
    return LinearResponse(pairs, c)


def linear_flow_prediction(
    lr: LinearResponse, forces: Mapping[str, np.ndarray]
) -> dict[str, np.ndarray]:
    """J_b ~ sum_a M_{b,a}(X_a) over the named baths."""
    out: dict[str, np.ndarray] = {}
    for b_name in forces:
        total = None
        for a_name, x_a in forces.items():
            key = (b_name, a_name)
            if key not in lr.pairs:
                raise MissingPair(f"linear response has no entry for pair {key}")
            term = lr.pairs[key].apply(x_a)
            total = term if total is None else total + term
        out[b_name] = total
    return out


class ForceParameters(NamedTuple):
    x_d: float
    x_l: float


def force_parameters(nu: np.ndarray, coherence_tol: float = 1e-12) -> ForceParameters:
    """Scalar force parameters of the three-level device steady state.

    x_l = <L|log nu|R> + <R|log nu|L> (real for Hermitian nu). x_d is the
    L-R off-diagonal content of the dephasing force X_d = log B_d(nu) -
    log nu; since the pinched state's log is diagonal, x_d = -x_l.
    """
    if nu.shape != (3, 3):
        raise DimensionMismatch(f"force parameters need a 3x3 device state, got {nu.shape}")
    if abs(nu[1, 2]) <= coherence_tol:
        raise ZeroCoherence("state has no L-R coherence; x_d is undefined")
    log_nu = matrix_log_on_support(hermitize(nu))
    x_l = float((log_nu[1, 2] + log_nu[2, 1]).real)
    return ForceParameters(x_d=-x_l, x_l=x_l)


class ReciprocalCoefficients(NamedTuple):
    m_ld: float
    m_dl: float


def reciprocal_coefficients(
    hamiltonian: np.ndarray,
    left_bath: Bath,
    dephasing_bath: Bath,
    c: float = 1.0,
) -> ReciprocalCoefficients:
    """Coefficients coupling H to the (|L><R| + |R><L|) sector of the two
    cross compositions L_d†(L_l(H)) and L_l†(L_d(H)).

    Both equal c * gamma * n_L * V; their equality is the reciprocity of
    decoherence and transport.
    """
    coh = np.zeros((3, 3), dtype=complex)
    coh[1, 2] = coh[2, 1] = 1.0
    y_ld = apply_generator_heisenberg(
        dephasing_bath.generator, apply_generator(left_bath.generator, hamiltonian)
    )
    y_dl = apply_generator_heisenberg(
        left_bath.generator, apply_generator(dephasing_bath.generator, hamiltonian)
    )
    m_ld = c * float(hs_inner(coh, y_ld).real) / 2.0
    m_dl = c * float(hs_inner(coh, y_dl).real) / 2.0
    return ReciprocalCoefficients(m_ld=m_ld, m_dl=m_dl)
