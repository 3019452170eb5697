"""decotherm: thermodynamics of decoherence baths.

Lindblad dynamics of small open quantum systems with equilibrium defined by
relative entropy to a bath's stationary set, first/second-law bookkeeping
for baths without a temperature, and the reciprocal linear-response
relations between decoherence and transport.
"""

from ._kernels import backend_name
from .baths import (
    Bath,
    GibbsClosedForm,
    JumpTerm,
    LindbladGenerator,
    PinchingClosedForm,
    PropagateToFixedPoint,
    apply_generator,
    apply_generator_heisenberg,
    dephasing_bath,
    generator_superop,
    gibbs_state,
    left_pump_bath,
    left_pump_bath_from_beta,
    right_pump_bath,
    right_pump_bath_from_beta,
    stationary_map,
    thermal_occupation,
    thermal_two_level_bath,
)
from .dynamics import (
    EvolutionSpec,
    Trajectory,
    default_timestep,
    liouvillian,
    propagate,
    steady_state,
)
from .onsager import (
    ForceFlowPair,
    LinearResponse,
    flow,
    force,
    force_flow_pairs,
    force_parameters,
    linear_flow_prediction,
    linear_response,
    ness_entropy_production,
    onsager_superop,
    reciprocal_coefficients,
)
from .operators import (
    SuperOperator,
    assert_density_matrix,
    hermitize,
    hs_inner,
    is_density_matrix,
    is_hermitian,
    matrix_exp_hermitian,
    matrix_log_on_support,
    superop_from_action,
    superop_hs_adjoint,
    unvectorize,
    vectorize,
)
from .scenarios import (
    DEFAULT_DEVICE,
    DeviceAssembly,
    DeviceParams,
    DeviceReport,
    TwoLevelDecoherenceParams,
    bloch_coordinates,
    bloch_state,
    build_device,
    device_dephasing_bath,
    device_report,
    gamma_sweep,
    two_level_decoherence_heat,
)
from .thermo import (
    ThermoSample,
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

__version__ = "0.1.0"
