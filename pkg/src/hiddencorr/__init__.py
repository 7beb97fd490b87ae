"""Hidden quantum correlations in reductions of classically correlated states.

Builds classically correlated bipartite states, reduces them onto subsets of
their tensor factors and measures the quantum correlations that appear,
using measurement-induced disturbance (MID) and symmetric discord.
"""
from . import _backend
from ._config import Tolerances, get_tolerances, tolerances
from .correlations import (
    BoundCheck,
    CorrelationReport,
    DiscordOptions,
    MeasurementPair,
    check_bounds,
    commutation_classicality,
    correlation_report,
    dephase,
    mid,
    mutual_information,
    symmetric_discord,
)
from .families import (
    canonical_basis_a,
    family_alpha,
    family_gamma,
    family_lambda,
    lambda_limit_point,
    mid_upper_envelope,
    sample_random_classical,
)
from .linalg import Spectrum, hermitian_eig, partial_trace, tensor_product
from .states import (
    ClassicalStateSpec,
    DensityMatrix,
    SubsystemLayout,
    build_classical_state,
    marginal_distributions,
    reduce,
    shannon_entropy,
    von_neumann_entropy,
)

__version__ = "0.1.0"

backend = _backend.name
use_backend = _backend.use_backend
