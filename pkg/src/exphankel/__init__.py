"""Approximation of sampled signals by sums of complex exponentials.

The core routine alternates between the best rank-``k`` approximation of a
(weighted) Hankel matrix, computed with a partial Takagi factorization, and
the projection back onto Hankel matrices.  Root-MUSIC and ESPRIT are
included for comparison.
"""

__version__ = "0.1.0"

from .errors import (
    CornerSingularError,
    ExtractionFailure,
    IllPosedError,
    InsufficientDataError,
    InvalidArgumentError,
    NumericalFailure,
    RankDeficiencyError,
)
from .model import (
    ExponentialModel,
    TrialConfig,
    WeightPair,
    add_noise,
    gaussian_weight,
    induced_weight,
    random_model,
    synthesize,
    uniform_weight,
    weighted_norm,
)
from .hankel import HankelOperator, RankFactors, adjoint_average
from .takagi import LanczosControls, partial_takagi, rank_k_project_weighted
from .altproj import AltProjConfig, AltProjReport, alternate_project, estimate_rate
from .nodes import NodeSet, extract_nodes_subspace, fit_coefficients, match_nodes, model_from_signal
from .baselines import esprit, root_music, sample_covariance
from .theory import kernel_dimension_profile, tangent_rank_check, verify_recursion

__all__ = [
    "CornerSingularError",
    "ExtractionFailure",
    "IllPosedError",
    "InsufficientDataError",
    "InvalidArgumentError",
    "NumericalFailure",
    "RankDeficiencyError",
    "ExponentialModel",
    "TrialConfig",
    "WeightPair",
    "add_noise",
    "gaussian_weight",
    "induced_weight",
    "random_model",
    "synthesize",
    "uniform_weight",
    "weighted_norm",
    "HankelOperator",
    "RankFactors",
    "adjoint_average",
    "LanczosControls",
    "partial_takagi",
    "rank_k_project_weighted",
    "AltProjConfig",
    "AltProjReport",
    "alternate_project",
    "estimate_rate",
    "NodeSet",
    "extract_nodes_subspace",
    "fit_coefficients",
    "match_nodes",
    "model_from_signal",
    "esprit",
    "root_music",
    "sample_covariance",
    "kernel_dimension_profile",
    "tangent_rank_check",
    "verify_recursion",
]
