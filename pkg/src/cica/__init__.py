"""Common information components analysis.

Relaxed Wyner common information for Gaussian pairs (closed form via CCA
and water-filling) and small finite alphabets (Lagrangian sweep solver),
plus the projection rules that turn the latent variable into per-source
features.
"""

from . import errors
from .cca import CcaBasis, cca_decompose, cca_project, leading_pair_fixed_point
from .discrete_ci import (
    Coupling,
    SolveReport,
    SolverOptions,
    build_coupling,
    ci_curve_discrete,
    conditional_mi_given_w,
    dsbs_joint,
    dsbs_wyner,
    entropy,
    latent_mutual_information,
    mutual_information,
    relaxation_given_w,
    solve_relaxed_wyner,
    solve_relaxed_wyner_multi,
    total_correlation,
)
from .estimation import estimate_gaussian, estimate_pmf
from .gaussian_ci import (
    GammaAllocation,
    ci_curve,
    component_count,
    mutual_info_rho,
    relaxed_ci_gaussian,
    scalar_relaxed_ci,
    waterfill,
)
from .model import (
    DiscreteJoint,
    GaussianJoint,
    InfoValue,
    MultiDiscreteJoint,
    validate_discrete,
    validate_gaussian,
    validate_multi_discrete,
)
from .projections import (
    GaussianLatentSpec,
    ProjectionOutputs,
    binary_vector_covariance,
    feature_mutual_information,
    gaussian_latent,
    project_discrete,
    project_discrete_map,
    project_gaussian,
    toy_binary_example,
)
from .whitening import WhitenedPair, canonical_matrix, inv_sqrt_psd

__version__ = "0.1.0"

__all__ = [
    "CcaBasis",
    "Coupling",
    "DiscreteJoint",
    "GammaAllocation",
    "GaussianJoint",
    "GaussianLatentSpec",
    "InfoValue",
    "MultiDiscreteJoint",
    "ProjectionOutputs",
    "SolveReport",
    "SolverOptions",
    "WhitenedPair",
    "binary_vector_covariance",
    "build_coupling",
    "canonical_matrix",
    "cca_decompose",
    "cca_project",
    "ci_curve",
    "ci_curve_discrete",
    "component_count",
    "conditional_mi_given_w",
    "dsbs_joint",
    "dsbs_wyner",
    "entropy",
    "errors",
    "estimate_gaussian",
    "estimate_pmf",
    "feature_mutual_information",
    "gaussian_latent",
    "inv_sqrt_psd",
    "latent_mutual_information",
    "leading_pair_fixed_point",
    "mutual_info_rho",
    "mutual_information",
    "project_discrete",
    "project_discrete_map",
    "project_gaussian",
    "relaxation_given_w",
    "relaxed_ci_gaussian",
    "scalar_relaxed_ci",
    "solve_relaxed_wyner",
    "solve_relaxed_wyner_multi",
    "toy_binary_example",
    "total_correlation",
    "validate_discrete",
    "validate_gaussian",
    "validate_multi_discrete",
    "waterfill",
]
