"""Projection-based multifidelity linear regression for high-dimensional outputs.

The package fits polynomial regression surrogates in a PCA-reduced output
space and augments scarce high-fidelity training data with low-fidelity
samples, either used verbatim or corrected through a learned affine map,
combined by weighted least squares with proximity-based weights selected by
leave-one-out cross-validation. An additive two-model surrogate is included
as a baseline, along with a synthetic-benchmark protocol and a CLI.
"""

from .benchmark import (
    GeneratorSpec,
    LoadedProblem,
    RepetitionPlan,
    SyntheticProblem,
    run_protocol,
)
from .config import CvSettings, ExperimentConfig
from .cv import CVResult, loocv_objective, optimize_w_syn
from .errors import DataError, DegenerateBasisWarning, MflrError, NumericalError
from .features import FeatureMap, InputScaler
from .linalg import solve_least_squares, thin_svd
from .metrics import AccuracyReport, aggregate, normalized_l2_accuracy
from .pca import ReducedBasis, fit_basis, project, reconstruct
from .regression import LinearModel, fit_ols, fit_wls
from .sampling import lhs_sample, subsample_conditioned
from .surrogates import (
    Dataset,
    MFSurrogate,
    SyntheticData,
    fit_additive,
    fit_mf_data_aug,
    fit_single_fidelity,
    synth_direct,
    synth_explicit_map,
)
from .weighting import WeightScheme, WeightVector, build_weights, nearest_hf_distances

__version__ = "0.1.0"

__all__ = [
    "AccuracyReport",
    "CVResult",
    "CvSettings",
    "DataError",
    "Dataset",
    "DegenerateBasisWarning",
    "ExperimentConfig",
    "FeatureMap",
    "GeneratorSpec",
    "InputScaler",
    "LinearModel",
    "LoadedProblem",
    "MFSurrogate",
    "MflrError",
    "NumericalError",
    "ReducedBasis",
    "RepetitionPlan",
    "SyntheticData",
    "SyntheticProblem",
    "WeightScheme",
    "WeightVector",
    "aggregate",
    "build_weights",
    "fit_additive",
    "fit_basis",
    "fit_mf_data_aug",
    "fit_ols",
    "fit_single_fidelity",
    "fit_wls",
    "lhs_sample",
    "loocv_objective",
    "nearest_hf_distances",
    "normalized_l2_accuracy",
    "optimize_w_syn",
    "project",
    "reconstruct",
    "run_protocol",
    "solve_least_squares",
    "subsample_conditioned",
    "synth_direct",
    "synth_explicit_map",
    "thin_svd",
    "__version__",
]
