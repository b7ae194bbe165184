"""Random-matrix toolkit for stationary covariances of coupled heterogeneous
Ornstein-Uhlenbeck processes."""

__version__ = "0.1.0"

from .model import (  # noqa: E402
    DEFAULT_POLICY,
    NumericPolicy,
    SpectralDecomposition,
    anticommutator_residual,
    inverse_couplings,
    lyapunov_oracle_solve,
    pearson_correlation,
    stationary_covariance,
    symmetric_eigendecomposition,
)
from .ensemble import EnsembleConfig, EnsembleSample, sample_ensemble, sample_one  # noqa: E402
from .spectral import cpr, inverted_bell_statistic, ipr  # noqa: E402

__all__ = [
    "__version__",
    "DEFAULT_POLICY",
    "NumericPolicy",
    "SpectralDecomposition",
    "anticommutator_residual",
    "inverse_couplings",
    "lyapunov_oracle_solve",
    "pearson_correlation",
    "stationary_covariance",
    "symmetric_eigendecomposition",
    "EnsembleConfig",
    "EnsembleSample",
    "sample_ensemble",
    "sample_one",
    "cpr",
    "inverted_bell_statistic",
    "ipr",
]
