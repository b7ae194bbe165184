"""Seeded sampling of the (J, T, C) ensemble.

Couplings are ``J = I + eps K`` with ``K`` symmetric Gaussian, every
independent entry (diagonal included) ~ Normal(0, 1/N). Draws with a
non-positive eigenvalue are rejected. Temperatures are log-normal,
``T_i = exp(mu + d xi_i)``.

Sample ``k`` of a run is drawn from its own generator keyed on
``(seed, k)``, so its content never depends on which other samples were
drawn or in what order.
"""

from __future__ import annotations

import math
from collections.abc import Iterator, Mapping
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Any, NamedTuple

import numpy as np

from .errors import ConfigError, RejectionLimitExceeded
from .model import (
    DEFAULT_POLICY,
    NumericPolicy,
    SpectralDecomposition,
    pearson_correlation,
    stationary_covariance,
    symmetric_eigendecomposition,
)

__all__ = [
    "K_CONVENTION",
    "EnsembleConfig",
    "EnsembleSample",
    "CouplingDraw",
    "sample_rng",
    "sample_coupling",
    "sample_temperatures",
    "sample_one",
    "sample_ensemble",
    "analysed_matrix",
]

# Recorded in run manifests.
K_CONVENTION = "K symmetric, K_ij = K_ji ~ Normal(0, 1/N) for all i <= j (diagonal variance 1/N)"


@dataclass(frozen=True)
class EnsembleConfig:
    n: int
    epsilon: float
    mu: float = 0.0
    d: float = 0.0
    n_samples: int = 1
    seed: int = 0
    max_rejections: int = 1000

    def __post_init__(self) -> None:
        if int(self.n) != self.n or self.n < 2:
            raise ConfigError(f"n must be an integer >= 2, got {self.n}")
        if not (self.epsilon > 0.0) or not math.isfinite(self.epsilon):
            raise ConfigError(f"epsilon must be positive, got {self.epsilon}")
        if not (self.d >= 0.0) or not math.isfinite(self.d):
            raise ConfigError(f"d must be nonnegative, got {self.d}")
        if not math.isfinite(self.mu):
            raise ConfigError("mu must be finite")
        if int(self.n_samples) != self.n_samples or self.n_samples < 0:
            raise ConfigError(f"n_samples must be a nonnegative integer, got {self.n_samples}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must fit in an unsigned 64-bit integer")
        if self.max_rejections < 1:
            raise ConfigError("max_rejections must be positive")

    @classmethod
    def scaled(cls, n: int, epsilon_over_sqrt_n: float, **kwargs: Any) -> EnsembleConfig:
        """Config with ``epsilon = epsilon_over_sqrt_n / sqrt(n)``."""
        return cls(n=n, epsilon=epsilon_over_sqrt_n / math.sqrt(n), **kwargs)

    @classmethod
    def from_mapping(cls, values: Mapping[str, Any]) -> EnsembleConfig:
        known = set(cls.__dataclass_fields__)
        unknown = set(values) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        casts = {"n": int, "n_samples": int, "seed": int, "max_rejections": int}
        kwargs = {k: casts.get(k, float)(v) for k, v in values.items()}
        try:
            return cls(**kwargs)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


class CouplingDraw(NamedTuple):
    j: np.ndarray
    decomposition: SpectralDecomposition
    rejections: int


@dataclass(frozen=True)
class EnsembleSample:
    j: np.ndarray
    t: np.ndarray
    c: np.ndarray
    sample_index: int
    rejections: int
    j_decomposition: SpectralDecomposition | None = None


def sample_rng(seed: int, index: int) -> np.random.Generator:
    """Generator for sample ``index`` of a run with master ``seed``."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def _goe_like(n: int, rng: np.random.Generator) -> np.ndarray:
    a = rng.standard_normal((n, n)) / math.sqrt(n)
    upper = np.triu(a)
    return upper + np.triu(a, 1).T


def sample_coupling(
    n: int,
    epsilon: float,
    rng: np.random.Generator,
    *,
    max_rejections: int = 1000,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> CouplingDraw:
    """Draw ``J = I + eps K`` until positive definite.

    Raises RejectionLimitExceeded once ``max_rejections`` consecutive draws
    fail the PD test.
    """
    if not epsilon > 0.0:
        raise ConfigError(f"epsilon must be positive, got {epsilon}")
    eye = np.eye(n)
    for rejections in range(max_rejections + 1):
        j = eye + epsilon * _goe_like(n, rng)
        dec = symmetric_eigendecomposition(j, policy)
        if dec.is_positive_definite():
            return CouplingDraw(j, dec, rejections)
    raise RejectionLimitExceeded(
        f"{max_rejections} consecutive non-positive-definite couplings at n={n}, epsilon={epsilon:g}"
    )


def sample_temperatures(n: int, mu: float, d: float, rng: np.random.Generator) -> np.ndarray:
    """Log-normal temperatures ``exp(mu + d xi)``; ``d = 0`` gives ``exp(mu)`` exactly."""
    if d < 0:
        raise ConfigError(f"d must be nonnegative, got {d}")
    return np.exp(mu + d * rng.standard_normal(n))


def sample_one(config: EnsembleConfig, index: int, policy: NumericPolicy = DEFAULT_POLICY) -> EnsembleSample:
    rng = sample_rng(config.seed, index)
    # Temperatures first: they then do not depend on how many couplings were rejected.
    t = sample_temperatures(config.n, config.mu, config.d, rng)
    try:
        draw = sample_coupling(config.n, config.epsilon, rng, max_rejections=config.max_rejections, policy=policy)
    except RejectionLimitExceeded as exc:
        raise RejectionLimitExceeded(f"sample {index}: {exc}", sample_index=index) from exc
    c = stationary_covariance(draw.j, t, decomposition=draw.decomposition, policy=policy)
    return EnsembleSample(draw.j, t, c, index, draw.rejections, draw.decomposition)


def sample_ensemble(
    config: EnsembleConfig,
    *,
    workers: int = 1,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> Iterator[EnsembleSample]:
    """Yield ``config.n_samples`` samples in index order.

    With ``workers > 1`` samples are computed on a thread pool; output order
    and content are unchanged.
    """
    indices = range(config.n_samples)
    if workers <= 1:
        for k in indices:
            yield sample_one(config, k, policy)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(lambda k: sample_one(config, k, policy), indices)


MATRIX_KINDS = ("covariance", "correlation")


def analysed_matrix(sample: EnsembleSample, kind: str) -> np.ndarray:
    """The matrix whose spectrum is studied: ``C`` itself or its Pearson form."""
    if kind == "covariance":
        return sample.c
    if kind == "correlation":
        return pearson_correlation(sample.c)
    raise ConfigError(f"matrix kind must be one of {MATRIX_KINDS}, got {kind!r}")
