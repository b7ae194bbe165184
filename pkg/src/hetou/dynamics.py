"""Dynamical and sampling oracles for the stationary covariance.

The Euler-Maruyama integrator deliberately avoids the eigendecomposition
machinery of :mod:`hetou.model`; only the step-size guard and the default
burn-in look at the extreme eigenvalues of J.

Noise convention: ``<eta_i(t) eta_j(t')> = 2 delta_ij delta(t - t')``, so
the increment over ``dt`` has variance ``2 T_i dt``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from .errors import DimensionMismatch, FactorizationFailure, NonFinite, TooFewSamples, UnstableStep

__all__ = [
    "SdeConfig",
    "SignalPanel",
    "SdeCovariance",
    "default_burn_in",
    "euler_maruyama_simulate",
    "sde_covariance",
    "stationary_gaussian_sample",
    "empirical_covariance",
    "finite_q_covariance",
]

STABILITY_LIMIT = 0.1
NOISE_FACTOR = 2.0


@dataclass(frozen=True)
class SdeConfig:
    dt: float = 1e-2
    n_steps: int = 100_000
    burn_in: int | None = None
    thinning: int = 1
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.n_steps < 1 or self.thinning < 1:
            raise ValueError("n_steps and thinning must be positive")
        if self.burn_in is not None and self.burn_in < 0:
            raise ValueError("burn_in must be nonnegative")


@dataclass(frozen=True)
class SignalPanel:
    """``m`` time samples (rows) of ``n`` signals (columns)."""

    data: np.ndarray

    def __post_init__(self) -> None:
        if self.data.ndim != 2:
            raise DimensionMismatch("panel data must be 2-D")

    @property
    def m(self) -> int:
        return self.data.shape[0]

    @property
    def n(self) -> int:
        return self.data.shape[1]

    @property
    def q(self) -> float:
        return self.m / self.n


def _check_system(j: ArrayLike, t: ArrayLike) -> tuple[np.ndarray, np.ndarray]:
    jm = np.asarray(j, dtype=np.float64)
    tv = np.asarray(t, dtype=np.float64)
    if jm.ndim != 2 or jm.shape[0] != jm.shape[1] or tv.shape != (jm.shape[0],):
        raise DimensionMismatch(f"J{jm.shape} and T{tv.shape} do not conform")
    if np.any(tv < 0):
        raise ValueError("temperatures must be nonnegative")
    return jm, tv


def _check_step(jm: np.ndarray, dt: float) -> np.ndarray:
    lam = np.linalg.eigvalsh(0.5 * (jm + jm.T))
    if lam[0] <= 0:
        raise ValueError("J must be positive definite for a stationary process")
    if dt * lam[-1] >= STABILITY_LIMIT:
        raise UnstableStep(f"dt * max eig(J) = {dt * lam[-1]:.3g} >= {STABILITY_LIMIT}")
    return lam


def default_burn_in(j: ArrayLike, dt: float) -> int:
    """Steps covering ten relaxation times of the slowest mode."""
    lam_min = float(np.linalg.eigvalsh(np.asarray(j, dtype=np.float64))[0])
    return int(math.ceil(10.0 / (lam_min * dt)))


def euler_maruyama_simulate(
    j: ArrayLike,
    t: ArrayLike,
    config: SdeConfig,
    *,
    x0: ArrayLike | None = None,
    noise_factor: float = NOISE_FACTOR,
) -> SignalPanel:
    """Single trajectory of ``x += -J x dt + sqrt(noise_factor T dt) zeta``.

    Burn-in steps are discarded, then ``n_steps`` steps are run and every
    ``thinning``-th state is recorded. ``noise_factor`` other than 2 is only
    useful as a negative control.
    """
    jm, tv = _check_system(j, t)
    lam = _check_step(jm, config.dt)
    n = tv.shape[0]
    burn = config.burn_in if config.burn_in is not None else int(math.ceil(10.0 / (lam[0] * config.dt)))
    n_rec = config.n_steps // config.thinning
    if n_rec < 2:
        raise TooFewSamples("n_steps // thinning must be at least 2")
    rng = np.random.default_rng(config.seed)
    x = np.zeros(n) if x0 is None else np.array(x0, dtype=np.float64)
    a = np.eye(n) - config.dt * jm
    amp = np.sqrt(noise_factor * tv * config.dt)
    out = np.empty((n_rec, n))
    rec = 0
    block = 4096
    total = burn + n_rec * config.thinning
    step = 0
    while step < total:
        zeta = rng.standard_normal((min(block, total - step), n)) * amp
        for z in zeta:
            x = a @ x + z
            step += 1
            if step > burn and (step - burn) % config.thinning == 0:
                out[rec] = x
                rec += 1
        if not np.all(np.isfinite(x)):
            raise NonFinite(f"state diverged at step {step}")
    return SignalPanel(out)


@dataclass(frozen=True)
class SdeCovariance:
    covariance: np.ndarray
    stderr: np.ndarray
    n_chains: int
    n_records: int
    burn_in: int
    dt: float

    @property
    def total_time(self) -> float:
        return self.n_chains * self.n_records * self.dt


def sde_covariance(
    j: ArrayLike,
    t: ArrayLike,
    config: SdeConfig,
    *,
    n_chains: int = 64,
    noise_factor: float = NOISE_FACTOR,
) -> SdeCovariance:
    """Time-averaged covariance from independent Euler-Maruyama chains.

    Chains are advanced together (vectorized) and never stored; each chain's
    empirical covariance is one batch, so the standard error is the spread
    over chains divided by ``sqrt(n_chains)``. Recording happens every
    ``thinning`` steps.
    """
    jm, tv = _check_system(j, t)
    lam = _check_step(jm, config.dt)
    if n_chains < 2:
        raise ValueError("need at least two chains for an error estimate")
    n = tv.shape[0]
    burn = config.burn_in if config.burn_in is not None else int(math.ceil(10.0 / (lam[0] * config.dt)))
    n_rec = config.n_steps // config.thinning
    if n_rec < 2:
        raise TooFewSamples("n_steps // thinning must be at least 2")
    rng = np.random.default_rng(config.seed)
    at = (np.eye(n) - config.dt * jm).T
    amp = np.sqrt(noise_factor * tv * config.dt)
    x = np.zeros((n_chains, n))
    s1 = np.zeros((n_chains, n))
    s2 = np.zeros((n_chains, n, n))
    total = burn + n_rec * config.thinning
    block = max(1, 262_144 // (n_chains * n))
    step = 0
    while step < total:
        zeta = rng.standard_normal((min(block, total - step), n_chains, n)) * amp
        states = np.empty_like(zeta)
        for b, z in enumerate(zeta):
            x = x @ at + z
            states[b] = x
        steps = np.arange(step + 1, step + 1 + zeta.shape[0])
        step += zeta.shape[0]
        if not np.all(np.isfinite(x)):
            raise NonFinite(f"state diverged at step {step}")
        keep = states[(steps > burn) & ((steps - burn) % config.thinning == 0)]
        if keep.shape[0]:
            s1 += keep.sum(axis=0)
            s2 += np.einsum("bci,bcj->cij", keep, keep)
    mean = s1 / n_rec
    per_chain = s2 / n_rec - mean[:, :, None] * mean[:, None, :]
    cov = per_chain.mean(axis=0)
    err = per_chain.std(axis=0, ddof=1) / math.sqrt(n_chains)
    return SdeCovariance(0.5 * (cov + cov.T), err, n_chains, n_rec, burn, config.dt)


def stationary_gaussian_sample(c: ArrayLike, m: int, seed: int) -> SignalPanel:
    """``m`` iid draws from ``Normal(0, C)`` via a Cholesky factor."""
    cm = np.asarray(c, dtype=np.float64)
    try:
        chol = np.linalg.cholesky(0.5 * (cm + cm.T))
    except np.linalg.LinAlgError as exc:
        raise FactorizationFailure(f"covariance is not numerically positive definite: {exc}") from exc
    rng = np.random.default_rng(seed)
    return SignalPanel(rng.standard_normal((m, cm.shape[0])) @ chol.T)


def empirical_covariance(panel: SignalPanel | ArrayLike) -> np.ndarray:
    """``mean(x_i x_j) - mean(x_i) mean(x_j)`` (1/M normalization)."""
    x = panel.data if isinstance(panel, SignalPanel) else np.asarray(panel, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] < 2:
        raise TooFewSamples("need at least two time samples")
    xc = x - x.mean(axis=0)
    c = xc.T @ xc / x.shape[0]
    return 0.5 * (c + c.T)


def finite_q_covariance(c: ArrayLike, q: float, n_realizations: int, seed: int) -> np.ndarray:
    """Empirical covariances of ``M = round(Q N)`` stationary draws.

    Returns an array of shape ``(n_realizations, N, N)``.
    """
    cm = np.asarray(c, dtype=np.float64)
    n = cm.shape[0]
    if not q > 0:
        raise ValueError("Q must be positive")
    m = int(round(q * n))
    if m < 2:
        raise TooFewSamples(f"M = round(Q N) = {m} < 2")
    try:
        chol = np.linalg.cholesky(0.5 * (cm + cm.T))
    except np.linalg.LinAlgError as exc:
        raise FactorizationFailure(f"covariance is not numerically positive definite: {exc}") from exc
    rng = np.random.default_rng(seed)
    out = np.empty((n_realizations, n, n))
    chunk = max(1, 2_000_000 // (m * n))
    for start in range(0, n_realizations, chunk):
        stop = min(start + chunk, n_realizations)
        x = rng.standard_normal((stop - start, m, n)) @ chol.T
        xc = x - x.mean(axis=1, keepdims=True)
        out[start:stop] = np.einsum("rmi,rmj->rij", xc, xc) / m
    return out
