"""Stationary covariance of coupled heterogeneous OU processes.

For the dynamics ``dx = -J x dt + sqrt(2 T) dW`` with symmetric positive
definite couplings ``J`` and per-component temperatures ``T`` the stationary
covariance solves the anticommutator (symmetric Lyapunov) equation

    C J + J C = 2 diag(T).

In the eigenbasis of ``J`` (``J = U diag(lam) U^T``) this is diagonal:

    C = U [ 2 (U^T diag(T) U)_ab / (lam_a + lam_b) ] U^T.

Since ``C`` and ``J`` enter the equation symmetrically, the same formula run
on the eigenbasis of ``C`` recovers ``J`` (the inverse problem).

Matrices are plain ``float64`` ndarrays; validation happens at the function
boundary. All functions are pure.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.linalg as sla
from numpy.typing import ArrayLike, NDArray

from .errors import (
    ConvergenceFailure,
    DimensionMismatch,
    DimensionTooLarge,
    IllConditioned,
    InvalidTemperatures,
    NonPositiveDiagonal,
    NonSymmetric,
    NotPositiveDefinite,
    RoundTripFailure,
    SingularSystem,
)

__all__ = [
    "NumericPolicy",
    "DEFAULT_POLICY",
    "STRICT_POLICY",
    "TOLERANCE_PROFILES",
    "SpectralDecomposition",
    "as_temperatures",
    "as_symmetric",
    "symmetric_eigendecomposition",
    "solve_anticommutator",
    "stationary_covariance",
    "lyapunov_oracle_solve",
    "inverse_couplings",
    "pearson_correlation",
    "anticommutator_residual",
    "relative_residual",
]

Array = NDArray[np.float64]


@dataclass(frozen=True)
class NumericPolicy:
    """Tolerances shared by solvers, checks and the CLI ``verify`` command."""

    symmetry_rtol: float = 1e-12
    orthonormal_atol: float = 1e-10
    residual_rtol: float = 1e-9
    roundtrip_rtol: float = 1e-8
    max_condition: float = 1e12
    oracle_max_n: int = 200

    def as_dict(self) -> dict[str, float]:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


DEFAULT_POLICY = NumericPolicy()
STRICT_POLICY = replace(DEFAULT_POLICY, residual_rtol=1e-11, roundtrip_rtol=1e-10)
TOLERANCE_PROFILES = {"default": DEFAULT_POLICY, "strict": STRICT_POLICY}


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SpectralDecomposition:
    """Ascending eigenvalues and orthonormal eigenvectors (columns).

    Each eigenvector is signed so that its largest-magnitude component is
    positive; on ties the lowest index decides.
    """

    eigenvalues: Array
    eigenvectors: Array = field(repr=False)

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> Array:
        u = self.eigenvectors
        return (u * self.eigenvalues) @ u.T

    def is_positive_definite(self) -> bool:
        return bool(self.eigenvalues[0] > 0.0)


def as_temperatures(t: ArrayLike) -> Array:
    """Validate a temperature vector: 1-D, length >= 2, strictly positive."""
    arr = np.asarray(t, dtype=np.float64)
    if arr.ndim != 1 or arr.shape[0] < 2:
        raise InvalidTemperatures(f"temperatures must be a vector of length >= 2, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
        raise InvalidTemperatures("temperatures must be finite and strictly positive")
    return arr


def as_symmetric(m: ArrayLike, policy: NumericPolicy = DEFAULT_POLICY, name: str = "matrix") -> Array:
    """Return the symmetrized matrix, raising if the asymmetry is above tolerance."""
    a = np.asarray(m, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} has non-finite entries")
    scale = np.max(np.abs(a)) if a.size else 0.0
    asym = np.max(np.abs(a - a.T)) if a.size else 0.0
    if asym > policy.symmetry_rtol * scale:
        raise NonSymmetric(f"{name} asymmetry {asym:.3e} exceeds {policy.symmetry_rtol:g} relative")
    return 0.5 * (a + a.T)


def symmetric_eigendecomposition(m: ArrayLike, policy: NumericPolicy = DEFAULT_POLICY) -> SpectralDecomposition:
    a = as_symmetric(m, policy)
    try:
        w, v = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"symmetric eigensolver did not converge: {exc}") from exc
    cols = np.arange(v.shape[1])
    lead = np.argmax(np.abs(v), axis=0)
    v = v * np.sign(v[lead, cols])
    return SpectralDecomposition(_readonly(w), _readonly(v))


def _check_pd(dec: SpectralDecomposition, name: str) -> None:
    if not dec.is_positive_definite():
        raise NotPositiveDefinite(f"{name} is not positive definite (smallest eigenvalue {dec.eigenvalues[0]:.3e})")


def solve_anticommutator(dec: SpectralDecomposition, rhs: ArrayLike) -> Array:
    """Solve ``A X + X A = rhs`` given the eigendecomposition of PD ``A``."""
    _check_pd(dec, "operator")
    r = np.asarray(rhs, dtype=np.float64)
    if r.shape != (dec.n, dec.n):
        raise DimensionMismatch(f"rhs shape {r.shape} does not match operator size {dec.n}")
    u, lam = dec.eigenvectors, dec.eigenvalues
    x = u @ ((u.T @ r @ u) / (lam[:, None] + lam[None, :])) @ u.T
    return 0.5 * (x + x.T)


def stationary_covariance(
    j: ArrayLike,
    t: ArrayLike,
    *,
    decomposition: SpectralDecomposition | None = None,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> Array:
    """Stationary covariance ``C`` with ``{C, J} = 2 diag(T)``.

    ``decomposition`` lets callers that already diagonalized ``J`` (the
    ensemble sampler does, for its PD check) skip a second eigensolve.
    """
    temps = as_temperatures(t)
    dec = decomposition if decomposition is not None else symmetric_eigendecomposition(j, policy)
    if dec.n != temps.shape[0]:
        raise DimensionMismatch(f"J is {dec.n}x{dec.n} but {temps.shape[0]} temperatures given")
    _check_pd(dec, "coupling matrix J")
    return solve_anticommutator(dec, np.diag(2.0 * temps))


def lyapunov_oracle_solve(j: ArrayLike, t: ArrayLike, *, policy: NumericPolicy = DEFAULT_POLICY) -> Array:
    """Brute-force solve of ``(J (+) J) vec(C) = vec(2 diag T)``.

    Builds the N^2 x N^2 Kronecker sum densely and factorizes it with a
    pivoted symmetric (Bunch-Kaufman) solver. Independent of any
    eigendecomposition, so it serves as an oracle for
    :func:`stationary_covariance`.
    """
    a = np.asarray(j, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"J must be square, got shape {a.shape}")
    n = a.shape[0]
    if n > policy.oracle_max_n:
        raise DimensionTooLarge(f"oracle limited to N <= {policy.oracle_max_n}, got {n}")
    temps = as_temperatures(t)
    if temps.shape[0] != n:
        raise DimensionMismatch(f"J is {n}x{n} but {temps.shape[0]} temperatures given")
    eye = np.eye(n)
    ksum = np.kron(eye, a) + np.kron(a.T, eye)
    rhs = np.diag(2.0 * temps).reshape(-1, order="F")
    with warnings.catch_warnings():
        warnings.simplefilter("error", sla.LinAlgWarning)
        try:
            vec = sla.solve(ksum, rhs, assume_a="sym")
        except (np.linalg.LinAlgError, sla.LinAlgWarning) as exc:
            raise SingularSystem(f"Kronecker sum is numerically singular: {exc}") from exc
    c = vec.reshape(n, n, order="F")
    return 0.5 * (c + c.T)


def anticommutator_residual(c: ArrayLike, j: ArrayLike, t: ArrayLike) -> float:
    """max |C J + J C - 2 diag(T)|."""
    cm = np.asarray(c, dtype=np.float64)
    jm = np.asarray(j, dtype=np.float64)
    tv = np.asarray(t, dtype=np.float64)
    n = tv.shape[0]
    if cm.shape != (n, n) or jm.shape != (n, n):
        raise DimensionMismatch(f"shapes C{cm.shape}, J{jm.shape}, T({n},) do not conform")
    return float(np.max(np.abs(cm @ jm + jm @ cm - np.diag(2.0 * tv))))


def relative_residual(c: ArrayLike, j: ArrayLike, t: ArrayLike) -> float:
    """Residual divided by max |2 diag(T)|."""
    return anticommutator_residual(c, j, t) / (2.0 * float(np.max(np.abs(t))))


def inverse_couplings(
    c: ArrayLike,
    t: ArrayLike,
    *,
    decomposition: SpectralDecomposition | None = None,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> Array:
    """Couplings ``J`` that produce covariance ``C`` at temperatures ``T``."""
    temps = as_temperatures(t)
    dec = decomposition if decomposition is not None else symmetric_eigendecomposition(c, policy)
    if dec.n != temps.shape[0]:
        raise DimensionMismatch(f"C is {dec.n}x{dec.n} but {temps.shape[0]} temperatures given")
    _check_pd(dec, "covariance matrix C")
    cond = dec.eigenvalues[-1] / dec.eigenvalues[0]
    if cond > policy.max_condition:
        raise IllConditioned(f"condition number of C is {cond:.3e} (> {policy.max_condition:g})")
    j = solve_anticommutator(dec, np.diag(2.0 * temps))
    cmat = dec.reconstruct() if decomposition is not None else np.asarray(c, dtype=np.float64)
    res = relative_residual(cmat, j, temps)
    if res > policy.residual_rtol:
        raise RoundTripFailure(f"inverse solution residual {res:.3e} exceeds {policy.residual_rtol:g}")
    return j


def pearson_correlation(c: ArrayLike) -> Array:
    """``c_ij = C_ij / sqrt(C_ii C_jj)`` with an exactly unit diagonal."""
    cm = np.asarray(c, dtype=np.float64)
    if cm.ndim != 2 or cm.shape[0] != cm.shape[1]:
        raise DimensionMismatch(f"covariance must be square, got shape {cm.shape}")
    d = np.diag(cm)
    if np.any(d <= 0.0):
        raise NonPositiveDiagonal("covariance has non-positive diagonal entries")
    s = np.sqrt(d)
    out = cm / np.outer(s, s)
    out = 0.5 * (out + out.T)
    np.fill_diagonal(out, 1.0)
    return out
