"""Small-coupling expansion of the stationary covariance.

With ``J = I + eps K1 + eps^2/2 K2`` and ``C = T + eps S1 + eps^2/2 S2``,
matching powers of ``eps`` in ``{C, J} = 2T`` gives

    S1_ij = -K1_ij (T_i + T_j) / 2
    2 S2_ij = (T_i + T_j)(-K2_ij + (K1 K1)_ij) + 2 (K1 T K1)_ij

The first-order correlation matrix depends on T only through
``sqrt(T_i/T_j) + sqrt(T_j/T_i)``, which is unchanged by ``T -> 1/T``;
the ``K1 T K1`` term of the second order is not.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from .errors import DimensionMismatch, EpsilonTooLarge, NotPositiveDefinite
from .model import as_temperatures, solve_anticommutator, symmetric_eigendecomposition

__all__ = [
    "first_order_sigma",
    "first_order_correlation",
    "second_order_sigma",
    "second_order_correlation_terms",
    "second_order_correlation_correction",
    "expanded_coupling",
    "exact_covariance_shift",
    "OrderScalingReport",
    "order_scaling_report",
]


def _square(m: ArrayLike, n: int, name: str) -> np.ndarray:
    a = np.asarray(m, dtype=np.float64)
    if a.shape != (n, n):
        raise DimensionMismatch(f"{name} has shape {a.shape}, expected ({n}, {n})")
    return a


def _temperature_sum(t: np.ndarray) -> np.ndarray:
    return t[:, None] + t[None, :]


def _symmetric_ratio(t: np.ndarray) -> np.ndarray:
    # (T_i + T_j)/sqrt(T_i T_j) as a sum of ratios: exact symmetry in i, j, no overflow for huge T
    r = np.sqrt(t[:, None] / t[None, :])
    return r + r.T


def first_order_sigma(k1: ArrayLike, t: ArrayLike) -> np.ndarray:
    tv = as_temperatures(t)
    k = _square(k1, tv.shape[0], "K1")
    return -0.5 * k * _temperature_sum(tv)


def first_order_correlation(k1: ArrayLike, t: ArrayLike, epsilon: float) -> np.ndarray:
    """First-order Pearson matrix: unit diagonal, off-diagonal
    ``-(eps/2) K1_ij (T_i + T_j)/sqrt(T_i T_j)``.

    The diagonal is exactly one at every order, so only the off-diagonal
    entries carry the expansion.
    """
    tv = as_temperatures(t)
    k = _square(k1, tv.shape[0], "K1")
    c = -0.5 * epsilon * k * _symmetric_ratio(tv)
    np.fill_diagonal(c, 1.0)
    off = np.abs(c[~np.eye(tv.shape[0], dtype=bool)])
    if off.size and off.max() >= 1.0:
        raise EpsilonTooLarge(f"first-order correlation reaches {off.max():.3g} at epsilon={epsilon:g}")
    return c


def second_order_sigma(k1: ArrayLike, k2: ArrayLike, t: ArrayLike) -> np.ndarray:
    tv = as_temperatures(t)
    n = tv.shape[0]
    a = _square(k1, n, "K1")
    b = _square(k2, n, "K2")
    two_s2 = _temperature_sum(tv) * (-b + a @ a) + 2.0 * (a * tv) @ a
    s2 = 0.5 * two_s2
    return 0.5 * (s2 + s2.T)


def second_order_correlation_terms(
    k1: ArrayLike, k2: ArrayLike, t: ArrayLike
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The three terms of ``2 S2_ij / sqrt(T_i T_j)``, in order:
    ``-ratio*K2``, ``ratio*(K1 K1)``, ``2 (K1 T K1)/sqrt(T_i T_j)``.
    """
    tv = as_temperatures(t)
    n = tv.shape[0]
    a = _square(k1, n, "K1")
    b = _square(k2, n, "K2")
    ratio = _symmetric_ratio(tv)
    s = np.sqrt(tv)
    return -ratio * b, ratio * (a @ a), 2.0 * ((a * tv) @ a) / s[:, None] / s[None, :]


def second_order_correlation_correction(k1: ArrayLike, k2: ArrayLike, t: ArrayLike) -> np.ndarray:
    first, second, third = second_order_correlation_terms(k1, k2, t)
    out = first + second + third
    return 0.5 * (out + out.T)


def expanded_coupling(k1: ArrayLike, k2: ArrayLike | None, epsilon: float) -> np.ndarray:
    a = np.asarray(k1, dtype=np.float64)
    b = np.zeros_like(a) if k2 is None else np.asarray(k2, dtype=np.float64)
    return np.eye(a.shape[0]) + epsilon * a + 0.5 * epsilon**2 * b


def exact_covariance_shift(k1: ArrayLike, k2: ArrayLike | None, t: ArrayLike, epsilon: float) -> np.ndarray:
    """``C(eps) - diag(T)`` from the exact solver.

    Solved directly for the shift (``J D + D J = -(E T + T E)`` with
    ``E = J - I``) so tiny shifts are not lost to cancellation against T.
    """
    tv = as_temperatures(t)
    j = expanded_coupling(k1, k2, epsilon)
    dec = symmetric_eigendecomposition(j)
    if not dec.is_positive_definite():
        raise NotPositiveDefinite(
            f"J(epsilon) is not positive definite at epsilon={epsilon:g} "
            f"(smallest eigenvalue {dec.eigenvalues[0]:.3e})"
        )
    e = j - np.eye(tv.shape[0])
    rhs = -(e * tv + (e * tv).T)
    return solve_anticommutator(dec, rhs)


@dataclass(frozen=True)
class OrderScalingReport:
    epsilons: np.ndarray
    first_order_residual: np.ndarray
    second_order_residual: np.ndarray
    first_order_slope: float
    second_order_slope: float

    def rows(self) -> list[tuple[float, float, float]]:
        return list(zip(self.epsilons.tolist(), self.first_order_residual.tolist(), self.second_order_residual.tolist()))


def _loglog_slope(x: np.ndarray, y: np.ndarray) -> float:
    keep = (x > 0) & (y > 0)
    if keep.sum() < 2:
        return float("nan")
    return float(np.polyfit(np.log(x[keep]), np.log(y[keep]), 1)[0])


def order_scaling_report(
    k1: ArrayLike,
    k2: ArrayLike | None,
    t: ArrayLike,
    epsilon_grid: Sequence[float],
) -> OrderScalingReport:
    """Max-abs error of the first- and second-order covariance expansions
    against the exact solution, with fitted log-log slopes."""
    tv = as_temperatures(t)
    a = np.asarray(k1, dtype=np.float64)
    b = np.zeros_like(a) if k2 is None else np.asarray(k2, dtype=np.float64)
    s1 = first_order_sigma(a, tv)
    s2 = second_order_sigma(a, b, tv)
    eps = np.asarray(list(epsilon_grid), dtype=np.float64)
    r1 = np.empty_like(eps)
    r2 = np.empty_like(eps)
    for i, e in enumerate(eps):
        shift = exact_covariance_shift(a, b, tv, float(e))
        first = shift - e * s1
        r1[i] = np.max(np.abs(first))
        r2[i] = np.max(np.abs(first - 0.5 * e**2 * s2))
    return OrderScalingReport(eps, r1, r2, _loglog_slope(eps, r1), _loglog_slope(eps, r2))
