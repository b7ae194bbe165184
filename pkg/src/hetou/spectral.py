"""Localization and spectral observables.

Ranks are by ascending eigenvalue everywhere (rank 1 = smallest).
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike
from scipy import stats

from .errors import (
    DegenerateSpectrum,
    EmptyEnsemble,
    MixedDimensions,
    NotNormalized,
    NotOrthonormal,
    TooFewRecords,
)
from .model import SpectralDecomposition

__all__ = [
    "ipr",
    "cpr",
    "rank_averaged_ipr",
    "normalized_spacings",
    "Histogram",
    "spectral_density_histogram",
    "CprRecords",
    "cpr_vs_temperature",
    "inverted_bell_statistic",
    "SpectrumAccumulator",
    "SpectralSummary",
]

SPACING_MODES = ("rank", "pooled")


def ipr(v: ArrayLike, atol: float = 1e-10) -> float:
    """Inverse participation ratio ``sum_i v_i^4`` of a unit vector."""
    x = np.asarray(v, dtype=np.float64)
    norm = np.linalg.norm(x)
    if abs(norm - 1.0) > atol:
        raise NotNormalized(f"vector norm is {norm!r}, expected 1")
    return float(np.sum(x**4))


def cpr(u: ArrayLike, atol: float = 1e-10) -> np.ndarray:
    """Component participation ratio ``CPR_i = sum_a U_ia^4`` (row sums of U^4)."""
    m = np.asarray(u, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotOrthonormal(f"eigenvector matrix must be square, got {m.shape}")
    err = np.max(np.abs(m.T @ m - np.eye(m.shape[0])))
    if err > atol:
        raise NotOrthonormal(f"max |U^T U - I| = {err:.3e}")
    return np.sum(m**4, axis=1)


def _columns_ipr(u: np.ndarray) -> np.ndarray:
    return np.sum(u**4, axis=0)


def _common_n(decs: Sequence[SpectralDecomposition]) -> int:
    if len(decs) == 0:
        raise EmptyEnsemble("no decompositions given")
    sizes = {d.n for d in decs}
    if len(sizes) != 1:
        raise MixedDimensions(f"decompositions have mixed sizes {sorted(sizes)}")
    return sizes.pop()


def rank_averaged_ipr(decompositions: Iterable[SpectralDecomposition]) -> np.ndarray:
    """Mean over samples of the IPR at each ascending-eigenvalue rank."""
    decs = list(decompositions)
    _common_n(decs)
    return np.mean([_columns_ipr(d.eigenvectors) for d in decs], axis=0)


def _as_eigenvalue_table(eigenvalues: ArrayLike | Sequence[ArrayLike]) -> np.ndarray:
    if isinstance(eigenvalues, np.ndarray) and eigenvalues.ndim == 1:
        eigenvalues = [eigenvalues]
    elif len(eigenvalues) and np.ndim(eigenvalues[0]) == 0:
        eigenvalues = [eigenvalues]
    rows = [np.asarray(r, dtype=np.float64) for r in eigenvalues]
    if not rows:
        raise EmptyEnsemble("no eigenvalue lists given")
    if len({r.shape for r in rows}) != 1 or rows[0].ndim != 1:
        raise MixedDimensions("eigenvalue lists must all be 1-D with equal length")
    return np.vstack(rows)


def normalized_spacings(eigenvalues: ArrayLike | Sequence[ArrayLike], mode: str = "rank") -> np.ndarray:
    """Nearest-neighbour spacings divided by their mean.

    ``mode="rank"`` divides the spacing at rank n by the ensemble mean
    spacing at the same rank; ``mode="pooled"`` divides by the mean spacing
    within each sample. Output is flattened sample by sample.
    """
    table = _as_eigenvalue_table(eigenvalues)
    if table.shape[1] < 2:
        raise ValueError("need at least two eigenvalues per sample")
    if np.any(np.diff(table, axis=1) < 0):
        raise ValueError("eigenvalues must be sorted ascending within each sample")
    gaps = np.diff(table, axis=1)
    if mode == "rank":
        scale = gaps.mean(axis=0, keepdims=True)
    elif mode == "pooled":
        scale = gaps.mean(axis=1, keepdims=True)
    else:
        raise ValueError(f"mode must be one of {SPACING_MODES}, got {mode!r}")
    if np.any(scale <= 0):
        raise DegenerateSpectrum("zero mean spacing; spectrum is degenerate")
    return (gaps / scale).ravel()


@dataclass(frozen=True)
class Histogram:
    edges: np.ndarray
    counts: np.ndarray
    n_samples: int
    n_values: int

    @property
    def density(self) -> np.ndarray:
        """Probability density (integrates to one over the bins)."""
        widths = np.diff(self.edges)
        total = self.counts.sum()
        if total == 0:
            return np.zeros_like(widths)
        return self.counts / (total * widths)


def spectral_density_histogram(
    eigenvalues: ArrayLike | Sequence[ArrayLike],
    bins: int | str | ArrayLike = "fd",
) -> Histogram:
    """Pooled eigenvalue histogram over all samples.

    ``bins`` is a count, a numpy rule name (default Freedman-Diaconis) or
    explicit edges, which must cover every eigenvalue.
    """
    table = _as_eigenvalue_table(eigenvalues)
    values = table.ravel()
    if isinstance(bins, (str, int, np.integer)):
        edges = np.histogram_bin_edges(values, bins=bins)
    else:
        edges = np.asarray(bins, dtype=np.float64)
        if values.min() < edges[0] or values.max() > edges[-1]:
            raise ValueError("explicit bin edges do not cover the eigenvalue range")
    counts, edges = np.histogram(values, bins=edges)
    return Histogram(edges, counts, table.shape[0], values.size)


@dataclass(frozen=True)
class CprRecords:
    """Per-component scatter records ``(log T_i, CPR_i)`` with provenance."""

    sample: np.ndarray
    component: np.ndarray
    log_t: np.ndarray
    cpr: np.ndarray

    def __len__(self) -> int:
        return self.log_t.shape[0]

    @classmethod
    def empty(cls) -> CprRecords:
        z = np.zeros(0)
        return cls(z.astype(int), z.astype(int), z, z)

    @classmethod
    def concat(cls, parts: Sequence[CprRecords]) -> CprRecords:
        if not parts:
            return cls.empty()
        return cls(*(np.concatenate([getattr(p, f) for p in parts]) for f in ("sample", "component", "log_t", "cpr")))


def cpr_vs_temperature(
    pairs: Iterable[tuple[ArrayLike, SpectralDecomposition]],
) -> CprRecords:
    """One ``(log T_i, CPR_i)`` record per component per sample."""
    parts = []
    n_expected = None
    for k, (t, dec) in enumerate(pairs):
        tv = np.asarray(t, dtype=np.float64)
        if tv.shape != (dec.n,):
            raise MixedDimensions(f"sample {k}: {tv.shape[0]} temperatures for a {dec.n}x{dec.n} matrix")
        if n_expected is None:
            n_expected = dec.n
        elif dec.n != n_expected:
            raise MixedDimensions("samples have mixed dimensions")
        values = np.sum(dec.eigenvectors**4, axis=1)
        parts.append(CprRecords(np.full(dec.n, k), np.arange(dec.n), np.log(tv), values))
    return CprRecords.concat(parts)


def inverted_bell_statistic(log_t: ArrayLike, cpr_values: ArrayLike) -> float:
    """Spearman correlation between ``|log T - median(log T)|`` and CPR.

    Positive values mean extreme-temperature components carry the largest
    CPR. Returns 0 when either variable is constant.
    """
    x = np.asarray(log_t, dtype=np.float64)
    y = np.asarray(cpr_values, dtype=np.float64)
    if x.shape != y.shape:
        raise MixedDimensions("log_t and cpr must have equal length")
    if x.size < 10:
        raise TooFewRecords(f"need at least 10 records, got {x.size}")
    dist = np.abs(x - np.median(x))
    if np.ptp(dist) == 0.0 or np.ptp(y) == 0.0:
        return 0.0
    return float(stats.spearmanr(dist, y).statistic)


@dataclass(frozen=True)
class SpectralSummary:
    density: Histogram
    rank_ipr: np.ndarray
    rank_ipr_sem: np.ndarray
    rank_eigenvalue_mean: np.ndarray
    spacings: np.ndarray
    cpr_records: CprRecords
    spacing_mode: str = "rank"


@dataclass
class SpectrumAccumulator:
    """Fold of per-sample spectra into ensemble observables.

    Samples must be added in sample-index order; CPR records are kept for the
    first ``keep_records`` samples only.
    """

    keep_records: int = 10
    eigenvalues: list[np.ndarray] = field(default_factory=list)
    iprs: list[np.ndarray] = field(default_factory=list)
    records: list[CprRecords] = field(default_factory=list)

    @property
    def n_samples(self) -> int:
        return len(self.eigenvalues)

    def add(self, dec: SpectralDecomposition, temperatures: ArrayLike | None = None) -> None:
        if self.eigenvalues and dec.n != self.eigenvalues[0].shape[0]:
            raise MixedDimensions(f"sample of size {dec.n} added to ensemble of size {self.eigenvalues[0].shape[0]}")
        k = self.n_samples
        self.eigenvalues.append(np.array(dec.eigenvalues))
        self.iprs.append(_columns_ipr(dec.eigenvectors))
        if temperatures is not None and k < self.keep_records:
            part = cpr_vs_temperature([(temperatures, dec)])
            self.records.append(CprRecords(np.full(dec.n, k), part.component, part.log_t, part.cpr))

    def eigenvalue_table(self) -> np.ndarray:
        if not self.eigenvalues:
            raise EmptyEnsemble("no samples accumulated")
        return np.vstack(self.eigenvalues)

    def ipr_table(self) -> np.ndarray:
        if not self.iprs:
            raise EmptyEnsemble("no samples accumulated")
        return np.vstack(self.iprs)

    def cpr_records(self) -> CprRecords:
        return CprRecords.concat(self.records)

    def summary(self, bins: int | str | ArrayLike = "fd", spacing_mode: str = "rank") -> SpectralSummary:
        ev = self.eigenvalue_table()
        ip = self.ipr_table()
        sem = ip.std(axis=0, ddof=1) / np.sqrt(ip.shape[0]) if ip.shape[0] > 1 else np.full(ip.shape[1], np.nan)
        return SpectralSummary(
            density=spectral_density_histogram(ev, bins),
            rank_ipr=ip.mean(axis=0),
            rank_ipr_sem=sem,
            rank_eigenvalue_mean=ev.mean(axis=0),
            spacings=normalized_spacings(ev, spacing_mode),
            cpr_records=self.cpr_records(),
            spacing_mode=spacing_mode,
        )
