"""Returns panels: CSV ingestion, heterogeneity estimators and the
real-data counterparts of the model observables."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dynamics import empirical_covariance
from .errors import EmptyPanel, ParseError, TooFewSamples, ZeroVarianceAsset
from .model import pearson_correlation, symmetric_eigendecomposition, SpectralDecomposition
from .spectral import CprRecords, normalized_spacings

__all__ = [
    "NA_TOKENS",
    "IngestReport",
    "ReturnsPanel",
    "HeterogeneityEstimate",
    "EmpiricalAnalysis",
    "load_returns_csv",
    "write_returns_csv",
    "estimate_lognormal_params",
    "diffusion_estimator",
    "empirical_analysis",
]

NA_TOKENS = frozenset({"", "na", "nan", "null", "none", "-"})
NA_POLICIES = ("drop-row", "error")


@dataclass(frozen=True)
class IngestReport:
    rows_read: int
    rows_dropped: int
    dropped_assets: tuple[str, ...] = ()
    na_policy: str = "drop-row"

    def as_dict(self) -> dict:
        return {
            "rows_read": self.rows_read,
            "rows_dropped": self.rows_dropped,
            "dropped_assets": list(self.dropped_assets),
            "na_policy": self.na_policy,
        }


@dataclass(frozen=True)
class ReturnsPanel:
    returns: np.ndarray
    asset_ids: tuple[str, ...]
    report: IngestReport | None = None

    def __post_init__(self) -> None:
        if self.returns.ndim != 2 or self.returns.shape[1] != len(self.asset_ids):
            raise ValueError("returns must be M x N with one id per column")
        if self.returns.shape[0] < 2:
            raise TooFewSamples("a returns panel needs at least two rows")

    @property
    def m(self) -> int:
        return self.returns.shape[0]

    @property
    def n(self) -> int:
        return self.returns.shape[1]

    @classmethod
    def from_array(cls, returns: np.ndarray, asset_ids: list[str] | None = None) -> ReturnsPanel:
        r = np.asarray(returns, dtype=np.float64)
        ids = tuple(asset_ids) if asset_ids is not None else tuple(f"a{i}" for i in range(r.shape[1]))
        return cls(r, ids)


def load_returns_csv(path: str | Path, *, na_policy: str = "drop-row") -> ReturnsPanel:
    """Read a returns CSV: header of asset ids, then one row per day.

    Rows containing a missing value are dropped (``na_policy="drop-row"``) or
    rejected (``"error"``). Assets with zero variance after row filtering
    are removed and listed in the report.
    """
    if na_policy not in NA_POLICIES:
        raise ValueError(f"na_policy must be one of {NA_POLICIES}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyPanel(f"{path} is empty") from None
        ids = [h.strip() for h in header]
        if not ids or any(not h for h in ids):
            raise ParseError("header must name every asset column", line=1)
        rows: list[list[float]] = []
        read = dropped = 0
        for line_no, raw in enumerate(reader, start=2):
            if not raw or all(not cell.strip() for cell in raw):
                continue
            if len(raw) != len(ids):
                raise ParseError(f"expected {len(ids)} fields, found {len(raw)}", line=line_no)
            read += 1
            values = []
            missing = False
            for col, cell in enumerate(raw, start=1):
                token = cell.strip()
                if token.lower() in NA_TOKENS:
                    if na_policy == "error":
                        raise ParseError(f"missing value {token!r}", line=line_no, column=col)
                    missing = True
                    values.append(math.nan)
                    continue
                try:
                    v = float(token)
                except ValueError:
                    raise ParseError(f"not a number: {token!r}", line=line_no, column=col) from None
                if not math.isfinite(v):
                    raise ParseError(f"non-finite value {token!r}", line=line_no, column=col)
                values.append(v)
            if missing:
                dropped += 1
            else:
                rows.append(values)
    if not rows:
        raise EmptyPanel(f"{path} has no complete data rows")
    data = np.asarray(rows, dtype=np.float64)
    keep = data.var(axis=0) > 0.0 if data.shape[0] > 1 else np.ones(data.shape[1], dtype=bool)
    gone = tuple(a for a, k in zip(ids, keep) if not k)
    if not keep.any():
        raise EmptyPanel("every asset has zero variance")
    if data.shape[0] < 2:
        raise EmptyPanel("fewer than two complete rows")
    report = IngestReport(read, dropped, gone, na_policy)
    return ReturnsPanel(data[:, keep], tuple(a for a, k in zip(ids, keep) if k), report)


def write_returns_csv(path: str | Path, panel: ReturnsPanel) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(panel.asset_ids)
        for row in panel.returns:
            w.writerow([repr(float(v)) for v in row])


@dataclass(frozen=True)
class HeterogeneityEstimate:
    """Log-normal fit to per-asset return variances.

    ``mu_hat`` and ``d_hat`` are the mean and standard deviation of the log
    variances; ``d_variance_form`` is the mean squared deviation (``d_hat**2``).
    """

    mu_hat: float
    d_hat: float
    variances: np.ndarray
    diffusion: np.ndarray
    asset_ids: tuple[str, ...]
    excluded: tuple[str, ...] = ()

    @property
    def d_variance_form(self) -> float:
        return self.d_hat**2

    @property
    def mu_stderr(self) -> float:
        return self.d_hat / math.sqrt(len(self.variances))

    @property
    def d_stderr(self) -> float:
        return self.d_hat / math.sqrt(2.0 * (len(self.variances) - 1))


def diffusion_estimator(panel: ReturnsPanel | np.ndarray) -> np.ndarray:
    """``(1/M) sum_{t=1}^{M-1} (r(t+1) - r(t))^2`` per asset."""
    r = panel.returns if isinstance(panel, ReturnsPanel) else np.asarray(panel, dtype=np.float64)
    if r.ndim != 2 or r.shape[0] < 2:
        raise TooFewSamples("need at least two time samples")
    return np.sum(np.diff(r, axis=0) ** 2, axis=0) / r.shape[0]


def estimate_lognormal_params(panel: ReturnsPanel, *, strict: bool = False) -> HeterogeneityEstimate:
    """Fit ``(mu, D)`` from the log of each asset's empirical variance.

    Zero-variance assets are excluded and listed, or raise
    :class:`ZeroVarianceAsset` when ``strict``.
    """
    var = panel.returns.var(axis=0)
    bad = var <= 0.0
    excluded = tuple(a for a, b in zip(panel.asset_ids, bad) if b)
    if excluded and (strict or bad.all()):
        raise ZeroVarianceAsset(f"zero-variance assets: {list(excluded)}", list(excluded))
    keep = ~bad
    logs = np.log(var[keep])
    return HeterogeneityEstimate(
        mu_hat=float(logs.mean()),
        d_hat=float(logs.std()),
        variances=var[keep],
        diffusion=diffusion_estimator(panel.returns[:, keep]),
        asset_ids=tuple(a for a, k in zip(panel.asset_ids, keep) if k),
        excluded=excluded,
    )


@dataclass(frozen=True)
class EmpiricalAnalysis:
    correlations: list[np.ndarray] = field(repr=False)
    decompositions: list[SpectralDecomposition] = field(repr=False)
    rank_ipr: np.ndarray
    cpr: np.ndarray
    spacings: np.ndarray
    scatter: CprRecords
    spacing_mode: str

    @property
    def splits(self) -> int:
        return len(self.decompositions)


def empirical_analysis(panel: ReturnsPanel, *, splits: int = 1, spacing_mode: str | None = None) -> EmpiricalAnalysis:
    """Correlation spectra of ``splits`` contiguous sub-panels.

    Per-rank IPR and CPR are averaged over sub-panels. Scatter records pair
    ``log D^(e)_i`` of each sub-panel with its CPR. The default spacing
    normalization is per rank when there are several sub-panels and pooled
    within the single matrix otherwise (rank mode is trivial for one matrix).
    """
    if splits < 1:
        raise ValueError("splits must be positive")
    if panel.m < 2 * splits:
        raise TooFewSamples(f"{panel.m} rows cannot be split into {splits} panels of >= 2 rows")
    mode = spacing_mode or ("rank" if splits > 1 else "pooled")
    corrs, decs, parts = [], [], []
    for k, rows in enumerate(np.array_split(panel.returns, splits, axis=0)):
        c = pearson_correlation(empirical_covariance(rows))
        dec = symmetric_eigendecomposition(c)
        corrs.append(c)
        decs.append(dec)
        diff = diffusion_estimator(rows)
        cpr_k = np.sum(dec.eigenvectors**4, axis=1)
        with np.errstate(divide="ignore"):
            parts.append(CprRecords(np.full(panel.n, k), np.arange(panel.n), np.log(diff), cpr_k))
    ev = np.vstack([d.eigenvalues for d in decs])
    return EmpiricalAnalysis(
        correlations=corrs,
        decompositions=decs,
        rank_ipr=np.mean([np.sum(d.eigenvectors**4, axis=0) for d in decs], axis=0),
        cpr=np.mean([p.cpr for p in parts], axis=0),
        spacings=normalized_spacings(ev, mode),
        scatter=CprRecords.concat(parts),
        spacing_mode=mode,
    )
