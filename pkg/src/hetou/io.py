"""File formats: dense matrix CSV, observable CSVs, JSON bundles, manifests.

All text output is UTF-8 with LF line endings. Floats are written with
``repr`` so a write/read round trip is exact.
"""

from __future__ import annotations

import csv
import json
import platform
import sys
import time
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from .spectral import CprRecords, Histogram, SpectralSummary

__all__ = [
    "write_matrix_csv",
    "read_matrix_csv",
    "write_vector_csv",
    "read_vector_csv",
    "write_rows_csv",
    "write_json",
    "write_summary_csvs",
    "RunManifest",
]


def _fmt(v: float) -> str:
    return repr(float(v))


def write_matrix_csv(path: str | Path, m: np.ndarray) -> None:
    """Full N x N matrix, one row per line, no header."""
    arr = np.asarray(m, dtype=np.float64)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for row in np.atleast_2d(arr):
            w.writerow([_fmt(v) for v in row])


def read_matrix_csv(path: str | Path) -> np.ndarray:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [[float(x) for x in r] for r in csv.reader(fh) if r]
    if not rows or len({len(r) for r in rows}) != 1:
        raise ValueError(f"{path}: ragged or empty matrix file")
    return np.asarray(rows, dtype=np.float64)


def write_vector_csv(path: str | Path, v: np.ndarray) -> None:
    """One value per line."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        for x in np.asarray(v, dtype=np.float64).ravel():
            fh.write(_fmt(x) + "\n")


def read_vector_csv(path: str | Path) -> np.ndarray:
    """Accepts one value per line or a single comma-separated row."""
    m = read_matrix_csv(path)
    return m.ravel()


def write_rows_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(x) if isinstance(x, (float, np.floating)) else x for x in row])


def write_json(path: str | Path, payload: Any) -> None:
    def default(o: Any) -> Any:
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, (np.integer,)):
            return int(o)
        if isinstance(o, (np.floating,)):
            return float(o)
        raise TypeError(f"not JSON serializable: {type(o)}")

    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, default=default, allow_nan=True)
        fh.write("\n")


def write_density_csv(path: Path, h: Histogram) -> None:
    dens = h.density
    write_rows_csv(
        path,
        ["bin_left", "bin_right", "count", "density"],
        ((h.edges[i], h.edges[i + 1], int(h.counts[i]), dens[i]) for i in range(len(h.counts))),
    )


def write_cpr_csv(path: Path, rec: CprRecords, x_name: str = "log_t") -> None:
    write_rows_csv(
        path,
        ["sample", "component", x_name, "cpr"],
        zip(rec.sample.tolist(), rec.component.tolist(), rec.log_t, rec.cpr),
    )


def write_summary_csvs(out_dir: Path, summary: SpectralSummary, prefix: str = "") -> list[Path]:
    """The four plot-data files for one ensemble summary."""
    out_dir.mkdir(parents=True, exist_ok=True)
    n = summary.rank_ipr.shape[0]
    paths = [out_dir / f"{prefix}{name}.csv" for name in ("density", "rank_ipr", "spacings", "cpr_scatter")]
    write_density_csv(paths[0], summary.density)
    write_rows_csv(
        paths[1],
        ["rank", "eigenvalue_mean", "ipr_mean", "ipr_sem"],
        zip(range(1, n + 1), summary.rank_eigenvalue_mean, summary.rank_ipr, summary.rank_ipr_sem),
    )
    n_gaps = n - 1
    s = summary.spacings
    write_rows_csv(
        paths[2],
        ["sample", "rank", "s"],
        ((i // n_gaps, i % n_gaps + 1, s[i]) for i in range(s.shape[0])),
    )
    write_cpr_csv(paths[3], summary.cpr_records)
    return paths


@dataclass
class RunManifest:
    """Provenance record written once per output directory."""

    command: list[str]
    config: dict[str, Any]
    seeds: list[int]
    tolerances: dict[str, float]
    artifacts: list[str] = field(default_factory=list)
    notes: dict[str, Any] = field(default_factory=dict)
    started: float = field(default_factory=time.time)

    def write(self, out_dir: Path) -> Path:
        path = out_dir / "manifest.json"
        payload = {
            "command": self.command,
            "config": self.config,
            "seeds": self.seeds,
            "tolerances": self.tolerances,
            "artifacts": sorted(self.artifacts),
            "notes": self.notes,
            "wall_time_s": round(time.time() - self.started, 3),
            "version": __version__,
            "python": sys.version.split()[0],
            "numpy": np.__version__,
            "platform": platform.platform(),
        }
        write_json(path, payload)
        return path
