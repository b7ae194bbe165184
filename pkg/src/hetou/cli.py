"""Command-line driver.

Exit codes: 0 success, 2 configuration, 3 sampling, 4 data, 5 verification.
Every subcommand writes only inside ``--out`` and leaves one manifest.json.
"""

from __future__ import annotations

import argparse
import configparser
import math
import sys
from pathlib import Path
from typing import Any

import numpy as np
from scipy import stats

from . import __version__
from .data import empirical_analysis, estimate_lognormal_params, load_returns_csv
from .dynamics import SdeConfig, euler_maruyama_simulate, sde_covariance
from .ensemble import K_CONVENTION, MATRIX_KINDS, EnsembleConfig, analysed_matrix, sample_ensemble
from .errors import (
    ConfigError,
    EmptyPanel,
    HetOUError,
    ParseError,
    RejectionLimitExceeded,
    TooFewSamples,
    ZeroVarianceAsset,
)
from .experiments import EPS_OVER_SQRT_N, FIGURE_DEFAULTS, VerifyOptions, run_ensemble, verify_battery
from .io import (
    RunManifest,
    read_matrix_csv,
    read_vector_csv,
    write_cpr_csv,
    write_json,
    write_matrix_csv,
    write_rows_csv,
    write_summary_csvs,
)
from .model import (
    TOLERANCE_PROFILES,
    inverse_couplings,
    lyapunov_oracle_solve,
    relative_residual,
    stationary_covariance,
    symmetric_eigendecomposition,
)
from .perturbation import first_order_correlation, order_scaling_report
from .spectral import SpectrumAccumulator, inverted_bell_statistic, normalized_spacings, spectral_density_histogram

EXIT_OK, EXIT_CONFIG, EXIT_SAMPLING, EXIT_DATA, EXIT_VERIFY = 0, 2, 3, 4, 5

SAMPLE_KEYS = {"n", "epsilon", "epsilon_over_sqrt_n", "mu", "d", "n_samples", "seed", "max_rejections"}


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


# -- argument plumbing ------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=None, help="master seed (default 0)")
    p.add_argument("--out", type=Path, default=None, help="run directory (default ./hetou-<command>)")
    p.add_argument("--config", type=Path, default=None, help="flat key = value config file")
    p.add_argument("--tolerance-profile", choices=sorted(TOLERANCE_PROFILES), default="default")
    return p


def _bins(text: str) -> int | str | np.ndarray:
    if "," in text:
        return np.array([float(x) for x in text.split(",")])
    try:
        return int(text)
    except ValueError:
        return text


def _add_ensemble_flags(p: argparse.ArgumentParser, *, with_d: bool = True) -> None:
    p.add_argument("--n", type=int, default=None)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--epsilon", type=float, default=None)
    g.add_argument("--epsilon-over-sqrt-n", type=float, default=None)
    p.add_argument("--mu", type=float, default=None)
    if with_d:
        p.add_argument("--d", type=float, default=None)
    p.add_argument("--samples", type=int, default=None, dest="n_samples")
    p.add_argument("--max-rejections", type=int, default=None)
    p.add_argument("--matrix", choices=MATRIX_KINDS, default=None)
    p.add_argument("--spacing-normalization", choices=("rank", "pooled"), default="rank")
    p.add_argument("--bins", type=_bins, default="fd", help="bin count, numpy rule name, or comma-separated edges")
    p.add_argument("--workers", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="hetou", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"hetou {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", parents=[common], help="sample the ensemble and its observables")
    _add_ensemble_flags(p)
    p.add_argument("--save-matrices", action="store_true", help="write J, T, C of every sample")
    p.add_argument("--keep-records", type=int, default=10, help="samples contributing CPR scatter records")

    p = sub.add_parser("figures", parents=[common], help="plot data for figures 1-4")
    p.add_argument("which", type=int, choices=(1, 2, 3, 4))
    _add_ensemble_flags(p)

    p = sub.add_parser("verify", parents=[common], help="cross-oracle verification battery")
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--samples", type=int, default=5)
    p.add_argument("--break-noise-factor", action="store_true", help="negative control: drop the factor 2 in the noise")

    p = sub.add_parser("analyze", parents=[common], help="observables of a returns CSV")
    p.add_argument("csv", type=Path)
    p.add_argument("--splits", type=int, default=1)
    p.add_argument("--na-policy", choices=("drop-row", "error"), default="drop-row")
    p.add_argument("--spacing-normalization", choices=("rank", "pooled"), default=None)
    p.add_argument("--overlay", action="store_true", help="add a model ensemble fitted to the estimated (mu, D)")
    p.add_argument("--overlay-samples", type=int, default=100)
    p.add_argument("--epsilon-over-sqrt-n", type=float, default=EPS_OVER_SQRT_N)

    p = sub.add_parser("perturbation-check", parents=[common], help="small-coupling expansion residuals")
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--d", type=float, default=1.0, help="log-normal spread of the test temperatures")
    p.add_argument("--epsilon-grid", type=lambda s: [float(x) for x in s.split(",")], default=[1e-2, 1e-3, 1e-4])
    p.add_argument("--epsilon", type=float, default=None, help="single epsilon instead of a grid")
    p.add_argument("--no-k2", action="store_true", help="set the second-order coupling K2 to zero")
    p.add_argument("--t-inversion-check", action="store_true")

    p = sub.add_parser("solve", parents=[common], help="direct (J -> C) or inverse (C -> J) problem")
    p.add_argument("direction", choices=("direct", "inverse"))
    p.add_argument("--coupling", type=Path, help="J matrix CSV (direct)")
    p.add_argument("--covariance", type=Path, help="C matrix CSV (inverse)")
    p.add_argument("--temperatures", type=Path, required=True)
    p.add_argument("--oracle", action="store_true", help="direct problem via the dense linear-solve oracle")

    p = sub.add_parser("simulate", parents=[common], help="Euler-Maruyama simulation of the coupled SDE")
    p.add_argument("--coupling", type=Path, required=True)
    p.add_argument("--temperatures", type=Path, required=True)
    p.add_argument("--dt", type=float, default=1e-2)
    p.add_argument("--steps", type=int, default=100_000)
    p.add_argument("--burn-in", type=int, default=None)
    p.add_argument("--thinning", type=int, default=1)
    p.add_argument("--chains", type=int, default=1, help=">1 writes only the accumulated covariance")
    return parser


def _read_config(path: Path | None) -> dict[str, str]:
    if path is None:
        return {}
    cp = configparser.ConfigParser()
    try:
        cp.read_string("[run]\n" + path.read_text(encoding="utf-8"))
    except (OSError, configparser.Error) as exc:
        raise CliError(f"cannot read config {path}: {exc}", EXIT_CONFIG) from exc
    return dict(cp["run"])


def _ensemble_config(args: argparse.Namespace, defaults: dict[str, Any]) -> EnsembleConfig:
    """Merge builtin defaults < config file < explicit flags."""
    values: dict[str, Any] = dict(defaults)
    file_values = _read_config(args.config)
    unknown = set(file_values) - SAMPLE_KEYS
    if unknown:
        raise CliError(f"unknown config keys: {sorted(unknown)}", EXIT_CONFIG)
    values.update(file_values)
    for key in ("n", "mu", "d", "n_samples", "seed", "max_rejections", "epsilon", "epsilon_over_sqrt_n"):
        v = getattr(args, key, None)
        if v is not None:
            if key in ("epsilon", "epsilon_over_sqrt_n"):
                values.pop("epsilon", None)
                values.pop("epsilon_over_sqrt_n", None)
            values[key] = v
    try:
        scaled = values.pop("epsilon_over_sqrt_n", None)
        if scaled is not None and "epsilon" not in values:
            values["epsilon"] = float(scaled) / math.sqrt(int(values["n"]))
        return EnsembleConfig.from_mapping(values)
    except (ConfigError, KeyError, ValueError) as exc:
        raise CliError(f"invalid configuration: {exc}", EXIT_CONFIG) from exc


def _out_dir(args: argparse.Namespace) -> Path:
    out = args.out if args.out is not None else Path(f"hetou-{args.command}")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _policy(args: argparse.Namespace):
    return TOLERANCE_PROFILES[args.tolerance_profile]


def _manifest(args: argparse.Namespace, argv: list[str], config: dict[str, Any], seeds: list[int]) -> RunManifest:
    return RunManifest(command=["hetou", *argv], config=config, seeds=seeds, tolerances=_policy(args).as_dict())


def _finish(manifest: RunManifest, out: Path) -> None:
    manifest.artifacts = [str(p.relative_to(out)) for p in sorted(out.rglob("*")) if p.is_file() and p.name != "manifest.json"]
    manifest.write(out)


def _ensemble_summary_json(acc: SpectrumAccumulator, spacing_mode: str) -> dict[str, Any]:
    if acc.n_samples == 0:
        return {"n_samples": 0}
    ev = acc.eigenvalue_table()
    rec = acc.cpr_records()
    out = {
        "n_samples": acc.n_samples,
        "lambda_min_mean": float(ev[:, 0].mean()),
        "lambda_max_mean": float(ev[:, -1].mean()),
        "rank_ipr": acc.ipr_table().mean(axis=0),
        "inverted_bell_statistic": inverted_bell_statistic(rec.log_t, rec.cpr) if len(rec) >= 10 else None,
    }
    try:
        s = normalized_spacings(ev, spacing_mode)
        out["spacing_skewness"] = float(stats.skew(s))
    except HetOUError:
        out["spacing_skewness"] = None
    return out


# -- subcommands ------------------------------------------------------------


def cmd_sample(args: argparse.Namespace, argv: list[str]) -> int:
    cfg = _ensemble_config(args, {"n": 100, "epsilon_over_sqrt_n": EPS_OVER_SQRT_N, "n_samples": 100, "seed": 0})
    out = _out_dir(args)
    matrix = args.matrix or "covariance"
    policy = _policy(args)
    acc = SpectrumAccumulator(keep_records=args.keep_records)
    rejections = 0
    if args.save_matrices:
        (out / "samples").mkdir(exist_ok=True)
    try:
        for s in sample_ensemble(cfg, workers=args.workers, policy=policy):
            rejections += s.rejections
            acc.add(symmetric_eigendecomposition(analysed_matrix(s, matrix), policy), s.t)
            if args.save_matrices:
                stem = out / "samples" / f"sample_{s.sample_index:05d}"
                write_matrix_csv(f"{stem}_J.csv", s.j)
                write_matrix_csv(f"{stem}_C.csv", s.c)
                write_rows_csv(f"{stem}_T.csv", ["t"], ((x,) for x in s.t))
    except RejectionLimitExceeded as exc:
        raise CliError(str(exc), EXIT_SAMPLING) from exc
    if acc.n_samples:
        write_summary_csvs(out, acc.summary(args.bins, args.spacing_normalization))
    else:
        write_rows_csv(out / "density.csv", ["bin_left", "bin_right", "count", "density"], [])
        write_rows_csv(out / "rank_ipr.csv", ["rank", "eigenvalue_mean", "ipr_mean", "ipr_sem"], [])
        write_rows_csv(out / "spacings.csv", ["sample", "rank", "s"], [])
        write_rows_csv(out / "cpr_scatter.csv", ["sample", "component", "log_t", "cpr"], [])
    summary = {
        "config": cfg.to_dict(),
        "matrix": matrix,
        "k_convention": K_CONVENTION,
        "spacing_normalization": args.spacing_normalization,
        "rank_order": "ascending eigenvalue, rank 1 = smallest",
        "total_rejections": rejections,
        **_ensemble_summary_json(acc, args.spacing_normalization),
    }
    write_json(out / "summary.json", summary)
    m = _manifest(args, argv, {**cfg.to_dict(), "matrix": matrix}, [cfg.seed])
    m.notes["k_convention"] = K_CONVENTION
    _finish(m, out)
    print(f"wrote {acc.n_samples} samples to {out}")
    return EXIT_OK


def cmd_figures(args: argparse.Namespace, argv: list[str]) -> int:
    which = args.which
    fd = FIGURE_DEFAULTS[which]
    base = _ensemble_config(
        args,
        {"n": fd["n"], "epsilon_over_sqrt_n": EPS_OVER_SQRT_N, "mu": fd["mu"], "n_samples": fd["samples"], "seed": 0, "d": 0.0},
    )
    d_values = list(fd["d_values"])
    if args.d is not None:
        d_values = [args.d] if which in (1, 4) else [0.0, args.d]
    matrix = args.matrix or fd["matrix"]
    out = _out_dir(args)
    policy = _policy(args)
    results: dict[float, SpectrumAccumulator] = {}
    try:
        for d in d_values:
            cfg = EnsembleConfig(**{**base.to_dict(), "d": d})
            results[d] = run_ensemble(cfg, matrix, keep_records=base.n_samples, workers=args.workers, policy=policy)
    except RejectionLimitExceeded as exc:
        raise CliError(str(exc), EXIT_SAMPLING) from exc
    bundle: dict[str, Any] = {
        "figure": which,
        "config": base.to_dict(),
        "d_values": d_values,
        "matrix": matrix,
        "k_convention": K_CONVENTION,
        "spacing_normalization": args.spacing_normalization,
        "per_d": {str(d): _ensemble_summary_json(acc, args.spacing_normalization) for d, acc in results.items()},
    }
    if which == 1:
        rows = []
        for d, acc in results.items():
            h = spectral_density_histogram(acc.eigenvalue_table(), args.bins)
            dens = h.density
            rows += [(d, h.edges[i], h.edges[i + 1], int(h.counts[i]), dens[i]) for i in range(len(h.counts))]
        write_rows_csv(out / "fig1_density.csv", ["d", "bin_left", "bin_right", "count", "density"], rows)
    elif which == 2:
        cols, header = [], ["rank"]
        for d, acc in results.items():
            ip = acc.ipr_table()
            cols += [ip.mean(axis=0), ip.std(axis=0, ddof=1) / math.sqrt(ip.shape[0]) if ip.shape[0] > 1 else np.full(ip.shape[1], np.nan)]
            header += [f"ipr_d{d:g}", f"sem_d{d:g}"]
        n = cols[0].shape[0]
        write_rows_csv(out / "fig2_rank_ipr.csv", header, ([r + 1, *(c[r] for c in cols)] for r in range(n)))
    elif which == 3:
        rows, pooled = [], {}
        for d, acc in results.items():
            s = normalized_spacings(acc.eigenvalue_table(), args.spacing_normalization)
            pooled[d] = s
            gaps = acc.eigenvalue_table().shape[1] - 1
            rows += [(d, i // gaps, i % gaps + 1, s[i]) for i in range(s.shape[0])]
        write_rows_csv(out / "fig3_spacings.csv", ["d", "sample", "rank", "s"], rows)
        allv = np.concatenate(list(pooled.values()))
        edges = np.histogram_bin_edges(allv, bins=args.bins)
        hist_rows = []
        for d, s in pooled.items():
            dens, _ = np.histogram(s, bins=edges, density=True)
            hist_rows += [(d, edges[i], edges[i + 1], dens[i]) for i in range(len(dens))]
        write_rows_csv(out / "fig3_spacing_hist.csv", ["d", "bin_left", "bin_right", "density"], hist_rows)
    else:
        for d, acc in results.items():
            write_cpr_csv(out / f"fig4_cpr_scatter_d{d:g}.csv", acc.cpr_records())
    write_json(out / f"fig{which}_summary.json", bundle)
    m = _manifest(args, argv, {**base.to_dict(), "d_values": d_values, "matrix": matrix, "figure": which}, [base.seed])
    m.notes["figure_defaults"] = fd
    _finish(m, out)
    print(f"figure {which} plot data written to {out}")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, argv: list[str]) -> int:
    out = _out_dir(args)
    opts = VerifyOptions(
        n=args.n,
        samples=args.samples,
        seed=args.seed or 0,
        noise_factor=1.0 if args.break_noise_factor else 2.0,
        policy=_policy(args),
    )
    try:
        results = verify_battery(opts)
    except HetOUError as exc:
        raise CliError(f"verification aborted: {exc}", EXIT_VERIFY) from exc
    for r in results:
        print(r.line())
    write_json(out / "verify_report.json", [r.__dict__ for r in results])
    _finish(_manifest(args, argv, {"n": args.n, "samples": args.samples, "break_noise_factor": args.break_noise_factor}, [opts.seed]), out)
    failed = [r for r in results if not r.passed and not r.skipped]
    if failed:
        print(f"{len(failed)} check(s) FAILED", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_analyze(args: argparse.Namespace, argv: list[str]) -> int:
    out = _out_dir(args)
    try:
        panel = load_returns_csv(args.csv, na_policy=args.na_policy)
        est = estimate_lognormal_params(panel)
        res = empirical_analysis(panel, splits=args.splits, spacing_mode=args.spacing_normalization)
    except (ParseError, EmptyPanel, TooFewSamples, ZeroVarianceAsset, OSError) as exc:
        raise CliError(f"data error: {exc}", EXIT_DATA) from exc
    write_json(out / "ingest_report.json", panel.report.as_dict() if panel.report else {})
    write_json(
        out / "estimate.json",
        {
            "mu_hat": est.mu_hat,
            "d_hat": est.d_hat,
            "d_variance_form": est.d_variance_form,
            "mu_stderr": est.mu_stderr,
            "d_stderr": est.d_stderr,
            "n_assets": len(est.asset_ids),
            "m_rows": panel.m,
            "excluded": list(est.excluded),
        },
    )
    n = panel.n
    cols = [res.rank_ipr]
    header = ["rank", "ipr_data"]
    seeds = []
    if args.overlay:
        seed = args.seed or 0
        seeds.append(seed)
        cfg = EnsembleConfig.scaled(n, args.epsilon_over_sqrt_n, mu=est.mu_hat, d=est.d_hat, n_samples=args.overlay_samples, seed=seed)
        try:
            acc = run_ensemble(cfg, "correlation", keep_records=0, policy=_policy(args))
        except RejectionLimitExceeded as exc:
            raise CliError(str(exc), EXIT_SAMPLING) from exc
        cols.append(acc.ipr_table().mean(axis=0))
        header.append("ipr_model")
    write_rows_csv(out / "rank_ipr.csv", header, ([r + 1, *(c[r] for c in cols)] for r in range(n)))
    gaps = n - 1
    write_rows_csv(out / "spacings.csv", ["split", "rank", "s"], ((i // gaps, i % gaps + 1, res.spacings[i]) for i in range(res.spacings.shape[0])))
    write_cpr_csv(out / "cpr_scatter.csv", res.scatter, x_name="log_diffusion")
    write_rows_csv(out / "assets.csv", ["asset", "variance", "diffusion", "cpr_mean"],
                   zip(est.asset_ids, est.variances, est.diffusion, res.cpr))
    _finish(_manifest(args, argv, {"csv": str(args.csv), "splits": args.splits, "overlay": args.overlay}, seeds), out)
    print(f"analyzed {panel.m} rows x {n} assets (mu_hat={est.mu_hat:.4g}, d_hat={est.d_hat:.4g}) -> {out}")
    return EXIT_OK


def cmd_perturbation_check(args: argparse.Namespace, argv: list[str]) -> int:
    out = _out_dir(args)
    seed = args.seed or 0
    rng = np.random.default_rng(seed)
    n = args.n
    if n < 2:
        raise CliError("n must be >= 2", EXIT_CONFIG)
    a = rng.standard_normal((n, n)) / math.sqrt(n)
    k1 = np.triu(a) + np.triu(a, 1).T
    b = rng.standard_normal((n, n)) / math.sqrt(n)
    k2 = np.zeros((n, n)) if args.no_k2 else np.triu(b) + np.triu(b, 1).T
    t = np.exp(args.d * rng.standard_normal(n))
    grid = [args.epsilon] if args.epsilon is not None else args.epsilon_grid
    try:
        rep = order_scaling_report(k1, k2, t, grid)
    except HetOUError as exc:
        raise CliError(f"perturbation check failed: {exc}", EXIT_CONFIG) from exc
    write_rows_csv(out / "order_scaling.csv", ["epsilon", "first_order_residual", "second_order_residual"], rep.rows())
    summary = {"first_order_slope": rep.first_order_slope, "second_order_slope": rep.second_order_slope, "n": n, "seed": seed}
    print(f"first-order slope {rep.first_order_slope:.4f}, second-order slope {rep.second_order_slope:.4f}")
    if args.t_inversion_check:
        e = min(grid)
        asym = float(np.max(np.abs(first_order_correlation(k1, t, e) - first_order_correlation(k1, 1.0 / t, e))))
        summary["t_inversion_max_asymmetry"] = asym
        print(f"max first-order T<->1/T asymmetry {asym:.3e}")
    write_json(out / "perturbation_summary.json", summary)
    _finish(_manifest(args, argv, {"n": n, "epsilon_grid": grid, "d": args.d, "k2": not args.no_k2}, [seed]), out)
    return EXIT_OK


def _load(path: Path | None, what: str, vector: bool = False) -> np.ndarray:
    if path is None:
        raise CliError(f"--{what} is required", EXIT_CONFIG)
    try:
        return read_vector_csv(path) if vector else read_matrix_csv(path)
    except (OSError, ValueError) as exc:
        raise CliError(f"cannot read {what} from {path}: {exc}", EXIT_DATA) from exc


def cmd_solve(args: argparse.Namespace, argv: list[str]) -> int:
    out = _out_dir(args)
    policy = _policy(args)
    t = _load(args.temperatures, "temperatures", vector=True)
    try:
        if args.direction == "direct":
            j = _load(args.coupling, "coupling")
            c = lyapunov_oracle_solve(j, t, policy=policy) if args.oracle else stationary_covariance(j, t, policy=policy)
            write_matrix_csv(out / "covariance.csv", c)
        else:
            c = _load(args.covariance, "covariance")
            j = inverse_couplings(c, t, policy=policy)
            write_matrix_csv(out / "couplings.csv", j)
    except HetOUError as exc:
        raise CliError(f"solve failed: {exc}", EXIT_CONFIG) from exc
    res = relative_residual(c, j, t)
    print(f"relative anticommutator residual {res:.3e}")
    m = _manifest(args, argv, {"direction": args.direction, "oracle": args.oracle}, [])
    m.notes["relative_residual"] = res
    _finish(m, out)
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace, argv: list[str]) -> int:
    out = _out_dir(args)
    j = _load(args.coupling, "coupling")
    t = _load(args.temperatures, "temperatures", vector=True)
    seed = args.seed or 0
    try:
        cfg = SdeConfig(dt=args.dt, n_steps=args.steps, burn_in=args.burn_in, thinning=args.thinning, seed=seed)
        m = _manifest(args, argv, {"dt": cfg.dt, "n_steps": cfg.n_steps, "burn_in": cfg.burn_in, "thinning": cfg.thinning, "chains": args.chains}, [seed])
        if args.chains > 1:
            est = sde_covariance(j, t, cfg, n_chains=args.chains)
            write_matrix_csv(out / "sde_covariance.csv", est.covariance)
            write_matrix_csv(out / "sde_stderr.csv", est.stderr)
            m.notes.update({"burn_in_steps": est.burn_in, "n_records_per_chain": est.n_records, "max_stderr": float(est.stderr.max())})
        else:
            panel = euler_maruyama_simulate(j, t, cfg)
            write_rows_csv(out / "panel.csv", [f"x{i}" for i in range(panel.n)], panel.data.tolist())
    except (HetOUError, ValueError) as exc:
        raise CliError(f"simulation failed: {exc}", EXIT_CONFIG) from exc
    _finish(m, out)
    print(f"simulation written to {out}")
    return EXIT_OK


COMMANDS = {
    "sample": cmd_sample,
    "figures": cmd_figures,
    "verify": cmd_verify,
    "analyze": cmd_analyze,
    "perturbation-check": cmd_perturbation_check,
    "solve": cmd_solve,
    "simulate": cmd_simulate,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args, argv)
    except CliError as exc:
        print(f"hetou {args.command}: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
