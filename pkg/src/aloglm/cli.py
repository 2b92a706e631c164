"""Command-line surface: dataset ingestion, experiment orchestration, artifacts.

Commands: simulate | risk-curve | bench | bias-study | converge | ingest-check.
Every run writes a ``manifest.txt`` echoing the fully resolved configuration
as ``key=value`` lines; a manifest is itself a valid ``--config`` file, and
re-running from it reproduces the CSV outputs byte-for-byte (timing columns
excluded).  Exit codes: 0 success, 1 invalid configuration, 2 numeric
failure, 3 I/O failure.
"""

import argparse
import csv
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from . import datagen
from .alo import (
    alo_bridge,
    alo_convergence_diagnostic,
    alo_elastic_net,
    alo_l1,
    alo_smooth,
    check_metric,
)
from .crossval import kfold, lo_exact
from .data import Dataset, ingest_csv
from .errors import (
    AloglmError,
    DegenerateProblem,
    IncompatibleMetric,
    InvalidConfig,
    NotPositiveDefinite,
    ParseError,
    ProxNoConvergence,
    SingularInnerMatrix,
    SingularSystem,
)
from .families import LossFamily
from .penalties import Penalty, elastic_net_split
from .solver import FitConfig, fit
from . import plots

_NUMERIC_ERRORS = (
    NotPositiveDefinite,
    SingularInnerMatrix,
    SingularSystem,
    DegenerateProblem,
    ProxNoConvergence,
)

_FAMILIES = {
    "gaussian": lambda a: LossFamily("gaussian"),
    "logistic": lambda a: LossFamily("logistic"),
    "poisson": lambda a: LossFamily("poisson_exp"),
    "poisson-softrect": lambda a: LossFamily("poisson_softrect"),
    "pseudo-huber": lambda a: LossFamily("pseudo_huber", gamma=a.huber_gamma),
}

CURVE_FIELDS = [
    "lambda",
    "alo_risk",
    "lo_risk",
    "lo_se",
    "kfold_risk",
    "oracle_risk",
    "active_set_size",
    "clamped_count",
    "time_fit_ms",
    "time_alo_ms",
    "time_lo_ms",
]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InvalidConfig(message)


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _family(args) -> LossFamily:
    try:
        return _FAMILIES[args.family](args)
    except KeyError:
        raise InvalidConfig(f"unknown family {args.family!r}") from None


def _penalty(args) -> Penalty:
    tag = args.penalty
    if tag == "ridge":
        return Penalty("ridge")
    if tag == "l1":
        return Penalty("l1")
    if tag in ("enet", "elastic-net"):
        return Penalty("elastic_net", mix=args.mix)
    if tag == "bridge":
        return Penalty("bridge", q=args.q)
    if tag in ("smoothed-l1", "sl1"):
        return Penalty("smoothed_l1", alpha=args.alpha_smooth)
    raise InvalidConfig(f"unknown penalty {tag!r}")


def _default_metric(fam: LossFamily) -> str:
    if fam.tag == "logistic":
        return "misclassification"
    if fam.is_poisson:
        return "mae_rate"
    return "squared_error"


def _lambda_grid(args, fam: LossFamily, default_count: int = 30) -> np.ndarray:
    lo, hi = args.lambda_min, args.lambda_max
    if lo is None or hi is None:
        dlo, dhi = (0.1, 10.0) if fam.tag == "logistic" else (1.0, 100.0)
        lo = dlo if lo is None else lo
        hi = dhi if hi is None else hi
    count = args.lambda_count if args.lambda_count is not None else default_count
    if not (lo > 0 and hi >= lo and count >= 1):
        raise InvalidConfig("lambda grid must be positive with count >= 1")
    if count == 1:
        return np.array([lo])
    if args.lambda_log:
        return np.logspace(np.log10(lo), np.log10(hi), count)
    return np.linspace(lo, hi, count)


def _alo_for(pen: Penalty, ds, fam, fitres, lam, metric):
    if pen.tag == "l1":
        return alo_l1(ds, fam, fitres, lam, metric)
    if pen.tag == "elastic_net":
        lam1, lam2 = elastic_net_split(lam, pen.mix)
        return alo_elastic_net(ds, fam, fitres, lam1, lam2, metric)
    if pen.tag == "bridge":
        return alo_bridge(ds, fam, fitres, pen.q, lam, metric)
    return alo_smooth(ds, fam, pen, fitres, lam, metric)


def _write_manifest(out_dir: Path, command: str, args, keys) -> None:
    lines = [f"command={command}"]
    for key in sorted(keys):
        lines.append(f"{key}={_fmt(getattr(args, key))}")
    (out_dir / "manifest.txt").write_text("\n".join(lines) + "\n")


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(c) for c in row])


def _spawn_seeds(seed: int, key: tuple, count: int) -> list[int]:
    ss = np.random.SeedSequence(seed, spawn_key=key)
    return [int(c.generate_state(1)[0]) for c in ss.spawn(count)]


# ---------------------------------------------------------------------------
# commands


def cmd_simulate(args) -> int:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    fam = _family(args)
    spec = datagen.DesignSpec(
        n=args.n, p=args.p, structure=args.structure, rho=args.rho,
        scale_to_unit_signal=bool(args.scale_signal),
    )
    s_beta, s_x, s_y = _spawn_seeds(args.seed, (0,), 3)
    beta = datagen.gen_beta(datagen.TruthSpec(args.k, args.beta_law, s_beta), args.p)
    X = datagen.gen_design(spec, beta, s_x)
    y = datagen.gen_response(fam, X, beta, args.sigma, s_y)

    _write_csv(out / "X.csv", [f"x{j + 1}" for j in range(args.p)], X.tolist())
    _write_csv(out / "y.csv", ["y"], [[v] for v in y.tolist()])
    _write_csv(out / "beta_star.csv", ["beta_star"], [[v] for v in beta.tolist()])
    _write_manifest(out, "simulate", args, SIMULATE_KEYS)
    print(f"wrote {out / 'X.csv'} ({args.n} rows, {args.p} columns)")
    return 0


def cmd_risk_curve(args) -> int:
    if not args.x or not args.y:
        raise InvalidConfig("risk-curve needs --x and --y (flags or config file)")
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    fam = _family(args)
    pen = _penalty(args)
    ds = ingest_csv(args.x, args.y, standardize=bool(args.standardize), family=fam)
    metric = args.metric or _default_metric(fam)
    check_metric(fam, metric)
    grid = _lambda_grid(args, fam)

    oracle_cov = beta_star = None
    if args.beta_star:
        from .data import _read_numeric_csv

        beta_star = _read_numeric_csv(args.beta_star).ravel()
        spec = datagen.DesignSpec(
            n=ds.n, p=ds.p, structure=args.structure, rho=args.rho,
            scale_to_unit_signal=bool(args.scale_signal),
        )
        oracle_cov = datagen.covariance(spec, beta_star)

    cfg = FitConfig(kkt_tol=args.kkt_tol)
    rows = []
    warm = None
    for lam in grid[::-1]:  # fit from large to small lambda, emit ascending later
        row = {"lambda": float(lam), "error": ""}
        try:
            t0 = time.perf_counter()
            fitres = fit(ds, fam, pen, float(lam), cfg, warm=warm)
            row["time_fit_ms"] = (time.perf_counter() - t0) * 1e3
            warm = fitres.beta_hat
            t0 = time.perf_counter()
            rep = _alo_for(pen, ds, fam, fitres, float(lam), metric)
            row["time_alo_ms"] = (time.perf_counter() - t0) * 1e3
            row["alo_risk"] = rep.risk
            row["active_set_size"] = int(len(fitres.active_set))
            row["clamped_count"] = rep.clamped_count
            if not args.no_lo:
                lo = lo_exact(ds, fam, pen, float(lam), cfg, metric, fitres=fitres)
                row["lo_risk"] = lo.estimate
                row["lo_se"] = lo.std_error
                row["time_lo_ms"] = lo.wall_time_ms
            if args.folds:
                kf = kfold(ds, fam, pen, float(lam), cfg, metric,
                           K=args.folds, seed=args.seed, fitres=fitres)
                row["kfold_risk"] = kf.estimate
            if oracle_cov is not None:
                row["oracle_risk"] = datagen.oracle_linear_risk(
                    oracle_cov, fitres.beta_hat, beta_star, args.sigma
                )
        except AloglmError as exc:
            row["error"] = f"{type(exc).__name__}: {exc}"
        rows.append(row)
    rows.reverse()

    header = CURVE_FIELDS + ["error"]
    _write_csv(out / "curve.csv", header, [[r.get(k) for k in header] for r in rows])
    lam_plot = [r["lambda"] for r in rows]
    plots.risk_curve_svg(
        out / "curve.svg",
        lam_plot,
        {
            "ALO": [r.get("alo_risk") for r in rows],
            "LO": [r.get("lo_risk") for r in rows],
            "K-fold": [r.get("kfold_risk") for r in rows],
            "oracle": [r.get("oracle_risk") for r in rows],
        },
        errorbars={"LO": [r.get("lo_se") for r in rows]},
        title=f"{fam.tag} + {pen.tag}: {metric}",
    )
    _write_manifest(out, "risk-curve", args, RISK_CURVE_KEYS)
    print(f"wrote {out / 'curve.csv'} ({len(rows)} rows)")
    return 0


def _bench_protocol(args, fam, n, p, seed):
    structure = args.structure
    rho = args.rho
    spec = datagen.DesignSpec(n=n, p=p, structure=structure, rho=rho)
    s_beta, s_x, s_y = _spawn_seeds(seed, (1,), 3)
    beta = datagen.gen_beta(datagen.TruthSpec(max(1, n // 10), "laplace", s_beta), p)
    X = datagen.gen_design(spec, beta, s_x)
    y = datagen.gen_response(fam, X, beta, args.sigma, s_y)
    return Dataset(X, y, fam)


def cmd_bench(args) -> int:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    fam = _family(args)
    pen = _penalty(args)
    metric = args.metric or _default_metric(fam)
    sizes = _parse_sizes(args.sizes)
    cfg = FitConfig(kkt_tol=args.kkt_tol)

    rows = []
    for si, (n, p) in enumerate(sizes):
        grid = _lambda_grid(args, fam, default_count=10)[::-1]
        t_fit, t_alo, t_lo = [], [], []
        for rep in range(args.reps):
            ds = _bench_protocol(args, fam, n, p, args.seed + si)
            t0 = time.perf_counter()
            warm = None
            fits = []
            for lam in grid:
                fr = fit(ds, fam, pen, float(lam), cfg, warm=warm)
                warm = fr.beta_hat
                fits.append(fr)
            fit_ms = (time.perf_counter() - t0) * 1e3
            t0 = time.perf_counter()
            for lam, fr in zip(grid, fits):
                _alo_for(pen, ds, fam, fr, float(lam), metric)
            alo_ms = fit_ms + (time.perf_counter() - t0) * 1e3
            t0 = time.perf_counter()
            for lam, fr in zip(grid, fits):
                lo_exact(ds, fam, pen, float(lam), cfg, metric, fitres=fr)
            lo_ms = (time.perf_counter() - t0) * 1e3
            t_fit.append(fit_ms)
            t_alo.append(alo_ms)
            t_lo.append(lo_ms)
        rows.append(
            [n, p, float(np.median(t_fit)), float(np.median(t_alo)), float(np.median(t_lo))]
        )
    _write_csv(out / "timing.csv", ["n", "p", "time_fit_ms", "time_alo_ms", "time_lo_ms"], rows)
    if rows:
        plots.timing_svg(
            out / "timing.svg",
            [r[1] for r in rows],
            {
                "FIT": [r[2] for r in rows],
                "ALO": [r[3] for r in rows],
                "LO": [r[4] for r in rows],
            },
        )
    else:
        plots.timing_svg(out / "timing.svg", [1.0], {"FIT": [1.0]})
    _write_manifest(out, "bench", args, BENCH_KEYS)
    print(f"wrote {out / 'timing.csv'} ({len(rows)} sizes)")
    return 0


def cmd_bias_study(args) -> int:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if args.reps < 2:
        raise InvalidConfig("bias study needs reps >= 2")
    fam = _family(args)
    pen = _penalty(args)
    metric = args.metric or _default_metric(fam)
    grid = _lambda_grid(args, fam)
    klist = [int(k) for k in str(args.kfold_list).split(",") if k]
    spec = datagen.DesignSpec(
        n=args.n, p=args.p, structure=args.structure, rho=args.rho,
        scale_to_unit_signal=bool(args.scale_signal),
    )
    cfg = FitConfig(kkt_tol=args.kkt_tol)

    estimators = [f"{k}-fold" for k in klist] + ["lo", "alo", "oracle"]
    acc = {est: np.zeros((args.reps, grid.size)) for est in estimators}
    for r in range(args.reps):
        s_beta, s_x, s_y, s_fold = _spawn_seeds(args.seed, (2, r), 4)
        beta_star = datagen.gen_beta(datagen.TruthSpec(args.k, args.beta_law, s_beta), args.p)
        X = datagen.gen_design(spec, beta_star, s_x)
        y = datagen.gen_response(fam, X, beta_star, args.sigma, s_y)
        ds = Dataset(X, y, fam)
        cov = datagen.covariance(spec, beta_star)
        warm = None
        for gi, lam in enumerate(grid[::-1]):
            li = grid.size - 1 - gi
            fitres = fit(ds, fam, pen, float(lam), cfg, warm=warm)
            warm = fitres.beta_hat
            acc["alo"][r, li] = _alo_for(pen, ds, fam, fitres, float(lam), metric).risk
            acc["lo"][r, li] = lo_exact(ds, fam, pen, float(lam), cfg, metric, fitres=fitres).estimate
            for k in klist:
                acc[f"{k}-fold"][r, li] = kfold(
                    ds, fam, pen, float(lam), cfg, metric, K=k, seed=s_fold, fitres=fitres
                ).estimate
            acc["oracle"][r, li] = datagen.oracle_linear_risk(
                cov, fitres.beta_hat, beta_star, args.sigma
            )

    rows = []
    series = {}
    for est in estimators:
        mean = acc[est].mean(axis=0)
        se = acc[est].std(axis=0, ddof=1) / np.sqrt(args.reps)
        series[est] = mean
        for li, lam in enumerate(grid):
            rows.append([float(lam), est, float(mean[li]), float(se[li])])
    _write_csv(out / "bias.csv", ["lambda", "estimator", "mean_risk", "se_risk"], rows)
    plots.risk_curve_svg(out / "bias.svg", grid, series, title="K-fold bias study")
    _write_manifest(out, "bias-study", args, BIAS_KEYS)
    print(f"wrote {out / 'bias.csv'} ({len(rows)} rows)")
    return 0


def cmd_converge(args) -> int:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    fam = _family(args)
    pen = _penalty(args)
    sizes = _parse_sizes(args.sizes)
    table = alo_convergence_diagnostic(fam, pen, sizes, args.reps, args.seed, lam=args.lam)
    _write_csv(out / "converge.csv", ["n", "p", "max_gap"], table)
    if table:
        plots.gap_svg(
            out / "converge.svg",
            [f"{n}x{p}" for n, p, _ in table],
            [g for _, _, g in table],
        )
    else:
        plots.gap_svg(out / "converge.svg", ["empty"], [1.0])
    _write_manifest(out, "converge", args, CONVERGE_KEYS)
    print(f"wrote {out / 'converge.csv'} ({len(table)} sizes)")
    return 0


def cmd_ingest_check(args) -> int:
    if not args.x or not args.y:
        raise InvalidConfig("ingest-check needs --x and --y")
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    ds = ingest_csv(
        args.x, args.y, standardize=bool(args.standardize), add_intercept=bool(args.intercept)
    )
    lines = [f"n={ds.n}", f"p={ds.p}"]
    if ds.column_means is not None:
        lines.append("standardize_means=" + ",".join(repr(float(v)) for v in ds.column_means))
        lines.append("standardize_sds=" + ",".join(repr(float(v)) for v in ds.column_sds))
    _write_manifest(out, "ingest-check", args, INGEST_KEYS)
    with open(out / "manifest.txt", "a") as fh:
        fh.write("\n".join(lines) + "\n")
    print("\n".join(lines))
    return 0


# ---------------------------------------------------------------------------
# argument plumbing


def _parse_sizes(spec: str) -> list[tuple[int, int]]:
    sizes = []
    if not str(spec).strip():
        return sizes
    for part in str(spec).split(","):
        part = part.strip()
        if not part:
            continue
        if ":" in part:
            a, b = part.split(":", 1)
            sizes.append((int(a), int(b)))
        else:
            sizes.append((int(part), int(part)))
    return sizes


_TYPES = {
    "n": int, "p": int, "k": int, "seed": int, "reps": int, "folds": int,
    "lambda_count": int, "threads": int, "scale_signal": int, "lambda_log": int,
    "no_lo": int, "standardize": int, "intercept": int,
    "rho": float, "sigma": float, "mix": float, "q": float, "alpha_smooth": float,
    "huber_gamma": float, "lambda_min": float, "lambda_max": float, "lam": float,
    "kkt_tol": float,
}


def _coerce(key: str, value: str):
    typ = _TYPES.get(key, str)
    if typ is int:
        return int(float(value)) if value else 0
    if typ is float:
        return float(value)
    return value


def _subparser_for(parser, command):
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices.get(command, parser)
    return parser


def _apply_config_file(parser, args, argv):
    if not getattr(args, "config", None):
        return args
    parser = _subparser_for(parser, args.command)
    path = Path(args.config)
    overrides = {}
    for line in path.read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise InvalidConfig(f"{path}: expected key=value, got {line!r}")
        key, value = line.split("=", 1)
        key = key.strip().replace("-", "_")
        if key == "command":
            continue
        if not hasattr(args, key):
            raise InvalidConfig(f"{path}: unknown key {key!r}")
        overrides[key] = _coerce(key, value.strip())
    # config values fill in; explicit command-line flags win
    explicit = _explicit_dests(parser, argv)
    for key, value in overrides.items():
        if key not in explicit:
            setattr(args, key, value)
    return args


def _explicit_dests(parser, argv) -> set:
    dests = set()
    actions = {}
    for action in parser._actions:
        for opt in action.option_strings:
            actions[opt] = action.dest
    for token in argv:
        if token.startswith("--"):
            opt = token.split("=", 1)[0]
            if opt in actions:
                dests.add(actions[opt])
    return dests


def _add_common(sp):
    sp.add_argument("--config", help="key=value file; explicit flags override it")
    sp.add_argument("--out-dir", dest="out_dir", default="out")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--threads", type=int, default=0)


def _add_model(sp):
    sp.add_argument("--family", default="gaussian",
                    choices=sorted(_FAMILIES), help="loss family")
    sp.add_argument("--penalty", default="l1",
                    choices=["ridge", "l1", "enet", "elastic-net", "bridge", "smoothed-l1", "sl1"])
    sp.add_argument("--mix", type=float, default=0.5, help="elastic net l1 fraction")
    sp.add_argument("--q", type=float, default=1.5, help="bridge exponent")
    sp.add_argument("--alpha-smooth", dest="alpha_smooth", type=float, default=100.0)
    sp.add_argument("--huber-gamma", dest="huber_gamma", type=float, default=1.0)
    sp.add_argument("--metric", default=None,
                    choices=["squared_error", "misclassification", "mae_rate", "neg_log_likelihood"])
    sp.add_argument("--kkt-tol", dest="kkt_tol", type=float, default=1e-8)


def _add_grid(sp):
    sp.add_argument("--lambda-min", dest="lambda_min", type=float, default=None)
    sp.add_argument("--lambda-max", dest="lambda_max", type=float, default=None)
    sp.add_argument("--lambda-count", dest="lambda_count", type=int, default=None)
    sp.add_argument("--lambda-log", dest="lambda_log", type=int, default=1,
                    help="1 for log spacing, 0 for linear")


def _add_datagen(sp):
    sp.add_argument("--n", type=int, default=100)
    sp.add_argument("--p", type=int, default=50)
    sp.add_argument("--k", type=int, default=10)
    sp.add_argument("--structure", default="iid", choices=["iid", "spiked", "toeplitz"])
    sp.add_argument("--rho", type=float, default=0.0)
    sp.add_argument("--sigma", type=float, default=1.0)
    sp.add_argument("--beta-law", dest="beta_law", default="laplace")
    sp.add_argument("--scale-signal", dest="scale_signal", type=int, default=1)


SIMULATE_KEYS = ["family", "n", "p", "k", "structure", "rho", "sigma", "seed",
                 "beta_law", "scale_signal", "out_dir", "huber_gamma", "threads"]
RISK_CURVE_KEYS = ["x", "y", "family", "penalty", "mix", "q", "alpha_smooth", "huber_gamma",
                   "metric", "lambda_min", "lambda_max", "lambda_count", "lambda_log",
                   "no_lo", "folds", "beta_star", "structure", "rho", "sigma",
                   "scale_signal", "standardize", "seed", "kkt_tol", "out_dir", "threads"]
BENCH_KEYS = ["sizes", "family", "penalty", "mix", "q", "alpha_smooth", "huber_gamma",
              "metric", "structure", "rho", "sigma", "lambda_min", "lambda_max",
              "lambda_count", "lambda_log", "reps", "seed", "kkt_tol", "out_dir", "threads"]
BIAS_KEYS = ["family", "penalty", "mix", "q", "alpha_smooth", "huber_gamma", "metric",
             "n", "p", "k", "structure", "rho", "sigma", "beta_law", "scale_signal",
             "lambda_min", "lambda_max", "lambda_count", "lambda_log", "reps",
             "kfold_list", "seed", "kkt_tol", "out_dir", "threads"]
CONVERGE_KEYS = ["family", "penalty", "mix", "q", "alpha_smooth", "huber_gamma",
                 "sizes", "reps", "lam", "seed", "kkt_tol", "out_dir", "threads"]
INGEST_KEYS = ["x", "y", "standardize", "intercept", "out_dir", "seed", "threads"]


def build_parser() -> _Parser:
    parser = _Parser(prog="aloglm", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("simulate", help="write a synthetic dataset as CSV")
    _add_common(sp)
    _add_datagen(sp)
    sp.add_argument("--family", default="gaussian", choices=sorted(_FAMILIES))
    sp.add_argument("--huber-gamma", dest="huber_gamma", type=float, default=1.0)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("risk-curve", help="ALO / LO / K-fold risk along a lambda grid")
    _add_common(sp)
    _add_model(sp)
    _add_grid(sp)
    sp.add_argument("--x", default="", help="design matrix CSV")
    sp.add_argument("--y", default="", help="response CSV")
    sp.add_argument("--no-lo", dest="no_lo", action="store_const", const=1, default=0)
    sp.add_argument("--folds", type=int, default=0, help="optional K for a K-fold column")
    sp.add_argument("--beta-star", dest="beta_star", default="",
                    help="true coefficients CSV enabling the oracle column")
    sp.add_argument("--structure", default="iid", choices=["iid", "spiked", "toeplitz"])
    sp.add_argument("--rho", type=float, default=0.0)
    sp.add_argument("--sigma", type=float, default=1.0)
    sp.add_argument("--scale-signal", dest="scale_signal", type=int, default=1)
    sp.add_argument("--standardize", type=int, default=0)
    sp.set_defaults(func=cmd_risk_curve)

    sp = sub.add_parser("bench", help="fit / ALO / LO wall-time comparison")
    _add_common(sp)
    _add_model(sp)
    _add_grid(sp)
    sp.add_argument("--sizes", default="", help="comma list of n:p (or n for n=p)")
    sp.add_argument("--reps", type=int, default=5)
    sp.add_argument("--structure", default="toeplitz", choices=["iid", "spiked", "toeplitz"])
    sp.add_argument("--rho", type=float, default=0.9)
    sp.add_argument("--sigma", type=float, default=1.0)
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("bias-study", help="K-fold bias vs LO/ALO/oracle over reps")
    _add_common(sp)
    _add_model(sp)
    _add_grid(sp)
    _add_datagen(sp)
    sp.add_argument("--reps", type=int, default=50)
    sp.add_argument("--kfold-list", dest="kfold_list", default="3,5,10")
    sp.set_defaults(func=cmd_bias_study)

    sp = sub.add_parser("converge", help="empirical ALO-vs-LO gap across sizes")
    _add_common(sp)
    _add_model(sp)
    sp.add_argument("--sizes", default="", help="comma list of n:p")
    sp.add_argument("--reps", type=int, default=20)
    sp.add_argument("--lam", type=float, default=1.0)
    sp.set_defaults(func=cmd_converge)

    sp = sub.add_parser("ingest-check", help="validate and summarize CSV inputs")
    _add_common(sp)
    sp.add_argument("--x", default="")
    sp.add_argument("--y", default="")
    sp.add_argument("--standardize", type=int, default=0)
    sp.add_argument("--intercept", type=int, default=0)
    sp.set_defaults(func=cmd_ingest_check)

    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args = _apply_config_file(parser, args, argv)
        if args.threads and args.threads > 0:
            try:
                import numba

                numba.set_num_threads(args.threads)
            except ImportError:
                pass
        return args.func(args)
    except _NUMERIC_ERRORS as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 2
    except (ParseError, OSError) as exc:
        print(f"io failure: {exc}", file=sys.stderr)
        return 3
    except AloglmError as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
