"""Command-line interface: point evaluation, parameter sweeps, analytic-vs-MC
validation, and raw simulation dumps.

Exit codes: 0 success, 1 validation failure, 2 usage error, 3 solver failure.
All numeric output uses 9 significant digits and is locale-independent.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Optional, Sequence

import numpy as np

from . import broadcast, capacity, montecarlo, outage
from .errors import (
    BcastNetError,
    BranchPointError,
    DomainError,
    InfeasibleError,
    NoBracketError,
    ParameterError,
    RegimeError,
)
from .network import NetworkParams, Regime, infer_regime

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2
EXIT_SOLVER = 3

_SWEEP_VARS = ("lambda", "alpha", "xi", "beta", "epsilon")
_METRICS = (
    "s0",
    "s1",
    "R_bs",
    "sm_bs",
    "var_bs",
    "complete_outage",
    "beta_opt",
    "R_os_opt",
    "var_os_opt",
    "beta_matched",
    "R_os_matched",
    "R_os_fixed",
    "var_os_fixed",
    "q",
    "lambda_eps",
    "c",
)
_VALIDATE_GRID = ((0.01, 4.0), (0.1, 4.0))
_VALIDATE_XI = (0.1, 1.0)


def _fmt(x) -> str:
    if x is None:
        return ""
    return f"{float(x):.9g}"


def _round9(x):
    if x is None:
        return None
    return float(f"{float(x):.9g}")


def _linear_or_db(text: str) -> float:
    """Linear value, or a dB value with a 'dB' suffix (10^(v/10))."""
    raw = text.strip()
    if raw.lower().endswith("db"):
        return 10.0 ** (float(raw[:-2]) / 10.0)
    return float(raw)


def _add_scenario_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--lambda", dest="density", type=float, default=0.1,
                   help="transmitter density (default 0.1)")
    p.add_argument("--r0", type=float, default=1.0, help="link distance (default 1)")
    p.add_argument("--alpha", type=float, default=4.0, help="path-loss exponent (default 4)")
    p.add_argument("--power", type=_linear_or_db, default=1.0,
                   help="transmit power, linear or with dB suffix (default 1)")
    p.add_argument("--noise", type=_linear_or_db, default=0.0,
                   help="noise power, linear or with dB suffix (default 0)")


def _add_sim_args(p: argparse.ArgumentParser, trials: int) -> None:
    p.add_argument("--trials", type=int, default=trials)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--rmax", type=float, default=None,
                   help="simulation disk radius (default: truncation-budget radius)")
    p.add_argument("--workers", type=int, default=1)


def _params_from(args) -> NetworkParams:
    return NetworkParams(density=args.density, r0=args.r0, alpha=args.alpha,
                         power=args.power, noise=args.noise)


def _parse_strategy(args) -> tuple[str, Optional[outage.OutageConfig]]:
    name = args.strategy
    if name == "broadcast":
        return name, None
    if name == "outage-opt":
        return name, outage.OutageConfig(mode=outage.OutageMode.OPTIMAL)
    if name == "outage-matched":
        return name, outage.OutageConfig(mode=outage.OutageMode.MATCHED)
    if name.startswith("outage-fixed"):
        if ":" in name:
            beta = float(name.split(":", 1)[1])
        elif args.beta is not None:
            beta = args.beta
        else:
            raise ParameterError("outage-fixed needs a threshold: outage-fixed:BETA or --beta")
        return "outage-fixed", outage.OutageConfig(mode=outage.OutageMode.FIXED, beta=beta)
    raise ParameterError(f"unknown strategy {name!r}")


def _emit(text: str, out_path: Optional[str]) -> None:
    if out_path:
        with open(out_path, "w", newline="") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


_POINT_COLUMNS = (
    "strategy", "density", "r0", "alpha", "power", "noise", "regime",
    "beta", "s0", "s1", "mean", "variance", "second_moment", "complete_outage",
)


def _point_row(args) -> dict:
    params = _params_from(args)
    strategy, config = _parse_strategy(args)
    row = dict.fromkeys(_POINT_COLUMNS)
    row.update(
        strategy=strategy, density=params.density, r0=params.r0, alpha=params.alpha,
        power=params.power, noise=params.noise,
    )
    if strategy == "broadcast":
        regime = infer_regime(params)
        row["regime"] = regime.value
        profile = broadcast.solve_profile(params, regime)
        row["s0"], row["s1"] = profile.s0, profile.s1
        row["complete_outage"] = broadcast.complete_outage(params, regime)
        if regime is Regime.INTERFERENCE_LIMITED:
            stats = broadcast.variance(params, regime)
            row["mean"] = stats.mean
            row["variance"] = stats.variance
            row["second_moment"] = stats.second_moment
        else:
            row["mean"] = broadcast.mean_rate(params, regime).mean
    else:
        row["regime"] = infer_regime(params).value
        beta = outage.resolve_beta(params, config)
        stats = outage.rate_stats_os(params, beta)
        row["beta"] = beta
        row["mean"] = stats.mean
        row["variance"] = stats.variance
        row["second_moment"] = stats.second_moment
        row["complete_outage"] = 1.0 - outage.success_probability(params, beta)
    return row


def cmd_point(args) -> int:
    row = _point_row(args)
    if args.format == "json":
        text = json.dumps({k: _round9(v) if isinstance(v, float) else v for k, v in row.items()},
                          indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(_POINT_COLUMNS)
        writer.writerow([row[k] if isinstance(row[k], str) else _fmt(row[k])
                         for k in _POINT_COLUMNS])
        text = buf.getvalue()
    _emit(text, args.out)
    return EXIT_OK


def _sweep_grid(args) -> list[float]:
    if args.values:
        grid = [float(v) for v in args.values.split(",") if v.strip()]
    elif args.start is None or args.stop is None or args.count is None:
        raise ParameterError("sweep needs either --values or --start/--stop/--count")
    else:
        if args.count < 1:
            raise ParameterError("--count must be >= 1")
        if args.scale == "log":
            if args.start <= 0 or args.stop <= 0:
                raise ParameterError("log scale needs positive endpoints")
            grid = list(np.geomspace(args.start, args.stop, args.count))
        else:
            grid = list(np.linspace(args.start, args.stop, args.count))
    if not grid:
        raise ParameterError("sweep grid is empty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ParameterError("sweep grid must be strictly increasing")
    return grid


def _metric_value(name: str, params: NetworkParams, xi: float, epsilon: float,
                  beta_fixed: Optional[float]):
    if name in ("s0", "s1"):
        profile = broadcast.solve_profile(params, infer_regime(params))
        return getattr(profile, name)
    if name == "R_bs":
        return broadcast.mean_rate(params, infer_regime(params)).mean
    if name == "sm_bs":
        return broadcast.second_moment(params, infer_regime(params)).second_moment
    if name == "var_bs":
        return broadcast.variance(params, infer_regime(params)).variance
    if name == "complete_outage":
        return broadcast.complete_outage(params, infer_regime(params))
    if name == "beta_opt":
        return outage.optimal_beta(params)
    if name == "R_os_opt":
        return outage.mean_rate_os(params, outage.optimal_beta(params))
    if name == "var_os_opt":
        return outage.rate_stats_os(params, outage.optimal_beta(params)).variance
    if name == "beta_matched":
        return outage.matched_beta(params)
    if name == "R_os_matched":
        return outage.mean_rate_os(params, outage.matched_beta(params))
    if name == "R_os_fixed" or name == "var_os_fixed":
        if beta_fixed is None:
            raise ParameterError(f"{name} needs --beta")
        stats = outage.rate_stats_os(params, beta_fixed)
        return stats.mean if name == "R_os_fixed" else stats.variance
    if name == "q":
        return capacity.rate_outage(params, xi)
    if name in ("lambda_eps", "c"):
        query = capacity.CapacityQuery(xi=xi, epsilon=epsilon, r0=params.r0,
                                       alpha=params.alpha, power=params.power)
        result = capacity.transmission_capacity(query)
        return result.lambda_eps if name == "lambda_eps" else result.c
    raise ParameterError(f"unknown metric {name!r}")


def cmd_sweep(args) -> int:
    metrics = [m.strip() for m in args.metrics.split(",") if m.strip()]
    for m in metrics:
        if m not in _METRICS:
            raise ParameterError(f"unknown metric {m!r}; choose from {', '.join(_METRICS)}")
    grid = _sweep_grid(args)
    rows = []
    successes = 0
    for value in grid:
        params_kw = dict(density=args.density, r0=args.r0, alpha=args.alpha,
                         power=args.power, noise=args.noise)
        xi, epsilon, beta_fixed = args.xi, args.epsilon, args.beta
        if args.var in ("lambda", "alpha"):
            params_kw["density" if args.var == "lambda" else "alpha"] = value
        elif args.var == "xi":
            xi = value
        elif args.var == "beta":
            beta_fixed = value
        else:
            epsilon = value
        row = {args.var: value}
        point_ok = False
        try:
            params = NetworkParams(**params_kw)
        except BcastNetError as exc:
            print(f"warning: {args.var}={value:g}: {exc}", file=sys.stderr)
            row.update(dict.fromkeys(metrics))
            rows.append(row)
            continue
        for m in metrics:
            try:
                row[m] = _metric_value(m, params, xi, epsilon, beta_fixed)
                point_ok = True
            except BcastNetError as exc:
                print(f"warning: {args.var}={value:g}: {m}: {exc}", file=sys.stderr)
                row[m] = None
        successes += bool(point_ok)
        rows.append(row)
    header = [args.var, *metrics]
    if args.format == "json":
        text = json.dumps([{k: _round9(r[k]) for k in header} for r in rows], indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for r in rows:
            writer.writerow([_fmt(r[k]) for k in header])
        text = buf.getvalue()
    if successes == 0:
        print("error: no sweep point succeeded", file=sys.stderr)
        return EXIT_SOLVER
    _emit(text, args.out)
    return EXIT_OK


def run_validation(trials: int = 200000, seed: int = 42, workers: int = 1,
                   r_max: Optional[float] = None) -> dict:
    """Analytic-vs-Monte-Carlo check battery over the standard grid."""
    checks = []

    def add(name, analytic, estimate, half_width, tolerance):
        checks.append({
            "name": name,
            "analytic": analytic,
            "estimate": estimate,
            "half_width": half_width,
            "tolerance": tolerance,
            "pass": bool(abs(analytic - estimate) <= tolerance),
        })

    for density, alpha in _VALIDATE_GRID:
        params = NetworkParams(density=density, r0=1.0, alpha=alpha, power=1.0, noise=0.0)
        label = f"lambda={density:g},alpha={alpha:g}"
        profile = broadcast.solve_profile(params, Regime.INTERFERENCE_LIMITED)
        config = montecarlo.SimConfig(n_trials=trials, seed=seed, r_max=r_max, workers=workers)
        sim, states, _ = montecarlo.simulate_broadcast(params, profile, config,
                                                       xi_list=_VALIDATE_XI)
        stats = broadcast.variance(params, Regime.INTERFERENCE_LIMITED)
        hw = sim.half_width_95
        add(f"broadcast_mean[{label}]", stats.mean, sim.mean, hw["mean"], 3 * hw["mean"])
        add(f"broadcast_variance[{label}]", stats.variance, sim.variance,
            hw["variance"], 3 * hw["variance"])
        add(f"complete_outage[{label}]", broadcast.complete_outage(params), sim.complete_outage,
            hw["complete_outage"], 3 * hw["complete_outage"])
        for xi in _VALIDATE_XI:
            add(f"rate_outage[{label},xi={xi:g}]", capacity.rate_outage(params, xi),
                sim.rate_outage[xi], hw["rate_outage"][xi], 3 * hw["rate_outage"][xi])
        beta_opt = outage.optimal_beta(params)
        os_stats = outage.rate_stats_os(params, beta_opt)
        os_sim = montecarlo.outage_stats_from_states(params, beta_opt, states)
        os_hw = os_sim.half_width_95
        add(f"outage_opt_mean[{label}]", os_stats.mean, os_sim.mean,
            os_hw["mean"], 3 * os_hw["mean"])
        add(f"outage_opt_variance[{label}]", os_stats.variance, os_sim.variance,
            os_hw["variance"], 3 * os_hw["variance"])
        beta_m = outage.matched_beta(params)
        p_matched = outage.success_probability(params, beta_m)
        add(f"matched_identity[{label}]", 1.0 - broadcast.complete_outage(params),
            p_matched, None, 1e-10)
        m_sim = montecarlo.outage_stats_from_states(params, beta_m, states)
        add(f"matched_success_mc[{label}]", p_matched, 1.0 - m_sim.complete_outage,
            m_sim.half_width_95["complete_outage"], 3 * m_sim.half_width_95["complete_outage"])
    return {
        "schema_version": 1,
        "seed": seed,
        "trials": trials,
        "workers": workers,
        "r_max": r_max,
        "grid": [{"lambda": d, "alpha": a} for d, a in _VALIDATE_GRID],
        "checks": checks,
        "all_pass": all(c["pass"] for c in checks),
    }


def cmd_validate(args) -> int:
    report = run_validation(trials=args.trials, seed=args.seed, workers=args.workers,
                            r_max=args.rmax)
    _emit(json.dumps(report, indent=2) + "\n", args.out)
    return EXIT_OK if report["all_pass"] else EXIT_VALIDATION


def cmd_simulate(args) -> int:
    params = _params_from(args)
    strategy, config = _parse_strategy(args)
    sim_config = montecarlo.SimConfig(n_trials=args.trials, seed=args.seed,
                                      r_max=args.rmax, workers=args.workers)
    if strategy == "broadcast":
        if params.noise != 0.0:
            raise ParameterError("broadcast simulation requires noise = 0")
        profile = broadcast.solve_profile(params, Regime.INTERFERENCE_LIMITED)
        _, states, rates = montecarlo.simulate_broadcast(params, profile, sim_config)
    else:
        beta = outage.resolve_beta(params, config)
        _, states, rates = montecarlo.simulate_outage(params, beta, sim_config)
    buf = io.StringIO()
    montecarlo.write_samples(buf, states, rates)
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bcastnet",
        description="Rate statistics of Poisson bipolar networks under continuum "
                    "broadcast layering and single-threshold coding.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_point = sub.add_parser("point", help="evaluate one parameter point")
    _add_scenario_args(p_point)
    p_point.add_argument("--strategy", default="broadcast",
                         help="broadcast | outage-opt | outage-fixed[:BETA] | outage-matched")
    p_point.add_argument("--beta", type=float, default=None)
    p_point.add_argument("--format", choices=("csv", "json"), default="csv")
    p_point.add_argument("--out", default=None)
    p_point.set_defaults(func=cmd_point)

    p_sweep = sub.add_parser("sweep", help="evaluate metrics over a 1-D grid")
    _add_scenario_args(p_sweep)
    p_sweep.add_argument("--var", choices=_SWEEP_VARS, required=True)
    p_sweep.add_argument("--values", default=None, help="comma-separated grid values")
    p_sweep.add_argument("--start", type=float, default=None)
    p_sweep.add_argument("--stop", type=float, default=None)
    p_sweep.add_argument("--count", type=int, default=None)
    p_sweep.add_argument("--scale", choices=("linear", "log"), default="linear")
    p_sweep.add_argument("--metrics", required=True,
                         help="comma-separated list, e.g. R_bs,R_os_opt")
    p_sweep.add_argument("--xi", type=float, default=1.0)
    p_sweep.add_argument("--epsilon", type=float, default=0.05)
    p_sweep.add_argument("--beta", type=float, default=None)
    p_sweep.add_argument("--format", choices=("csv", "json"), default="csv")
    p_sweep.add_argument("--out", default=None)
    p_sweep.set_defaults(func=cmd_sweep)

    p_val = sub.add_parser("validate", help="run the analytic-vs-MC check battery")
    _add_sim_args(p_val, trials=200000)
    p_val.add_argument("--out", default=None)
    p_val.set_defaults(func=cmd_validate)

    p_sim = sub.add_parser("simulate", help="dump per-trial Monte Carlo samples as CSV")
    _add_scenario_args(p_sim)
    p_sim.add_argument("--strategy", default="broadcast",
                       help="broadcast | outage-opt | outage-fixed[:BETA] | outage-matched")
    p_sim.add_argument("--beta", type=float, default=None)
    _add_sim_args(p_sim, trials=10000)
    p_sim.add_argument("--out", default=None)
    p_sim.set_defaults(func=cmd_simulate)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except (ParameterError, DomainError, RegimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NoBracketError, BranchPointError, InfeasibleError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    raise SystemExit(main())
