"""Command-line interface.

Subcommands: ``run`` a config file or preset study, ``reference`` to build
and cache a reference CDF, ``report`` to aggregate report CSVs under a
directory, and ``presets`` to list the built-in studies.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace

from ..errors import MlabcError
from .config import load_config
from .csvio import read_report_csv
from .metrics import fit_convergence_slope
from .presets import PRESET_NAMES, preset_descriptions, run_preset
from .reference import build_reference, reference_cache_path
from .runner import run_experiment


def _add_common(parser):
    parser.add_argument("--seed", type=int, default=None, help="master seed override")
    parser.add_argument("--workers", type=int, default=1, help="parallel replication workers")
    parser.add_argument("--out", default=None, help="output directory override")
    parser.add_argument("--preset", default=None, choices=PRESET_NAMES, help="run a built-in study")
    parser.add_argument("--budget-cap", type=int, default=None, help="simulation budget cap override")


def _load(args) -> "ExperimentConfig":
    config = load_config(args.config)
    if args.seed is not None:
        config = replace(config, seed=args.seed)
    if args.out is not None:
        config = replace(config, out_dir=args.out)
    if args.budget_cap is not None:
        config = replace(config, budget_cap=args.budget_cap)
    return config


def cmd_run(args) -> int:
    if args.preset:
        result = run_preset(args.preset, out_dir=args.out, seed=args.seed, workers=args.workers)
        print(f"preset {args.preset}: {len(result.rows)} study rows")
        for name, fit in result.slopes.items():
            print(f"  slope[{name}] = {fit.slope:+.4f}  CI [{fit.ci_low:+.4f}, {fit.ci_high:+.4f}]")
        for key, value in result.extras.items():
            if key == "median_bias":
                for m, bias in value.items():
                    print(f"  median coupling bias @ m={m:g}: {bias:.5f}")
        return 0
    if not args.config:
        print("error: provide a config file or --preset", file=sys.stderr)
        return 2
    config = _load(args)
    report = run_experiment(config, workers=args.workers)
    ok = sum(1 for row in report.rows if row["status"] == "ok")
    print(f"{ok}/{len(report.rows)} replications ok; report at {config.out_dir}/report.csv")
    if ok and report.sup_errors.size:
        print(f"mean N_s = {report.costs.mean():.0f}, RMSE(L-inf) = {report.rmse():.5f}")
    return 0 if ok == len(report.rows) else 1


def cmd_reference(args) -> int:
    if args.preset:
        from .presets import sis_base_config, tb_base_config

        config = sis_base_config() if args.preset in ("fig1", "fig2") else tb_base_config()
        if args.out:
            config = replace(config, out_dir=args.out)
        if args.seed is not None:
            config = replace(config, reference_seed=args.seed)
    else:
        if not args.config:
            print("error: provide a config file or --preset", file=sys.stderr)
            return 2
        config = _load(args)
    build_reference(config, force=args.force)
    print(f"reference cached at {reference_cache_path(config)}")
    return 0


def cmd_report(args) -> int:
    found = []
    for root, _dirs, files in os.walk(args.directory):
        if "report.csv" in files:
            found.append(os.path.join(root, "report.csv"))
    if not found:
        print(f"no report.csv under {args.directory}", file=sys.stderr)
        return 1
    points = []
    for path in sorted(found):
        rows, _ = read_report_csv(path)
        ok_rows = [r for r in rows if r.get("status") == "ok" and r.get("sup_error", -1) >= 0]
        if not ok_rows:
            print(f"{path}: no successful replications")
            continue
        costs = [r["n_s"] for r in ok_rows]
        rmse = (sum(r["sup_error"] ** 2 for r in ok_rows) / len(ok_rows)) ** 0.5
        mean_cost = sum(costs) / len(costs)
        points.append((mean_cost, rmse))
        print(f"{path}: {len(ok_rows)} reps, mean N_s = {mean_cost:.0f}, RMSE = {rmse:.5f}")
    if len(points) >= 2 and len({c for c, _ in points}) >= 2:
        fit = fit_convergence_slope(points)
        ci = f" CI [{fit.ci_low:+.4f}, {fit.ci_high:+.4f}]" if fit.ci_defined else ""
        print(f"aggregate slope: {fit.slope:+.4f}{ci}")
    return 0


def cmd_presets(_args) -> int:
    for name, description in preset_descriptions().items():
        print(f"{name:8s} {description}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mlabc",
        description="Multilevel Monte Carlo rejection sampling for likelihood-free inference",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run an experiment config or preset study")
    run_p.add_argument("config", nargs="?", help="config file (flat key=value or JSON)")
    _add_common(run_p)
    run_p.set_defaults(func=cmd_run)

    ref_p = sub.add_parser("reference", help="build and cache a reference CDF")
    ref_p.add_argument("config", nargs="?", help="config file")
    ref_p.add_argument("--force", action="store_true", help="rebuild even if cached")
    _add_common(ref_p)
    ref_p.set_defaults(func=cmd_reference)

    rep_p = sub.add_parser("report", help="aggregate report.csv files under a directory")
    rep_p.add_argument("directory")
    rep_p.set_defaults(func=cmd_report)

    pre_p = sub.add_parser("presets", help="list built-in study presets")
    pre_p.set_defaults(func=cmd_presets)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except MlabcError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
