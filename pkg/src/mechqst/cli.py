"""Command line entry point: ``mechqst {validate,run,sweep,figure}``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .config import (ConfigError, config_hash, derived_record, is_sweep, load_config, parse_scenario,
                     parse_sweep, write_csv, write_trace_csv)
from .dynamics import IntegrationError
from .experiment import optimal_over_T, run_scenario, sweep
from .figures import FIGURES, figure
from .params import validate_regime

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3

log = logging.getLogger("mechqst")


def _diagnostics(sc):
    for diag in validate_regime(sc.params, sc.derived, sc.model):
        level = logging.INFO if diag.passed else logging.WARNING
        log.log(level, "regime %-22s %s (margin %.3g: %s)", diag.name,
                "ok" if diag.passed else "VIOLATED", diag.margin, diag.detail)


def _load(args):
    if not args.config:
        raise ConfigError("--config is required")
    cfg = load_config(args.config)
    return cfg, parse_scenario(cfg)


def cmd_validate(args):
    cfg, sc = _load(args)
    if is_sweep(cfg):
        parse_sweep(cfg)
    _diagnostics(sc)
    print(json.dumps({"config_hash": config_hash(cfg), "derived": derived_record(sc.derived)}, indent=2))
    return EXIT_OK


def cmd_run(args):
    cfg, sc = _load(args)
    if is_sweep(cfg):
        raise ConfigError("config defines a sweep; use the 'sweep' command")
    _diagnostics(sc)
    res = run_scenario(sc, tolerance_scale=args.tolerance_scale)
    out = Path(args.out)
    h = config_hash(cfg)
    write_trace_csv(out / f"trace_{h}.csv", res)
    record = {
        "config_hash": h,
        "derived": derived_record(sc.derived),
        "final_fidelity": res.final_fidelity,
        "initial_fidelity": res.initial_fidelity,
        "wall_time_s": res.wall_time,
        "version": __version__,
    }
    (out / f"run_{h}.json").write_text(json.dumps(record, indent=2) + "\n")
    print(f"final fidelity {res.final_fidelity:.6f} (initial overlap {res.initial_fidelity:.6f})")
    return EXIT_OK


def cmd_sweep(args):
    cfg, sc = _load(args)
    axes, optimize = parse_sweep(cfg)
    _diagnostics(sc)
    rows = sweep(sc, axes, workers=args.workers, tolerance_scale=args.tolerance_scale)
    out = Path(args.out)
    h = config_hash(cfg)
    names = list(axes)
    write_csv(out / f"sweep_{h}.csv", ["index", *names, "fidelity", "status"],
              ([r.index, *(r.point[a] for a in names), r.fidelity, r.status] for r in rows))
    if optimize:
        best = optimal_over_T(rows)
        others = [a for a in names if a != "T"]
        write_csv(out / f"optimal_{h}.csv", [*others, "T_opt", "fidelity_opt"],
                  ([*(v for _, v in key), t, f] for key, (t, f) in best.items()))
    failed = sum(r.status != "ok" for r in rows)
    print(f"{len(rows)} points, {failed} failed -> {out}")
    return EXIT_NUMERIC if failed else EXIT_OK


def cmd_figure(args):
    fig_id = args.figure or args.id
    if fig_id is None:
        raise ConfigError("figure id required")
    if fig_id not in FIGURES:
        raise ConfigError(f"unknown figure {fig_id!r}; expected one of {', '.join(FIGURES)}")
    for path in figure(fig_id, args.out, workers=args.workers):
        print(path)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="mechqst", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=str, help="scenario JSON file")
    common.add_argument("--out", type=str, default="out", help="output directory")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--tolerance-scale", type=float, default=1.0,
                        help="multiply integrator tolerances (values < 1 tighten)")
    common.add_argument("-v", "--verbose", action="store_true")
    sub.add_parser("validate", parents=[common], help="check a config and print derived quantities")
    sub.add_parser("run", parents=[common], help="single transfer simulation")
    sub.add_parser("sweep", parents=[common], help="final fidelity over a parameter grid")
    p_fig = sub.add_parser("figure", parents=[common], help="regenerate a figure's data")
    p_fig.add_argument("id", nargs="?", choices=FIGURES)
    p_fig.add_argument("--figure", type=str)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    if args.tolerance_scale <= 0:
        print("error: --tolerance-scale must be positive", file=sys.stderr)
        return EXIT_CONFIG
    handler = {"validate": cmd_validate, "run": cmd_run, "sweep": cmd_sweep, "figure": cmd_figure}[args.command]
    try:
        return handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except IntegrationError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
