"""Command-line driver for the experiment harness.

Subcommands: solve, compare, noise-sweep, estimate-error, gen-random.
Every flag can also be supplied through --config pointing at a JSON file
whose keys mirror the flag names; explicit flags win over config values.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bench
from .bench import ConfigError
from .tsplib import gen_random_instance, save_instance


def _add_common(p):
    p.add_argument("--config", help="JSON file whose keys mirror the flags")
    p.add_argument("--metric", choices=["canonical", "paper"], default=None,
                   help="distance convention (default canonical)")
    p.add_argument("--seeds", default=None,
                   help="comma-separated seed list (default 0,1,2,3,4)")
    p.add_argument("--out", default=None, help="output directory (default runs/)")


def _merged(args, defaults):
    """Start from defaults, overlay --config, overlay explicit flags."""
    merged = dict(defaults)
    if getattr(args, "config", None):
        with open(args.config, "r", encoding="utf-8") as f:
            merged.update(json.load(f))
    for key, value in vars(args).items():
        if key in ("config", "command") or value is None:
            continue
        merged[key] = value
    return merged


def _seeds(value):
    if isinstance(value, (list, tuple)):
        return [int(v) for v in value]
    return [int(v) for v in str(value).split(",") if v != ""]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qacotsp",
        description="Hybrid quantum-classical ant colony TSP experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run one solver on one instance")
    p.add_argument("--instance", default=None,
                   help="path to a .tsp file or random:<n>:<seed>[:<bound>]")
    p.add_argument("--solver", default=None,
                   help="aco | qaco-hybrid | clustered-aco")
    p.add_argument("--noise", default=None, help="none | bitflip | thermal")
    p.add_argument("--rate", type=float, default=None, help="noise rate in [0,1]")
    _add_common(p)

    p = sub.add_parser("compare", help="median table of all solvers on datasets")
    p.add_argument("--datasets", default=None,
                   help="comma-separated instance specs")
    _add_common(p)

    p = sub.add_parser("noise-sweep", help="QACO-hybrid across noise levels")
    p.add_argument("--instance", default=None)
    p.add_argument("--noise", default=None, help="bitflip | thermal")
    p.add_argument("--levels", default=None,
                   help="comma-separated rates (default 0.001,0.01,0.02,0.05,0.1)")
    _add_common(p)

    p = sub.add_parser("estimate-error", help="layered circuit error estimate")
    p.add_argument("--layers", default=None, help="JSON layer spec file")
    p.add_argument("--preset", default=None,
                   help=f"one of {sorted(bench.ERROR_PRESETS)}")
    p.add_argument("--config", help="JSON file whose keys mirror the flags")
    p.add_argument("--out", default=None)

    p = sub.add_parser("gen-random", help="write a random instance as TSPLIB")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--bound", type=float, default=None)
    p.add_argument("--path", default=None, help="output .tsp path")
    p.add_argument("--config", help="JSON file whose keys mirror the flags")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except (ConfigError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _dispatch(args) -> int:
    if args.command == "solve":
        cfg = _merged(args, {
            "instance": None, "solver": "qaco-hybrid", "noise": "none",
            "rate": 0.0, "metric": "canonical", "seeds": "0,1,2,3,4",
            "out": "runs", "qaco_params": {}, "aco_params": {}, "hybrid": {},
        })
        if not cfg["instance"]:
            raise ConfigError("--instance is required")
        records = bench.cmd_solve(
            cfg["instance"], cfg["solver"], _seeds(cfg["seeds"]),
            bench.parse_noise(cfg["noise"], float(cfg["rate"])),
            bench.parse_metric(cfg["metric"]), cfg["out"],
            bench.build_qaco_params(cfg["qaco_params"]),
            bench.build_aco_params(cfg["aco_params"]),
            cfg["hybrid"] or None,
        )
        for rec in records:
            print(f"{rec.dataset} {rec.solver} seed={rec.seed} "
                  f"length={rec.length:.4f} ({rec.wall_ms:.0f} ms)")
        return 0

    if args.command == "compare":
        cfg = _merged(args, {
            "datasets": None, "metric": "canonical", "seeds": "0,1,2,3,4",
            "out": "runs", "optima": {}, "qaco_params": {}, "aco_params": {},
            "hybrid": {},
        })
        if not cfg["datasets"]:
            raise ConfigError("--datasets is required")
        datasets = (cfg["datasets"].split(",")
                    if isinstance(cfg["datasets"], str) else cfg["datasets"])
        rows = bench.cmd_compare(
            datasets, _seeds(cfg["seeds"]), bench.parse_metric(cfg["metric"]),
            cfg["out"], cfg["optima"],
            bench.build_qaco_params(cfg["qaco_params"]),
            bench.build_aco_params(cfg["aco_params"]),
            cfg["hybrid"] or None,
        )
        print(f"{'dataset':<16}{'optimum':>10}{'ACO':>14}{'QACO':>14}{'ClusteredACO':>14}")
        for row in rows:
            opt = f"{row['optimum']:g}" if row["optimum"] != "" else "-"
            print(f"{row['dataset']:<16}{opt:>10}{row['aco']:>14.2f}"
                  f"{row['qaco-hybrid']:>14.2f}{row['clustered-aco']:>14.2f}")
        return 0

    if args.command == "noise-sweep":
        cfg = _merged(args, {
            "instance": None, "noise": None, "metric": "canonical",
            "seeds": "0,1,2,3,4", "out": "runs", "levels": None,
            "qaco_params": {}, "hybrid": {},
        })
        if not cfg["instance"] or not cfg["noise"]:
            raise ConfigError("--instance and --noise are required")
        levels = bench.DEFAULT_NOISE_LEVELS
        if cfg["levels"]:
            levels = ([float(v) for v in cfg["levels"].split(",")]
                      if isinstance(cfg["levels"], str) else cfg["levels"])
        summary = bench.cmd_noise_sweep(
            cfg["instance"], cfg["noise"], _seeds(cfg["seeds"]),
            bench.parse_metric(cfg["metric"]), cfg["out"], levels,
            bench.build_qaco_params(cfg["qaco_params"]), cfg["hybrid"] or None,
        )
        print(f"ideal median: {summary['baseline']:.4f}")
        for lvl, med in summary["levels"].items():
            print(f"  rate {lvl:g}: median {med:.4f}")
        print(f"max deviation: {summary['deviation']:.2f}%")
        return 0

    if args.command == "estimate-error":
        cfg = _merged(args, {"layers": None, "preset": None, "out": None})
        report = bench.cmd_estimate_error(cfg["layers"], cfg["preset"], cfg["out"])
        print(f"depth: {report.depth}")
        for j, avg in enumerate(report.layer_averages, start=1):
            print(f"  layer {j}: average rate {avg:.6g}")
        print(f"total failure probability s = {report.s:.6g}")
        return 0

    if args.command == "gen-random":
        cfg = _merged(args, {"n": 64, "seed": 0, "bound": 1000.0, "path": None})
        if not cfg["path"]:
            raise ConfigError("--path is required")
        inst = gen_random_instance(int(cfg["n"]), int(cfg["seed"]), float(cfg["bound"]))
        save_instance(inst, cfg["path"])
        print(f"wrote {inst.name} ({inst.dimension} cities) to {cfg['path']}")
        return 0

    raise ConfigError(f"unknown command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
