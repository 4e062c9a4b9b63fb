"""Experiment harness: solver comparisons, noise sweeps, error estimates.

Outputs are a CSV of run records (the primary artifact, deterministically
formatted), a JSON mirror that additionally carries each tour and the
measured wall time, and small self-contained SVG plots.  The wall_ms column
of the CSV is always 0 so repeated runs with the same seeds are byte
identical; look in the JSON for real timings.

Cells of an experiment grid run in a thread pool capped by the QACO_THREADS
environment variable (default 1).  Every cell owns its random streams, so
results do not depend on the thread count.
"""

from __future__ import annotations

import dataclasses
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .aco import AcoParams, aco_solve
from .circuit_error import (
    DEFAULT_MEASUREMENT_RATE,
    SINGLE_QUBIT_RATE,
    CircuitErrorReport,
    estimate_circuit_error,
    layer,
    qaco_circuit_layers,
)
from .hybrid import HybridConfig, LeafSolver, Refinement, solve_hybrid
from .qaco import QacoParams
from .qsim import NoiseKind, NoiseSpec
from .tsplib import (
    Instance,
    MetricMode,
    Tour,
    gen_random_instance,
    load_instance,
    tour_length,
)

SOLVERS = ("aco", "qaco-hybrid", "clustered-aco")
CSV_HEADER = "dataset,solver,seed,noise_kind,noise_rate,length,iterations,wall_ms"
DEFAULT_NOISE_LEVELS = (0.001, 0.01, 0.02, 0.05, 0.10)


class ConfigError(ValueError):
    pass


@dataclass
class RunRecord:
    dataset: str
    solver: str
    seed: int
    noise_kind: str
    noise_rate: float
    length: float
    iterations: int
    wall_ms: float
    tour: tuple

    def csv_row(self) -> str:
        # wall_ms deliberately fixed at 0 in the CSV; see module docstring.
        return (
            f"{self.dataset},{self.solver},{self.seed},{self.noise_kind},"
            f"{self.noise_rate:g},{self.length:.6f},{self.iterations},0"
        )

    def to_json(self) -> dict:
        return {
            "dataset": self.dataset,
            "solver": self.solver,
            "seed": self.seed,
            "noise_kind": self.noise_kind,
            "noise_rate": self.noise_rate,
            "length": round(self.length, 6),
            "iterations": self.iterations,
            "wall_ms": self.wall_ms,
            "tour": list(self.tour),
        }


def resolve_instance(spec: str) -> Instance:
    """Load an instance from a path or build one from random:<n>:<seed>[:<bound>]."""
    if spec.startswith("random:"):
        parts = spec.split(":")
        if len(parts) not in (3, 4):
            raise ConfigError(f"bad random instance spec: {spec!r}")
        try:
            n, seed = int(parts[1]), int(parts[2])
            bound = float(parts[3]) if len(parts) == 4 else 1000.0
        except ValueError:
            raise ConfigError(f"bad random instance spec: {spec!r}")
        return gen_random_instance(n, seed, bound)
    if not os.path.exists(spec):
        raise ConfigError(f"instance file not found: {spec}")
    return load_instance(spec)


def parse_metric(name: str) -> MetricMode:
    try:
        return {"canonical": MetricMode.CANONICAL, "paper": MetricMode.PLAIN}[name]
    except KeyError:
        raise ConfigError(f"unknown metric {name!r} (expected canonical|paper)")


def parse_noise(kind: str, rate: float) -> NoiseSpec:
    kinds = {
        "none": NoiseKind.NONE,
        "bitflip": NoiseKind.BIT_FLIP,
        "thermal": NoiseKind.THERMAL_RELAXATION,
    }
    if kind not in kinds:
        raise ConfigError(f"unknown noise kind {kind!r} (expected none|bitflip|thermal)")
    return NoiseSpec(kinds[kind], rate if kind != "none" else 0.0)


def run_single(inst: Instance, solver: str, seed: int, noise: NoiseSpec,
               metric: MetricMode, qaco_params: QacoParams = QacoParams(),
               aco_params: AcoParams = AcoParams(),
               hybrid_overrides: dict = None) -> RunRecord:
    """One (instance, solver, seed, noise) cell; self-checks its own record."""
    if solver not in SOLVERS:
        raise ConfigError(f"unknown solver {solver!r} (expected one of {SOLVERS})")
    start = time.perf_counter()
    if solver == "aco":
        tour, length, history = aco_solve(inst, range(inst.dimension), aco_params,
                                          seed=seed, metric=metric)
        iterations = len(history)
    else:
        leaf = LeafSolver.QACO if solver == "qaco-hybrid" else LeafSolver.CLASSICAL_ACO
        config = HybridConfig(leaf_solver=leaf, qaco_params=qaco_params,
                              aco_params=aco_params, noise=noise, metric=metric,
                              seed=seed, **(hybrid_overrides or {}))
        tour, length, stats = solve_hybrid(inst, config)
        iterations = stats.leaf_iterations
    wall_ms = (time.perf_counter() - start) * 1000.0

    recomputed = tour_length(inst, tour, metric)
    assert abs(recomputed - length) <= 1e-9 * max(1.0, abs(length))
    return RunRecord(
        dataset=inst.name,
        solver=solver,
        seed=seed,
        noise_kind=noise.kind.value,
        noise_rate=noise.rate if noise.enabled else 0.0,
        length=float(length),
        iterations=int(iterations),
        wall_ms=wall_ms,
        tour=tuple(tour.order),
    )


def run_cells(cells, worker) -> list:
    """Evaluate experiment cells in deterministic order, QACO_THREADS-wide."""
    threads = max(1, int(os.environ.get("QACO_THREADS", "1")))
    if threads == 1:
        return [worker(cell) for cell in cells]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(worker, cells))


def write_records_csv(records, path, append: bool = False) -> None:
    exists = os.path.exists(path)
    mode = "a" if append and exists else "w"
    with open(path, mode, encoding="utf-8", newline="\n") as f:
        if mode == "w":
            f.write(CSV_HEADER + "\n")
        for rec in records:
            f.write(rec.csv_row() + "\n")


def write_records_json(records, path, append: bool = False) -> None:
    existing = []
    if append and os.path.exists(path):
        with open(path, "r", encoding="utf-8") as f:
            existing = json.load(f)
    existing.extend(rec.to_json() for rec in records)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(existing, f, indent=1)
        f.write("\n")


def load_records_csv(path) -> list:
    """Read back an emitted CSV as RunRecords (tours live in the JSON only)."""
    records = []
    with open(path, "r", encoding="utf-8") as f:
        header = f.readline().strip()
        if header != CSV_HEADER:
            raise ConfigError(f"unexpected results header: {header!r}")
        for line in f:
            line = line.strip()
            if not line:
                continue
            ds, solver, seed, kind, rate, length, iters, wall = line.split(",")
            records.append(RunRecord(ds, solver, int(seed), kind, float(rate),
                                     float(length), int(iters), float(wall), ()))
    return records


def records_to_csv_text(records) -> str:
    return CSV_HEADER + "\n" + "".join(rec.csv_row() + "\n" for rec in records)


def median(values) -> float:
    return float(np.median(np.asarray(list(values), dtype=float)))


# ---------------------------------------------------------------------------
# subcommand drivers


def _ensure_out(out_dir):
    os.makedirs(out_dir, exist_ok=True)
    os.makedirs(os.path.join(out_dir, "plots"), exist_ok=True)


def cmd_solve(instance_spec: str, solver: str, seeds, noise: NoiseSpec,
              metric: MetricMode, out_dir: str, qaco_params=QacoParams(),
              aco_params=AcoParams(), hybrid_overrides=None) -> list:
    """Solve one instance with one solver across seeds; append records."""
    _ensure_out(out_dir)
    inst = resolve_instance(instance_spec)
    cells = [(inst, solver, int(seed)) for seed in seeds]
    records = run_cells(
        cells,
        lambda cell: run_single(cell[0], cell[1], cell[2], noise, metric,
                                qaco_params, aco_params, hybrid_overrides),
    )
    write_records_csv(records, os.path.join(out_dir, "results.csv"), append=True)
    write_records_json(records, os.path.join(out_dir, "results.json"), append=True)
    return records


def cmd_compare(dataset_specs, seeds, metric: MetricMode, out_dir: str,
                optima: dict = None, qaco_params=QacoParams(),
                aco_params=AcoParams(), hybrid_overrides=None,
                solvers=SOLVERS) -> list:
    """Median-over-seeds table of every solver on every dataset.

    Returns the table rows as dicts and writes comparison.csv plus the raw
    records.
    """
    _ensure_out(out_dir)
    optima = optima or {}
    instances = [resolve_instance(spec) for spec in dataset_specs]
    cells = [
        (inst, solver, int(seed))
        for inst in instances
        for solver in solvers
        for seed in seeds
    ]
    records = run_cells(
        cells,
        lambda cell: run_single(cell[0], cell[1], cell[2], NoiseSpec(), metric,
                                qaco_params, aco_params, hybrid_overrides),
    )
    write_records_csv(records, os.path.join(out_dir, "results.csv"), append=True)
    write_records_json(records, os.path.join(out_dir, "results.json"), append=True)

    rows = []
    for inst in instances:
        row = {"dataset": inst.name, "optimum": optima.get(inst.name, "")}
        for solver in solvers:
            lengths = [r.length for r in records
                       if r.dataset == inst.name and r.solver == solver]
            row[solver] = median(lengths)
        rows.append(row)

    path = os.path.join(out_dir, "comparison.csv")
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("dataset,optimum,ACO,QACO,ClusteredACO\n")
        for row in rows:
            opt = f"{row['optimum']:g}" if row["optimum"] != "" else ""
            f.write(
                f"{row['dataset']},{opt},{row.get('aco', float('nan')):.6f},"
                f"{row.get('qaco-hybrid', float('nan')):.6f},"
                f"{row.get('clustered-aco', float('nan')):.6f}\n"
            )
    return rows


def sweep_deviation(level_medians: dict, baseline: float) -> float:
    """Max relative deviation (%) of any noisy median from the noiseless one."""
    return max(
        abs(m - baseline) / baseline * 100.0 for m in level_medians.values()
    )


def cmd_noise_sweep(instance_spec: str, noise_kind: str, seeds, metric: MetricMode,
                    out_dir: str, levels=DEFAULT_NOISE_LEVELS,
                    qaco_params=QacoParams(), hybrid_overrides=None) -> dict:
    """QACO-hybrid at each noise level plus a noiseless baseline.

    Deviation(%) is the maximum relative deviation of a per-level median from
    the noiseless median.  Writes sweep.csv (one row per dataset, one column
    per level mirroring the reference table layout) and a deviation SVG.
    """
    if noise_kind not in ("bitflip", "thermal"):
        raise ConfigError("noise-sweep requires --noise bitflip or thermal")
    _ensure_out(out_dir)
    inst = resolve_instance(instance_spec)
    levels = list(levels)
    specs = [NoiseSpec()] + [parse_noise(noise_kind, lvl) for lvl in levels]
    cells = [(spec, int(seed)) for spec in specs for seed in seeds]
    records = run_cells(
        cells,
        lambda cell: run_single(inst, "qaco-hybrid", cell[1], cell[0], metric,
                                qaco_params, AcoParams(), hybrid_overrides),
    )
    write_records_csv(records, os.path.join(out_dir, "results.csv"), append=True)
    write_records_json(records, os.path.join(out_dir, "results.json"), append=True)

    baseline = median(r.length for r in records if r.noise_kind == "none")
    level_medians = {}
    for lvl in levels:
        level_medians[lvl] = median(
            r.length for r in records
            if r.noise_kind != "none" and abs(r.noise_rate - lvl) < 1e-15
        )
    deviation = sweep_deviation(level_medians, baseline)

    sweep_path = os.path.join(out_dir, "sweep.csv")
    header = "dataset,noise_kind,ideal," + ",".join(
        f"{lvl * 100:g}%" for lvl in levels
    ) + ",deviation_pct"
    with open(sweep_path, "w", encoding="utf-8", newline="\n") as f:
        f.write(header + "\n")
        f.write(
            f"{inst.name},{noise_kind},{baseline:.6f},"
            + ",".join(f"{level_medians[lvl]:.6f}" for lvl in levels)
            + f",{deviation:.4f}\n"
        )

    svg_path = os.path.join(out_dir, "plots", f"deviation_{inst.name}_{noise_kind}.svg")
    dev_curve = [abs(level_medians[lvl] - baseline) / baseline * 100.0 for lvl in levels]
    write_svg_plot(svg_path, [lvl * 100 for lvl in levels], {inst.name: dev_curve},
                   title=f"{noise_kind} deviation vs noise level",
                   xlabel="noise level (%)", ylabel="deviation (%)")
    return {"baseline": baseline, "levels": level_medians, "deviation": deviation}


ERROR_PRESETS = {
    "heron-4city": dict(k_cities=4, include_ancilla=True),
    "heron-10city": dict(k_cities=10, include_ancilla=True),
}


def cmd_estimate_error(layers_file: str = None, preset: str = None,
                       out_dir: str = None) -> CircuitErrorReport:
    """Evaluate the layered error estimate from a JSON spec or a preset."""
    if (layers_file is None) == (preset is None):
        raise ConfigError("provide exactly one of a layers file or a preset")
    if preset is not None:
        if preset not in ERROR_PRESETS:
            raise ConfigError(f"unknown preset {preset!r}; have {sorted(ERROR_PRESETS)}")
        layers = qaco_circuit_layers(
            single_qubit_rate=SINGLE_QUBIT_RATE,
            measurement_rate=DEFAULT_MEASUREMENT_RATE,
            **ERROR_PRESETS[preset],
        )
    else:
        with open(layers_file, "r", encoding="utf-8") as f:
            raw = json.load(f)
        if not isinstance(raw, list) or not raw:
            raise ConfigError("layers file must hold a non-empty list of layers")
        layers = [layer([(g[0], g[1], g[2]) for g in entry["gates"]],
                        m=entry.get("m")) for entry in raw]
    report = estimate_circuit_error(layers)
    if out_dir is not None:
        _ensure_out(out_dir)
        with open(os.path.join(out_dir, "error_report.json"), "w",
                  encoding="utf-8", newline="\n") as f:
            json.dump({"s": report.s, "depth": report.depth,
                       "layer_averages": list(report.layer_averages)}, f, indent=1)
            f.write("\n")
    return report


def write_svg_plot(path, xs, series: dict, title="", xlabel="", ylabel="",
                   width=640, height=420) -> None:
    """Minimal self-contained SVG line/scatter plot, deterministic bytes."""
    margin = 60
    xs = list(xs)
    all_ys = [y for ys in series.values() for y in ys]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(all_ys + [0.0]), max(all_ys + [1e-12])
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0

    def px(x):
        return margin + (x - x_lo) / (x_hi - x_lo) * (width - 2 * margin)

    def py(y):
        return height - margin - (y - y_lo) / (y_hi - y_lo) * (height - 2 * margin)

    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="20" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">{title}</text>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" '
        f'y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" '
        f'y2="{height - margin}" stroke="black"/>',
        f'<text x="{width / 2:.1f}" y="{height - 15}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12">{xlabel}</text>',
        f'<text x="18" y="{height / 2:.1f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12" '
        f'transform="rotate(-90 18 {height / 2:.1f})">{ylabel}</text>',
    ]
    for x in xs:
        parts.append(
            f'<text x="{px(x):.1f}" y="{height - margin + 16}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="10">{x:g}</text>'
        )
    for frac in (0.0, 0.5, 1.0):
        y = y_lo + frac * (y_hi - y_lo)
        parts.append(
            f'<text x="{margin - 6}" y="{py(y) + 3:.1f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="10">{y:.3g}</text>'
        )
    for i, (label, ys) in enumerate(sorted(series.items())):
        color = colors[i % len(colors)]
        pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" '
                     f'stroke-width="1.5"/>')
        for x, y in zip(xs, ys):
            parts.append(f'<circle cx="{px(x):.2f}" cy="{py(y):.2f}" r="3" '
                         f'fill="{color}"/>')
        parts.append(
            f'<text x="{width - margin + 4}" y="{margin + 14 * i + 10}" '
            f'font-family="sans-serif" font-size="10" fill="{color}">{label}</text>'
        )
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("\n".join(parts) + "\n")


def build_qaco_params(overrides: dict = None) -> QacoParams:
    return dataclasses.replace(QacoParams(), **(overrides or {}))


def build_aco_params(overrides: dict = None) -> AcoParams:
    return dataclasses.replace(AcoParams(), **(overrides or {}))
