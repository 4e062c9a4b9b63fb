"""Noise sweep: solution quality under increasing gate noise.

The sampler runs under bit-flip or thermal-relaxation noise at each level;
the deviation is the worst relative gap between a noisy median and the
noiseless one.  Infeasible measurements are repaired via Hamming distance to
the solution pool, which is what keeps quality flat even at 10% noise.
"""

import pathlib

import numpy as np

from qacotsp import HybridConfig, MetricMode, NoiseKind, NoiseSpec, load_instance, solve_hybrid

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"
LEVELS = (0.001, 0.01, 0.02, 0.05, 0.10)
SEEDS = (0, 1, 2)

inst = load_instance(DATA / "ulysses16.tsp")


def median_length(noise):
    lengths = []
    for seed in SEEDS:
        config = HybridConfig(seed=seed, metric=MetricMode.PLAIN, noise=noise)
        _, length, _ = solve_hybrid(inst, config)
        lengths.append(length)
    return float(np.median(lengths))


baseline = median_length(NoiseSpec())
print(f"{inst.name} noiseless median: {baseline:.3f}")

for kind in (NoiseKind.BIT_FLIP, NoiseKind.THERMAL_RELAXATION):
    print(f"\n{kind.value} noise:")
    worst = 0.0
    for level in LEVELS:
        med = median_length(NoiseSpec(kind, level))
        dev = abs(med - baseline) / baseline * 100.0
        worst = max(worst, dev)
        print(f"  rate {level * 100:5.1f}%: median {med:.3f} (dev {dev:.2f}%)")
    print(f"  worst deviation: {worst:.2f}%")
