"""Sampling bitstrings from Ry product states, with and without gate noise.

Each register qubit is prepared as Ry(theta)|0> and measured once per shot;
P(bit = 1) = sin^2(theta/2).  Noise is injected per trajectory: bit flips
after the gate and before the measurement, or thermal relaxation (reset +
dephasing) after the gate.
"""

import math
from collections import Counter

import numpy as np

from qacotsp import NoiseKind, NoiseSpec
from qacotsp.qsim import NO_NOISE, noisy_sample, ry_product_state, measure_all

rng = np.random.default_rng(0)

thetas = [math.pi / 2, math.pi / 3, 0.9 * math.pi]
print("per-qubit P(1) =", [f"{math.sin(t / 2) ** 2:.3f}" for t in thetas])

shots = 20_000
counts = Counter(noisy_sample(thetas, NO_NOISE, rng) for _ in range(shots))
print(f"\nnoiseless sampling, top outcomes of {shots} shots:")
for bits, c in counts.most_common(4):
    print(f"  {bits}: {c / shots:.3f}")

print("\nthe dense statevector gives the same distribution:")
state = ry_product_state(thetas)
counts_sv = Counter(measure_all(state, rng) for _ in range(shots))
for bits, _ in counts.most_common(4):
    print(f"  {bits}: {counts_sv[bits] / shots:.3f}")

for kind in (NoiseKind.BIT_FLIP, NoiseKind.THERMAL_RELAXATION):
    for rate in (0.02, 0.10):
        noisy = Counter(noisy_sample(thetas, NoiseSpec(kind, rate), rng)
                        for _ in range(shots))
        tv = 0.5 * sum(abs(noisy[b] - counts[b]) / shots
                       for b in set(noisy) | set(counts))
        print(f"{kind.value:8s} rate {rate:4.2f}: TV distance from noiseless "
              f"samples = {tv:.3f}")
