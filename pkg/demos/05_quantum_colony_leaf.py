"""The quantum-sampled colony on a single 4-city leaf.

Eight path qubits encode a 4-city tour (2 bits per position).  The register
starts at pi/2 per qubit (uniform over all 256 bitstrings, of which 24 are
feasible tours); infeasible measurements are repaired, feasible ones feed a
solution pool and a rotation-table update that biases later sampling toward
the global best.
"""

import itertools
import math

from qacotsp import MetricMode, NoiseKind, NoiseSpec, gen_random_instance, qaco_solve
from qacotsp.qaco import decode_bits, encode_tour

inst = gen_random_instance(4, seed=11, bound=100.0)

result = qaco_solve(inst, range(4), seed=0, metric=MetricMode.PLAIN)
print(f"noiseless solve: length {result.length:.2f} after {result.iterations} "
      f"iterations ({result.repairs} repairs, {result.mutations} mutations)")
print(f"best tour {result.tour.order} encodes as "
      f"{encode_tour(result.tour, 4)}")

best = min(
    sum(math.dist(inst.coords[c[i]], inst.coords[c[(i + 1) % 4]]) for i in range(4))
    for c in itertools.permutations(range(4))
)
print(f"exhaustive optimum: {best:.2f} (matched: {abs(best - result.length) < 1e-9})")

print(f"\nfeasible bitstrings: "
      f"{sum(decode_bits(format(i, '08b'), 4) is not None for i in range(256))}/256")

for rate in (0.02, 0.10):
    noisy = qaco_solve(inst, range(4), noise=NoiseSpec(NoiseKind.BIT_FLIP, rate),
                       seed=0, metric=MetricMode.PLAIN)
    print(f"bit-flip rate {rate:4.2f}: length {noisy.length:.2f}, "
          f"{noisy.repairs} repairs (feasibility is guaranteed by repair)")
