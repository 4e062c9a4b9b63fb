"""The full hybrid pipeline: cluster, solve leaves, stitch, refine.

Compares the quantum-sampled leaf solver against swapping in the classical
colony or exact brute force on the same decomposition.
"""

import pathlib

from qacotsp import HybridConfig, LeafSolver, MetricMode, load_instance, solve_hybrid

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"

inst = load_instance(DATA / "ulysses16.tsp")

for solver in (LeafSolver.QACO, LeafSolver.CLASSICAL_ACO, LeafSolver.BRUTE_FORCE):
    config = HybridConfig(leaf_solver=solver, seed=0, metric=MetricMode.PLAIN)
    tour, length, stats = solve_hybrid(inst, config)
    print(f"{solver.value:6s}: length {length:.3f} "
          f"(leaves {stats.leaf_sizes}, stitched {stats.stitched_length:.3f}, "
          f"2-opt gain {stats.refinement_gain:.3f}, {stats.wall_ms:.0f} ms)")

print("\nthe swappable leaf solver isolates what the quantum sampling "
      "contributes versus the decomposition itself.")
