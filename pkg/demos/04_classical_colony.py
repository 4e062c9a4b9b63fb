"""The classical ant colony baseline on a small instance.

Six ants per iteration pick moves by the pseudo-random-proportional rule
(greedy with probability q0 = 0.9, weighted sampling otherwise); after each
iteration the pheromone evaporates and the global-best tour deposits on its
edges.
"""

from qacotsp import AcoParams, MetricMode, aco_solve, gen_random_instance

inst = gen_random_instance(12, seed=3, bound=100.0)
params = AcoParams(iterations=300)

tour, length, history = aco_solve(inst, range(12), params, seed=0,
                                  metric=MetricMode.PLAIN)

print(f"{inst.name}: best tour length {length:.2f}")
print(f"order: {tour.order}")
print("\nconvergence of the global best (non-increasing):")
for it in (1, 2, 5, 10, 25, 50, 100, 200, 300):
    print(f"  iteration {it:4d}: {history[it - 1]:.2f}")
