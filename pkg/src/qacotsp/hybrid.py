"""End-to-end hybrid solver: cluster, solve leaves, stitch, refine.

The instance is decomposed by the cluster tree, each leaf is solved as a
small TSP cycle (quantum-sampled colony, classical colony, or brute force),
sibling solutions are visited in the order of a brute-force tour over their
centroids, adjacent cycles are merged by the cheapest 2-edge exchange, and
the root tour is optionally polished by 2-opt or a short classical colony
run.
"""

from __future__ import annotations

import dataclasses
import enum
import itertools
import time
from dataclasses import dataclass, field

import numpy as np

from .aco import AcoParams, aco_solve
from .cluster import ClusterTree, build_cluster_tree
from .qaco import QacoParams, qaco_solve
from .qsim import NO_NOISE, NoiseSpec
from .tsplib import (
    Instance,
    MetricMode,
    Tour,
    cycle_length,
    distance_matrix,
    validate_tour,
)


class LeafSolver(enum.Enum):
    QACO = "qaco"
    CLASSICAL_ACO = "aco"
    BRUTE_FORCE = "brute"


class Refinement(enum.Enum):
    NONE = "none"
    TWO_OPT = "two-opt"
    ACO_POLISH = "aco-polish"


@dataclass(frozen=True)
class HybridConfig:
    leaf_solver: LeafSolver = LeafSolver.QACO
    qaco_params: QacoParams = QacoParams()
    aco_params: AcoParams = AcoParams()
    noise: NoiseSpec = NO_NOISE
    metric: MetricMode = MetricMode.CANONICAL
    refinement: Refinement = Refinement.TWO_OPT
    two_opt_max_passes: int = 20
    polish_iterations: int = 200
    seed: int = 0
    # 4 cities per leaf matches the 8 path qubits of the sampling register.
    leaf_max: int = 4
    branching: int = 4
    kmeans_restarts: int = 10


@dataclass
class SubSolution:
    indices: tuple
    tour: Tour  # local positions into ``indices``
    length: float

    def global_cycle(self) -> list:
        return [self.indices[p] for p in self.tour.order]


def brute_force_order(D: np.ndarray) -> Tour:
    """Exact minimum cycle by enumeration with city 0 fixed (k <= ~8)."""
    k = D.shape[0]
    if k <= 2:
        return Tour(tuple(range(k)))
    best, best_len = None, np.inf
    for perm in itertools.permutations(range(1, k)):
        order = (0,) + perm
        length = cycle_length(D, order)
        if length < best_len:
            best, best_len = order, length
    return Tour(best)


def order_siblings(centroids) -> list:
    """Optimal cyclic visiting order of <= 4 centroids, brute-forced.

    Ties resolve to the lexicographically smallest ordering because
    permutations are enumerated in lexicographic order and only strict
    improvements are kept.
    """
    pts = np.asarray(centroids, dtype=float)
    k = len(pts)
    if k <= 2:
        return list(range(k))
    best, best_len = None, np.inf
    for perm in itertools.permutations(range(k)):
        length = 0.0
        for idx in range(k):
            a, b = pts[perm[idx]], pts[perm[(idx + 1) % k]]
            length += float(np.hypot(*(a - b)))
        if length < best_len:
            best, best_len = perm, length
    return list(best)


def _merge_two_cycles(a: list, b: list, D: np.ndarray):
    """Cheapest single 2-edge exchange joining two disjoint cycles.

    Every pair of (edge of a, edge of b) is tried in both reconnection
    orientations; returns (merged cycle, added length).
    """
    if len(a) == 1:
        best, best_add = None, np.inf
        for i in range(len(b)):
            nxt = b[(i + 1) % len(b)]
            add = D[b[i], a[0]] + D[a[0], nxt] - (D[b[i], nxt] if len(b) > 1 else 0.0)
            if add < best_add:
                best, best_add = b[: i + 1] + [a[0]] + b[i + 1:], add
        return best, float(best_add)
    if len(b) == 1:
        return _merge_two_cycles(b, a, D)

    la, lb = len(a), len(b)
    best, best_add = None, np.inf
    for i in range(la):
        a1, a2 = a[i], a[(i + 1) % la]
        for j in range(lb):
            b1, b2 = b[j], b[(j + 1) % lb]
            removed = D[a1, a2] + D[b1, b2]
            # forward: ... a1 -> b2 ... b1 -> a2 ...
            add_f = D[a1, b2] + D[b1, a2] - removed
            if add_f < best_add:
                rolled = b[j + 1:] + b[: j + 1]
                best, best_add = a[: i + 1] + rolled + a[i + 1:], add_f
            # reversed: ... a1 -> b1 ... b2 -> a2 ...
            add_r = D[a1, b1] + D[b2, a2] - removed
            if add_r < best_add:
                rolled = b[j + 1:] + b[: j + 1]
                best, best_add = a[: i + 1] + rolled[::-1] + a[i + 1:], add_r
    return best, float(best_add)


def stitch(subtours: list, inst: Instance, metric: MetricMode = MetricMode.CANONICAL,
           D: np.ndarray = None) -> Tour:
    """Merge ordered sibling solutions into one cycle over the union.

    Folds left over the list, joining the accumulated cycle with each next
    cycle through the cheapest enumerated 2-edge exchange.  The result is
    validated as a permutation of the union before being returned (as local
    positions into the sorted union when the union is not the full instance).
    """
    if D is None:
        D = distance_matrix(inst, metric)
    cycles = [s.global_cycle() for s in subtours]
    merged = cycles[0]
    for nxt in cycles[1:]:
        merged, _ = _merge_two_cycles(merged, nxt, D)
    union = sorted(itertools.chain.from_iterable(s.indices for s in subtours))
    assert sorted(merged) == union, "stitched cycle must cover the union exactly"
    rank = {city: pos for pos, city in enumerate(union)}
    return Tour(tuple(rank[c] for c in merged))


def two_opt(tour: Tour, inst: Instance, metric: MetricMode = MetricMode.CANONICAL,
            max_passes: int = 20, D: np.ndarray = None) -> Tour:
    """First-improvement 2-opt sweeps; never returns a longer tour."""
    if D is None:
        D = distance_matrix(inst, metric)
    order = list(tour.order)
    n = len(order)
    if n < 4:
        return tour
    for _ in range(max_passes):
        improved = False
        for i in range(n - 1):
            a, b = order[i], order[i + 1]
            for j in range(i + 2, n):
                if i == 0 and j == n - 1:
                    continue
                c, d = order[j], order[(j + 1) % n]
                delta = D[a, c] + D[b, d] - D[a, b] - D[c, d]
                if delta < -1e-12:
                    order[i + 1: j + 1] = order[i + 1: j + 1][::-1]
                    b = order[i + 1]
                    improved = True
        if not improved:
            break
    return Tour(tuple(order))


@dataclass
class HybridStats:
    leaf_sizes: list = field(default_factory=list)
    leaf_lengths: list = field(default_factory=list)
    stitched_length: float = 0.0
    refined_length: float = 0.0
    stitch_cost: float = 0.0
    refinement_gain: float = 0.0
    tree_depth: int = 0
    leaf_iterations: int = 0
    repairs: int = 0
    mutations: int = 0
    wall_ms: float = 0.0


def _solve_leaf(inst, indices, config: HybridConfig, seed, D, stats: HybridStats):
    k = len(indices)
    sub = D[np.ix_(indices, indices)]
    if k <= 3 or config.leaf_solver is LeafSolver.BRUTE_FORCE:
        tour = brute_force_order(sub)
        length = cycle_length(sub, tour.order)
    elif config.leaf_solver is LeafSolver.QACO:
        result = qaco_solve(inst, indices, config.qaco_params, config.noise,
                            config.metric, seed=seed, D=sub)
        tour, length = result.tour, result.length
        stats.leaf_iterations += result.iterations
        stats.repairs += result.repairs
        stats.mutations += result.mutations
    else:
        tour, length, history = aco_solve(inst, indices, config.aco_params, seed=seed,
                                          metric=config.metric, D=sub)
        stats.leaf_iterations += len(history)
    stats.leaf_sizes.append(k)
    stats.leaf_lengths.append(float(length))
    return SubSolution(tuple(indices), tour, float(length))


def _solve_node(inst, tree: ClusterTree, config, seed_counter, D, stats) -> SubSolution:
    if tree.is_leaf:
        return _solve_leaf(inst, list(tree.node), config,
                           [config.seed, next(seed_counter)], D, stats)
    subs = [_solve_node(inst, child, config, seed_counter, D, stats) for child in tree.children]
    centroids = [inst.coords[list(s.indices)].mean(axis=0) for s in subs]
    ordering = order_siblings(centroids)
    ordered = [subs[i] for i in ordering]
    tour = stitch(ordered, inst, config.metric, D=D)
    union = tuple(sorted(itertools.chain.from_iterable(s.indices for s in ordered)))
    cycle = [union[p] for p in tour.order]
    assert validate_tour(tour.order, len(union))
    length = cycle_length(D, cycle)
    return SubSolution(union, tour, float(length))


def solve_hybrid(inst: Instance, config: HybridConfig = HybridConfig()):
    """Steps 1-6 of the hybrid workflow on a full instance.

    Returns (tour over all cities, length, HybridStats).  Leaf seeds are
    derived from (config.seed, leaf ordinal in tree traversal order), so the
    output is identical no matter how leaf solves are scheduled.
    """
    start = time.perf_counter()
    D = distance_matrix(inst, config.metric)
    stats = HybridStats()

    tree = build_cluster_tree(
        inst,
        leaf_max=config.leaf_max,
        branching=config.branching,
        seed=config.seed,
        restarts=config.kmeans_restarts,
    )
    stats.tree_depth = tree.depth()

    root = _solve_node(inst, tree, config, itertools.count(), D, stats)
    assert root.indices == tuple(range(inst.dimension))
    stitched = root.tour
    stats.stitched_length = root.length
    stats.stitch_cost = root.length - sum(stats.leaf_lengths)

    if config.refinement is Refinement.TWO_OPT:
        refined = two_opt(stitched, inst, config.metric,
                          max_passes=config.two_opt_max_passes, D=D)
    elif config.refinement is Refinement.ACO_POLISH:
        polish_params = dataclasses.replace(
            config.aco_params, iterations=config.polish_iterations
        )
        polished, polished_len, _ = aco_solve(
            inst, range(inst.dimension), polish_params, seed=config.seed,
            metric=config.metric, initial_tour=stitched, D=D,
        )
        refined = polished if polished_len <= stats.stitched_length else stitched
    else:
        refined = stitched

    length = cycle_length(D, refined.order)
    assert length <= stats.stitched_length + 1e-9
    stats.refined_length = float(length)
    stats.refinement_gain = stats.stitched_length - stats.refined_length
    stats.wall_ms = (time.perf_counter() - start) * 1000.0
    return refined, float(length), stats
