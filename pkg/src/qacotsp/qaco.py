"""Quantum-inspired ant colony solver for subproblems of at most 4 cities.

Each of the k tour positions is encoded by two qubits, so a measurement of
the 2k-qubit register yields a candidate tour directly.  Per-qubit rotation
angles play the role of pheromone: they start at pi/2 (uniform sampling) and
are nudged after every iteration by a fixed lookup table comparing the
iteration's best bitstring against the global best.  Infeasible measurements
are repaired either randomly (early iterations) or by drawing a pool tour
with probability inversely proportional to Hamming distance.  When the global
best stalls, a measured ancilla qubit gates a one-bit mutation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .qsim import NO_NOISE, NoiseSpec, clamp_angle, noisy_sample, sample_ancilla
from .tsplib import Instance, MetricMode, Tour, distance_matrix, sub_distance_matrix

MAX_CITIES = 4  # 2 bits per position, 8 path qubits

# Iterations during which infeasible samples are repaired by a uniformly
# random feasible tour instead of the Hamming-distance rule.
RANDOM_FEASIBLE_WINDOW = 10

# Pheromone-angle update table keyed by (bit of iteration best x_i, bit of
# global best b_i, iteration best worse than global best).  Values are
# (delta_theta, starred); starred rows reverse direction when
# sin(theta) * cos(theta) < 0, i.e. when theta sits past pi/2.
ROTATION_TABLE = {
    (0, 0, True): (-0.01 * math.pi, True),
    (0, 0, False): (0.04 * math.pi, False),
    (0, 1, True): (-0.05 * math.pi, True),
    (0, 1, False): (0.07 * math.pi, False),
    (1, 0, True): (0.05 * math.pi, True),
    (1, 0, False): (-0.07 * math.pi, False),
    (1, 1, True): (0.01 * math.pi, True),
    (1, 1, False): (-0.04 * math.pi, False),
}


class TooManyCities(ValueError):
    pass


class TooFewCities(ValueError):
    pass


class LengthMismatch(ValueError):
    pass


@dataclass(frozen=True)
class QacoParams:
    n_ants: int = 6
    max_iter: int = 1000
    # Iterations without global-best improvement before mutation engages.
    stall_window: int = 50
    # Iterations without improvement before the search stops.
    convergence_window: int = 200
    pool_capacity: int = 10


@dataclass
class PheromoneRegister:
    """Rotation angles, one per qubit (2 per tour position), clamp-bounded."""

    thetas: np.ndarray

    @classmethod
    def uniform(cls, k_cities: int) -> "PheromoneRegister":
        return cls(np.full(2 * k_cities, math.pi / 2.0))


@dataclass
class PoolEntry:
    tour: Tour
    bits: str
    length: float


@dataclass
class SolutionPool:
    """Bounded archive of the best feasible tours, ascending by length."""

    capacity: int = 10
    entries: list = field(default_factory=list)

    def add(self, tour: Tour, bits: str, length: float) -> bool:
        if any(e.bits == bits for e in self.entries):
            return False
        if len(self.entries) >= self.capacity:
            if length >= self.entries[-1].length:
                return False
            self.entries.pop()
        entry = PoolEntry(tour, bits, length)
        pos = 0
        while pos < len(self.entries) and self.entries[pos].length <= length:
            pos += 1
        self.entries.insert(pos, entry)
        return True


@dataclass
class QacoResult:
    tour: Tour
    length: float
    iterations: int
    history: list
    mutations: int
    repairs: int


def encode_tour(tour: Tour, k: int) -> str:
    """Concatenated 2-bit big-endian city indices, one pair per position."""
    if k > MAX_CITIES:
        raise TooManyCities(f"2-bit encoding holds at most {MAX_CITIES} cities")
    if len(tour.order) != k:
        raise LengthMismatch(f"tour of {len(tour.order)} cities, expected {k}")
    return "".join(format(city, "02b") for city in tour.order)


def decode_bits(bits: str, k: int):
    """Tour for a feasible 2k-bit measurement, else None (bits kept by caller)."""
    if len(bits) != 2 * k:
        raise LengthMismatch(f"expected {2 * k} bits, got {len(bits)}")
    cities = [int(bits[2 * i: 2 * i + 2], 2) for i in range(k)]
    if any(c >= k for c in cities) or len(set(cities)) != k:
        return None
    return Tour(tuple(cities))


def hamming(a: str, b: str) -> int:
    if len(a) != len(b):
        raise LengthMismatch(f"length mismatch: {len(a)} vs {len(b)}")
    return sum(ca != cb for ca, cb in zip(a, b))


def repair_infeasible(bits: str, pool: SolutionPool, iteration: int, k: int,
                      rng: np.random.Generator,
                      window: int = RANDOM_FEASIBLE_WINDOW) -> Tour:
    """Replace an infeasible measurement with a feasible tour.

    During the first ``window`` iterations (or while the pool is empty) the
    replacement is a uniformly random permutation.  Afterwards pool entry i
    is drawn with probability  p_i = (d_i * sum_j 1/d_j)^-1  where d_i is the
    Hamming distance between ``bits`` and the entry's encoding; an infeasible
    bitstring never equals a feasible encoding, so every d_i >= 1.
    """
    if iteration <= window or not pool.entries:
        return Tour(tuple(int(v) for v in rng.permutation(k)))
    d = np.array([hamming(bits, e.bits) for e in pool.entries], dtype=float)
    inv = 1.0 / d
    probs = inv / inv.sum()
    assert abs(probs.sum() - 1.0) <= 1e-12
    cdf = np.cumsum(probs)
    pick = int(np.searchsorted(cdf, rng.random() * cdf[-1], side="right"))
    return pool.entries[min(pick, len(pool.entries) - 1)].tour


def rotation_update(reg: PheromoneRegister, x: str, b: str, fx: float, fb: float,
                    table=None) -> PheromoneRegister:
    """One lookup-table sweep of the register angles.

    ``x`` is the iteration-best bitstring, ``b`` the global-best one; the
    table row is selected by the two bits and by whether the iteration best
    is worse (fx > fb).  Starred rows flip the step's sign when
    sin(theta_i) * cos(theta_i) < 0 so the rotation keeps pointing back
    toward the balanced angle region.  Results are clamped to the sampling
    bounds.
    """
    if table is None:
        table = ROTATION_TABLE
    if len(x) != len(reg.thetas) or len(b) != len(reg.thetas):
        raise LengthMismatch("bitstring length must equal register size")
    worse = fx > fb
    new = np.empty_like(reg.thetas)
    for i, theta in enumerate(reg.thetas):
        delta, starred = table[(int(x[i]), int(b[i]), worse)]
        if starred and math.sin(theta) * math.cos(theta) < 0.0:
            delta = -delta
        new[i] = clamp_angle(theta + delta)
    return PheromoneRegister(new)


def maybe_mutate(bits: str, stagnant_iters: int, params: QacoParams,
                 noise: NoiseSpec, rng: np.random.Generator) -> str:
    """Ancilla-gated one-bit flip, active only after a stall.

    A mutation angle is drawn uniformly from [0, pi/2] and loaded on the
    ancilla; if the measured ancilla reads 1, one uniformly chosen bit is
    flipped (the Pauli-X analog on the sampled path).
    """
    if stagnant_iters < params.stall_window:
        return bits
    theta_m = rng.uniform(0.0, math.pi / 2.0)
    if sample_ancilla(theta_m, noise, rng) == 1:
        pos = int(rng.integers(len(bits)))
        bits = bits[:pos] + ("0" if bits[pos] == "1" else "1") + bits[pos + 1:]
    return bits


def _cycle_len(D, order) -> float:
    total = 0.0
    for a, b in zip(order, order[1:] + order[:1]):
        total += D[a, b]
    return float(total)


def qaco_solve(inst: Instance, indices, params: QacoParams = QacoParams(),
               noise: NoiseSpec = NO_NOISE, metric: MetricMode = MetricMode.CANONICAL,
               seed=0, D: np.ndarray = None) -> QacoResult:
    """Solve a <= 4-city subproblem with the quantum-sampled colony.

    The per-iteration loop: sample one bitstring per ant, decode, repair
    infeasible samples, evaluate, feed the pool and the global best, then
    (when stalled) pass the representative bitstrings through the mutation
    gate and finally rotate the register toward the global best using the
    iteration best.  Stops at max_iter or once the global best has not
    improved for convergence_window iterations.  The returned tour is in
    local 0..k-1 positions relative to ``indices``.
    """
    indices = list(indices)
    k = len(indices)
    if k < 2:
        raise TooFewCities("need at least 2 cities")
    if k > MAX_CITIES:
        raise TooManyCities(f"leaf solver handles at most {MAX_CITIES} cities")
    if D is None:
        D = sub_distance_matrix(distance_matrix(inst, metric), indices)

    if k == 2:
        tour = Tour((0, 1))
        length = _cycle_len(D, tour.order)
        return QacoResult(tour, length, 0, [length], 0, 0)

    rng = np.random.default_rng(seed)
    register = PheromoneRegister.uniform(k)
    pool = SolutionPool(params.pool_capacity)
    best_tour = None
    best_len = math.inf
    best_bits = None
    stagnant = 0
    history = []
    mutations = 0
    repairs = 0
    iterations = 0

    for it in range(1, params.max_iter + 1):
        iterations = it
        iter_tour, iter_len, iter_idx = None, math.inf, 0
        ant_bits = []
        for ant in range(params.n_ants):
            sampled = noisy_sample(register.thetas, noise, rng)
            tour = decode_bits(sampled, k)
            if tour is None:
                tour = repair_infeasible(sampled, pool, it, k, rng)
                repairs += 1
            length = _cycle_len(D, tour.order)
            bits = encode_tour(tour, k)
            pool.add(tour, bits, length)
            ant_bits.append(bits)
            if length < iter_len:
                iter_tour, iter_len, iter_idx = tour, length, ant

        if iter_len < best_len:
            best_tour, best_len = iter_tour, iter_len
            best_bits = ant_bits[iter_idx]
            stagnant = 0
        else:
            stagnant += 1

        for ant in range(params.n_ants):
            mutated = maybe_mutate(ant_bits[ant], stagnant, params, noise, rng)
            if mutated != ant_bits[ant]:
                mutations += 1
                ant_bits[ant] = mutated

        register = rotation_update(
            register, ant_bits[iter_idx], best_bits, iter_len, best_len
        )
        history.append(best_len)
        if stagnant >= params.convergence_window:
            break

    return QacoResult(best_tour, float(best_len), iterations, history, mutations, repairs)
