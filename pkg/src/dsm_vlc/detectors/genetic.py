"""OMP-seeded genetic block detector.

Individuals are spatial Gray labels (bit strings of length
``floor(log2(Nt!))``), so every crossover or mutation product names a legal
index vector. For a given index vector the symbols follow by a per-slot
constellation scan, and the fitness is the resulting residual energy.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from dsm_vlc.bits import from_gray
from dsm_vlc.codec import IndexTable, decode_indices
from dsm_vlc.constellation import Constellation
from dsm_vlc.detectors.common import DetectionResult, check_pair, ensure_counter, normalize_columns
from dsm_vlc.detectors.omp import correct_index_vector


@dataclass(frozen=True)
class GaParams:
    population_size: int = None  # None -> table.q
    generations: int = 10
    crossover_prob: float = 0.8
    mutation_prob: float = 0.05
    tournament_size: int = 2

    def __post_init__(self):
        if self.population_size is not None and self.population_size < 2:
            raise ValueError("population_size must be >= 2")
        if self.generations < 1:
            raise ValueError("generations must be >= 1")
        if not 0.0 <= self.crossover_prob <= 1.0 or not 0.0 <= self.mutation_prob <= 1.0:
            raise ValueError("probabilities must lie in [0, 1]")
        if self.tournament_size < 2:
            raise ValueError("tournament_size must be >= 2")

    def pop_size(self, table: IndexTable) -> int:
        return table.q if self.population_size is None else self.population_size


@lru_cache(maxsize=16)
def _gray_decoder(width: int):
    weights = 1 << np.arange(width - 1, -1, -1)
    inverse = np.array([from_gray(g) for g in range(1 << width)], dtype=np.int64)
    return weights, inverse


def chromosome_ranks(pop: np.ndarray, table: IndexTable) -> np.ndarray:
    weights, inverse = _gray_decoder(table.spatial_bits)
    return inverse[pop.astype(np.int64) @ weights]


def inner_product_matrix(y_cur_n, y_prev_n, counter=None) -> np.ndarray:
    """``ipm[u, i] = |<ybar_cur[:, i], ybar_prev[:, u]>|``."""
    a = np.asarray(y_cur_n, dtype=complex)
    b = np.asarray(y_prev_n, dtype=complex)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    nr, nt = a.shape
    if counter is not None:
        counter.cmatmul(nt, nr, nt)
        counter.cabs(nt * nt)
    return np.abs(b.conj().T @ a)


def candidate_rows(ipm) -> np.ndarray:
    """Index matrix ``L``: column ``i`` lists previous slots by falling ``ipm[:, i]``.

    Row ``k`` is the ``k``-th best activation pattern (1-based, may repeat).
    """
    ipm = np.asarray(ipm, dtype=float)
    return np.argsort(-ipm, axis=0, kind="stable") + 1


def init_population(ipm, table: IndexTable, params: GaParams, rng, counter=None) -> np.ndarray:
    """Seed chromosomes from the rows of ``L``, topped up with random labels."""
    size = params.pop_size(table)
    rows = candidate_rows(ipm)
    nt = table.nt
    if counter is not None:
        counter.compare(nt * nt * (nt - 1) // 2)
    seeds = []
    for row in rows[:size]:
        v = correct_index_vector(row, table, counter)
        seeds.append(table.label_bits(table.rank_of(v)))
    pop = np.empty((size, table.spatial_bits), dtype=np.uint8)
    pop[: len(seeds)] = seeds
    if len(seeds) < size:
        pop[len(seeds):] = rng.integers(0, 2, (size - len(seeds), table.spatial_bits))
    return pop


def _slot_costs(index_vectors, y_cur, y_prev, points, counter=None):
    """Residual energy of every (individual, slot, symbol) choice.

    ``index_vectors`` is ``(P, nt)`` zero-based; returns ``(P, nt, M)``.
    """
    prev = y_prev[:, index_vectors]  # (nr, P, nt)
    diff = y_cur[:, None, :, None] - prev[..., None] * points
    cost = np.sum(diff.real**2 + diff.imag**2, axis=0)
    if counter is not None:
        nr = y_cur.shape[0]
        n = index_vectors.size * len(points)
        counter.cmul(n * nr)
        counter.cadd(n * nr)
        counter.abs2(n * nr)
        counter.radd(n * (nr - 1))
    return cost


def _evaluate(index_vectors, y_cur, y_prev, points, counter=None):
    cost = _slot_costs(index_vectors, y_cur, y_prev, points, counter)
    sym = np.argmin(cost, axis=2)
    m = cost.min(axis=2).sum(axis=1)
    if counter is not None:
        p, nt = index_vectors.shape
        counter.compare(p * nt * (len(points) - 1))
        counter.radd(p * (nt - 1))
    return m, sym


def estimate_symbols(f, y_cur, y_prev, c: Constellation, counter=None) -> np.ndarray:
    """Per-slot nearest symbol given the 1-based index vector ``f``."""
    y_cur, y_prev = check_pair(y_cur, y_prev)
    idx = np.asarray(f, dtype=np.int64).reshape(1, -1) - 1
    _, sym = _evaluate(idx, y_cur, y_prev, c.array, counter)
    return c.array[sym[0]]


def fitness(f, symbols, y_cur, y_prev, counter=None) -> float:
    """Residual energy ``sum_i sum_j |y_cur[j,i] - y_prev[j,f_i] s_i|^2``; lower is better."""
    y_cur, y_prev = check_pair(y_cur, y_prev)
    idx = np.asarray(f, dtype=np.int64) - 1
    diff = y_cur - y_prev[:, idx] * np.asarray(symbols)[None, :]
    if counter is not None:
        nr, nt = y_cur.shape
        counter.cmul(nr * nt)
        counter.cadd(nr * nt)
        counter.abs2(nr * nt)
        counter.radd(nr * nt - 1)
    return float(np.sum(diff.real**2 + diff.imag**2))


def tournament_select(pop, fit, params: GaParams, rng, counter=None):
    """Fill a new population with winners of uniformly drawn tournaments.

    Each tournament draws ``tournament_size`` distinct individuals and copies
    the one with the lowest fitness (lowest population index on ties).
    """
    pop = np.asarray(pop)
    fit = np.asarray(fit, dtype=float)
    n = len(pop)
    k = min(params.tournament_size, n)
    groups = np.sort(np.argsort(rng.random((n, n)), axis=1)[:, :k], axis=1)
    winners = groups[np.arange(n), np.argmin(fit[groups], axis=1)]
    if counter is not None:
        counter.compare(n * (k - 1))
    return pop[winners].copy(), fit[winners].copy()


def crossover(pop, fit, params: GaParams, rng, counter=None):
    """Pairwise single-point crossover, or replication of the fitter parent.

    Consecutive individuals form parent pairs. With probability ``p_c`` a pair
    swaps tails after a cut drawn uniformly from ``2..b-1`` (1-based, skipped
    when the label has fewer than 3 bits); otherwise the worse parent is
    replaced by a copy of the better one. Offspring fitness is unknown (NaN).
    """
    pop = np.array(pop, copy=True)
    fit = np.array(fit, dtype=float, copy=True)
    n, b = pop.shape
    n_pairs = n // 2
    cross = rng.random(n_pairs) < params.crossover_prob
    cuts = rng.integers(2, b, n_pairs) if b >= 3 else np.zeros(n_pairs, dtype=np.int64)
    for p in range(n_pairs):
        i, j = 2 * p, 2 * p + 1
        if cross[p]:
            if b < 3:
                continue
            k = cuts[p]
            tail = pop[i, k:].copy()
            pop[i, k:] = pop[j, k:]
            pop[j, k:] = tail
            fit[i] = fit[j] = np.nan
        else:
            if counter is not None:
                counter.compare(1)
            if fit[j] < fit[i]:
                pop[i], fit[i] = pop[j], fit[j]
            else:
                pop[j], fit[j] = pop[i], fit[i]
    return pop, fit


def mutate(pop, params: GaParams, rng) -> np.ndarray:
    """Replace each bit by a fair random bit with probability ``p_m``."""
    pop = np.asarray(pop)
    hit = rng.random(pop.shape) < params.mutation_prob
    fresh = rng.integers(0, 2, pop.shape)
    return np.where(hit, fresh, pop).astype(np.uint8)


def ga_detect(y_cur, y_prev, table: IndexTable, c: Constellation, params: GaParams = None,
              rng=None, counter=None) -> DetectionResult:
    """Genetic search over index vectors, seeded by inner-product ranking.

    Every generation is select -> crossover/replicate -> mutate -> evaluate.
    The best individual ever evaluated is returned; ``trace`` holds the
    best-so-far fitness after initialisation and after each generation.
    """
    y_cur, y_prev = check_pair(y_cur, y_prev)
    params = GaParams() if params is None else params
    rng = np.random.default_rng() if rng is None else rng
    counter = ensure_counter(counter)
    start = counter.flops
    points = c.array

    with counter.phase("normalize"):
        yc = normalize_columns(y_cur, counter)
        yp = normalize_columns(y_prev, counter)
    with counter.phase("inner_product"):
        ipm = inner_product_matrix(yc, yp, counter)
    with counter.phase("init"):
        pop = init_population(ipm, table, params, rng, counter)

    def evaluate(pop):
        ranks = chromosome_ranks(pop, table)
        with counter.phase("fitness"):
            m, sym = _evaluate(table.array[ranks], y_cur, y_prev, points, counter)
        return ranks, m, sym

    ranks, fit, sym = evaluate(pop)
    k = int(np.argmin(fit))
    best = (fit[k], ranks[k], sym[k])
    trace = [best[0]]
    for _ in range(params.generations):
        with counter.phase("select"):
            pop, fit = tournament_select(pop, fit, params, rng, counter)
        with counter.phase("crossover"):
            pop, fit = crossover(pop, fit, params, rng, counter)
        pop = mutate(pop, params, rng)
        ranks, fit, sym = evaluate(pop)
        k = int(np.argmin(fit))
        counter.compare(len(fit))
        if fit[k] < best[0]:
            best = (fit[k], ranks[k], sym[k])
        trace.append(best[0])

    m, rank, s = best
    return DetectionResult(
        index_vector=table.vectors[int(rank)],
        symbols=points[s],
        bits=decode_indices(int(rank), s, table, c),
        op_count=counter.flops - start,
        metric=float(m),
        trace=tuple(float(t) for t in trace),
    )
