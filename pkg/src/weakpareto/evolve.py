"""A small, deterministic evolutionary engine for WPB experiments.

Three environmental selection schemes share SBX crossover and polynomial
mutation:

* ``pareto_crowding``: nondominated sorting plus crowding distance.
* ``cone_crowding``: the same, but ranks come from cone dominance, which
  shrinks the nondominated set and culls dominance-resistant solutions.
* ``decomposition``: simplex-lattice weight vectors with neighbourhood mating
  and replacement under the augmented Tchebycheff function :func:`g_gen`.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from math import comb
from typing import Literal

import numpy as np

from .core import cone_transform, dominance_matrix, simplex_lattice
from .problems import ProblemInstance

Selection = Literal["pareto_crowding", "cone_crowding", "decomposition"]
SELECTIONS: tuple[str, ...] = ("pareto_crowding", "cone_crowding", "decomposition")

# population size and evaluation budget per objective count
DEFAULT_SIZES: dict[int, tuple[int, int]] = {2: (100, 25_000), 3: (91, 50_000), 4: (165, 90_000), 5: (330, 180_000)}


@dataclass(frozen=True)
class EvolutionConfig:
    """Run settings; ``None`` sizes resolve to per-``m`` defaults.

    Attributes:
        population_size: Members per generation.
        max_evaluations: Evaluation budget, including the initial population.
        seed: Root seed; operator streams are spawned from it.
        selection: Environmental selection scheme.
        delta: Cone parameter for ``cone_crowding`` (same for every objective).
        rho: Augmentation weight of :func:`g_gen` for ``decomposition``.
        neighborhood_size: Neighbours per subproblem for ``decomposition``.
        sbx_index: SBX distribution index.
        pm_index: Polynomial mutation distribution index.
        crossover_prob: Probability that a pair is recombined.
        mutation_prob: Per-variable mutation probability; ``None`` means ``1/n``.
    """

    population_size: int | None = None
    max_evaluations: int | None = None
    seed: int = 0
    selection: Selection = "pareto_crowding"
    delta: float = 0.1
    rho: float = 0.05
    neighborhood_size: int = 20
    sbx_index: float = 20.0
    pm_index: float = 20.0
    crossover_prob: float = 1.0
    mutation_prob: float | None = None

    def __post_init__(self) -> None:
        if self.selection not in SELECTIONS:
            raise ValueError(f"selection must be one of {SELECTIONS}, got {self.selection!r}")
        if not 0 <= self.delta < 1:
            raise ValueError("delta must lie in [0, 1)")
        if self.rho < 0:
            raise ValueError("rho must be nonnegative")

    def with_seed(self, seed: int) -> EvolutionConfig:
        return dataclasses.replace(self, seed=int(seed))

    def resolved(self, m: int, n: int) -> EvolutionConfig:
        """Fill in defaults that depend on the problem size."""
        pop, budget = DEFAULT_SIZES.get(m, (100, 100 * 500))
        pop = self.population_size or pop
        if self.selection == "decomposition":
            pop = len(decomposition_weights(m, pop))
        return dataclasses.replace(
            self,
            population_size=pop,
            max_evaluations=self.max_evaluations or budget,
            mutation_prob=1.0 / n if self.mutation_prob is None else self.mutation_prob,
        )

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass
class RunRecord:
    """Snapshots of a run: objective vectors of the population after every generation."""

    snapshots: list[np.ndarray]
    final_population: np.ndarray
    final_objectives: np.ndarray
    evaluations: int
    seed: int
    config: EvolutionConfig = field(repr=False, default=None)

    @property
    def generations(self) -> int:
        return len(self.snapshots)


# ---------------------------------------------------------------------------
# variation


def sbx_crossover(a, b, index: float = 20.0, prob: float = 1.0, rng=None) -> tuple[np.ndarray, np.ndarray]:
    """Simulated binary crossover of two parents (or of paired rows).

    Each variable is recombined with probability 0.5; the children are
    symmetric about the parents' midpoint before clipping to ``[0, 1]``.
    """
    rng = np.random.default_rng(rng)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c1, c2 = a.copy(), b.copy()
    pairs = 1 if a.ndim == 1 else a.shape[0]
    do_pair = rng.random(pairs) < prob
    u = rng.random(a.shape)
    swap_var = rng.random(a.shape) < 0.5
    beta = np.where(u <= 0.5, (2.0 * u) ** (1.0 / (index + 1.0)), (1.0 / (2.0 * (1.0 - u))) ** (1.0 / (index + 1.0)))
    mask = swap_var & (np.abs(a - b) > 1e-14)
    mask &= do_pair if a.ndim == 1 else do_pair[:, None]
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    c1 = np.where(mask, mid - beta * half, c1)
    c2 = np.where(mask, mid + beta * half, c2)
    return np.clip(c1, 0.0, 1.0), np.clip(c2, 0.0, 1.0)


def polynomial_mutation(x, index: float = 20.0, prob: float | None = None, rng=None) -> np.ndarray:
    """Polynomial mutation with per-variable probability ``prob`` (default ``1/n``)."""
    rng = np.random.default_rng(rng)
    x = np.asarray(x, dtype=float)
    prob = 1.0 / x.shape[-1] if prob is None else prob
    u = rng.random(x.shape)
    hit = rng.random(x.shape) < prob
    step = np.where(u < 0.5, (2.0 * u) ** (1.0 / (index + 1.0)) - 1.0, 1.0 - (2.0 * (1.0 - u)) ** (1.0 / (index + 1.0)))
    return np.clip(np.where(hit, x + step, x), 0.0, 1.0)


# ---------------------------------------------------------------------------
# selection helpers


def nondominated_ranks(F: np.ndarray) -> np.ndarray:
    """Front index (0 = nondominated) of every row under Pareto dominance."""
    dom = dominance_matrix(F)
    n_dominators = dom.sum(axis=0)
    ranks = np.full(len(F), -1)
    current = np.flatnonzero(n_dominators == 0)
    level = 0
    while len(current):
        ranks[current] = level
        n_dominators = n_dominators - dom[current].sum(axis=0)
        n_dominators[ranks >= 0] = -1
        current = np.flatnonzero(n_dominators == 0)
        level += 1
    return ranks


def crowding_distance(F: np.ndarray) -> np.ndarray:
    """Crowding distance within one front; extremes get infinity."""
    n, m = F.shape
    dist = np.zeros(n)
    if n <= 2:
        return np.full(n, np.inf)
    for k in range(m):
        order = np.argsort(F[:, k], kind="stable")
        span = F[order[-1], k] - F[order[0], k]
        dist[order[0]] = dist[order[-1]] = np.inf
        if span > 0:
            dist[order[1:-1]] += (F[order[2:], k] - F[order[:-2], k]) / span
    return dist


def _survivors(F: np.ndarray, ranks: np.ndarray, size: int) -> tuple[np.ndarray, np.ndarray]:
    """Indices kept by rank-then-crowding truncation, plus everyone's crowding."""
    crowd = np.zeros(len(F))
    keep: list[int] = []
    for level in range(ranks.max() + 1):
        members = np.flatnonzero(ranks == level)
        crowd[members] = crowding_distance(F[members])
        if len(keep) + len(members) <= size:
            keep.extend(members)
            continue
        order = members[np.argsort(-crowd[members], kind="stable")]
        keep.extend(order[: size - len(keep)])
        break
    return np.array(keep), crowd


def _tournament(ranks: np.ndarray, crowd: np.ndarray, count: int, rng: np.random.Generator) -> np.ndarray:
    a = rng.integers(0, len(ranks), count)
    b = rng.integers(0, len(ranks), count)
    a_wins = (ranks[a] < ranks[b]) | ((ranks[a] == ranks[b]) & ((crowd[a] > crowd[b]) | ((crowd[a] == crowd[b]) & (a <= b))))
    return np.where(a_wins, a, b)


def g_gen(f, w, z_star, rho: float = 0.05) -> np.ndarray | float:
    """Augmented Tchebycheff value ``max_i w_i (f_i - z*_i + rho * sum_j (f_j - z*_j))``.

    Broadcasts over leading axes of ``f`` and ``w``.
    """
    diff = np.asarray(f, dtype=float) - np.asarray(z_star, dtype=float)
    val = np.max(np.asarray(w, dtype=float) * (diff + rho * diff.sum(axis=-1, keepdims=True)), axis=-1)
    return float(val) if np.ndim(val) == 0 else val


def decomposition_weights(m: int, max_size: int) -> np.ndarray:
    """Largest simplex lattice with at most ``max_size`` weight vectors."""
    H = 1
    while comb(H + 1 + m - 1, m - 1) <= max_size:
        H += 1
    return simplex_lattice(m, H)


# ---------------------------------------------------------------------------
# main loop


def _streams(seed: int) -> list[np.random.Generator]:
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(4)]


def run(instance: ProblemInstance, config: EvolutionConfig) -> RunRecord:
    """Run one seeded optimization and record every generation.

    Raises:
        ValueError: If the budget does not cover two populations.
    """
    cfg = config.resolved(instance.m, instance.n)
    N = cfg.population_size
    if cfg.max_evaluations < 2 * N:
        raise ValueError(f"max_evaluations={cfg.max_evaluations} is smaller than two populations ({2 * N})")
    init_rng, mate_rng, cx_rng, mut_rng = _streams(cfg.seed)
    X = init_rng.random((N, instance.n))
    F = instance.evaluate(X)
    evals = N
    snapshots = [F.copy()]
    if cfg.selection == "decomposition":
        X, F, evals = _run_decomposition(instance, cfg, X, F, evals, snapshots, mate_rng, cx_rng, mut_rng)
    else:
        X, F, evals = _run_crowding(instance, cfg, X, F, evals, snapshots, mate_rng, cx_rng, mut_rng)
    return RunRecord(snapshots, X, F, evals, cfg.seed, cfg)


def _ranks_for(F: np.ndarray, cfg: EvolutionConfig) -> np.ndarray:
    if cfg.selection == "cone_crowding":
        return nondominated_ranks(cone_transform(F, np.full(F.shape[1], cfg.delta)))
    return nondominated_ranks(F)


def _run_crowding(instance, cfg, X, F, evals, snapshots, mate_rng, cx_rng, mut_rng):
    N = cfg.population_size
    ranks = _ranks_for(F, cfg)
    _, crowd = _survivors(F, ranks, N)
    half = (N + 1) // 2
    while evals + N <= cfg.max_evaluations:
        parents = _tournament(ranks, crowd, 2 * half, mate_rng)
        c1, c2 = sbx_crossover(X[parents[:half]], X[parents[half:]], cfg.sbx_index, cfg.crossover_prob, cx_rng)
        children = np.concatenate([c1, c2], axis=0)[:N]
        children = polynomial_mutation(children, cfg.pm_index, cfg.mutation_prob, mut_rng)
        FC = instance.evaluate(children)
        evals += N
        allX = np.concatenate([X, children], axis=0)
        allF = np.concatenate([F, FC], axis=0)
        all_ranks = _ranks_for(allF, cfg)
        keep, all_crowd = _survivors(allF, all_ranks, N)
        X, F, ranks, crowd = allX[keep], allF[keep], all_ranks[keep], all_crowd[keep]
        snapshots.append(F.copy())
    return X, F, evals


def _run_decomposition(instance, cfg, X, F, evals, snapshots, mate_rng, cx_rng, mut_rng):
    N = cfg.population_size
    W = decomposition_weights(instance.m, N)
    T = min(cfg.neighborhood_size, N)
    dists = np.linalg.norm(W[:, None, :] - W[None, :, :], axis=2)
    B = np.argsort(dists, axis=1, kind="stable")[:, :T]
    z_star = F.min(axis=0)
    while evals + N <= cfg.max_evaluations:
        for i in range(N):
            a, b = B[i, mate_rng.choice(T, 2, replace=False)]
            child, _ = sbx_crossover(X[a], X[b], cfg.sbx_index, cfg.crossover_prob, cx_rng)
            child = polynomial_mutation(child, cfg.pm_index, cfg.mutation_prob, mut_rng)
            fc = instance.evaluate(child)
            z_star = np.minimum(z_star, fc)
            nb = B[i]
            better = g_gen(fc, W[nb], z_star, cfg.rho) <= g_gen(F[nb], W[nb], z_star, cfg.rho)
            X[nb[better]] = child
            F[nb[better]] = fc
        evals += N
        snapshots.append(F.copy())
    return X, F, evals
