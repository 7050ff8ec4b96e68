"""Real-valued genetic algorithm over an arbitrary fitness contract.

The fitness contract is any callable point -> float, lower is better; the
same engine optimizes against a surrogate or against the true objective.
Scoring is lazy: individuals carry their score (NaN = not yet scored) and
unchanged individuals are never re-scored, which keeps true-objective
budgets honest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .objectives import Objective

FitnessContract = Callable[[np.ndarray], float]


@dataclass(frozen=True)
class GaConfig:
    population_size: int = 50
    selection_factor: float = 0.9  # surviving fraction under truncation selection
    mutation_prob: float = 0.1
    recombination_prob: float = 0.05
    mutation_scale: float = 0.05  # noise std as a fraction of domain width
    elitism: int = 1

    def __post_init__(self):
        if self.population_size < 2:
            raise ValueError("population_size must be >= 2")
        if not 0.0 < self.selection_factor <= 1.0:
            raise ValueError("selection_factor must be in (0, 1]")
        for name in ("mutation_prob", "recombination_prob"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must be in [0, 1]")
        if self.mutation_scale < 0.0:
            raise ValueError("mutation_scale must be >= 0")
        if not 0 <= self.elitism < self.population_size:
            raise ValueError("elitism must be in [0, population_size)")


@dataclass(eq=False)
class Population:
    individuals: np.ndarray  # (n, d)
    scores: np.ndarray | None = None  # (n,), NaN where not yet scored

    def __len__(self) -> int:
        return self.individuals.shape[0]

    @property
    def fully_scored(self) -> bool:
        return self.scores is not None and not np.any(np.isnan(self.scores))


def survivor_count(selection_factor: float, population_size: int) -> int:
    """Mating-pool size under truncation selection."""
    return math.ceil(selection_factor * population_size)


def init_population(obj: Objective, cfg: GaConfig, rng: np.random.Generator) -> Population:
    """Fresh uniform in-domain population, not yet scored."""
    return Population(individuals=obj.sample_uniform(rng, cfg.population_size))


def score_population(pop: Population, fitness: FitnessContract) -> Population:
    """Fill in missing scores in place; cached entries are left untouched."""
    if pop.scores is None:
        pop.scores = np.full(len(pop), np.nan)
    for i in np.flatnonzero(np.isnan(pop.scores)):
        pop.scores[i] = fitness(pop.individuals[i])
    return pop


def step_generation(
    pop: Population,
    fitness: FitnessContract,
    cfg: GaConfig,
    obj: Objective,
    rng: np.random.Generator,
) -> Population:
    """Advance one generation and return the new population.

    Score -> truncation-select the best ceil(selection_factor * n) as the
    mating pool -> refill to n (arithmetic blend with probability
    recombination_prob, else clone the better parent) -> Gaussian mutation
    per individual -> clip to bounds, with the elitism best carried through
    untouched at the front.
    """
    if len(pop) == 0:
        raise ValueError("population is empty")
    n = len(pop)
    d = pop.individuals.shape[1]
    score_population(pop, fitness)

    order = np.argsort(pop.scores, kind="stable")
    ranked = pop.individuals[order]
    ranked_scores = pop.scores[order]
    m = survivor_count(cfg.selection_factor, n)

    next_inds = np.empty((n, d))
    next_scores = np.full(n, np.nan)
    next_inds[:m] = ranked[:m]
    next_scores[:m] = ranked_scores[:m]

    for slot in range(m, n):
        i, j = rng.integers(0, m, size=2)
        if rng.random() < cfg.recombination_prob:
            w = rng.random(d)
            next_inds[slot] = w * ranked[i] + (1.0 - w) * ranked[j]
        else:
            better = i if ranked_scores[i] <= ranked_scores[j] else j
            next_inds[slot] = ranked[better]
            next_scores[slot] = ranked_scores[better]  # clone keeps its cached score

    noise_std = cfg.mutation_scale * obj.width
    for slot in range(cfg.elitism, n):
        if rng.random() < cfg.mutation_prob:
            next_inds[slot] = next_inds[slot] + rng.normal(0.0, 1.0, size=d) * noise_std
            next_scores[slot] = np.nan

    np.clip(next_inds, obj.lower, obj.upper, out=next_inds)
    return Population(individuals=next_inds, scores=next_scores)


def best_k(pop: Population, k: int) -> list[tuple[np.ndarray, float]]:
    """The k lowest-score individuals, ties broken by lower index."""
    if not pop.fully_scored:
        raise ValueError("population must be fully scored")
    if not 1 <= k <= len(pop):
        raise ValueError(f"k must be in [1, {len(pop)}], got {k}")
    order = np.argsort(pop.scores, kind="stable")[:k]
    return [(pop.individuals[i].copy(), float(pop.scores[i])) for i in order]
