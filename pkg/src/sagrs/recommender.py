"""The surrogate-assisted genetic recommendation loop.

Each cycle fits a meta-model to the pool of true-evaluated items, runs the
GA against it for ``evaluation_rate`` generations, suggests the best still
unseen candidates, true-evaluates them, and folds them back into the pool.
Suggested items are excluded from all future suggestions, so the search
space shrinks as the run progresses.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .evolution import GaConfig, Population, init_population, score_population, step_generation
from .objectives import Objective
from .surrogate import (
    MODEL_KINDS,
    EvaluatedPool,
    Item,
    MetaModel,
    fit_or_fallback,
)

POOL_HANDLING_MODES = ("reset", "no_reset")

# Minimum distance between a suggestion and anything already evaluated.
EXCLUSION_EPSILON = 1e-9


@dataclass(frozen=True)
class SagrsConfig:
    model_kind: str = "lsm"
    evaluation_rate: int = 1  # GA generations per recommendation cycle; 0 = random recommender
    suggestions_per_cycle: int = 4
    cycles: int = 100
    pool_handling: str = "reset"
    initial_pool_size: int = 100
    ga: GaConfig = field(default_factory=GaConfig)
    exclusion_epsilon: float = EXCLUSION_EPSILON
    training_window: int | None = None  # None = always train on the whole pool

    def __post_init__(self):
        if self.model_kind not in MODEL_KINDS:
            raise ValueError(f"model_kind must be one of {MODEL_KINDS}, got {self.model_kind!r}")
        if self.evaluation_rate < 0:
            raise ValueError("evaluation_rate must be >= 0")
        if self.suggestions_per_cycle < 1:
            raise ValueError("suggestions_per_cycle must be >= 1")
        if self.cycles < 1:
            raise ValueError("cycles must be >= 1")
        if self.pool_handling not in POOL_HANDLING_MODES:
            raise ValueError(f"pool_handling must be one of {POOL_HANDLING_MODES}, got {self.pool_handling!r}")
        if self.exclusion_epsilon <= 0:
            raise ValueError("exclusion_epsilon must be positive")
        if self.training_window is not None and self.training_window < 1:
            raise ValueError("training_window must be >= 1 when set")

    def validate_for(self, obj: Objective) -> None:
        floor = max(2 * obj.dimension + 1, 2)
        if self.initial_pool_size < floor:
            raise ValueError(
                f"initial_pool_size must be >= {floor} at dimension {obj.dimension} "
                "so both surrogates can fit"
            )


@dataclass(eq=False)
class CycleRecord:
    cycle_index: int  # 1-based
    suggested: list[Item]
    accepted_count: int
    best_true_fitness_so_far: float
    surrogate_fit_ok: bool


@dataclass(eq=False)
class RunResult:
    cycle_records: list[CycleRecord]
    best_fitness: float
    convergence_cycle: int
    acceptance_rate: float
    true_evaluations_used: int


def count_accepted(suggested: list[Item], pool_before: EvaluatedPool) -> int:
    """Suggestions evaluated strictly better than the pool's worst item."""
    worst = pool_before.worst_fitness()
    return sum(1 for item in suggested if item.fitness < worst)


def convergence_cycle(records: list[CycleRecord]) -> int:
    """1-based index of the last cycle that accepted a suggestion, 0 if none."""
    if not records:
        raise ValueError("need at least one cycle record")
    last = 0
    for record in records:
        if record.accepted_count >= 1:
            last = record.cycle_index
    return last


def acceptance_rate(records: list[CycleRecord]) -> float:
    """Accepted suggestions as a fraction of everything suggested."""
    if not records:
        raise ValueError("need at least one cycle record")
    suggested = sum(len(r.suggested) for r in records)
    accepted = sum(r.accepted_count for r in records)
    return accepted / suggested


def select_suggestions(
    pop: Population,
    pool: EvaluatedPool,
    k: int,
    model: MetaModel,
    obj: Objective,
    rng: np.random.Generator,
    exclusion_epsilon: float = EXCLUSION_EPSILON,
) -> list[np.ndarray]:
    """Pick k suggestion points, best predicted fitness first.

    Candidates come from the population in ascending surrogate-score order;
    anything within exclusion_epsilon of a pool item or of an already chosen
    suggestion is skipped. If the population runs out, the remainder is
    drawn uniformly from the domain under the same exclusion check.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    score_population(pop, model.predict)
    chosen: list[np.ndarray] = []

    def admissible(point: np.ndarray) -> bool:
        if pool.min_distance(point) <= exclusion_epsilon:
            return False
        return all(float(np.linalg.norm(point - c)) > exclusion_epsilon for c in chosen)

    for idx in np.argsort(pop.scores, kind="stable"):
        if len(chosen) == k:
            break
        candidate = pop.individuals[idx]
        if admissible(candidate):
            chosen.append(candidate.copy())
    while len(chosen) < k:
        candidate = obj.sample_uniform(rng, 1)[0]
        if admissible(candidate):
            chosen.append(candidate)
    return chosen


def run_sagrs(obj: Objective, cfg: SagrsConfig, rng: np.random.Generator) -> RunResult:
    """Run the full recommendation loop and summarize it.

    The initial pool is true-evaluated up front; every cycle then refits the
    surrogate, optimizes candidates against it, suggests, true-evaluates and
    re-inserts. A failed surrogate fit degrades to a mean predictor for that
    cycle and is flagged in the cycle record.
    """
    cfg.validate_for(obj)
    pool = EvaluatedPool(eps_dup=cfg.exclusion_epsilon)
    evaluations = 0

    while len(pool) < cfg.initial_pool_size:
        point = obj.sample_uniform(rng, 1)[0]
        if pool.min_distance(point) <= cfg.exclusion_epsilon:
            continue  # re-draw instead of double-evaluating the same spot
        pool.add(Item(point=point, fitness=obj.evaluate(point)))
        evaluations += 1

    records: list[CycleRecord] = []
    population: Population | None = None
    for cycle in range(1, cfg.cycles + 1):
        model, fit_ok = fit_or_fallback(cfg.model_kind, pool.tail(cfg.training_window))
        if cfg.pool_handling == "reset" or population is None:
            population = init_population(obj, cfg.ga, rng)
        else:
            # the surrogate changed, so cached scores are stale
            population = Population(individuals=population.individuals)
        for _ in range(cfg.evaluation_rate):
            population = step_generation(population, model.predict, cfg.ga, obj, rng)

        points = select_suggestions(
            population, pool, cfg.suggestions_per_cycle, model, obj, rng, cfg.exclusion_epsilon
        )
        suggested = [Item(point=p, fitness=obj.evaluate(p)) for p in points]
        evaluations += len(suggested)
        accepted = count_accepted(suggested, pool)
        for item in suggested:
            pool.add(item)
        records.append(
            CycleRecord(
                cycle_index=cycle,
                suggested=suggested,
                accepted_count=accepted,
                best_true_fitness_so_far=pool.best_fitness(),
                surrogate_fit_ok=fit_ok,
            )
        )

    return RunResult(
        cycle_records=records,
        best_fitness=pool.best_fitness(),
        convergence_cycle=convergence_cycle(records),
        acceptance_rate=acceptance_rate(records),
        true_evaluations_used=evaluations,
    )
