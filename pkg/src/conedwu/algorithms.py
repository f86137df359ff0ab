"""The C-DWU and C-NSGAII solvers."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .cone import PreferenceCone, penalize_population
from .domain import Population
from .dominance import dominance_matrix, nondominated_sort, raw_dominance, strength
from .dwu import dwu_select
from .problems import Problem
from .variation import VariationConfig, make_offspring


@dataclass(frozen=True)
class AlgorithmConfig:
    population_size: int = 100
    max_evaluations: int = 100_000
    cone: PreferenceCone | None = field(default_factory=PreferenceCone)
    variation: VariationConfig = field(default_factory=VariationConfig)
    seed: int = 0
    # measure decision distances on box-normalized variables
    normalize_decisions: bool = False

    def __post_init__(self):
        if self.population_size < 2 or self.population_size % 2:
            raise ValueError("population_size must be an even number >= 2")
        if self.max_evaluations < self.population_size:
            raise ValueError("max_evaluations must cover at least the initial population")


@dataclass
class RunRecord:
    """Outcome of one solver run.

    ``reported`` is the non-dominated subset of the final population; cone
    violators are kept and only counted. ``metrics`` is filled by the
    harness.
    """

    algorithm: str
    problem: str
    n: int
    seed: int
    population: Population
    reported: Population
    evaluations: int
    generations: int
    wall_seconds: float
    initialization_only: bool = False
    metrics: object | None = None


class _CountingProblem:
    def __init__(self, problem: Problem):
        self.problem = problem
        self.calls = 0

    def evaluate(self, X):
        X = np.atleast_2d(X)
        self.calls += len(X)
        return self.problem.evaluate(X)


def crowding_distance(objectives) -> np.ndarray:
    """Standard NSGA-II crowding distance of one front.

    Extremes per objective get +inf; an objective with zero range adds
    nothing.
    """
    F = np.atleast_2d(np.asarray(objectives, dtype=float))
    size, m = F.shape
    dist = np.zeros(size)
    if size <= 2:
        return np.full(size, np.inf)
    for j in range(m):
        order = np.argsort(F[:, j], kind="stable")
        col = F[order, j]
        span = col[-1] - col[0]
        if span == 0:
            continue
        dist[order[0]] = np.inf
        dist[order[-1]] = np.inf
        dist[order[1:-1]] += (col[2:] - col[:-2]) / span
    return dist


def compute_bookkeeping(pop: Population, cone: PreferenceCone | None, with_dwu: bool = True) -> None:
    """Refresh every cached score on ``pop`` from its objectives."""
    pop.invalidate()
    dom = dominance_matrix(pop.objectives)
    if with_dwu:
        s = strength(pop, dom)
        raw_dominance(pop, dom, s)
    nondominated_sort(pop, dom)
    penalize_population(pop, cone)


def _initial_population(problem, cfg, rng, counter) -> Population:
    N = cfg.population_size
    X = problem.lower + rng.random((N, problem.n)) * (problem.upper - problem.lower)
    return Population(X, counter.evaluate(X), generation=0, evaluations=counter.calls)


def _reported(pop: Population) -> Population:
    front = nondominated_sort(pop.objectives).fronts[0]
    return pop.subset(np.sort(front))


def _run(problem: Problem, cfg: AlgorithmConfig, survival, name: str, with_dwu: bool) -> RunRecord:
    start = time.perf_counter()
    rng = np.random.default_rng(cfg.seed)
    counter = _CountingProblem(problem)
    N = cfg.population_size
    pop = _initial_population(problem, cfg, rng, counter)
    compute_bookkeeping(pop, cfg.cone, with_dwu)
    generations = 0
    while counter.calls + N <= cfg.max_evaluations:
        children = make_offspring(
            pop.decisions, pop.penalized_front_level, cfg.variation, rng, problem.lower, problem.upper
        )
        offspring = Population(children, counter.evaluate(children))
        merged = pop.merge(offspring)
        compute_bookkeeping(merged, cfg.cone, with_dwu)
        keep = survival(merged)
        generations += 1
        pop = merged.subset(np.sort(keep))
        pop.generation = generations
        pop.evaluations = counter.calls
        compute_bookkeeping(pop, cfg.cone, with_dwu)
    pop.evaluations = counter.calls
    return RunRecord(
        algorithm=name,
        problem=problem.name,
        n=problem.n,
        seed=cfg.seed,
        population=pop,
        reported=_reported(pop),
        evaluations=counter.calls,
        generations=generations,
        wall_seconds=time.perf_counter() - start,
        initialization_only=generations == 0,
    )


def run_c_dwu(problem: Problem, cfg: AlgorithmConfig) -> RunRecord:
    """Generational loop with cone-penalized DWU survival.

    With ``cfg.cone=None`` this is the plain DWU algorithm.
    """
    scale = (problem.upper - problem.lower) if cfg.normalize_decisions else None

    def survival(merged):
        return dwu_select(merged, cfg.population_size, cfg.cone, scale=scale).chosen

    return _run(problem, cfg, survival, "c-dwu", with_dwu=True)


def nsga2_survival(merged: Population, size: int) -> np.ndarray:
    """Fill by ascending penalized level; truncate the last level by crowding."""
    levels = merged.penalized_front_level
    keep: list[np.ndarray] = []
    count = 0
    crowd = np.zeros(len(merged))
    for level in np.unique(levels):
        members = np.flatnonzero(levels == level)
        crowd[members] = crowding_distance(merged.objectives[members])
        if count + len(members) <= size:
            keep.append(members)
            count += len(members)
            if count == size:
                break
            continue
        order = np.argsort(-crowd[members], kind="stable")
        keep.append(members[order[: size - count]])
        break
    merged.crowding = crowd
    return np.concatenate(keep)


def run_c_nsgaii(problem: Problem, cfg: AlgorithmConfig) -> RunRecord:
    """NSGA-II ranked by penalized front level; plain NSGA-II when ``cfg.cone`` is None."""

    def survival(merged):
        return nsga2_survival(merged, cfg.population_size)

    return _run(problem, cfg, survival, "c-nsgaii", with_dwu=False)


ALGORITHMS = {"c-dwu": run_c_dwu, "c-nsgaii": run_c_nsgaii}
