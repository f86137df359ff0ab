"""Core value types: individuals and array-backed populations (minimization)."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def dominates(a, b) -> bool:
    """Pareto dominance for minimization: ``a`` is no worse everywhere and ``a != b``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"objective vectors differ in length: {a.shape} vs {b.shape}")
    return bool(np.all(a <= b) and np.any(a != b))


@dataclass(frozen=True)
class Individual:
    """Snapshot of one population member and its cached scores."""

    decision: np.ndarray
    objectives: np.ndarray
    strength: int = 0
    raw_dominance: int = 0
    front_level: int = 1
    penalized_front_level: int = 1
    angular_distance: float = 0.0
    crowding: float = 0.0


@dataclass
class Population:
    """Members stored column-wise so the solvers can work on whole arrays.

    ``decisions`` is (N, n) and ``objectives`` is (N, m). The bookkeeping
    arrays are recomputed wholesale each generation; ``None`` means not yet
    computed.
    """

    decisions: np.ndarray
    objectives: np.ndarray
    generation: int = 0
    evaluations: int = 0
    strength: np.ndarray | None = None
    raw_dominance: np.ndarray | None = None
    front_level: np.ndarray | None = None
    penalized_front_level: np.ndarray | None = None
    angular_distance: np.ndarray | None = None
    crowding: np.ndarray | None = None

    def __post_init__(self):
        self.decisions = np.atleast_2d(np.asarray(self.decisions, dtype=float))
        self.objectives = np.atleast_2d(np.asarray(self.objectives, dtype=float))
        if len(self.decisions) != len(self.objectives):
            raise ValueError("decisions and objectives must have the same number of rows")

    def __len__(self) -> int:
        return len(self.decisions)

    def __getitem__(self, i: int) -> Individual:
        def pick(arr, default):
            return default if arr is None else arr[i]

        return Individual(
            decision=self.decisions[i].copy(),
            objectives=self.objectives[i].copy(),
            strength=int(pick(self.strength, 0)),
            raw_dominance=int(pick(self.raw_dominance, 0)),
            front_level=int(pick(self.front_level, 1)),
            penalized_front_level=int(pick(self.penalized_front_level, 1)),
            angular_distance=float(pick(self.angular_distance, 0.0)),
            crowding=float(pick(self.crowding, 0.0)),
        )

    def subset(self, idx) -> Population:
        """Rows ``idx`` as a new population; cached scores are dropped."""
        idx = np.asarray(idx, dtype=int)
        return Population(
            self.decisions[idx].copy(),
            self.objectives[idx].copy(),
            generation=self.generation,
            evaluations=self.evaluations,
        )

    def merge(self, other: Population) -> Population:
        """Combined population ``self`` followed by ``other`` (scores dropped)."""
        return Population(
            np.vstack([self.decisions, other.decisions]),
            np.vstack([self.objectives, other.objectives]),
            generation=self.generation,
            evaluations=max(self.evaluations, other.evaluations),
        )

    def invalidate(self) -> None:
        self.strength = None
        self.raw_dominance = None
        self.front_level = None
        self.penalized_front_level = None
        self.angular_distance = None
        self.crowding = None


@dataclass
class FrontPartition:
    """Ordered fronts as index arrays into a population; ``levels`` is 1-based."""

    fronts: list[np.ndarray] = field(default_factory=list)
    levels: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.fronts)

    def as_sets(self) -> list[frozenset[int]]:
        return [frozenset(int(i) for i in f) for f in self.fronts]
