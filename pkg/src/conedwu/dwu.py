"""Uniformity measure, dominance-weighted uniformity and the greedy DWU selection."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import cdist

from .cone import PreferenceCone, angular_distance, dwu_penalty
from .domain import Individual, Population


def uniformity(R) -> float:
    """Smallest Euclidean distance between two distinct members of ``R``."""
    R = np.atleast_2d(np.asarray(R, dtype=float))
    if len(R) < 2:
        raise ValueError("uniformity needs at least two points")
    D = pairwise_distances(R)
    iu = np.triu_indices(len(R), k=1)
    return float(D[iu].min())


def pairwise_distances(X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    return cdist(X, X)


def _distance(a, b) -> float:
    diff = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
    return float(np.sqrt(np.sum(diff * diff)))


def w_d(x: Individual, x2: Individual) -> float:
    """Decision-space distance discounted by the gap in raw dominance."""
    return _distance(x.decision, x2.decision) / (abs(x.raw_dominance - x2.raw_dominance) + 1)


def c_w_d(x: Individual, x2: Individual, cone: PreferenceCone) -> float:
    """``w_d`` minus the cone penalty when either endpoint lies outside the cone.

    The penalty uses the larger of the two angular distances. The result is
    not clamped and may be negative.
    """
    base = w_d(x, x2)
    phi = max(x.angular_distance, x2.angular_distance)
    if phi > cone.theta:
        return base - dwu_penalty(phi, cone)
    return base


def pairwise_weights(
    decisions,
    raw_dom,
    phi=None,
    cone: PreferenceCone | None = None,
    scale=None,
) -> np.ndarray:
    """Symmetric matrix of ``w_d`` (or ``c_w_d`` when ``cone`` is given).

    ``scale`` divides each decision coordinate before distances are taken
    (pass the box widths to work in normalized decision space).
    """
    X = np.asarray(decisions, dtype=float)
    if scale is not None:
        X = X / np.asarray(scale, dtype=float)
    d = np.asarray(raw_dom, dtype=np.int64)
    W = pairwise_distances(X) / (np.abs(d[:, None] - d[None, :]) + 1)
    if cone is not None:
        phi = np.asarray(phi, dtype=float)
        worst = np.maximum(phi[:, None], phi[None, :])
        W = np.where(worst > cone.theta, W - dwu_penalty(worst, cone), W)
    return W


@dataclass
class SelectionSet:
    """Result of one DWU selection over ``pool``.

    ``chosen`` holds pool indices in the order they were added; ``scores``
    holds the value that won each step (the pair weight for the two seeds,
    the max-min weight afterwards). ``weights`` is the matrix the greedy
    steps were decided on.
    """

    pool: Population
    target_k: int
    chosen: list[int] = field(default_factory=list)
    scores: list[float] = field(default_factory=list)
    weights: np.ndarray | None = None
    seed_candidates: np.ndarray | None = None


def dwu_select(
    pool: Population,
    k: int,
    cone: PreferenceCone | None = None,
    scale=None,
) -> SelectionSet:
    """Greedy max-min selection of ``k`` members of ``pool``.

    Seeds with the best pair among the non-dominated members (lowest
    penalized front level when a cone is given), then repeatedly adds the
    member whose smallest weight to the chosen set is largest. Ties go to
    the lowest pool index.
    """
    size = len(pool)
    if k < 2:
        raise ValueError("k must be at least 2")
    if size < k:
        raise ValueError(f"pool of {size} cannot supply {k} members")
    if pool.raw_dominance is None or pool.front_level is None:
        raise ValueError("dominance bookkeeping must be computed on the pool first")

    if cone is not None:
        if pool.angular_distance is None:
            pool.angular_distance = np.atleast_1d(angular_distance(pool.objectives, cone))
        levels = pool.penalized_front_level
        if levels is None:
            raise ValueError("penalized front levels must be computed on the pool first")
        W = pairwise_weights(pool.decisions, pool.raw_dominance, pool.angular_distance, cone, scale)
    else:
        levels = pool.front_level
        W = pairwise_weights(pool.decisions, pool.raw_dominance, scale=scale)

    seeds = np.flatnonzero(levels == levels.min())
    result = SelectionSet(pool=pool, target_k=k, weights=W, seed_candidates=seeds)

    if len(seeds) >= 2:
        sub = W[np.ix_(seeds, seeds)]
        masked = np.where(np.triu(np.ones_like(sub, dtype=bool), k=1), sub, -np.inf)
        flat = int(np.argmax(masked))
        a, b = seeds[flat // len(seeds)], seeds[flat % len(seeds)]
        first = [int(a), int(b)]
        pair_score = float(W[a, b])
    else:
        a = int(seeds[0])
        row = W[a].copy()
        row[a] = -np.inf
        b = int(np.argmax(row))
        first = [a, b]
        pair_score = float(W[a, b])

    result.chosen = list(first)
    result.scores = [pair_score, pair_score]
    # best[i] = min weight from i to the chosen set; chosen members pinned at -inf
    best = np.minimum(W[first[0]], W[first[1]])
    best[first] = -np.inf
    while len(result.chosen) < k:
        j = int(np.argmax(best))
        result.chosen.append(j)
        result.scores.append(float(best[j]))
        np.minimum(best, W[j], out=best)
        best[j] = -np.inf
    return result
