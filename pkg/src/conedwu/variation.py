"""Binary tournament, simulated binary crossover and polynomial mutation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class VariationConfig:
    """Operator settings. ``mutation_probability=None`` means 1/n per coordinate."""

    crossover_probability: float = 1.0
    crossover_distribution_index: float = 20.0
    mutation_probability: float | None = None
    mutation_distribution_index: float = 20.0

    def __post_init__(self):
        if not 0.0 <= self.crossover_probability <= 1.0:
            raise ValueError("crossover_probability must be in [0, 1]")
        if self.mutation_probability is not None and not 0.0 <= self.mutation_probability <= 1.0:
            raise ValueError("mutation_probability must be in [0, 1]")
        if self.crossover_distribution_index <= 0 or self.mutation_distribution_index <= 0:
            raise ValueError("distribution indices must be positive")

    def per_coordinate_mutation(self, n: int) -> float:
        return 1.0 / n if self.mutation_probability is None else self.mutation_probability


def binary_tournament(levels, rng: np.random.Generator) -> int:
    """Index of the winner of one tournament on (penalized) front levels."""
    levels = np.asarray(levels)
    i, j = rng.integers(len(levels), size=2)
    if levels[i] != levels[j]:
        return int(i if levels[i] < levels[j] else j)
    return int(i if rng.random() < 0.5 else j)


def tournament_selection(levels, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` independent binary tournaments, drawn in one batch."""
    levels = np.asarray(levels)
    pairs = rng.integers(len(levels), size=(count, 2))
    coin = rng.random(count) < 0.5
    a, b = levels[pairs[:, 0]], levels[pairs[:, 1]]
    first = np.where(a == b, coin, a < b)
    return np.where(first, pairs[:, 0], pairs[:, 1])


def _sbx_beta(shape, cfg: VariationConfig, rng: np.random.Generator) -> np.ndarray:
    eta = cfg.crossover_distribution_index
    mu = rng.random(shape)
    beta = np.where(
        mu <= 0.5,
        (2.0 * mu) ** (1.0 / (eta + 1.0)),
        (2.0 - 2.0 * mu) ** (-1.0 / (eta + 1.0)),
    )
    beta = beta * np.where(rng.integers(0, 2, size=shape) == 1, -1.0, 1.0)
    # half of the coordinates are passed through unchanged
    beta[rng.random(shape) < 0.5] = 1.0
    skip = rng.random(shape[0]) > cfg.crossover_probability
    beta[skip] = 1.0
    return beta


def sbx_pairs(P1, P2, cfg: VariationConfig, rng: np.random.Generator, lower=None, upper=None):
    """Row-wise SBX of two parent matrices; returns two child matrices.

    Children are clipped to ``[lower, upper]`` when bounds are given.
    """
    P1 = np.atleast_2d(np.asarray(P1, dtype=float))
    P2 = np.atleast_2d(np.asarray(P2, dtype=float))
    if P1.shape != P2.shape:
        raise ValueError("parents must have the same shape")
    beta = _sbx_beta(P1.shape, cfg, rng)
    mean = 0.5 * (P1 + P2)
    half = 0.5 * (P1 - P2)
    # untouched coordinates are copied, since mean + half is not bit-exact
    keep = beta == 1.0
    C1 = np.where(keep, P1, mean + beta * half)
    C2 = np.where(keep, P2, mean - beta * half)
    if lower is not None:
        C1 = np.clip(C1, lower, upper)
        C2 = np.clip(C2, lower, upper)
    return C1, C2


def sbx_crossover(p1, p2, cfg: VariationConfig, rng: np.random.Generator, lower=None, upper=None):
    c1, c2 = sbx_pairs(p1, p2, cfg, rng, lower, upper)
    return c1[0], c2[0]


def polynomial_mutation(X, cfg: VariationConfig, rng: np.random.Generator, lower, upper):
    """Bounded polynomial mutation of one vector or a batch of rows."""
    X = np.asarray(X, dtype=float)
    single = X.ndim == 1
    X = np.atleast_2d(X)
    lower = np.broadcast_to(np.asarray(lower, dtype=float), X.shape)
    upper = np.broadcast_to(np.asarray(upper, dtype=float), X.shape)
    eta = cfg.mutation_distribution_index
    site = rng.random(X.shape) < cfg.per_coordinate_mutation(X.shape[1])
    mu = rng.random(X.shape)
    Y = np.clip(X, lower, upper)
    width = upper - lower
    with np.errstate(divide="ignore", invalid="ignore"):
        rel_lo = np.where(width > 0, (Y - lower) / width, 0.0)
        rel_hi = np.where(width > 0, (upper - Y) / width, 0.0)
    down = site & (mu <= 0.5)
    up = site & (mu > 0.5)
    delta_down = (2.0 * mu + (1.0 - 2.0 * mu) * (1.0 - rel_lo) ** (eta + 1.0)) ** (1.0 / (eta + 1.0)) - 1.0
    delta_up = 1.0 - (2.0 * (1.0 - mu) + 2.0 * (mu - 0.5) * (1.0 - rel_hi) ** (eta + 1.0)) ** (1.0 / (eta + 1.0))
    Y = np.where(down, Y + width * delta_down, Y)
    Y = np.where(up, Y + width * delta_up, Y)
    Y = np.clip(Y, lower, upper)
    return Y[0] if single else Y


def make_offspring(decisions, levels, cfg: VariationConfig, rng: np.random.Generator, lower, upper):
    """N children from tournament-selected parents (N/2 couples, two children each)."""
    decisions = np.asarray(decisions, dtype=float)
    count = len(decisions)
    if count % 2:
        raise ValueError("population size must be even")
    parents = tournament_selection(levels, count, rng)
    half = count // 2
    C1, C2 = sbx_pairs(decisions[parents[:half]], decisions[parents[half:]], cfg, rng, lower, upper)
    return polynomial_mutation(np.vstack([C1, C2]), cfg, rng, lower, upper)
