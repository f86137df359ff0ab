"""Non-dominated sorting plus SPEA-style strength and raw dominance counts."""

from __future__ import annotations

import numpy as np

from .domain import FrontPartition, Population


def _objectives(pop) -> np.ndarray:
    if isinstance(pop, Population):
        return pop.objectives
    return np.atleast_2d(np.asarray(pop, dtype=float))


def dominance_matrix(objectives) -> np.ndarray:
    """Boolean (N, N) matrix with ``M[i, j]`` true iff row i dominates row j."""
    F = np.asarray(objectives, dtype=float)
    le = np.ones((len(F), len(F)), dtype=bool)
    ne = np.zeros_like(le)
    for col in F.T:
        le &= col[:, None] <= col[None, :]
        ne |= col[:, None] != col[None, :]
    return le & ne


def nondominated_sort(pop, dom: np.ndarray | None = None) -> FrontPartition:
    """Partition into fronts FL_1, FL_2, ... using domination counts.

    This is the fast non-dominated sort bookkeeping (count of dominators per
    member, peeled front by front) expressed on the dominance matrix. When a
    ``Population`` is passed its ``front_level`` is written in place.
    """
    F = _objectives(pop)
    if len(F) == 0:
        raise ValueError("cannot sort an empty population")
    if dom is None:
        dom = dominance_matrix(F)
    counts = dom.sum(axis=0).astype(np.int64)
    levels = np.zeros(len(F), dtype=np.int64)
    fronts = []
    current = np.flatnonzero(counts == 0)
    level = 1
    while current.size:
        levels[current] = level
        fronts.append(current)
        counts = counts - dom[current].sum(axis=0)
        counts[levels > 0] = -1
        current = np.flatnonzero(counts == 0)
        level += 1
    if isinstance(pop, Population):
        pop.front_level = levels
    return FrontPartition(fronts=fronts, levels=levels)


def strength(pop, dom: np.ndarray | None = None) -> np.ndarray:
    """s(x): how many members x dominates."""
    if dom is None:
        dom = dominance_matrix(_objectives(pop))
    s = dom.sum(axis=1).astype(np.int64)
    if isinstance(pop, Population):
        pop.strength = s
    return s


def raw_dominance(pop, dom: np.ndarray | None = None, s: np.ndarray | None = None) -> np.ndarray:
    """d(x): sum of the strengths of every member dominating x."""
    if dom is None:
        dom = dominance_matrix(_objectives(pop))
    if s is None:
        s = dom.sum(axis=1).astype(np.int64)
    d = dom.T.astype(np.int64) @ np.asarray(s, dtype=np.int64)
    if isinstance(pop, Population):
        pop.raw_dominance = d
    return d


def nondominated_mask(objectives) -> np.ndarray:
    return ~dominance_matrix(objectives).any(axis=0)
