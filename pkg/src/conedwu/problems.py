"""DTLZ2, WFG4 and WFG9 benchmark problems with analytic front samplers.

The WFG transformations are written for any number of objectives so they
can be checked against published multi-objective values, but the solvers
only use ``m = 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

PROBLEM_NAMES = ("dtlz2", "wfg4", "wfg9")


# WFG building blocks. Inputs are arrays in [0, 1]; each result is snapped
# back into [0, 1] to absorb round-off.

def _correct_to_01(a, eps=1e-10):
    a = np.asarray(a, dtype=float)
    a = np.where((a < 0) & (a >= -eps), 0.0, a)
    return np.where((a > 1) & (a <= 1 + eps), 1.0, a)


def s_multi(y, A, B, C):
    tmp = np.abs(y - C) / (2.0 * (np.floor(C - y) + C))
    val = (1.0 + np.cos((4.0 * A + 2.0) * np.pi * (0.5 - tmp)) + 4.0 * B * tmp**2) / (B + 2.0)
    return _correct_to_01(val)


def s_decept(y, A, B, C):
    t1 = np.floor(y - A + B) * (1.0 - C + (A - B) / B) / (A - B)
    t2 = np.floor(A + B - y) * (1.0 - C + (1.0 - A - B) / B) / (1.0 - A - B)
    return _correct_to_01(1.0 + (np.abs(y - A) - B) * (t1 + t2 + 1.0 / B))


def b_param(y, u, A, B, C):
    exponent = B + (C - B) * (A - (1.0 - 2.0 * u) * np.abs(np.floor(0.5 - u) + A))
    return _correct_to_01(y**exponent)


def r_sum(y, w):
    w = np.asarray(w, dtype=float)
    return _correct_to_01((y @ w) / w.sum())


def r_nonsep(y, A: int):
    size = y.shape[1]
    num = np.zeros(y.shape[0])
    for j in range(size):
        num = num + y[:, j]
        for k in range(A - 1):
            num = num + np.abs(y[:, j] - y[:, (1 + j + k) % size])
    half = math.ceil(A / 2.0)
    return _correct_to_01(num / ((size / A) * half * (1.0 + 2.0 * A - 2.0 * half)))


def concave_shape(x):
    """All m concave shape values for the (rows, m-1) position array ``x``."""
    m = x.shape[1] + 1
    s = np.sin(0.5 * np.pi * x)
    c = np.cos(0.5 * np.pi * x)
    h = np.empty((x.shape[0], m))
    for i in range(1, m + 1):
        val = np.prod(s[:, : m - i], axis=1)
        if i > 1:
            val = val * c[:, m - i]
        h[:, i - 1] = val
    return _correct_to_01(h)


def _wfg_objectives(t, m):
    # t has m columns: m-1 position values then the distance value; A_i = 1
    x_last = t[:, -1]
    x = np.maximum(x_last[:, None], 1.0) * (t[:, :-1] - 0.5) + 0.5
    h = concave_shape(x)
    S = 2.0 * np.arange(1, m + 1)
    return x_last[:, None] + S * h


def wfg4_transform(z, k, m):
    y = s_multi(z, 30.0, 10.0, 0.35)
    gap = k // (m - 1)
    cols = [r_sum(y[:, i * gap : (i + 1) * gap], np.ones(gap)) for i in range(m - 1)]
    cols.append(r_sum(y[:, k:], np.ones(y.shape[1] - k)))
    return np.column_stack(cols)


def wfg9_transform(z, k, m):
    n = z.shape[1]
    y = z.copy()
    for i in range(n - 1):
        tail = z[:, i + 1 :]
        y[:, i] = b_param(z[:, i], r_sum(tail, np.ones(tail.shape[1])), 0.98 / 49.98, 0.02, 50.0)
    y2 = np.empty_like(y)
    y2[:, :k] = s_decept(y[:, :k], 0.35, 0.001, 0.05)
    y2[:, k:] = s_multi(y[:, k:], 30.0, 95.0, 0.35)
    gap = k // (m - 1)
    cols = [r_nonsep(y2[:, i * gap : (i + 1) * gap], gap) for i in range(m - 1)]
    cols.append(r_nonsep(y2[:, k:], n - k))
    return np.column_stack(cols)


@dataclass(frozen=True)
class Problem:
    """A bounded minimization benchmark.

    ``evaluate`` takes one decision vector or a (rows, n) batch and returns
    the matching objective vector(s). ``k`` is the WFG position-parameter
    count (unused by DTLZ2).
    """

    name: str
    n: int
    m: int = 2
    k: int = 1
    lower: np.ndarray = field(default=None, repr=False)
    upper: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        name = self.name.lower()
        object.__setattr__(self, "name", name)
        if name not in PROBLEM_NAMES:
            raise ValueError(f"unknown problem {self.name!r}; expected one of {PROBLEM_NAMES}")
        if self.m < 2:
            raise ValueError("need at least two objectives")
        if name == "dtlz2":
            if self.n < self.m:
                raise ValueError("DTLZ2 needs n >= m")
            upper = np.ones(self.n)
        else:
            if self.k % (self.m - 1) != 0 or not 0 < self.k < self.n:
                raise ValueError("WFG needs k divisible by m-1 and 0 < k < n")
            upper = 2.0 * np.arange(1, self.n + 1)
        object.__setattr__(self, "lower", np.zeros(self.n))
        object.__setattr__(self, "upper", upper)

    @property
    def l(self) -> int:
        return self.n - self.k

    def _check(self, X):
        if X.shape[1] != self.n:
            raise ValueError(f"{self.name} expects {self.n} variables, got {X.shape[1]}")
        if np.any(X < self.lower) or np.any(X > self.upper) or not np.all(np.isfinite(X)):
            raise ValueError(f"decision vector outside the {self.name} box")

    def evaluate(self, x) -> np.ndarray:
        X = np.asarray(x, dtype=float)
        single = X.ndim == 1
        X = np.atleast_2d(X)
        self._check(X)
        if self.name == "dtlz2":
            F = _dtlz2(X, self.m)
        elif self.name == "wfg4":
            F = _wfg_objectives(wfg4_transform(X / self.upper, self.k, self.m), self.m)
        else:
            F = _wfg_objectives(wfg9_transform(X / self.upper, self.k, self.m), self.m)
        return F[0] if single else F

    def optimal_decision(self, position) -> np.ndarray:
        """A Pareto-optimal decision vector with the given position parameters in [0, 1]."""
        pos = np.asarray(position, dtype=float)
        if pos.shape != (self.k if self.name != "dtlz2" else self.m - 1,):
            raise ValueError("wrong number of position parameters")
        if self.name == "dtlz2":
            return np.concatenate([pos, np.full(self.n - self.m + 1, 0.5)])
        z = np.concatenate([pos, np.zeros(self.l)])
        if self.name == "wfg4":
            z[self.k :] = 0.35
        else:
            z[-1] = 0.35
            for i in range(self.n - 2, self.k - 1, -1):
                mean = z[i + 1 :].mean()
                z[i] = 0.35 ** (1.0 / (0.02 + 1.96 * mean))
        return z * self.upper

    def sample_pf(self, count: int) -> np.ndarray:
        return sample_pf(self, count)


def _dtlz2(X, m):
    g = np.sum((X[:, m - 1 :] - 0.5) ** 2, axis=1)
    ang = 0.5 * np.pi * X[:, : m - 1]
    F = np.empty((len(X), m))
    for i in range(m):
        val = 1.0 + g
        val = val * np.prod(np.cos(ang[:, : m - 1 - i]), axis=1)
        if i > 0:
            val = val * np.sin(ang[:, m - 1 - i])
        F[:, i] = val
    return F


def make_problem(name: str, n: int, k: int | None = None) -> Problem:
    """Bi-objective problem by name; WFG defaults to one position parameter."""
    return Problem(name=name, n=n, m=2, k=1 if k is None else k)


def _ellipse_arc_params(a: float, b: float, count: int, dense: int = 200_001) -> np.ndarray:
    # parameters t in [0, pi/2] equally spaced in arc length along (a sin t, b cos t)
    t = np.linspace(0.0, 0.5 * np.pi, dense)
    speed = np.hypot(a * np.cos(t), b * np.sin(t))
    arc = np.concatenate([[0.0], np.cumsum(0.5 * (speed[1:] + speed[:-1]) * np.diff(t))])
    targets = np.linspace(0.0, arc[-1], count)
    out = np.interp(targets, arc, t)
    out[0], out[-1] = 0.0, 0.5 * np.pi
    return out


def sample_pf(problem: Problem, count: int) -> np.ndarray:
    """``count`` points on the bi-objective front, f1 increasing and f2 decreasing."""
    if count < 2:
        raise ValueError("count must be at least 2")
    if problem.m != 2:
        raise ValueError("front sampling is implemented for two objectives only")
    if problem.name == "dtlz2":
        t = np.linspace(0.0, 0.5 * np.pi, count)
        return np.column_stack([np.sin(t), np.cos(t)])
    t = _ellipse_arc_params(2.0, 4.0, count)
    return np.column_stack([2.0 * np.sin(t), 4.0 * np.cos(t)])
