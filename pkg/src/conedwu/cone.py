"""Preference-cone geometry and the two cone penalties."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class DegeneratePointError(ValueError):
    """Raised for a zero vector, whose angle to any axis is undefined."""


@dataclass(frozen=True)
class PreferenceCone:
    """Cone of half-angle ``theta`` around ``axis``.

    ``alpha`` scales the front-level penalty and ``beta`` the penalty on
    the dominance-weighted uniformity function.
    """

    axis: tuple[float, ...] = (1.0, 1.0)
    theta: float = 0.3
    alpha: float = 0.3
    beta: float = 1.0

    def __post_init__(self):
        axis = tuple(float(a) for a in self.axis)
        object.__setattr__(self, "axis", axis)
        if len(axis) < 2 or any(not a >= 0 for a in axis) or not any(a > 0 for a in axis):
            raise ValueError(f"cone axis must be a nonzero, nonnegative vector, got {axis}")
        # theta up to pi is accepted so a cone can cover everything
        if not 0 < self.theta <= math.pi:
            raise ValueError(f"theta must lie in (0, pi], got {self.theta}")
        if self.alpha < 0 or self.beta < 0:
            raise ValueError("penalty intensities must be nonnegative")

    @property
    def v(self) -> np.ndarray:
        return np.asarray(self.axis)


def angular_distance(y, cone: PreferenceCone):
    """Angle between ``y`` and the cone axis; ``y`` may be one vector or rows.

    Objectives are used as-is (no normalization). The angle is evaluated as
    ``2 atan2(|u - w|, |u + w|)`` on the unit vectors, which equals
    ``arccos(<y, v> / (|y| |v|))`` but stays accurate near 0 and pi where
    arccos loses half its digits.
    """
    y = np.asarray(y, dtype=float)
    v = cone.v
    if y.shape[-1] != v.shape[0]:
        raise ValueError(f"objective length {y.shape[-1]} does not match axis length {v.shape[0]}")
    norms = np.linalg.norm(y, axis=-1, keepdims=True)
    if np.any(norms == 0) or not np.all(np.isfinite(norms)):
        raise DegeneratePointError("objective vector with zero or non-finite norm has no angle to the cone axis")
    u = y / norms
    w = v / np.linalg.norm(v)
    phi = 2.0 * np.arctan2(np.linalg.norm(u - w, axis=-1), np.linalg.norm(u + w, axis=-1))
    phi = np.clip(phi, 0.0, math.pi)
    return float(phi) if phi.ndim == 0 else phi


def in_cone(y, cone: PreferenceCone):
    """Membership test, inclusive of the boundary."""
    inside = np.asarray(angular_distance(y, cone)) <= cone.theta
    return bool(inside) if inside.ndim == 0 else inside


def front_penalty(phi, cone: PreferenceCone):
    """floor(exp(alpha * (phi - theta))) as an integer (array-aware)."""
    p = np.floor(np.exp(cone.alpha * (np.asarray(phi, dtype=float) - cone.theta))).astype(np.int64)
    return int(p) if p.ndim == 0 else p


def penalized_front_level(front_level, phi, cone: PreferenceCone):
    """Front level pushed back by ``front_penalty`` for members outside the cone.

    Works on scalars or whole arrays; ``penalize_population`` is the
    in-place population version.
    """
    level = np.asarray(front_level, dtype=np.int64)
    phi = np.asarray(phi, dtype=float)
    out = np.where(phi > cone.theta, level + front_penalty(phi, cone), level)
    return int(out) if out.ndim == 0 else out


def dwu_penalty(phi, cone: PreferenceCone):
    """exp(beta * (phi - theta)); no floor."""
    p = np.exp(cone.beta * (np.asarray(phi, dtype=float) - cone.theta))
    return float(p) if p.ndim == 0 else p


def penalize_population(pop, cone: PreferenceCone | None) -> None:
    """Fill ``angular_distance`` and ``penalized_front_level`` on ``pop``.

    With ``cone=None`` the penalized level is the plain front level and the
    angles are left unset.
    """
    if pop.front_level is None:
        raise ValueError("front levels must be computed before penalizing")
    if cone is None:
        pop.penalized_front_level = pop.front_level.copy()
        return
    pop.angular_distance = np.atleast_1d(angular_distance(pop.objectives, cone))
    pop.penalized_front_level = penalized_front_level(pop.front_level, pop.angular_distance, cone)
