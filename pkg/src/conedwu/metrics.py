"""Quality indicators: ROI-restricted IGD, decision-space uniformity, cone membership."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cone import PreferenceCone, in_cone
from .dwu import uniformity
from .problems import Problem, sample_pf

REFERENCE_SAMPLES = 10_000


class ConeMissesFrontError(ValueError):
    """The cone filter left fewer than two reference points."""


@dataclass(frozen=True)
class ReferenceSet:
    points: np.ndarray
    sampled: int

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class MetricReport:
    igd: float
    uniformity: float
    uniformity_normalized: float
    roi_membership_rate: float
    reference_size: int
    reported_size: int


def roi_reference_set(problem: Problem, cone: PreferenceCone, count: int = REFERENCE_SAMPLES) -> ReferenceSet:
    """Analytic front samples that fall inside ``cone``."""
    pf = sample_pf(problem, count)
    kept = pf[in_cone(pf, cone)]
    if len(kept) < 2:
        raise ConeMissesFrontError(
            f"only {len(kept)} of {count} front samples of {problem.name} lie inside the cone"
        )
    return ReferenceSet(points=kept, sampled=count)


def igd(ref, sols) -> float:
    """Mean distance from each reference point to its nearest solution."""
    R = np.atleast_2d(np.asarray(getattr(ref, "points", ref), dtype=float))
    S = np.atleast_2d(np.asarray(sols, dtype=float))
    if R.size == 0 or S.size == 0:
        raise ValueError("igd needs nonempty reference and solution sets")
    nearest = np.full(len(R), np.inf)
    # chunked to bound memory for 1e4-point reference sets
    for start in range(0, len(S), 256):
        block = S[start : start + 256]
        diff = R[:, None, :] - block[None, :, :]
        nearest = np.minimum(nearest, np.sqrt(np.sum(diff * diff, axis=-1)).min(axis=1))
    return float(nearest.mean())


def final_uniformity(sols) -> float:
    return uniformity(sols)


def roi_membership_rate(sols, cone: PreferenceCone) -> float:
    S = np.atleast_2d(np.asarray(sols, dtype=float))
    if S.size == 0:
        raise ValueError("no solutions to check")
    return float(np.mean(in_cone(S, cone)))


def evaluate_run(record, problem: Problem, cone: PreferenceCone, ref: ReferenceSet) -> MetricReport:
    """Metrics of a finished run, taken on its reported (non-dominated) population.

    A reported set of one point has uniformity 0 by convention.
    """
    rep = record.reported
    width = problem.upper - problem.lower
    if len(rep) >= 2:
        u = final_uniformity(rep.decisions)
        u_norm = final_uniformity(rep.decisions / width)
    else:
        u = u_norm = 0.0
    return MetricReport(
        igd=igd(ref, rep.objectives),
        uniformity=u,
        uniformity_normalized=u_norm,
        roi_membership_rate=roi_membership_rate(rep.objectives, cone),
        reference_size=len(ref),
        reported_size=len(rep),
    )
