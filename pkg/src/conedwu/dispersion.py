"""Sector classification of decision vectors for CAP-VIZ style dispersion plots.

Each point is assigned to the coordinate axis it makes the smallest angle
with (``sector``, 1-based), together with that angle ``sigma`` and its norm
``rho``. Only the table is produced; drawing is left to external tools.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .cone import DegeneratePointError


@dataclass(frozen=True)
class SectorRecord:
    index: int
    sector: int
    sigma: float
    rho: float


def sector_classify(x, index: int = 0) -> SectorRecord:
    x = np.asarray(x, dtype=float)
    rho = float(np.sqrt(np.sum(x * x)))
    if rho == 0:
        raise DegeneratePointError("zero decision vector has no closest axis")
    cos = np.clip(x / rho, -1.0, 1.0)
    # smallest angle = largest cosine; argmax keeps the lowest axis on ties
    axis = int(np.argmax(cos))
    return SectorRecord(index=index, sector=axis + 1, sigma=float(np.arccos(cos[axis])), rho=rho)


def dispersion_table(sols) -> list[SectorRecord]:
    S = np.atleast_2d(np.asarray(sols, dtype=float))
    return [sector_classify(x, i) for i, x in enumerate(S)]


def max_sigma(n: int) -> float:
    """Angle between a coordinate axis and the all-ones diagonal in R^n."""
    return math.acos(1.0 / math.sqrt(n))


def write_dispersion_csv(path, run_id: str, sols) -> int:
    """Write one row per solution: run id, index, sector, sigma, rho, x_1..x_n."""
    S = np.atleast_2d(np.asarray(sols, dtype=float))
    rows = dispersion_table(S)
    with open(path, "w", newline="") as fh:
        fh.write("# conedwu-dispersion v1\n")
        w = csv.writer(fh)
        w.writerow(["run_id", "index", "sector", "sigma", "rho"] + [f"x{i + 1}" for i in range(S.shape[1])])
        for rec, x in zip(rows, S):
            w.writerow([run_id, rec.index, rec.sector, repr(rec.sigma), repr(rec.rho)] + [repr(float(v)) for v in x])
    return len(rows)
