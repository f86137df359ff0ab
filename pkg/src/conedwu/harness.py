"""Experiment matrix runner, CSV persistence, summaries and plot-data emission.

Layout under the output directory::

    runs/<algorithm>_<problem>_D<n>/<seed>.csv       per-run metrics
    runs/<algorithm>_<problem>_D<n>/<seed>_pop.csv   final population
    summary.csv, table_igd.csv, table_uniformity.csv
    timings.csv                                      wall clock (not reproducible)
    plots/*.csv                                      figure data
"""

from __future__ import annotations

import csv
import logging
import math
import statistics
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from functools import lru_cache
from pathlib import Path

import numpy as np

from .algorithms import ALGORITHMS, AlgorithmConfig, RunRecord
from .cone import PreferenceCone, angular_distance, in_cone
from .dispersion import write_dispersion_csv
from .domain import Population
from .metrics import MetricReport, ReferenceSet, evaluate_run, roi_reference_set
from .problems import PROBLEM_NAMES, make_problem

log = logging.getLogger(__name__)

RUN_HEADER = "# conedwu-run v1"
POP_HEADER = "# conedwu-population v1"
SUMMARY_HEADER = "# conedwu-summary v1"
OBJECTIVE_HEADER = "# conedwu-objectives v1"

METRIC_FIELDS = ("igd", "uniformity", "uniformity_normalized", "roi_membership_rate")


@dataclass(frozen=True)
class ExperimentConfig:
    algorithms: tuple[str, ...] = ("c-dwu", "c-nsgaii")
    problems: tuple[str, ...] = PROBLEM_NAMES
    dimensions: tuple[int, ...] = (5, 7, 9)
    runs: int = 10
    population: int = 100
    evaluations: int = 100_000
    axis: tuple[float, ...] = (1.0, 1.0)
    theta: float = 0.3
    alpha: float = 0.3
    beta: float = 1.0
    seed: int = 1
    normalize_uniformity: bool = False
    out: str = "results"
    wfg_k: int = 1
    reference_count: int = 10_000
    plot_reference_count: int = 200
    workers: int = 1

    def __post_init__(self):
        for a in self.algorithms:
            if a not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {a!r}")
        for p in self.problems:
            if p not in PROBLEM_NAMES:
                raise ValueError(f"unknown problem {p!r}")
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if any(d < 3 for d in self.dimensions):
            raise ValueError("dimensions must be >= 3")
        self.cone  # validates axis/theta/alpha/beta

    @property
    def cone(self) -> PreferenceCone:
        return PreferenceCone(axis=self.axis, theta=self.theta, alpha=self.alpha, beta=self.beta)

    def cells(self):
        for alg in self.algorithms:
            for prob in self.problems:
                for dim in self.dimensions:
                    yield alg, prob, dim

    def tasks(self):
        for alg, prob, dim in self.cells():
            for r in range(self.runs):
                yield alg, prob, dim, self.seed + r


# --- config parsing -------------------------------------------------------

def _split(value: str) -> list[str]:
    return [v.strip() for v in value.replace(";", ",").split(",") if v.strip()]


_PARSERS = {
    "algorithms": lambda v: tuple(_split(v)),
    "problems": lambda v: tuple(_split(v)),
    "dimensions": lambda v: tuple(int(x) for x in _split(v)),
    "axis": lambda v: tuple(float(x) for x in _split(v)),
    "normalize_uniformity": lambda v: v.strip().lower() in ("1", "true", "yes", "on"),
    "out": str,
}
_ALIASES = {"dims": "dimensions", "pop": "population", "evals": "evaluations"}


def parse_config_text(text: str) -> dict:
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    types = {f.name: f.type for f in fields(ExperimentConfig)}
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = _ALIASES.get(key.replace("-", "_"), key.replace("-", "_"))
        if key not in types:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
        out[key] = coerce(key, value)
    return out


def coerce(key: str, value):
    if not isinstance(value, str):
        return value
    if key in _PARSERS:
        return _PARSERS[key](value)
    kind = {f.name: f.type for f in fields(ExperimentConfig)}[key]
    return int(value) if kind == "int" else float(value)


def load_config(path=None, **overrides) -> ExperimentConfig:
    """Defaults, then the file at ``path``, then non-None ``overrides``."""
    values = {}
    if path is not None:
        values.update(parse_config_text(Path(path).read_text()))
    values.update({k: coerce(k, v) for k, v in overrides.items() if v is not None})
    return ExperimentConfig(**values)


# --- seeds and naming -----------------------------------------------------

def cell_name(algorithm: str, problem: str, dim: int) -> str:
    return f"{algorithm}_{problem}_D{dim}"


def run_seed(algorithm: str, problem: str, dim: int, seed: int) -> int:
    """64-bit generator seed; depends only on its own cell and ``seed``."""
    cell_hash = zlib.crc32(cell_name(algorithm, problem, dim).encode())
    state = np.random.SeedSequence([cell_hash, seed]).generate_state(2, dtype=np.uint32)
    return int(state[0]) << 32 | int(state[1])


# --- running --------------------------------------------------------------

@lru_cache(maxsize=None)
def _reference(problem: str, dim: int, k: int, cone: PreferenceCone, count: int) -> ReferenceSet:
    return roi_reference_set(make_problem(problem, dim, k), cone, count)


def execute_run(cfg: ExperimentConfig, algorithm: str, problem_name: str, dim: int, seed: int) -> RunRecord:
    problem = make_problem(problem_name, dim, cfg.wfg_k)
    acfg = AlgorithmConfig(
        population_size=cfg.population,
        max_evaluations=cfg.evaluations,
        cone=cfg.cone,
        seed=run_seed(algorithm, problem_name, dim, seed),
        normalize_decisions=cfg.normalize_uniformity,
    )
    record = ALGORITHMS[algorithm](problem, acfg)
    record.seed = seed
    ref = _reference(problem_name, dim, cfg.wfg_k, cfg.cone, cfg.reference_count)
    record.metrics = evaluate_run(record, problem, cfg.cone, ref)
    return record


def _task(args):
    return execute_run(*args)


def _check_writable(out: Path) -> None:
    try:
        out.mkdir(parents=True, exist_ok=True)
        probe = out / ".write-probe"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise OSError(f"output directory {out} is not writable: {exc}") from exc


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def headline_uniformity(m: MetricReport, normalized: bool) -> float:
    return m.uniformity_normalized if normalized else m.uniformity


def write_run(out: Path, record: RunRecord, cfg: ExperimentConfig) -> tuple[Path, Path]:
    cell_dir = out / "runs" / cell_name(record.algorithm, record.problem, record.n)
    cell_dir.mkdir(parents=True, exist_ok=True)
    m = record.metrics
    metrics_path = cell_dir / f"{record.seed}.csv"
    row = {
        "algorithm": record.algorithm,
        "problem": record.problem,
        "dimension": record.n,
        "seed": record.seed,
        "evaluations": record.evaluations,
        "generations": record.generations,
        "initialization_only": record.initialization_only,
        "igd": m.igd,
        "uniformity": headline_uniformity(m, cfg.normalize_uniformity),
        "uniformity_raw": m.uniformity,
        "uniformity_normalized": m.uniformity_normalized,
        "roi_membership_rate": m.roi_membership_rate,
        "reference_size": m.reference_size,
        "reported_size": m.reported_size,
    }
    with open(metrics_path, "w", newline="") as fh:
        fh.write(RUN_HEADER + "\n")
        w = csv.writer(fh)
        w.writerow(row.keys())
        w.writerow(_fmt(v) for v in row.values())

    pop = record.population
    reported = _reported_mask(pop, record.reported)
    inside = np.atleast_1d(in_cone(pop.objectives, cfg.cone))
    phi = np.atleast_1d(angular_distance(pop.objectives, cfg.cone))
    pop_path = cell_dir / f"{record.seed}_pop.csv"
    n, mobj = pop.decisions.shape[1], pop.objectives.shape[1]
    with open(pop_path, "w", newline="") as fh:
        fh.write(POP_HEADER + "\n")
        w = csv.writer(fh)
        w.writerow(
            ["index", "reported", "in_cone", "phi"]
            + [f"f{j + 1}" for j in range(mobj)]
            + [f"x{i + 1}" for i in range(n)]
        )
        for i in range(len(pop)):
            w.writerow(
                [i, _fmt(reported[i]), _fmt(inside[i]), _fmt(phi[i])]
                + [_fmt(v) for v in pop.objectives[i]]
                + [_fmt(v) for v in pop.decisions[i]]
            )
    return metrics_path, pop_path


def _reported_mask(pop: Population, reported: Population) -> np.ndarray:
    keys = {tuple(r) for r in reported.decisions}
    return np.array([tuple(r) in keys for r in pop.decisions])


def run_matrix(cfg: ExperimentConfig, workers: int | None = None) -> list[RunRecord]:
    """Run every (algorithm, problem, dimension, seed) task and persist it.

    Results and files are identical for any ``workers`` value; records come
    back in task order.
    """
    out = Path(cfg.out)
    _check_writable(out)
    workers = cfg.workers if workers is None else workers
    tasks = [(cfg, *t) for t in cfg.tasks()]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_task, tasks))
    else:
        records = []
        for i, t in enumerate(tasks, 1):
            records.append(_task(t))
            log.info("run %d/%d %s seed=%d done", i, len(tasks), cell_name(*t[1:4]), t[4])
    for rec in records:
        write_run(out, rec, cfg)
    write_summary(out, summarize_rows(_rows_from_records(records, cfg)))
    with open(out / "timings.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["algorithm", "problem", "dimension", "seed", "wall_seconds"])
        for rec in records:
            w.writerow([rec.algorithm, rec.problem, rec.n, rec.seed, f"{rec.wall_seconds:.3f}"])
    return records


# --- summaries ------------------------------------------------------------

def _rows_from_records(records, cfg: ExperimentConfig) -> list[dict]:
    rows = []
    for rec in records:
        m = rec.metrics
        rows.append(
            {
                "algorithm": rec.algorithm,
                "problem": rec.problem,
                "dimension": rec.n,
                "seed": rec.seed,
                "igd": m.igd,
                "uniformity": headline_uniformity(m, cfg.normalize_uniformity),
                "uniformity_normalized": m.uniformity_normalized,
                "roi_membership_rate": m.roi_membership_rate,
            }
        )
    return rows


def read_run_csv(path) -> dict:
    with open(path, newline="") as fh:
        first = fh.readline().strip()
        if first != RUN_HEADER:
            raise ValueError(f"{path}: unexpected header {first!r}")
        row = next(csv.DictReader(fh))
    out = dict(row)
    out["dimension"] = int(row["dimension"])
    out["seed"] = int(row["seed"])
    for key in METRIC_FIELDS:
        out[key] = float(row[key])
    return out


def load_run_rows(out) -> list[dict]:
    paths = sorted(p for p in (Path(out) / "runs").glob("*/*.csv") if not p.name.endswith("_pop.csv"))
    return [read_run_csv(p) for p in paths]


def summarize(records, cfg: ExperimentConfig | None = None) -> list[dict]:
    """Per-cell mean/std/min/max of each metric, canonically sorted."""
    cfg = cfg or ExperimentConfig()
    return summarize_rows(_rows_from_records(records, cfg))


def summarize_rows(rows) -> list[dict]:
    if not rows:
        raise ValueError("nothing to summarize")
    cells: dict[tuple, list[dict]] = {}
    for r in rows:
        cells.setdefault((r["algorithm"], r["problem"], int(r["dimension"])), []).append(r)
    summary = []
    for key in sorted(cells):
        group = cells[key]
        entry = {"algorithm": key[0], "problem": key[1], "dimension": key[2], "runs": len(group)}
        for metric in METRIC_FIELDS:
            vals = [float(g[metric]) for g in group]
            entry[f"{metric}_mean"] = statistics.fmean(vals)
            entry[f"{metric}_std"] = statistics.pstdev(vals) if len(vals) > 1 else 0.0
            entry[f"{metric}_min"] = min(vals)
            entry[f"{metric}_max"] = max(vals)
        summary.append(entry)
    return summary


def write_summary(out, summary: list[dict]) -> Path:
    out = Path(out)
    path = out / "summary.csv"
    with open(path, "w", newline="") as fh:
        fh.write(SUMMARY_HEADER + "\n")
        w = csv.DictWriter(fh, fieldnames=list(summary[0].keys()))
        w.writeheader()
        for row in summary:
            w.writerow({k: _fmt(v) for k, v in row.items()})
    for metric, name in (("igd", "table_igd.csv"), ("uniformity", "table_uniformity.csv")):
        write_table(out / name, summary, metric)
    return path


def write_table(path, summary: list[dict], metric: str) -> None:
    """Mean values laid out as algorithm/problem rows against dimension columns."""
    dims = sorted({s["dimension"] for s in summary})
    rows: dict[tuple[str, str], dict[int, float]] = {}
    for s in summary:
        rows.setdefault((s["algorithm"], s["problem"]), {})[s["dimension"]] = s[f"{metric}_mean"]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["algorithm", "problem"] + [f"D={d}" for d in dims])
        for (alg, prob), vals in sorted(rows.items()):
            w.writerow([alg, prob] + [f"{vals[d]:.4e}" if d in vals else "" for d in dims])


# --- plot data ------------------------------------------------------------

def cone_rays(cone: PreferenceCone, length: float, points: int = 10) -> np.ndarray:
    """Points on the two boundary rays of a 2-D cone, rows (side, x, y)."""
    v = cone.v / np.linalg.norm(cone.v)
    radii = np.linspace(length / points, length, points)
    rows = []
    for side in (-1.0, 1.0):
        a = side * cone.theta
        d = np.array([v[0] * math.cos(a) - v[1] * math.sin(a), v[0] * math.sin(a) + v[1] * math.cos(a)])
        for r in radii:
            rows.append((side, *(r * d)))
    return np.array(rows)


def emit_plot_data(
    out_dir,
    run_id: str,
    problem_name: str,
    dim: int,
    decisions,
    objectives,
    cone: PreferenceCone,
    reference_count: int = 200,
    wfg_k: int = 1,
) -> tuple[Path, Path]:
    """Objective scatter (solutions, ROI front, cone rays) and the dispersion table."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    F = np.atleast_2d(np.asarray(objectives, dtype=float))
    ref = _reference(problem_name, dim, wfg_k, cone, 10_000).points
    if reference_count < len(ref):
        ref = ref[np.unique(np.linspace(0, len(ref) - 1, reference_count).round().astype(int))]
    length = 1.2 * float(max(np.linalg.norm(ref, axis=1).max(), np.linalg.norm(F, axis=1).max()))
    rays = cone_rays(cone, length)
    obj_path = out_dir / f"{run_id}_objectives.csv"
    with open(obj_path, "w", newline="") as fh:
        fh.write(OBJECTIVE_HEADER + "\n")
        w = csv.writer(fh)
        w.writerow(["kind", "f1", "f2"])
        for f in F:
            w.writerow(["solution", _fmt(f[0]), _fmt(f[1])])
        for f in ref:
            w.writerow(["reference", _fmt(f[0]), _fmt(f[1])])
        for side, x, y in rays:
            w.writerow(["cone_lower" if side < 0 else "cone_upper", _fmt(x), _fmt(y)])
    disp_path = out_dir / f"{run_id}_dispersion.csv"
    write_dispersion_csv(disp_path, run_id, decisions)
    return obj_path, disp_path


def read_population_csv(path):
    with open(path, newline="") as fh:
        first = fh.readline().strip()
        if first != POP_HEADER:
            raise ValueError(f"{path}: unexpected header {first!r}")
        reader = csv.reader(fh)
        header = next(reader)
        data = [row for row in reader]
    fcols = [i for i, h in enumerate(header) if h.startswith("f")]
    xcols = [i for i, h in enumerate(header) if h.startswith("x")]
    rep = np.array([row[1] == "1" for row in data])
    F = np.array([[float(row[i]) for i in fcols] for row in data])
    X = np.array([[float(row[i]) for i in xcols] for row in data])
    return X, F, rep


def emit_all_plot_data(cfg: ExperimentConfig) -> list[Path]:
    """Plot data for every stored population under ``cfg.out`` (reported members only)."""
    out = Path(cfg.out)
    written = []
    for pop_path in sorted((out / "runs").glob("*/*_pop.csv")):
        cell = pop_path.parent.name
        alg, prob, dim = cell.rsplit("_", 2)
        X, F, rep = read_population_csv(pop_path)
        run_id = f"{cell}_{pop_path.name[: -len('_pop.csv')]}"
        written.extend(
            emit_plot_data(
                out / "plots", run_id, prob, int(dim[1:]), X[rep], F[rep], cfg.cone,
                cfg.plot_reference_count, cfg.wfg_k,
            )
        )
    return written

