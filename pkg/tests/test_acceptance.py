"""One test per acceptance criterion; each records a PASS/FAIL line.

Criteria 5-7 and 10 run the full default experiment matrix (180 runs at
1e5 evaluations) once per session. Set CONEDWU_WORKERS to spread it over
several processes.
"""

import math
import os
import time

import numpy as np
import pytest

import oracles
from conftest import VERDICTS, bookkept
from conedwu import harness
from conedwu.cone import PreferenceCone, dwu_penalty, front_penalty, penalize_population, penalized_front_level
from conedwu.domain import Population
from conedwu.dominance import nondominated_sort, raw_dominance, strength
from conedwu.dwu import c_w_d, dwu_select, pairwise_weights, uniformity, w_d
from conedwu.metrics import igd
from conedwu.problems import Problem, make_problem, sample_pf

PUBLISHED_IGD = {
    ("c-dwu", "dtlz2"): (2.9807e-03, 3.2606e-03, 3.3158e-03),
    ("c-dwu", "wfg4"): (9.4183e-03, 9.4628e-03, 1.0037e-02),
    ("c-dwu", "wfg9"): (1.0169e-02, 1.6987e-02, 1.8381e-02),
    ("c-nsgaii", "dtlz2"): (1.8003e-03, 1.9312e-03, 1.9006e-03),
    ("c-nsgaii", "wfg4"): (5.7448e-03, 5.6247e-03, 5.8095e-03),
    ("c-nsgaii", "wfg9"): (6.8577e-03, 9.4836e-03, 8.7864e-03),
}
DIMS = (5, 7, 9)


def verdict(number, name, ok, detail=""):
    line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else "")
    VERDICTS[number] = line
    print(line)
    assert ok, line


def close(a, b):
    return abs(a - b) <= 1e-12 * max(1.0, abs(b))


# --- 1 --------------------------------------------------------------------

def test_01_nondominated_sort_oracle():
    rng = np.random.default_rng(101)
    elapsed = 0.0
    mismatches = 0
    for _ in range(100):
        size = int(rng.integers(1, 201))
        # integer grid objectives force ties and duplicates
        F = rng.integers(0, 15, (size, 2)).astype(float) if rng.random() < 0.5 else rng.random((size, 2))
        start = time.perf_counter()
        got = nondominated_sort(F).as_sets()
        elapsed += time.perf_counter() - start
        mismatches += got != oracles.strip_sort(F.tolist())
    verdict(1, "non-dominated sort equals strip oracle", mismatches == 0 and elapsed < 5.0,
            f"{mismatches} mismatches, {elapsed:.3f}s")


# --- 2 --------------------------------------------------------------------

def test_02_dominance_and_weight_machinery():
    rng = np.random.default_rng(202)
    cone = PreferenceCone()
    bad = 0
    for trial in range(100):
        integer = trial % 2 == 0
        if integer:
            X = rng.integers(0, 10, (30, 4)).astype(float)
            F = rng.integers(1, 8, (30, 2)).astype(float)
        else:
            X, F = rng.random((30, 4)), rng.random((30, 2)) + 0.01
        pop = bookkept(X, F, cone)
        s_ref = oracles.strengths(F.tolist())
        d_ref = oracles.raw_dominances(F.tolist())
        bad += pop.strength.tolist() != s_ref or pop.raw_dominance.tolist() != d_ref
        bad += strength(F).tolist() != s_ref or raw_dominance(F).tolist() != d_ref
        W = pairwise_weights(pop.decisions, pop.raw_dominance)
        C = pairwise_weights(pop.decisions, pop.raw_dominance, pop.angular_distance, cone)
        for i in range(30):
            for j in range(30):
                if i == j:
                    continue
                wr = oracles.w_d(X[i], d_ref[i], X[j], d_ref[j])
                cr = oracles.c_w_d(X[i], d_ref[i], F[i], X[j], d_ref[j], F[j], cone.axis, cone.theta, cone.beta)
                exact_ok = W[i, j] == wr and w_d(pop[i], pop[j]) == wr if integer else close(W[i, j], wr)
                bad += not exact_ok
                bad += not (close(C[i, j], cr) and close(c_w_d(pop[i], pop[j], cone), cr))
    verdict(2, "strength, raw dominance, w_d, c_w_d match brute force", bad == 0, f"{bad} mismatches")


# --- 3 --------------------------------------------------------------------

def test_03_greedy_certificate():
    rng = np.random.default_rng(303)
    cone = PreferenceCone()
    failures = 0
    for _ in range(50):
        size = int(rng.integers(2, 41))
        k = int(rng.integers(2, min(10, size) + 1))
        X, F = rng.random((size, 5)), rng.random((size, 2)) + 0.01
        use_cone = rng.random() < 0.7
        pool = bookkept(X, F, cone if use_cone else None)
        sel = dwu_select(pool, k, cone if use_cone else None)
        W, chosen, seeds = sel.weights, sel.chosen, sel.seed_candidates
        a, b = chosen[:2]
        if len(seeds) >= 2:
            failures += any(W[a, b] < W[i, j] for i in seeds for j in seeds if i != j)
        else:
            failures += any(W[a, b] < W[a, j] for j in range(size) if j != a)
        for step in range(2, k):
            picked = chosen[:step]
            score = min(W[chosen[step], r] for r in picked)
            failures += score != sel.scores[step]
            failures += any(
                min(W[y, r] for r in picked) > score for y in range(size) if y not in chosen[: step + 1]
            )
        failures += len(set(chosen)) != k
    verdict(3, "greedy DWU steps satisfy the max-min certificate", failures == 0, f"{failures} violations")


# --- 4 --------------------------------------------------------------------

def test_04_penalty_values_and_reclassification():
    c = PreferenceCone(theta=0.3, alpha=0.3, beta=1.0)
    checks = [
        front_penalty(0.4, c) == 1,
        front_penalty(0.3 + math.log(2) / 0.3 + 1e-9, c) == 2,
        front_penalty(0.3 + math.log(3.5), PreferenceCone(theta=0.3, alpha=1.0)) == 3,
        penalized_front_level(1, 0.3, c) == 1,
        penalized_front_level(1, 0.4, c) == 2,
        penalized_front_level(2, 0.4, c) == 3,
        abs(dwu_penalty(0.3, c) - 1.0) <= 1e-12,
        abs(dwu_penalty(1.3, c) - math.e) <= 1e-12,
        abs(dwu_penalty(0.8, PreferenceCone(theta=0.3, beta=2.0)) - math.e) <= 1e-12,
    ]
    # six points: five on front 1 at growing angles, one behind on front 2
    angles = [math.pi / 4 + 0.7, math.pi / 4 + 0.45, math.pi / 4, math.pi / 4 - 0.45, math.pi / 4 - 0.7]
    F = np.array([(math.cos(a), math.sin(a)) for a in angles] + [(1.5 * math.cos(angles[1]), 1.5 * math.sin(angles[1]))])
    pop = Population(np.zeros((6, 1)), F)
    nondominated_sort(pop)
    penalize_population(pop, PreferenceCone(theta=0.3, alpha=2.0))
    checks.append(pop.front_level.tolist() == [1, 1, 1, 1, 1, 2])
    checks.append(pop.penalized_front_level.tolist() == [3, 2, 1, 2, 3, 3])
    verdict(4, "penalty unit values and front reclassification", all(checks), f"{sum(checks)}/{len(checks)} checks")


# --- full matrix (5, 6, 7, 10) --------------------------------------------

@pytest.fixture(scope="session")
def full_matrix(tmp_path_factory):
    out = tmp_path_factory.mktemp("matrix")
    cfg = harness.ExperimentConfig(out=str(out))
    workers = int(os.environ.get("CONEDWU_WORKERS", os.cpu_count() or 1))
    start = time.perf_counter()
    records = harness.run_matrix(cfg, workers=workers)
    elapsed = time.perf_counter() - start
    summary = {(s["algorithm"], s["problem"], s["dimension"]): s for s in harness.summarize(records, cfg)}
    return cfg, out, records, summary, elapsed


@pytest.mark.slow
def test_05_cone_feasibility(full_matrix):
    cfg, _, records, _, elapsed = full_matrix
    rates = {}
    for alg in cfg.algorithms:
        rates[alg] = float(np.mean([r.metrics.roi_membership_rate for r in records if r.algorithm == alg]))
    ok = len(records) == 180 and all(v >= 0.99 for v in rates.values()) and elapsed < 1800
    detail = ", ".join(f"{a} {v:.4f}" for a, v in rates.items()) + f", {len(records)} runs in {elapsed / 60:.1f} min"
    verdict(5, "mean ROI membership >= 0.99 for both algorithms", ok, detail)


@pytest.mark.slow
def test_06_igd_direction_and_magnitude(full_matrix):
    _, _, _, summary, _ = full_matrix
    wins = sum(
        summary[("c-nsgaii", p, d)]["igd_mean"] < summary[("c-dwu", p, d)]["igd_mean"]
        for p in ("dtlz2", "wfg4", "wfg9")
        for d in DIMS
    )
    ratios = [
        summary[(a, p, d)]["igd_mean"] / PUBLISHED_IGD[(a, p)][i]
        for (a, p) in PUBLISHED_IGD
        for i, d in enumerate(DIMS)
    ]
    anchor = summary[("c-nsgaii", "dtlz2", 5)]["igd_mean"]
    ok = wins >= 8 and all(0.1 <= r <= 10 for r in ratios) and anchor < 1e-2
    detail = f"C-NSGAII better in {wins}/9 cells, ratio to published in [{min(ratios):.2f}, {max(ratios):.2f}]"
    verdict(6, "IGD favors C-NSGAII within an order of magnitude", ok, detail)


@pytest.mark.slow
def test_07_uniformity_ratio(full_matrix):
    _, _, _, summary, _ = full_matrix
    ratios = [
        summary[("c-dwu", p, d)]["uniformity_mean"] / max(summary[("c-nsgaii", p, d)]["uniformity_mean"], 1e-300)
        for p in ("dtlz2", "wfg4", "wfg9")
        for d in DIMS
    ]
    verdict(7, "C-DWU uniformity >= 10x C-NSGAII per cell", min(ratios) >= 10, f"smallest ratio {min(ratios):.1f}")


# --- 8 --------------------------------------------------------------------

def test_08_metric_identities():
    rng = np.random.default_rng(808)
    ok = []
    ref = sample_pf(make_problem("dtlz2", 5), 500)
    ok.append(igd(ref, ref) == 0.0)
    for _ in range(50):
        R = rng.random((int(rng.integers(1, 60)), 2))
        S = rng.random((int(rng.integers(1, 20)), 2))
        bigger = np.vstack([S, rng.random((int(rng.integers(1, 10)), 2))])
        ok.append(igd(R, bigger) <= igd(R, S))
    X = rng.random((10, 4))
    ok.append(uniformity(np.vstack([X, X[3:4]])) == 0.0)
    verdict(8, "IGD identities and duplicated-point uniformity", all(ok), f"{sum(ok)}/{len(ok)} checks")


# --- 9 --------------------------------------------------------------------

def test_09_problem_correctness():
    rng = np.random.default_rng(909)
    worst = 0.0
    dtlz = make_problem("dtlz2", 7)
    F = dtlz.evaluate(np.column_stack([rng.random(200), np.full((200, 6), 0.5)]))
    circle = float(np.max(np.abs(np.sum(F**2, axis=1) - 1)))
    for name in ("wfg4", "wfg9"):
        for n in (5, 7, 9):
            p = make_problem(name, n)
            X = rng.random((100, n)) * p.upper
            got = p.evaluate(X)
            ref = np.array([getattr(oracles, name)(x.tolist(), p.k, p.m) for x in X])
            worst = max(worst, float(np.max(np.abs(got - ref))))
    nondominated = all(
        not any(oracles.dom(a, b) for a in pts for b in pts)
        for pts in (sample_pf(make_problem(nm, 5), 300).tolist() for nm in ("dtlz2", "wfg4", "wfg9"))
    )
    ok = circle <= 1e-9 and worst <= 1e-12 and nondominated
    verdict(9, "DTLZ2 front, WFG transcription, sampler non-domination", ok,
            f"circle {circle:.1e}, WFG max diff {worst:.1e}")


# --- 10 -------------------------------------------------------------------

@pytest.mark.slow
def test_10_determinism(full_matrix, tmp_path):
    cfg, out, _, _, _ = full_matrix
    same = True
    for alg in cfg.algorithms:
        for prob in cfg.problems:
            rec = harness.execute_run(cfg, alg, prob, 5, cfg.seed)
            harness.write_run(tmp_path, rec, cfg)
            cell = harness.cell_name(alg, prob, 5)
            for name in (f"{cfg.seed}.csv", f"{cfg.seed}_pop.csv"):
                same &= (tmp_path / "runs" / cell / name).read_bytes() == (out / "runs" / cell / name).read_bytes()
    verdict(10, "rerun cells give byte-identical per-run CSVs", same, "6 full-budget cells rerun")
