"""Command line entry point: ``conedwu run | summarize | plot-data``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import harness


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key = value config file; flags override it")
    p.add_argument("--algorithms", help="comma list of c-dwu, c-nsgaii")
    p.add_argument("--problems", help="comma list of dtlz2, wfg4, wfg9")
    p.add_argument("--dims", help="comma list of decision dimensions")
    p.add_argument("--runs", type=int)
    p.add_argument("--pop", type=int, help="population size")
    p.add_argument("--evals", type=int, help="evaluation budget per run")
    p.add_argument("--theta", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--axis", help="cone axis, e.g. 1,1")
    p.add_argument("--seed", type=int, help="base seed; run r uses seed + r")
    p.add_argument("--out", help="output directory")
    p.add_argument(
        "--normalize-uniformity",
        action="store_true",
        default=None,
        help="measure decision distances on box-normalized variables",
    )
    p.add_argument("--workers", type=int, help="parallel processes for independent runs")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="conedwu", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("run", "execute the experiment matrix"),
        ("summarize", "fold per-run CSVs into summary tables"),
        ("plot-data", "emit objective-space and dispersion plot data"),
    ):
        _add_common(sub.add_parser(name, help=help_text))
    return parser


def config_from_args(args) -> harness.ExperimentConfig:
    overrides = {
        "algorithms": args.algorithms,
        "problems": args.problems,
        "dimensions": args.dims,
        "runs": args.runs,
        "population": args.pop,
        "evaluations": args.evals,
        "theta": args.theta,
        "alpha": args.alpha,
        "beta": args.beta,
        "axis": args.axis,
        "seed": args.seed,
        "out": args.out,
        "normalize_uniformity": args.normalize_uniformity,
        "workers": args.workers,
    }
    return harness.load_config(args.config, **overrides)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(message)s",
    )
    try:
        cfg = config_from_args(args)
    except ValueError as exc:
        print(f"conedwu: {exc}", file=sys.stderr)
        return 2

    if args.command == "run":
        records = harness.run_matrix(cfg)
        print(f"{len(records)} runs written to {Path(cfg.out) / 'runs'}")
        for row in harness.summarize(records, cfg):
            print(_summary_line(row))
    elif args.command == "summarize":
        rows = harness.load_run_rows(cfg.out)
        if not rows:
            print(f"conedwu: no run CSVs under {cfg.out}", file=sys.stderr)
            return 1
        summary = harness.summarize_rows(rows)
        path = harness.write_summary(cfg.out, summary)
        for row in summary:
            print(_summary_line(row))
        print(f"summary written to {path}")
    else:
        written = harness.emit_all_plot_data(cfg)
        print(f"{len(written)} plot files written to {Path(cfg.out) / 'plots'}")
    return 0


def _summary_line(row: dict) -> str:
    return (
        f"{row['algorithm']:9s} {row['problem']:6s} D={row['dimension']}  "
        f"IGD {row['igd_mean']:.4e}  U {row['uniformity_mean']:.4e}  "
        f"ROI {row['roi_membership_rate_mean']:.3f}  (n={row['runs']})"
    )


if __name__ == "__main__":
    raise SystemExit(main())
