"""Command line entry point.

Subcommands mirror the pipeline stages: simulate, ingest, sentiment,
select-k, train, report. Options override the config file, which
overrides built-in defaults. Exit codes: 0 on success, 1 for usage or
configuration errors, 2 for data errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import ConfigError, DataError
from .pipeline import (
    resolve_config,
    run_ingest,
    run_report,
    run_select_k,
    run_sentiment,
    run_simulate,
    run_train,
)

_STAGES = {
    "simulate": run_simulate,
    "ingest": run_ingest,
    "sentiment": run_sentiment,
    "select-k": run_select_k,
    "train": run_train,
    "report": run_report,
}


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; the pipeline
    # reserves 2 for data errors, so usage errors must exit 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def _parse_k_grid(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad --k-grid value {text!r}: {exc}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="negtopics", description=__doc__)
    sub = parser.add_subparsers(dest="stage", required=True)
    for name in _STAGES:
        p = sub.add_parser(name, add_help=True)
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--input", help="raw corpus path (JSON Lines)")
        p.add_argument("--out-dir", help="artifact directory")
        p.add_argument("--seed", type=int, help="global seed")
        p.add_argument("--workers", type=int, help="parallel workers")
        p.add_argument("--k", type=int, help="topic count")
        p.add_argument("--k-grid", help="comma-separated topic counts")
        p.add_argument("--alpha-sum", type=float, help="Dirichlet mass over topics")
        p.add_argument("--beta", type=float, help="topic-word smoothing")
        p.add_argument("--iters", type=int, help="Gibbs sweeps")
        p.add_argument("--train-frac", type=float, help="train split fraction")
        p.add_argument("--particles", type=int, help="held-out estimator particles")
        p.add_argument("--top-n", type=int, help="top words per topic")
        p.add_argument("--tau", type=float, help="attachment threshold")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        flags = {
            "input": args.input,
            "out_dir": args.out_dir,
            "seed": args.seed,
            "workers": args.workers,
            "k": args.k,
            "k_grid": _parse_k_grid(args.k_grid) if args.k_grid else None,
            "hyper.alpha_sum": args.alpha_sum,
            "hyper.beta": args.beta,
            "hyper.iterations": args.iters,
            "split.train_fraction": args.train_frac,
            "eval.particles": args.particles,
            "top_n": args.top_n,
            "tau": args.tau,
        }
        cfg = resolve_config(args.config, flags)
        stats = _STAGES[args.stage](cfg)
    except ConfigError as exc:
        print(f"negtopics: error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"negtopics: data error: {exc}", file=sys.stderr)
        return 2
    print(json.dumps({"stage": args.stage, **stats}, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
