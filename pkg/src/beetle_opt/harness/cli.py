"""``beetle-opt`` command line.

Exit status: 0 on success, 1 for usage or configuration errors, 2 when a
run or file operation fails.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path

from ..benchmarks.rc import generate_synthetic_dataset, save_dataset
from .config import ConfigError, load_dataset_config, load_experiment_config
from .experiment import read_trials, run_experiment, summarize, summary_document, write_outputs

log = logging.getLogger("beetle_opt")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _cmd_run(args):
    config = load_experiment_config(args.config)
    if args.seed is not None:
        config = dataclasses.replace(
            config, experiment=dataclasses.replace(config.experiment, base_seed=args.seed))
    report = run_experiment(config, workers=args.workers)
    paths = write_outputs(report, args.out)
    for stats in report.summary.variants:
        print(f"{stats.label:>9}  mean={stats.mean:.6g}  sd={stats.sd:.6g}  "
              f"min={stats.min:.6g}  max={stats.max:.6g}  failures={stats.failures}")
    print(f"wrote {', '.join(str(p) for p in paths.values())}")


def _cmd_gen_data(args):
    cfg = load_dataset_config(args.config)
    dataset = generate_synthetic_dataset(cfg.truth, cfg.generation)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    save_dataset(dataset, out)
    print(f"wrote {out} ({len(dataset.forcing)} samples) and {out.with_suffix('.json')}")


def _cmd_summarize(args):
    rows = read_trials(args.trials)
    summary = summarize(rows, args.bins)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(summary_document(summary, bin_count=args.bins), indent=2,
                              sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote {out}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="beetle-opt", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="run a multi-trial experiment")
    run.add_argument("--config", required=True)
    run.add_argument("--out", required=True, help="output directory")
    run.add_argument("--workers", type=_positive_int, default=None)
    run.add_argument("--seed", type=int, default=None, help="override experiment.base_seed")
    run.set_defaults(func=_cmd_run)

    gen = sub.add_parser("gen-data", help="generate a synthetic RC dataset")
    gen.add_argument("--config", required=True)
    gen.add_argument("--out", required=True, help="CSV path; metadata goes next to it as .json")
    gen.set_defaults(func=_cmd_gen_data)

    summ = sub.add_parser("summarize", help="recompute statistics from trials.csv")
    summ.add_argument("--trials", required=True)
    summ.add_argument("--out", required=True)
    summ.add_argument("--bins", type=_positive_int, default=15)
    summ.set_defaults(func=_cmd_summarize)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except (ConfigError, UsageError) as exc:
        print(f"beetle-opt: config error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:
        print(f"beetle-opt: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
