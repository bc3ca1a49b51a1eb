"""Command-line interface.

    panelbuck analyze           --model m.json --out results/
    panelbuck stability         --model m.json --out results/
    panelbuck optimize-eigenopt --model m.json --out results/ [--config c.json]
    panelbuck optimize-baseline --model m.json --out results/ [--config c.json]

analyze writes eigenvalues.csv and mode_shapes.csv; stability writes
stability.csv; the optimize verbs write history.csv, summary.json and the
plot series CSVs. Exit codes: 0 success, 1 usage/input error, 2 solver or
convergence error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import fields, replace
from pathlib import Path

from .errors import PanelBuckError, ParseError
from .fileio import (
    parse_model_file,
    write_eigenvalues_csv,
    write_history_csv,
    write_mode_shapes_csv,
    write_series_csvs,
    write_stability_csv,
    write_summary_json,
)
from .eigen import analyze
from .optimizer import (
    BaselineFDConfig,
    EigenOptConfig,
    OptimizationProblem,
    run_baseline_fd,
    run_eigenopt,
)
from .stability import stability_report

MODES = ("analyze", "stability", "optimize-eigenopt", "optimize-baseline")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_SOLVER = 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on usage errors; the contract here is 1
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _build_parser() -> _Parser:
    parser = _Parser(prog="panelbuck", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="mode", metavar="|".join(MODES))
    for mode in MODES:
        p = sub.add_parser(mode, add_help=True)
        p.error = parser.error  # type: ignore[method-assign]
        p.add_argument("--model", required=True, help="model description JSON")
        p.add_argument("--out", default=".", help="output directory (created)")
        p.add_argument("--modes", type=int, default=None, help="eigenvalue count override")
        p.add_argument("--config", default=None, help="optimizer config JSON")
        p.add_argument("--lambda-min", type=float, default=1.30, dest="lambda_min")
        if mode.startswith("optimize"):
            p.add_argument("--theta", type=float, default=None, help="move fraction per iteration")
            p.add_argument("--eta", type=float, default=None, help="relative thickness step")
            p.add_argument("--max-iters", type=int, default=None, dest="max_iters")
    return parser


def _load_config(cls, path, overrides: dict):
    cfg = cls()
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise ParseError(f"cannot read {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: invalid JSON: {exc.msg}") from exc
        names = {f.name for f in fields(cls)}
        unknown = sorted(set(doc) - names)
        if unknown:
            raise ParseError(f"{path}: unknown config field(s) {', '.join(unknown)}")
        cfg = replace(cfg, **doc)
    live = {k: v for k, v in overrides.items() if v is not None}
    if live:
        cfg = replace(cfg, **live)
    return cfg


def run_cli(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"panelbuck: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.mode is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE

    out = Path(args.out)
    try:
        model, design = parse_model_file(args.model)
    except ParseError as exc:
        print(f"panelbuck: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PanelBuckError as exc:
        print(f"panelbuck: error: {args.model}: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        out.mkdir(parents=True, exist_ok=True)
        if args.mode == "analyze":
            result = analyze(model, design, m=args.modes or 25)
            write_eigenvalues_csv(result.modes, out / "eigenvalues.csv")
            write_mode_shapes_csv(model, result.system.dof_map, result.modes,
                                  out / "mode_shapes.csv")
            print(f"lambda_1 = {result.modes.critical!r}; wrote {out}/eigenvalues.csv")
        elif args.mode == "stability":
            result = analyze(model, design, m=args.modes or 25)
            report = stability_report(model, design, result.modes)
            write_stability_csv(report, out / "stability.csv")
            print(f"wrote {out}/stability.csv")
        else:
            problem = OptimizationProblem(model, design, lambda_min=args.lambda_min)
            if args.mode == "optimize-eigenopt":
                cfg = _load_config(
                    EigenOptConfig, args.config,
                    {"theta0": args.theta, "eta": args.eta,
                     "max_iters": args.max_iters, "modes": args.modes},
                )
                history = run_eigenopt(problem, cfg)
            else:
                cfg = _load_config(
                    BaselineFDConfig, args.config,
                    {"max_iters": args.max_iters, "modes": args.modes},
                )
                history = run_baseline_fd(problem, cfg)
            write_history_csv(history, out / "history.csv")
            write_summary_json(history, out / "summary.json")
            write_series_csvs(history, out)
            final = history.final
            print(
                f"{history.termination}: iters={final.iter} "
                f"mass={final.mass!r} lambda_1={final.lambda_1!r}"
            )
            if history.termination == "error":
                print(f"panelbuck: error: {history.error}", file=sys.stderr)
                return EXIT_SOLVER
    except ParseError as exc:
        print(f"panelbuck: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PanelBuckError as exc:
        print(f"panelbuck: error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (TypeError, ValueError) as exc:
        print(f"panelbuck: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
