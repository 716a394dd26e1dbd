"""Command-line entry point.

Subcommands:
  solve      solve one model under one policy and print the loss report
  sweep      run a one-parameter sweep and write the result table as CSV
  replicate  run a replication preset and write its figure CSVs

Exit codes: 0 success, 1 usage error, 2 solver failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .experiments import (
    ConfigError,
    PRESETS,
    SweepSpec,
    build_model,
    parse_config,
    replicate,
    run_sweep,
    sweep_table_csv,
)
from .numerics import SolverError
from .solvers import optimize_rule, solve_commitment, solve_discretion, solve_rule
from .welfare import unconditional_loss


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit(2); we reserve 2 for solvers
        raise UsageError(message)


def _model_id(flag: str) -> str:
    return flag.replace("-", "_")


def _load_overrides(config_path: str | None) -> dict[str, float]:
    if config_path is None:
        return {}
    with open(config_path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def _parse_grid(text: str) -> tuple[float, ...]:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"--grid expects lo:hi:step, got {text!r}")
    try:
        lo, hi, step = (float(p) for p in parts)
    except ValueError:
        raise UsageError(f"--grid values must be decimal literals: {text!r}")
    if step <= 0 or hi < lo:
        raise UsageError(f"--grid requires lo <= hi and step > 0: {text!r}")
    count = int(np.floor((hi - lo) / step + 1e-9)) + 1
    return tuple(round(lo + i * step, 12) for i in range(count))


def _cmd_solve(args) -> int:
    overrides = _load_overrides(args.config)
    model_id = _model_id(args.model)
    model = build_model(model_id, overrides)
    if args.policy == "commitment":
        sol = solve_commitment(model)
    elif args.policy == "discretion":
        sol = solve_discretion(model)
    else:
        if args.phi is None:
            phi, sol = optimize_rule(model)
            print("optimized rule weights:", ", ".join(f"{p:.12g}" for p in phi))
        else:
            phi = tuple(float(p) for p in args.phi.split(","))
            sol = solve_rule(model, phi)
            print("rule weights:", ", ".join(f"{p:.12g}" for p in phi))
    report = unconditional_loss(sol, model)
    print(report)
    return 0


def _cmd_sweep(args) -> int:
    overrides = _load_overrides(args.config)
    model_id = _model_id(args.model)
    spec = SweepSpec(
        model_id=model_id,
        swept_params=((args.param, _parse_grid(args.grid)),),
        fixed_overrides=tuple(sorted(overrides.items())),
        output_path=args.out,
    )
    problems = spec.violations()
    if problems:
        raise UsageError("; ".join(problems))
    table = run_sweep(spec)
    path = sweep_table_csv(table, args.out)
    print(f"wrote {path} ({len(table.rows)} rows)")
    return 0


def _cmd_replicate(args) -> int:
    import os

    figure = _model_id(args.figure)
    if figure == "all":
        written = []
        for preset_id in PRESETS:
            written += replicate(preset_id, os.path.join(args.out, preset_id))
    else:
        if figure not in PRESETS:
            raise UsageError(f"unknown figure: {args.figure}")
        written = replicate(figure, args.out)
    for path in written:
        print(f"wrote {path}")
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="stabias", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="solve one model under one policy")
    solve.add_argument("--model", required=True, choices=["woodford", "liu-pappa"])
    solve.add_argument("--policy", required=True,
                       choices=["commitment", "discretion", "rule"])
    solve.add_argument("--phi", default=None,
                       help="rule weight(s), comma separated; omit to optimize")
    solve.add_argument("--config", default=None, help="key = value override file")
    solve.set_defaults(func=_cmd_solve)

    sweep = sub.add_parser("sweep", help="sweep one parameter over a grid")
    sweep.add_argument("--model", required=True, choices=["woodford", "liu-pappa"])
    sweep.add_argument("--param", required=True)
    sweep.add_argument("--grid", required=True, help="lo:hi:step, inclusive")
    sweep.add_argument("--config", default=None)
    sweep.add_argument("--out", required=True)
    sweep.set_defaults(func=_cmd_sweep)

    rep = sub.add_parser("replicate", help="run a replication preset")
    rep.add_argument("--figure", required=True,
                     choices=["fig2", "fig3", "fig4", "lp-alpha", "lp-phi", "lp-w2", "all"])
    rep.add_argument("--out", required=True)
    rep.set_defaults(func=_cmd_replicate)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except (UsageError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main(sys.argv[1:]))


if __name__ == "__main__":
    entry()
