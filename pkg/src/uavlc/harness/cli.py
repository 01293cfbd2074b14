"""Command-line front end.

Subcommands cover the pipeline stages individually (``synth``, ``train``,
``predict``, ``plan``) and end to end (``sweep``, ``report``).  Exit
codes: 0 success, 1 usage error, 2 unreadable or inconsistent data,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from ..channel import InfeasibleGeometryError
from ..grids import (
    GridDomainError,
    GridFileError,
    GridSequence,
    IlluminationGrid,
    load_grid_sequence,
    save_grid_sequence,
    synth_sequence,
)
from ..optimizer import InfeasibleScenarioError, optimize
from ..predictor import (
    CheckpointError,
    DivergenceError,
    load_checkpoint,
    predict_next,
    save_checkpoint,
    train,
)
from .config import ConfigError, ExperimentConfig, default_lines, parse_config
from .pipeline import SWEEP_VARIABLES, _draw_users, _scenario, _watts_grid, run_pipeline, sweep
from .report import MetricsFileError, load_metrics, report

_DATA_ERRORS = (
    ConfigError,
    GridFileError,
    GridDomainError,
    CheckpointError,
    MetricsFileError,
    FileNotFoundError,
    IsADirectoryError,
    NotADirectoryError,
    PermissionError,
)
_NUMERICAL_ERRORS = (
    DivergenceError,
    InfeasibleScenarioError,
    InfeasibleGeometryError,
    FloatingPointError,
    OverflowError,
    ZeroDivisionError,
)


class _Parser(argparse.ArgumentParser):
    """argparse's default exit code for usage errors is 2; we need 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def _config_from(args) -> ExperimentConfig:
    if args.config:
        return parse_config(args.config)
    return ExperimentConfig()


def _cmd_synth(args) -> int:
    config = _config_from(args)
    if args.seed is not None:
        config = replace(config, seed=args.seed)
    seq = synth_sequence(config.synth_config(), config.seed)
    save_grid_sequence(seq, args.out)
    print(f"wrote {args.out}: {len(seq)} frames of {seq.side}x{seq.side}, "
          f"cell {seq.cell_size} m")
    return 0


def _cmd_train(args) -> int:
    config = _config_from(args)
    if args.data:
        seq = load_grid_sequence(args.data)
        if seq.side != config.grid_side:
            raise ConfigError(
                f"sequence side {seq.side} does not match configured side {config.grid_side}"
            )
    else:
        seq = synth_sequence(config.synth_config(), config.seed)
    pconfig = config.predictor_config()
    result = train([seq], pconfig, config.seed)
    save_checkpoint(args.out, pconfig, result.weights)
    first = result.losses[0] if result.losses else float("nan")
    last = result.losses[-1] if result.losses else float("nan")
    print(f"trained {pconfig.epochs} epochs: loss {first:.6g} -> {last:.6g}; "
          f"wrote {args.out}")
    return 0


def _cmd_predict(args) -> int:
    seq = load_grid_sequence(args.data)
    pconfig, weights = load_checkpoint(args.weights)
    if seq.side != pconfig.grid_side:
        raise ConfigError(
            f"sequence side {seq.side} does not match checkpoint side {pconfig.grid_side}"
        )
    if len(seq) < pconfig.seq_len:
        raise ConfigError(
            f"sequence has {len(seq)} frames; checkpoint needs {pconfig.seq_len}"
        )
    frame = predict_next(seq.frames[-pconfig.seq_len:], weights, pconfig)
    out = GridSequence(frame[None], seq.cell_size, seq.dt, seq.origin)
    save_grid_sequence(out, args.out)
    print(f"wrote {args.out}: forecast frame, mean level {float(frame.mean()):.6g}")
    return 0


def _cmd_plan(args) -> int:
    config = _config_from(args)
    seq = load_grid_sequence(args.grid)
    grid = _watts_grid(seq.frames[-1], config, seq.cell_size)
    scenario = _scenario(config, _draw_users(config), grid)
    solution = optimize(scenario, config.solver_options())

    lines = [f"total_power_w {solution.total_power:.17g}",
             f"iterations {solution.iterations}"]
    for i, pose in enumerate(solution.poses):
        lines.append(f"uav {i} x {pose.x:.17g} y {pose.y:.17g} "
                     f"altitude {pose.altitude:.17g} power_w {pose.power:.17g}")
    for j, uav in enumerate(solution.association.assign):
        lines.append(f"user {j} uav {int(uav)}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(text)
        print(f"wrote {args.out}: total power {solution.total_power:.6g} W")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_sweep(args, parser) -> int:
    config = _config_from(args)
    try:
        values = [float(v) for v in args.values.split(",") if v.strip()]
    except ValueError:
        parser.error(f"--values must be a comma-separated number list, got {args.values!r}")
    if not values:
        parser.error("--values must name at least one value")
    rows = sweep(config, args.variable, values)
    out_dir = args.out_dir or config.out_dir
    paths = report(rows, out_dir, name=f"sweep_{args.variable}")
    failed = [row for row in rows if row.status != "ok"]
    for row in failed:
        print(f"warning: {args.variable}={row.sweep_value:g}: {row.status}",
              file=sys.stderr)
    print(f"wrote {paths['csv']} and {paths['summary']} "
          f"({len(rows)} rows, {len(failed)} flagged)")
    return 0


def _cmd_run(args) -> int:
    config = _config_from(args)
    rows = run_pipeline(config)
    out_dir = args.out_dir or config.out_dir
    paths = report(rows, out_dir, name="run")
    print(f"wrote {paths['csv']} and {paths['summary']} ({len(rows)} rows)")
    return 0


def _cmd_report(args) -> int:
    rows = load_metrics(args.metrics)
    if not rows:
        raise MetricsFileError(f"{args.metrics!r} contains no rows")
    paths = report(rows, args.out_dir, name=args.name)
    print(f"wrote {paths['csv']} and {paths['summary']}")
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="uavlc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="key-value config file (defaults apply without it)")
        return p

    p = add("synth", "generate a synthetic grid-sequence file")
    p.add_argument("--out", required=True, help="output grid-sequence path")
    p.add_argument("--seed", type=int, help="override the config seed")
    p.set_defaults(func=_cmd_synth)

    p = add("train", "fit the forecaster and write a weight checkpoint")
    p.add_argument("--data", help="grid-sequence file (synthesized when omitted)")
    p.add_argument("--out", required=True, help="output checkpoint path")
    p.set_defaults(func=_cmd_train)

    p = add("predict", "forecast the frame after a grid sequence")
    p.add_argument("--data", required=True, help="grid-sequence file")
    p.add_argument("--weights", required=True, help="weight checkpoint")
    p.add_argument("--out", required=True, help="output grid-sequence path (one frame)")
    p.set_defaults(func=_cmd_predict)

    p = add("plan", "deploy the fleet against a grid file's last frame")
    p.add_argument("--grid", required=True, help="grid-sequence file")
    p.add_argument("--out", help="solution file (stdout when omitted)")
    p.set_defaults(func=_cmd_plan)

    p = add("run", "one full pipeline run; writes metrics and summary")
    p.add_argument("--out-dir", help="output directory (default from config)")
    p.set_defaults(func=_cmd_run)

    p = add("sweep", "pipeline runs across one variable; writes metrics and summary")
    p.add_argument("--variable", required=True, choices=SWEEP_VARIABLES)
    p.add_argument("--values", required=True, help="comma-separated values")
    p.add_argument("--out-dir", help="output directory (default from config)")
    p.set_defaults(func=lambda args, _p=parser: _cmd_sweep(args, _p))

    p = add("report", "rebuild CSV + summary from an existing metrics CSV")
    p.add_argument("--metrics", required=True, help="existing metrics CSV")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--name", default="metrics", help="output file stem")
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("config-keys", help="print every config key with its default")
    p.set_defaults(func=lambda _args: print("\n".join(default_lines())) or 0)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _DATA_ERRORS as exc:
        stage = getattr(exc, "pipeline_stage", None)
        where = f" [{stage}]" if stage else ""
        print(f"uavlc: data error{where}: {exc}", file=sys.stderr)
        return 2
    except _NUMERICAL_ERRORS as exc:
        stage = getattr(exc, "pipeline_stage", None)
        where = f" [{stage}]" if stage else ""
        print(f"uavlc: numerical failure{where}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main(argv=sys.argv[1:]))
