"""
MIT License

Copyright (c) 2020 dspopt developers

Permission is hereby granted, free of charge, to any person obtaining a copy
of this software and associated documentation files (the "Software"), to deal
in the Software without restriction, including without limitation the rights
to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
copies of the Software, and to permit persons to whom the Software is
furnished to do so, subject to the following conditions:

The above copyright notice and this permission notice shall be included in all
copies or substantial portions of the Software.

THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
SOFTWARE.
"""
import argparse
import logging
import os
import sys

from .config import cfg
from .model.instance import validate
from .planner import InvalidInstanceError, TwoPhasePlanner
from .simulation.experiment import GREEDY, LAGRANGIAN
from .solver.simplex import SimplexError
from .utility import io, log
from .utility.synth import (
    GeneratorConfig,
    build_instance,
    draw_quality,
    generate_sweep,
    quality_record,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

TRAJECTORY_HEADER = ("iteration", "dual_value", "step_size", "grad_norm")
SWEEP_HEADER = ("budget", "mean_rel_profit", "stderr")


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("{!r} is not an integer".format(text))
    if value < 1:
        raise argparse.ArgumentTypeError("should be >= 1, got {}".format(value))
    return value


def _nonnegative_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("{!r} is not an integer".format(text))
    if value < 0:
        raise argparse.ArgumentTypeError("should be >= 0, got {}".format(value))
    return value


def _positive_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError("{!r} is not a number".format(text))
    if not value > 0:
        raise argparse.ArgumentTypeError("should be > 0, got {}".format(value))
    return value


def _solver_flags(planner, args):
    planner.max_iters = args.max_iters
    planner.step_scale = args.step_scale
    planner.seed = args.seed
    return planner


def _load_valid_instance(path):
    instance = io.read_instance(path)
    report = validate(instance)
    for warning in report.warnings:
        logger.info("%s: %s", path, warning)
    return instance, report


def _load_planner(args):
    planner = TwoPhasePlanner()
    planner.workers = args.workers
    planner.load_instance(args.instance)
    return planner


def cmd_generate(args):
    config = GeneratorConfig.from_preset(args.preset, seed=args.seed)
    sidecar = os.path.splitext(args.out)[0] + ".quality.json"
    io.check_outputs((args.out, sidecar), force=args.force)
    draws = draw_quality(config)
    instance = build_instance(config, draws)
    io.write_instance(args.out, instance, force=args.force)
    io.write_json(sidecar, quality_record(config, draws), force=args.force)
    print("{}: {!r}".format(args.out, instance))
    return EXIT_OK


def cmd_solve(args):
    io.check_outputs((args.out, args.trajectory), force=args.force)
    planner = _solver_flags(_load_planner(args), args)
    plan = planner.solve()
    planner.save_plan(args.out, force=args.force)
    if args.trajectory:
        io.write_csv(
            args.trajectory,
            TRAJECTORY_HEADER,
            plan.dual.trajectory,
            force=args.force,
        )
    print("primal: {:.6f}".format(plan.primal_value))
    print("dual bound: {:.6f}".format(plan.dual_bound))
    print("gap: {:.6f} (absolute {:.6f})".format(plan.gap, plan.gap_abs))
    return EXIT_OK


def cmd_simulate(args):
    runs_csv = os.path.join(args.out, "runs.csv")
    report_json = os.path.join(args.out, "report.json")
    io.check_outputs((runs_csv, report_json), force=args.force)
    planner = _load_planner(args)
    planner.base_seed = args.base_seed
    if args.challenger == LAGRANGIAN:
        if args.plan is None:
            raise ValueError("simulate: --plan is required")
        planner.load_plan(args.plan)
    result = planner.simulate(runs=args.runs, challenger=args.challenger)

    os.makedirs(args.out, exist_ok=True)
    header, rows = result.csv_rows()
    io.write_csv(runs_csv, header, rows, force=args.force)
    summary = io.sanitize(result.to_dict())
    io.write_json(report_json, summary, force=args.force)
    for metric in ("profit", "cost", "revenue"):
        key = "mean_rel_" + metric
        print("{}: {}".format(key, summary[key]))
    return EXIT_OK


def cmd_sweep(args):
    io.check_outputs((args.out,), force=args.force)
    config = GeneratorConfig.from_preset("sweep", seed=args.seed)
    budgets = args.budgets or cfg.PRESETS["sweep"].budgets
    planner = _solver_flags(TwoPhasePlanner(), args)
    planner.workers = args.workers
    planner.base_seed = args.base_seed
    rows = []
    for budget, instance in generate_sweep(config, budgets):
        planner.load_instance(instance)
        planner.solve()
        result = planner.simulate(runs=args.runs)
        mean, stderr = result.relative("profit")
        logger.info(
            "sweep: budget %g, relative profit %.4f +- %.4f",
            budget, mean, stderr,
        )
        rows.append((budget, mean, stderr))
    io.write_csv(args.out, SWEEP_HEADER, rows, force=args.force)
    for row in rows:
        print("{:g}: {:.4f} +- {:.4f}".format(*row))
    return EXIT_OK


def cmd_validate(args):
    _, report = _load_valid_instance(args.instance)
    print(report)
    return EXIT_OK if report.ok else EXIT_FAILURE


def _add_solver_flags(parser):
    parser.add_argument(
        "--max-iters",
        type=_positive_int,
        default=cfg.SOLVER.MAX_ITERS,
        help="subgradient iterations (default: %(default)s)",
    )
    parser.add_argument(
        "--step-scale",
        type=_positive_float,
        default=cfg.SOLVER.STEP_SCALE,
        help="step size scale, default 1 / ||g(0)||",
    )


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_nonnegative_int, default=0)
    common.add_argument("-o", "--out", required=True, help="output path")
    common.add_argument(
        "--force", action="store_true", help="overwrite existing outputs"
    )
    common.add_argument(
        "--workers",
        type=_positive_int,
        default=cfg.SIMULATION.WORKERS,
        help="processes for paired runs (default: %(default)s)",
    )

    parser = argparse.ArgumentParser(
        prog="dspopt",
        description="Budget-constrained bid and allocation planning for a DSP",
    )
    commands = parser.add_subparsers(dest="command", metavar="command")
    commands.required = True

    generate = commands.add_parser(
        "generate", parents=[common], help="write a synthetic instance"
    )
    generate.add_argument(
        "--preset", choices=sorted(cfg.PRESETS), default="example-a"
    )
    generate.set_defaults(func=cmd_generate)

    solve = commands.add_parser(
        "solve", parents=[common], help="two-phase plan for an instance"
    )
    solve.add_argument("instance")
    _add_solver_flags(solve)
    solve.add_argument("--trajectory", help="dual trajectory CSV path")
    solve.set_defaults(func=cmd_solve)

    simulate = commands.add_parser(
        "simulate", parents=[common], help="paired Lagrangian/greedy runs"
    )
    simulate.add_argument("instance")
    simulate.add_argument("--plan", help="plan JSON written by solve")
    simulate.add_argument(
        "--runs", type=_positive_int, default=cfg.SIMULATION.RUNS
    )
    simulate.add_argument(
        "--base-seed", type=_nonnegative_int, default=cfg.SIMULATION.BASE_SEED
    )
    simulate.add_argument(
        "--challenger", choices=(LAGRANGIAN, GREEDY), default=LAGRANGIAN
    )
    simulate.set_defaults(func=cmd_simulate)

    sweep = commands.add_parser(
        "sweep", parents=[common], help="relative profit per budget level"
    )
    _add_solver_flags(sweep)
    sweep.add_argument(
        "--runs", type=_positive_int, default=cfg.SIMULATION.RUNS
    )
    sweep.add_argument(
        "--base-seed", type=_nonnegative_int, default=cfg.SIMULATION.BASE_SEED
    )
    sweep.add_argument("--budgets", type=_positive_float, nargs="+")
    sweep.set_defaults(func=cmd_sweep)

    check = commands.add_parser("validate", help="check an instance file")
    check.add_argument("instance")
    check.set_defaults(func=cmd_validate)

    return parser


def main(argv=None):
    """
    Usage:
        dspopt generate --preset example-a --seed 7 -o a.json
        dspopt solve a.json -o plan.json --trajectory dual.csv
        dspopt simulate a.json --plan plan.json --runs 500 -o runs/
        dspopt sweep --runs 200 -o sweep.csv
        dspopt validate a.json
    """
    try:
        log.configure()
    except ValueError as error:
        print("dspopt: {}".format(error), file=sys.stderr)
        return EXIT_USAGE
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as error:
        return error.code

    try:
        return args.func(args)
    except io.InstanceFormatError as error:
        print("dspopt: {}".format(error), file=sys.stderr)
        return EXIT_FAILURE
    except (FileNotFoundError, FileExistsError, SimplexError) as error:
        print("dspopt: {}".format(error), file=sys.stderr)
        return EXIT_FAILURE
    except InvalidInstanceError as error:
        print(error.report)
        return EXIT_FAILURE
    except ValueError as error:
        print("dspopt: {}".format(error), file=sys.stderr)
        return EXIT_USAGE
