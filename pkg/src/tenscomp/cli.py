"""Command-line entry points: complete, rank, mask."""

import argparse
import json
import sys

from .dtf import load_tensor, save_tensor
from .experiment import ExperimentConfig, run_experiment
from .solver import METHODS, SolverConfig, generate_mask
from .tsvd import n_tubal_rank

# SolverConfig fields settable from the command line / config file.
_SOLVER_KEYS = ("method", "gamma", "lam", "rho0", "mu", "eps", "max_iter", "seed")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="tenscomp",
        description="Low-rank tensor completion with adaptive MCP penalties.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    comp = sub.add_parser("complete", help="run a completion experiment")
    comp.add_argument("--config", help="JSON experiment config; flags override it")
    comp.add_argument("--input", help="observed tensor (DTF1)")
    comp.add_argument("--truth", help="ground truth tensor (DTF1)")
    comp.add_argument("--mask", help="observation mask (DTF1 of 0/1 entries)")
    comp.add_argument("--rate", type=float, help="random sampling rate in (0, 1]")
    comp.add_argument("--seed", type=int, help="mask sampling seed")
    comp.add_argument("--method", choices=METHODS)
    comp.add_argument("--gamma", type=float, help="initial penalty knot (> 1)")
    comp.add_argument(
        "--lambda", dest="lam", type=float, help="initial penalty threshold"
    )
    comp.add_argument("--rho0", type=float, help="initial ADMM penalty parameter")
    comp.add_argument("--mu", type=float, help="rho growth factor (> 1)")
    comp.add_argument("--eps", type=float, help="convergence tolerance")
    comp.add_argument("--max-iter", dest="max_iter", type=int)
    comp.add_argument("--out", help="completed tensor output path (DTF1)")
    comp.add_argument("--report", help="report output path (JSON)")
    comp.add_argument("--trace", help="convergence trace output path (CSV)")

    rank = sub.add_parser("rank", help="print the tubal ranks of all unfoldings")
    rank.add_argument("--input", required=True)

    mask = sub.add_parser("mask", help="generate a random observation mask")
    mask.add_argument("--shape", required=True, help="comma-separated extents")
    mask.add_argument("--rate", type=float, required=True)
    mask.add_argument("--seed", type=int, required=True)
    mask.add_argument("--out", required=True)

    return parser


def _experiment_config(args):
    data = {}
    if args.config:
        with open(args.config) as fh:
            data = json.load(fh)
    solver = dict(data.pop("solver", {}))

    flag_map = {
        "input": "input_path",
        "truth": "truth_path",
        "mask": "mask_path",
        "rate": "rate",
        "out": "out_path",
        "report": "report_path",
        "trace": "trace_path",
    }
    for flag, key in flag_map.items():
        value = getattr(args, flag)
        if value is not None:
            data[key] = value
    for key in _SOLVER_KEYS:
        value = getattr(args, key)
        if value is not None:
            solver[key] = value

    for required in ("input_path", "out_path", "report_path"):
        if not data.get(required):
            raise ValueError(f"missing required setting {required!r}")
    data["solver"] = SolverConfig(**solver)
    return ExperimentConfig(**data)


def _run_complete(args):
    cfg = _experiment_config(args)
    report = run_experiment(cfg)
    print(
        f"completed in {report.iterations} iterations "
        f"({report.wall_time_s:.2f} s); report: {cfg.report_path}"
    )
    return 0


def _run_rank(args):
    ranks = n_tubal_rank(load_tensor(args.input))
    print(" ".join(str(int(r)) for r in ranks))
    return 0


def _run_mask(args):
    shape = tuple(int(s) for s in args.shape.split(","))
    mask = generate_mask(shape, args.rate, args.seed)
    save_tensor(mask.astype(float), args.out)
    return 0


def main(argv=None):
    args = _build_parser().parse_args(argv)
    handlers = {"complete": _run_complete, "rank": _run_rank, "mask": _run_mask}
    try:
        return handlers[args.command](args)
    except Exception as exc:  # noqa: BLE001 - single reporting point for the CLI
        print(f"tenscomp: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
