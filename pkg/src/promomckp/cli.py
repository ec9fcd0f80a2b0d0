"""Command line entry point: ``promomckp gen|solve|bench|oracle``."""

from __future__ import annotations

import argparse
import json
import os
import statistics
import sys

from promomckp.bench import BenchConfig, export_dynamics, run_bench
from promomckp.model import InstanceError, read_instance_csv, write_assignment_csv, write_instance_csv
from promomckp.oracle import DEFAULT_COMBO_LIMIT, OracleInfeasible, OracleTooLarge, exhaustive_optimum, lp_upper_bound
from promomckp.solvers import METHODS, POOL_WEIGHTS, SolverConfig, run_method
from promomckp.synthgen import DEFAULT_LEVELS, ParameterError, SimParams, generate, parse_levels

CONFIG_ENV = "PROMOMCKP_CONFIG"


def _shared(p: argparse.ArgumentParser) -> None:
    p.add_argument("--budget", type=float, default=None, help="knapsack capacity (default 0)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--threshold-batch", type=int, default=None, help="rebuild the angle function every N steps")
    p.add_argument("--pool-weights", choices=POOL_WEIGHTS, default=None)
    p.add_argument("--out", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="promomckp", description="Budget-constrained promotion assignment (MCKP).")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a synthetic instance CSV")
    g.add_argument("--customers", type=int, required=True)
    g.add_argument("--levels", default=",".join(str(d) for d in DEFAULT_LEVELS))
    g.add_argument("--params", default=None, help="JSON file with generator constants")
    _shared(g)

    s = sub.add_parser("solve", help="solve one instance with one method")
    s.add_argument("--input", required=True)
    s.add_argument("--method", choices=METHODS, default="online")
    s.add_argument("--trace", default=None, help="write the decision trace CSV (and summary JSON)")
    s.add_argument("--time-per-decision", action="store_true", help="report per-decision latency")
    _shared(s)

    b = sub.add_parser("bench", help="compare methods against an oracle")
    b.add_argument("--input", nargs="*", default=None, help="instance CSV files")
    b.add_argument("--synthetic", type=int, nargs="*", default=None, help="generate instances of these sizes")
    b.add_argument("--method", action="append", choices=METHODS, default=None, help="repeatable; default all")
    b.add_argument("--oracle", choices=("lp", "exhaustive", "none"), default=None)
    b.add_argument("--max-combos", type=int, default=None)
    b.add_argument("--levels", default=None)
    b.add_argument("--params", default=None)
    b.add_argument("--jobs", type=int, default=None)
    b.add_argument("--table", default=None, help="write the text table here (default: stdout)")
    b.add_argument("--config", default=None, help=f"JSON config (default: ${CONFIG_ENV})")
    b.add_argument("--no-timing", action="store_true", help="omit wall-clock fields from the JSON")
    _shared(b)

    o = sub.add_parser("oracle", help="exact optimum or LP upper bound")
    o.add_argument("--input", required=True)
    o.add_argument("--mode", choices=("exhaustive", "lp"), default="lp")
    o.add_argument("--max-combos", type=int, default=DEFAULT_COMBO_LIMIT)
    _shared(o)
    return parser


def _emit(text: str, path) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _budget(args) -> float:
    return 0.0 if args.budget is None else args.budget


def cmd_gen(args) -> int:
    levels = parse_levels(args.levels)
    seed = 0 if args.seed is None else args.seed
    if args.params:
        params = SimParams.from_json(args.params, seed=seed, discount_levels=levels)
    else:
        params = SimParams(discount_levels=levels, seed=seed)
    instance = generate(params, args.customers, _budget(args))
    write_instance_csv(instance, args.out or sys.stdout)
    return 0


def cmd_solve(args) -> int:
    instance = read_instance_csv(args.input, _budget(args))
    config = SolverConfig(
        threshold_batch=args.threshold_batch or 1,
        pool_weights=args.pool_weights or "incremental",
        time_decisions=args.time_per_decision,
    )
    assignment, trace = run_method(args.method, instance, config)
    record = {
        "method": args.method,
        "customers": len(instance),
        "budget": instance.capacity,
        "total_value": assignment.total_value,
        "total_weight": assignment.total_weight,
        "feasible": assignment.feasible(instance.capacity),
    }
    if args.out:
        write_assignment_csv(assignment, args.out)
    if args.trace:
        if trace is None:
            print(f"method {args.method} produces no trace", file=sys.stderr)
        else:
            record["dynamics"] = export_dynamics(trace, args.trace)
    if args.time_per_decision:
        if trace is None or not trace.decision_seconds:
            print(f"method {args.method} has no timed decision path", file=sys.stderr)
        else:
            secs = trace.decision_seconds
            record["median_decision_us"] = 1e6 * statistics.median(secs)
            record["max_decision_us"] = 1e6 * max(secs)
    print(json.dumps(record, indent=2, sort_keys=True))
    return 0


def load_bench_config(args) -> BenchConfig:
    data = {}
    path = args.config or os.environ.get(CONFIG_ENV)
    if path:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    overrides = {
        "inputs": args.input,
        "synthetic": args.synthetic,
        "methods": args.method,
        "oracle": args.oracle,
        "budget": args.budget,
        "seed": args.seed,
        "threshold_batch": args.threshold_batch,
        "pool_weights": args.pool_weights,
        "max_combos": args.max_combos,
        "levels": list(parse_levels(args.levels)) if args.levels else None,
        "params": args.params,
        "jobs": args.jobs,
    }
    data.update({k: v for k, v in overrides.items() if v is not None})
    return BenchConfig(**data)


def cmd_bench(args) -> int:
    config = load_bench_config(args)
    if not config.inputs and not config.synthetic:
        print("bench: nothing to do (give --input or --synthetic)", file=sys.stderr)
        return 2
    report = run_bench(config)
    _emit(report.to_json(timing=not args.no_timing), args.out)
    table = report.render_table()
    if args.table:
        _emit(table, args.table)
    elif args.out:
        sys.stdout.write(table)
    for d in report.datasets:
        if d.error:
            print(f"{d.dataset}: {d.error}", file=sys.stderr)
    return 1 if report.failed else 0


def cmd_oracle(args) -> int:
    instance = read_instance_csv(args.input, _budget(args))
    if args.mode == "lp":
        record = lp_upper_bound(instance).to_dict()
    else:
        try:
            record = exhaustive_optimum(instance, args.max_combos).to_dict()
        except OracleInfeasible as exc:
            record = {"bound_type": "EXACT", "value": None, "feasible": False, "error": str(exc)}
    _emit(json.dumps(record, sort_keys=True) + "\n", args.out)
    return 0 if record["feasible"] else 1


COMMANDS = {"gen": cmd_gen, "solve": cmd_solve, "bench": cmd_bench, "oracle": cmd_oracle}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (OSError, InstanceError, ParameterError, OracleTooLarge, ValueError) as exc:
        print(f"promomckp {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
