"""Benchmark harness: run methods against an oracle and report optimality rates."""

from __future__ import annotations

import hashlib
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from promomckp.model import Instance, InstanceError, evaluate_assignment, read_instance_csv
from promomckp.oracle import (
    DEFAULT_COMBO_LIMIT,
    BoundType,
    OracleInfeasible,
    OracleResult,
    OracleTooLarge,
    exhaustive_optimum,
    lp_upper_bound,
)
from promomckp.solvers import METHODS, SolverConfig, SolveTrace, run_method
from promomckp.synthgen import DEFAULT_LEVELS, SimParams, generate

TIMING_KEYS = ("wall_clock_s",)
ORACLES = ("lp", "exhaustive", "none")


@dataclass
class BenchConfig:
    inputs: list[str] = field(default_factory=list)
    synthetic: list[int] = field(default_factory=list)
    methods: list[str] = field(default_factory=lambda: list(METHODS))
    oracle: str = "lp"
    budget: float = 0.0
    seed: int = 0
    threshold_batch: int = 1
    pool_weights: str = "incremental"
    max_combos: int = DEFAULT_COMBO_LIMIT
    levels: list[float] = field(default_factory=lambda: list(DEFAULT_LEVELS))
    params: Optional[str] = None
    jobs: int = 1

    def __post_init__(self):
        unknown = [m for m in self.methods if m not in METHODS]
        if unknown:
            raise ValueError(f"unknown methods {unknown}; expected a subset of {METHODS}")
        if len(set(self.methods)) != len(self.methods):
            raise ValueError("methods must not repeat")
        if self.oracle not in ORACLES:
            raise ValueError(f"oracle must be one of {ORACLES}")

    def digest(self) -> str:
        d = asdict(self)
        d.pop("jobs")
        return hashlib.sha256(json.dumps(d, sort_keys=True).encode()).hexdigest()[:16]

    def solver_config(self) -> SolverConfig:
        return SolverConfig(threshold_batch=self.threshold_batch, pool_weights=self.pool_weights)

    def sim_params(self) -> SimParams:
        if self.params:
            return SimParams.from_json(self.params, seed=self.seed, discount_levels=self.levels)
        return SimParams(discount_levels=tuple(self.levels), seed=self.seed)


@dataclass
class MethodResult:
    method: str
    total_value: float
    total_weight: float
    feasible: bool
    optimality_rate: Optional[float]
    rate_flag: Optional[str]
    wall_clock_s: float


@dataclass
class DatasetResult:
    dataset: str
    customers: int = 0
    oracle: Optional[dict] = None
    methods: list[MethodResult] = field(default_factory=list)
    error: Optional[str] = None


@dataclass
class BenchReport:
    metadata: dict
    datasets: list[DatasetResult]

    @property
    def failed(self) -> bool:
        return any(d.error for d in self.datasets)

    def to_dict(self, timing: bool = True) -> dict:
        out = {"metadata": self.metadata, "datasets": [asdict(d) for d in self.datasets]}
        if not timing:
            out = strip_timing(out)
        return out

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), indent=2, sort_keys=True) + "\n"

    def render_table(self) -> str:
        lines = []
        label = self.metadata["rate_label"]
        for d in self.datasets:
            lines.append(f"dataset {d.dataset} ({d.customers} customers)")
            if d.error:
                lines.append(f"  ERROR: {d.error}")
                continue
            if d.oracle:
                value = d.oracle["value"]
                shown = "n/a" if value is None else f"{value:.6g}"
                lines.append(f"  oracle {d.oracle['bound_type']}: {shown} (feasible={d.oracle['feasible']})")
            lines.append(f"  {'method':<8} {'value':>12} {'weight':>12} {'feasible':>8} {'rate':>10}  {'time_s':>7}")
            for m in d.methods:
                rate = f"{100 * m.optimality_rate:.2f}%" if m.optimality_rate is not None else (m.rate_flag or "-")
                lines.append(
                    f"  {m.method:<8} {m.total_value:>12.6g} {m.total_weight:>12.6g} {str(m.feasible):>8} {rate:>10}  {m.wall_clock_s:>7.3f}"
                )
        lines.append(f"rates: {label}")
        return "\n".join(lines) + "\n"


def strip_timing(obj):
    if isinstance(obj, dict):
        return {k: strip_timing(v) for k, v in obj.items() if k not in TIMING_KEYS}
    if isinstance(obj, list):
        return [strip_timing(v) for v in obj]
    return obj


def _run_oracle(instance: Instance, kind: str, max_combos: int) -> Optional[OracleResult]:
    if kind == "none":
        return None
    if kind == "exhaustive":
        return exhaustive_optimum(instance, max_combos)
    return lp_upper_bound(instance)


def _rate(value: float, oracle: Optional[OracleResult]) -> tuple[Optional[float], Optional[str]]:
    if oracle is None:
        return None, "no-oracle"
    if not oracle.feasible:
        return None, "oracle-infeasible"
    if not oracle.value > 0:
        return None, "nonpositive-denominator"
    return value / oracle.value, None


def bench_instance(name: str, instance: Instance, config: BenchConfig) -> DatasetResult:
    result = DatasetResult(name, len(instance))
    oracle = None
    try:
        oracle = _run_oracle(instance, config.oracle, config.max_combos)
    except OracleInfeasible as exc:
        result.oracle = {"bound_type": "EXACT", "value": None, "feasible": False, "note": str(exc)}
        oracle = OracleResult(BoundType.EXACT, math.nan, None, False)
    except OracleTooLarge as exc:
        result.error = str(exc)
        return result
    if oracle is not None and result.oracle is None:
        result.oracle = oracle.to_dict()
    solver_config = config.solver_config()
    for method in config.methods:
        t0 = time.perf_counter()
        assignment, _ = run_method(method, instance, solver_config)
        elapsed = time.perf_counter() - t0
        value, weight, feasible = evaluate_assignment(instance, assignment)
        rate, flag = _rate(value, oracle)
        result.methods.append(MethodResult(method, value, weight, feasible, rate, flag, elapsed))
    return result


def _dataset_task(spec: tuple[str, object], config: BenchConfig) -> DatasetResult:
    kind, ref = spec
    if kind == "file":
        name = Path(ref).stem
        try:
            instance = read_instance_csv(ref, config.budget)
        except (OSError, InstanceError) as exc:
            return DatasetResult(name, error=f"{type(exc).__name__}: {exc}")
    else:
        size = f"{ref // 1000}k" if ref % 1000 == 0 else str(ref)
        name = f"sim{size}{len(config.levels)}-seed{config.seed}"
        instance = generate(config.sim_params(), ref, config.budget)
    return bench_instance(name, instance, config)


def run_bench(config: BenchConfig) -> BenchReport:
    specs = [("file", p) for p in config.inputs] + [("synthetic", n) for n in config.synthetic]
    if config.jobs > 1 and len(specs) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            datasets = list(pool.map(_dataset_task, specs, [config] * len(specs)))
    else:
        datasets = [_dataset_task(s, config) for s in specs]
    metadata = {
        "budget": config.budget,
        "seed": config.seed,
        "oracle": config.oracle,
        "methods": list(config.methods),
        "threshold_batch": config.threshold_batch,
        "pool_weights": config.pool_weights,
        "config_digest": config.digest(),
        "rate_label": {"lp": "conservative (vs LP relaxation upper bound)", "exhaustive": "exact", "none": "none"}[
            config.oracle
        ],
    }
    return BenchReport(metadata, datasets)


# --- dynamics ----------------------------------------------------------------


def _std(values) -> Optional[float]:
    vals = [v for v in values if v is not None]
    if not vals:
        return None
    return float(np.std(vals))


def dynamics_summary(trace: SolveTrace) -> dict:
    n = len(trace.records)
    thresholds = trace.thresholds
    if n:
        start = int(0.2 * n)
        stop = max(start + 1, int(round(0.8 * n)))
        head = max(1, math.ceil(0.05 * n))
        cum_w = np.array([r.cum_weight for r in trace.records])
        final_cum_weight = float(cum_w[-1])
        final_remaining = trace.records[-1].remaining_capacity
        max_overshoot = float(max(0.0, (cum_w - trace.initial_capacity).max()))
    else:
        start = stop = head = 0
        final_cum_weight = max_overshoot = 0.0
        final_remaining = trace.initial_capacity
    middle_std = _std(thresholds[start:stop])
    return {
        "method": trace.method,
        "steps": n,
        "initial_capacity": trace.initial_capacity,
        "final_cum_weight": final_cum_weight,
        "final_remaining_capacity": final_remaining,
        "max_overshoot": max_overshoot,
        "convergence_window": middle_std if middle_std is not None else 0.0,
        "threshold_std_middle60": middle_std,
        "threshold_std_first5": _std(thresholds[:head]),
        "none_thresholds": sum(t is None for t in thresholds),
    }


def export_dynamics(trace: SolveTrace, out) -> dict:
    """Write the trace CSV to ``out`` and a summary next to it
    (``<stem>.summary.json``); returns the summary."""
    out = Path(out)
    trace.write_csv(out)
    summary = dynamics_summary(trace)
    out.with_suffix(".summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return summary
