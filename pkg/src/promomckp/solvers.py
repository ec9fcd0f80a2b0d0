"""Assignment methods: online and offline MCKP plus the baselines.

All solvers return an :class:`Assignment` with exactly one promotion per
customer. The sequential ones (online, offline, greedy) also return a
:class:`SolveTrace` with one record per decision.
"""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass, field
from typing import Optional

from promomckp.dominance import DominantProfile, build_profile, dominant_items
from promomckp.model import BASE_ID, Assignment, Instance, Item, InstanceError, validate_instance
from promomckp.threshold import AngleFunction, IncrementPool, build_function, retrieve_threshold

TRACE_COLUMNS = (
    "step",
    "customer_id",
    "promotion_id",
    "value",
    "weight",
    "cum_value",
    "cum_weight",
    "remaining_capacity",
    "threshold_angle",
    "profile_len",
)

POOL_WEIGHTS = ("incremental", "raw")


@dataclass
class SolverConfig:
    threshold_batch: int = 1
    pool_weights: str = "incremental"
    horizon: Optional[int] = None
    time_decisions: bool = False

    def __post_init__(self):
        if self.threshold_batch < 1:
            raise ValueError("threshold_batch must be >= 1")
        if self.pool_weights not in POOL_WEIGHTS:
            raise ValueError(f"pool_weights must be one of {POOL_WEIGHTS}")


@dataclass(frozen=True)
class TraceRecord:
    step: int
    customer_id: int
    promotion_id: int
    value: float
    weight: float
    cum_value: float
    cum_weight: float
    remaining_capacity: float
    threshold_angle: Optional[float]
    profile_len: int


@dataclass
class SolveTrace:
    method: str
    initial_capacity: float
    records: list[TraceRecord] = field(default_factory=list)
    decision_seconds: list[float] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)

    def append(self, customer_id, item: Item, threshold, profile_len) -> TraceRecord:
        if self.records:
            last = self.records[-1]
            cum_v, cum_w, rem = last.cum_value, last.cum_weight, last.remaining_capacity
        else:
            cum_v, cum_w, rem = 0.0, 0.0, self.initial_capacity
        rec = TraceRecord(
            len(self.records) + 1,
            customer_id,
            item.promotion_id,
            item.value,
            item.weight,
            cum_v + item.value,
            cum_w + item.weight,
            rem - item.weight,
            threshold,
            profile_len,
        )
        self.records.append(rec)
        return rec

    @property
    def thresholds(self) -> list[Optional[float]]:
        return [r.threshold_angle for r in self.records]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(TRACE_COLUMNS)
        for r in self.records:
            writer.writerow(
                (
                    r.step,
                    r.customer_id,
                    r.promotion_id,
                    repr(r.value),
                    repr(r.weight),
                    repr(r.cum_value),
                    repr(r.cum_weight),
                    repr(r.remaining_capacity),
                    "" if r.threshold_angle is None else repr(r.threshold_angle),
                    r.profile_len,
                )
            )
        return buf.getvalue()

    def write_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            fh.write(self.to_csv())


def _check(instance: Instance) -> None:
    problems = validate_instance(instance)
    if problems:
        raise InstanceError("; ".join(problems[:5]))


def select_entry(profile: DominantProfile, threshold: Optional[float]) -> int:
    """Index of the smallest-angle dominant entry with angle >= threshold.

    Angles decrease along the profile, so this is the heaviest qualifying
    entry. Falls back to entry 0 (the lightest) when nothing qualifies.
    """
    if threshold is None:
        return 0
    entries = profile.entries
    for d in range(len(entries) - 1, -1, -1):
        if entries[d].angle >= threshold:
            return d
    return 0


def _increments(profile: DominantProfile, pool_weights: str) -> list[tuple[float, float]]:
    if pool_weights == "raw":
        return [(e.angle, e.weight) for e in profile.entries]
    return [(e.angle, e.inc_weight) for e in profile.entries]


def _threshold_loop(instance, config, method, next_function) -> tuple[Assignment, SolveTrace]:
    """Shared decision loop; ``next_function(i, profile)`` returns the angle
    function to use at step ``i`` (or None)."""
    horizon = config.horizon or len(instance)
    if horizon < len(instance):
        raise ValueError(f"horizon {horizon} smaller than number of customers {len(instance)}")
    trace = SolveTrace(method, instance.capacity)
    choices = {}
    remaining = instance.capacity
    timed = config.time_decisions
    for i, offer in enumerate(instance.offer_sets, start=1):
        t0 = time.perf_counter() if timed else 0.0
        profile = build_profile(offer)
        f = next_function(i, profile)
        theta = retrieve_threshold(f, remaining, i, horizon) if f is not None else None
        entry = profile.entries[select_entry(profile, theta)]
        if timed:
            trace.decision_seconds.append(time.perf_counter() - t0)
        item = Item(entry.promotion_id, entry.value, entry.weight)
        rec = trace.append(offer.customer_id, item, theta, len(profile))
        remaining = rec.remaining_capacity
        choices[offer.customer_id] = entry.promotion_id
    return Assignment.from_choices(instance, choices), trace


def solve_online(instance: Instance, config: Optional[SolverConfig] = None) -> tuple[Assignment, SolveTrace]:
    """Online MCKP: pool each arriving customer, refit, threshold, pick."""
    config = config or SolverConfig()
    _check(instance)
    pool = IncrementPool()
    state: dict[str, Optional[AngleFunction]] = {"f": None}

    def next_function(i, profile):
        pool.add(_increments(profile, config.pool_weights))
        if (i - 1) % config.threshold_batch == 0 or state["f"] is None:
            state["f"] = build_function(pool)
        return state["f"]

    return _threshold_loop(instance, config, "online", next_function)


def fit_offline_function(instance: Instance, pool_weights: str = "incremental") -> AngleFunction:
    pool = IncrementPool()
    for offer in instance.offer_sets:
        pool.add(_increments(build_profile(offer), pool_weights))
    return build_function(pool)


def solve_offline_mckp(instance: Instance, config: Optional[SolverConfig] = None) -> tuple[Assignment, SolveTrace]:
    """Offline MCKP: fit the angle function on all customers once, then run
    the same decision loop with live capacity and step counters."""
    config = config or SolverConfig()
    _check(instance)
    f = fit_offline_function(instance, config.pool_weights)
    return _threshold_loop(instance, config, "offline", lambda i, profile: f)


def solve_global(instance: Instance) -> Assignment:
    """Offer one promotion to everyone: the best budget-feasible shared id."""
    _check(instance)
    common = set.intersection(*(set(o.by_id) for o in instance.offer_sets)) if len(instance) else {BASE_ID}
    best_id, best_value = BASE_ID, None
    for pid in sorted(common):
        chosen = {o.customer_id: pid for o in instance.offer_sets}
        candidate = Assignment.from_choices(instance, chosen)
        if candidate.total_weight > instance.capacity:
            continue
        if best_value is None or candidate.total_value > best_value:
            best_id, best_value = pid, candidate.total_value
    return Assignment.from_choices(instance, {o.customer_id: best_id for o in instance.offer_sets})


def _argmax_value(items) -> Item:
    return min(items, key=lambda it: (-it.value, it.promotion_id))


def solve_local(instance: Instance) -> Assignment:
    """Per customer, the most valuable item with non-positive weight."""
    _check(instance)
    choices = {}
    for offer in instance.offer_sets:
        choices[offer.customer_id] = _argmax_value(it for it in offer.items if it.weight <= 0).promotion_id
    return Assignment.from_choices(instance, choices)


def solve_greedy(instance: Instance) -> tuple[Assignment, SolveTrace]:
    """Per arriving customer, the most valuable item that fits the remaining
    capacity; the lightest item when none fits."""
    _check(instance)
    trace = SolveTrace("greedy", instance.capacity)
    choices = {}
    remaining = instance.capacity
    for offer in instance.offer_sets:
        fitting = [it for it in offer.items if it.weight <= remaining]
        if fitting:
            item = _argmax_value(fitting)
        else:
            item = min(offer.items, key=lambda it: (it.weight, -it.value, it.promotion_id))
        rec = trace.append(offer.customer_id, item, None, len(dominant_items(offer)))
        remaining = rec.remaining_capacity
        choices[offer.customer_id] = item.promotion_id
    return Assignment.from_choices(instance, choices), trace


METHODS = ("global", "local", "greedy", "online", "offline")


def run_method(name: str, instance: Instance, config: Optional[SolverConfig] = None):
    """Dispatch by method name; returns (assignment, trace or None)."""
    if name == "online":
        return solve_online(instance, config)
    if name == "offline":
        return solve_offline_mckp(instance, config)
    if name == "greedy":
        return solve_greedy(instance)
    if name == "local":
        return solve_local(instance), None
    if name == "global":
        return solve_global(instance), None
    raise ValueError(f"unknown method {name!r}; expected one of {METHODS}")
