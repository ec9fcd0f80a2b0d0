"""Ground truth for benchmarking: exhaustive optimum and LP relaxation bound."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from promomckp.dominance import build_profile
from promomckp.model import Assignment, Instance

DEFAULT_COMBO_LIMIT = 10**7


class BoundType(str, enum.Enum):
    EXACT = "EXACT"
    LP_UPPER = "LP_UPPER"


class OracleTooLarge(ValueError):
    """The enumeration space exceeds the combination limit; use lp_upper_bound."""


class OracleInfeasible(ValueError):
    """No one-item-per-customer combination satisfies the budget."""


@dataclass(frozen=True)
class OracleResult:
    bound_type: BoundType
    value: float
    assignment: Optional[Assignment] = None
    feasible: bool = True

    def to_dict(self) -> dict:
        return {"bound_type": self.bound_type.value, "value": self.value, "feasible": self.feasible}


def exhaustive_optimum(instance: Instance, combo_limit: int = DEFAULT_COMBO_LIMIT) -> OracleResult:
    """Enumerate every one-item-per-customer combination.

    Customers are enumerated row-major in arrival order with items sorted by
    promotion id, so the first maximum found is the lexicographically
    smallest promotion id vector among optimal solutions.
    """
    sizes = [len(o.items) for o in instance.offer_sets]
    combos = math.prod(sizes)
    if combos > combo_limit:
        raise OracleTooLarge(f"{combos} combinations exceed limit {combo_limit}; use lp_upper_bound")
    ordered = [sorted(o.items, key=lambda it: it.promotion_id) for o in instance.offer_sets]
    values = np.zeros(1)
    weights = np.zeros(1)
    for items in ordered:
        v = np.array([it.value for it in items])
        w = np.array([it.weight for it in items])
        values = (values[:, None] + v[None, :]).ravel()
        weights = (weights[:, None] + w[None, :]).ravel()
    feasible = weights <= instance.capacity
    if not feasible.any():
        raise OracleInfeasible("no combination satisfies the budget")
    masked = np.where(feasible, values, -np.inf)
    flat = int(np.argmax(masked))
    index = np.unravel_index(flat, sizes) if sizes else ()
    choices = {o.customer_id: items[k].promotion_id for o, items, k in zip(instance.offer_sets, ordered, index)}
    assignment = Assignment.from_choices(instance, choices)
    return OracleResult(BoundType.EXACT, assignment.total_value, assignment, True)


def lp_upper_bound(instance: Instance) -> OracleResult:
    """Linear relaxation optimum via greedy filling of hull increments.

    Every customer starts on its lightest dominant item. The remaining
    increments all have positive weight and, per customer, decreasing
    efficiency, so filling them by global efficiency order (the last one
    fractionally) solves the relaxation.
    """
    base_values, base_weights = [], []
    inc_v, inc_w = [], []
    for offer in instance.offer_sets:
        entries = build_profile(offer).entries
        base_values.append(entries[0].value)
        base_weights.append(entries[0].weight)
        for e in entries[1:]:
            inc_v.append(e.inc_value)
            inc_w.append(e.inc_weight)
    value = math.fsum(base_values)
    room = instance.capacity - math.fsum(base_weights)
    if room < 0:
        return OracleResult(BoundType.LP_UPPER, value, None, False)
    if inc_v:
        v = np.array(inc_v)
        w = np.array(inc_w)
        order = np.argsort(-v / w, kind="stable")
        v, w = v[order], w[order]
        cum_w = np.cumsum(w)
        full = int(np.searchsorted(cum_w, room, side="right"))
        value += math.fsum(v[:full])
        if full < len(v):
            used = cum_w[full - 1] if full else 0.0
            value += v[full] * (room - used) / w[full]
    return OracleResult(BoundType.LP_UPPER, float(value), None, True)
