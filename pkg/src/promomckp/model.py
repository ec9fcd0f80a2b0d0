"""Problem instances, assignments and feasibility for promotion MCKP.

Every customer owns an offer set of (value, weight) items. Value is the
incremental purchase probability of showing a promotion and weight is the
incremental net revenue loss. Both may be negative. The item with
promotion id 0 is the no-promotion option and is always (0, 0).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

BASE_ID = 0

INSTANCE_COLUMNS = ("customer_id", "promotion_id", "value", "weight")
ASSIGNMENT_COLUMNS = ("customer_id", "promotion_id")


class InstanceError(ValueError):
    """Raised when instance data cannot be ingested."""


class InvalidAssignmentError(ValueError):
    """Raised when an assignment does not match its instance."""


@dataclass(frozen=True)
class Item:
    promotion_id: int
    value: float
    weight: float

    @property
    def is_base(self) -> bool:
        return self.promotion_id == BASE_ID


BASE_ITEM = Item(BASE_ID, 0.0, 0.0)


@dataclass(frozen=True)
class OfferSet:
    """The eligible items of one customer.

    Construction does not enforce invariants so that malformed data can be
    reported by :func:`validate_instance`; use :func:`make_offer_set` for
    the normal ingestion path.
    """

    customer_id: int
    items: tuple[Item, ...]

    @cached_property
    def by_id(self) -> dict[int, Item]:
        out: dict[int, Item] = {}
        for item in self.items:
            out.setdefault(item.promotion_id, item)
        return out

    def get(self, promotion_id: int) -> Item:
        try:
            return self.by_id[promotion_id]
        except KeyError:
            raise InvalidAssignmentError(
                f"customer {self.customer_id} has no promotion {promotion_id}"
            ) from None

    def __len__(self) -> int:
        return len(self.items)


def make_offer_set(customer_id: int, items: Iterable[Item], *, strict: bool = False) -> OfferSet:
    """Build an offer set, inserting the base item when it is missing.

    With ``strict=True`` a missing base item raises instead.
    """
    items = tuple(items)
    for item in items:
        if not (math.isfinite(item.value) and math.isfinite(item.weight)):
            raise InstanceError(
                f"customer {customer_id} promotion {item.promotion_id}: non-finite value or weight"
            )
    if not any(item.promotion_id == BASE_ID for item in items):
        if strict:
            raise InstanceError(f"customer {customer_id}: missing base item")
        items = (BASE_ITEM,) + items
    return OfferSet(customer_id, items)


@dataclass(frozen=True)
class Instance:
    offer_sets: tuple[OfferSet, ...]
    capacity: float = 0.0

    def __len__(self) -> int:
        return len(self.offer_sets)

    @cached_property
    def by_customer(self) -> dict[int, OfferSet]:
        return {o.customer_id: o for o in self.offer_sets}

    def with_capacity(self, capacity: float) -> "Instance":
        return Instance(self.offer_sets, float(capacity))

    @property
    def max_abs_weight(self) -> float:
        return max((abs(it.weight) for o in self.offer_sets for it in o.items), default=0.0)


@dataclass(frozen=True)
class Assignment:
    """One chosen promotion per customer, with the resulting totals."""

    choices: Mapping[int, int]
    total_value: float
    total_weight: float

    @classmethod
    def from_choices(cls, instance: Instance, choices: Mapping[int, int]) -> "Assignment":
        total_value, total_weight, _ = evaluate_assignment(instance, choices)
        return cls(dict(choices), total_value, total_weight)

    def feasible(self, capacity: float) -> bool:
        return self.total_weight <= capacity


def all_base(instance: Instance) -> Assignment:
    return Assignment({o.customer_id: BASE_ID for o in instance.offer_sets}, 0.0, 0.0)


def validate_instance(instance: Instance) -> list[str]:
    """Return a list of human readable invariant violations (empty if valid)."""
    problems = []
    if not math.isfinite(instance.capacity):
        problems.append("instance: capacity is not finite")
    seen_customers = set()
    for offer in instance.offer_sets:
        cid = offer.customer_id
        if cid in seen_customers:
            problems.append(f"customer {cid}: duplicate customer id")
        seen_customers.add(cid)
        if not offer.items:
            problems.append(f"customer {cid}: empty offer set")
            continue
        ids = [it.promotion_id for it in offer.items]
        for pid in sorted({p for p in ids if ids.count(p) > 1}):
            problems.append(f"customer {cid}: duplicate promotion {pid}")
        if BASE_ID not in ids:
            problems.append(f"customer {cid}: missing base item")
        for it in offer.items:
            if not (math.isfinite(it.value) and math.isfinite(it.weight)):
                problems.append(f"customer {cid}: promotion {it.promotion_id} has non-finite value or weight")
            elif it.promotion_id == BASE_ID and (it.value != 0 or it.weight != 0):
                problems.append(f"customer {cid}: base item must be (0, 0)")
    return problems


def evaluate_assignment(instance: Instance, assignment) -> tuple[float, float, bool]:
    """Sum value and weight of the chosen items and check the budget.

    ``assignment`` is an :class:`Assignment` or a plain customer -> promotion
    mapping. Sums are compensated, so the result does not depend on
    customer order.
    """
    choices = assignment.choices if isinstance(assignment, Assignment) else assignment
    lookup = instance.by_customer
    unknown = [c for c in choices if c not in lookup]
    if unknown:
        raise InvalidAssignmentError(f"unknown customers: {unknown[:5]}")
    missing = [c for c in lookup if c not in choices]
    if missing:
        raise InvalidAssignmentError(f"unassigned customers: {missing[:5]}")
    chosen = [lookup[c].get(p) for c, p in choices.items()]
    total_value = math.fsum(it.value for it in chosen)
    total_weight = math.fsum(it.weight for it in chosen)
    return total_value, total_weight, total_weight <= instance.capacity


# --- CSV ---------------------------------------------------------------------


def read_instance_csv(path, capacity: float = 0.0, *, strict: bool = False) -> Instance:
    """Read the ``customer_id,promotion_id,value,weight`` format.

    Rows of one customer may be scattered; customers keep first-appearance
    order.
    """
    grouped: dict[int, list[Item]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or any(c not in reader.fieldnames for c in INSTANCE_COLUMNS):
            raise InstanceError(f"{path}: header must contain {','.join(INSTANCE_COLUMNS)}")
        for lineno, row in enumerate(reader, start=2):
            try:
                cid = int(row["customer_id"])
                item = Item(int(row["promotion_id"]), float(row["value"]), float(row["weight"]))
            except (TypeError, ValueError) as exc:
                raise InstanceError(f"{path}:{lineno}: {exc}") from None
            grouped.setdefault(cid, []).append(item)
    offers = tuple(make_offer_set(cid, items, strict=strict) for cid, items in grouped.items())
    instance = Instance(offers, float(capacity))
    problems = validate_instance(instance)
    if problems:
        raise InstanceError(f"{path}: " + "; ".join(problems[:5]))
    return instance


def write_instance_csv(instance: Instance, dest) -> None:
    """Write to a path, or to an open text handle such as ``sys.stdout``."""
    if hasattr(dest, "write"):
        _write_instance_rows(instance, dest)
        return
    with open(dest, "w", newline="", encoding="utf-8") as fh:
        _write_instance_rows(instance, fh)


def _write_instance_rows(instance: Instance, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(INSTANCE_COLUMNS)
    for offer in instance.offer_sets:
        for it in offer.items:
            writer.writerow((offer.customer_id, it.promotion_id, repr(it.value), repr(it.weight)))


def write_assignment_csv(assignment: Assignment, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(ASSIGNMENT_COLUMNS)
        for cid, pid in assignment.choices.items():
            writer.writerow((cid, pid))


def read_assignment_csv(path) -> dict[int, int]:
    with open(path, newline="", encoding="utf-8") as fh:
        return {int(r["customer_id"]): int(r["promotion_id"]) for r in csv.DictReader(fh)}


def instance_from_lists(offers: Iterable[Iterable[tuple[float, float]]], capacity: float = 0.0) -> Instance:
    """Convenience constructor: one list of (value, weight) per customer.

    Promotion ids are 1..n in list order; the base item is added.
    """
    sets = []
    for cid, pairs in enumerate(offers):
        items = [Item(k, float(v), float(w)) for k, (v, w) in enumerate(pairs, start=1)]
        sets.append(make_offer_set(cid, items))
    return Instance(tuple(sets), float(capacity))
