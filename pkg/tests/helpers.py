"""Independent reference implementations used as test oracles."""

import itertools
import math

from promomckp.model import BASE_ITEM, Instance, Item, OfferSet


def brute_force_dominant(items):
    """O(n^3) dominance / LP-dominance filter, sorted by increasing weight.

    Pairwise: ``a`` removes ``b`` when it is no heavier and no less valuable
    (exact duplicates keep the lower promotion id). Triples: ``b`` strictly
    between ``a`` and ``c`` in both weight and value is removed when the
    slope from ``b`` to ``c`` is at least the slope from ``a`` to ``b``.
    """
    keep = []
    for b in items:
        removed = False
        for a in items:
            if a is b:
                continue
            if (a.weight, a.value) == (b.weight, b.value):
                if a.promotion_id < b.promotion_id:
                    removed = True
            elif a.weight <= b.weight and a.value >= b.value:
                removed = True
            if removed:
                break
        if not removed:
            for a, c in itertools.permutations(items, 2):
                if a is b or c is b:
                    continue
                if a.weight < b.weight < c.weight and a.value < b.value < c.value:
                    if (c.value - b.value) / (c.weight - b.weight) >= (b.value - a.value) / (b.weight - a.weight):
                        removed = True
                        break
        if not removed:
            keep.append(b)
    return sorted(keep, key=lambda it: it.weight)


def strictly_dominated(items):
    """Items dominated in the plain sense: a lighter-or-equal, strictly more valuable item exists."""
    return [b for b in items if any(a.weight <= b.weight and a.value > b.value for a in items)]


def enumerate_optimum(instance):
    """Best feasible value by plain itertools enumeration (None if infeasible)."""
    best = None
    for combo in itertools.product(*(o.items for o in instance.offer_sets)):
        w = math.fsum(it.weight for it in combo)
        if w <= instance.capacity:
            v = math.fsum(it.value for it in combo)
            if best is None or v > best:
                best = v
    return best


def random_offer_set(rng, cid=0, max_items=12, integer=None):
    """Random valid offer set (base included). Integer grids exercise ties."""
    n = int(rng.integers(0, max_items))  # non-base items
    if integer is None:
        integer = bool(rng.integers(0, 2))
    if integer:
        vals = rng.integers(-5, 6, size=n).astype(float)
        wts = rng.integers(-5, 6, size=n).astype(float)
    else:
        vals = rng.normal(0.5, 2.0, size=n)
        wts = rng.normal(0.5, 3.0, size=n)
    items = (BASE_ITEM,) + tuple(Item(k + 1, float(v), float(w)) for k, (v, w) in enumerate(zip(vals, wts)))
    return OfferSet(cid, items)


def random_instance(rng, max_customers=8, max_items=5, budgets=(-2.0, 0.0, 2.0)):
    n = int(rng.integers(1, max_customers + 1))
    integer = bool(rng.integers(0, 2))
    offers = tuple(random_offer_set(rng, cid, max_items, integer) for cid in range(n))
    return Instance(offers, float(budgets[int(rng.integers(0, len(budgets)))]))
