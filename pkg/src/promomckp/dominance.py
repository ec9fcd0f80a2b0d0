"""Dominant items, incremental quantities and efficiency angles.

The dominant items of an offer set are the vertices of its upper-left
convex hull in the (weight, value) plane. Walking the hull from the
lightest vertex, each step adds an increment (extra value, extra weight);
taking the first ``d + 1`` increments is the same as picking vertex ``d``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from promomckp.model import Item, OfferSet

THREE_HALVES_PI = 1.5 * math.pi
TWO_PI = 2.0 * math.pi


class ProfileEntry(NamedTuple):
    promotion_id: int
    value: float
    weight: float
    inc_value: float
    inc_weight: float
    angle: float


@dataclass(frozen=True)
class DominantProfile:
    customer_id: int
    entries: tuple[ProfileEntry, ...]

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def angles(self) -> list[float]:
        return [e.angle for e in self.entries]


def efficiency_angle(inc_value: float, inc_weight: float) -> float:
    """Angle of an increment, counterclockwise from the positive weight axis.

    Lighter and more valuable increments get larger angles. Output lies in
    (-pi/2, 3pi/2]; the zero increment maps to 3pi/2 and increments with
    negative value and non-positive weight are moved above pi.
    """
    if inc_value == 0 and inc_weight == 0:
        return THREE_HALVES_PI
    if inc_value < 0 and inc_weight <= 0:
        return TWO_PI + math.atan2(inc_value, inc_weight)
    return math.atan2(inc_value, inc_weight)


def dominant_items(offer_set: OfferSet) -> list[Item]:
    """Upper-left convex hull of the offer set, by increasing weight.

    Ties: for equal weights only the most valuable item survives, and among
    identical (value, weight) the lowest promotion id. A heavier item that is
    not strictly more valuable than a lighter survivor is dropped, as is any
    item on or below the segment joining two neighbours.
    """
    ordered = sorted(offer_set.items, key=lambda it: (it.weight, -it.value, it.promotion_id))
    hull: list[Item] = []
    for c in ordered:
        if hull and c.value <= hull[-1].value:
            continue
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            # slope(b, c) >= slope(a, b); both weight gaps are positive here
            if (c.value - b.value) * (b.weight - a.weight) >= (b.value - a.value) * (c.weight - b.weight):
                hull.pop()
            else:
                break
        hull.append(c)
    return hull


def profile_from_dominant(customer_id: int, dominant: list[Item]) -> DominantProfile:
    entries = []
    prev = None
    for item in dominant:
        if prev is None:
            dv, dw = item.value, item.weight
        else:
            dv, dw = item.value - prev.value, item.weight - prev.weight
        entries.append(ProfileEntry(item.promotion_id, item.value, item.weight, dv, dw, efficiency_angle(dv, dw)))
        prev = item
    return DominantProfile(customer_id, tuple(entries))


def build_profile(offer_set: OfferSet) -> DominantProfile:
    return profile_from_dominant(offer_set.customer_id, dominant_items(offer_set))
