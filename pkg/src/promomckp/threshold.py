"""Pool of observed increments and the efficiency angle threshold.

The efficiency angle function maps an angle to the average pooled weight of
increments at or above it (cumulative sum in decreasing-angle order divided
by the pool size). The threshold is the smallest pooled angle whose
function value fits the capacity share expected for the remaining
customers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np


class EmptyPoolError(ValueError):
    """Raised when building a function from a pool with no increments."""


class IncrementPool:
    """Single-writer store of (angle, weight) increments.

    Equal angles are merged by summing their weights. New increments are
    buffered and merged into the sorted store on :meth:`flush`, so appends
    stay cheap between rebuilds.
    """

    def __init__(self):
        self._angles = np.empty(0)  # ascending, unique
        self._weights = np.empty(0)
        self._pending: list[tuple[float, float]] = []
        self.pool_size = 0
        self.customers_seen = 0

    def add(self, increments: Iterable[tuple[float, float]]) -> "IncrementPool":
        """Add one customer's increments."""
        batch = list(increments)
        self._pending.extend(batch)
        self.pool_size += len(batch)
        self.customers_seen += 1
        return self

    def flush(self) -> None:
        if not self._pending:
            return
        new = np.array(self._pending, dtype=float)
        self._pending.clear()
        ang, inverse = np.unique(new[:, 0], return_inverse=True)
        wts = np.bincount(inverse, weights=new[:, 1], minlength=len(ang))
        pos = np.searchsorted(self._angles, ang)
        hit = pos < len(self._angles)
        hit[hit] = self._angles[pos[hit]] == ang[hit]
        if hit.any():
            np.add.at(self._weights, pos[hit], wts[hit])
        keep = ~hit
        self._angles = np.insert(self._angles, pos[keep], ang[keep])
        self._weights = np.insert(self._weights, pos[keep], wts[keep])

    def sorted_entries(self) -> tuple[np.ndarray, np.ndarray]:
        """Merged (angles, summed weights), ascending by angle."""
        self.flush()
        return self._angles.copy(), self._weights.copy()

    def __len__(self) -> int:
        return self.pool_size


def pool_add(pool: IncrementPool, increments: Iterable[tuple[float, float]]) -> IncrementPool:
    return pool.add(increments)


@dataclass(frozen=True)
class AngleFunction:
    """Piecewise efficiency angle function as parallel arrays.

    ``angles`` is strictly decreasing and ``cumulative[p]`` is the sum of
    ``weight / pool_size`` over entries ``0..p``.
    """

    angles: np.ndarray
    cumulative: np.ndarray
    pool_size: int
    customers_seen: int
    _suffix_min: np.ndarray = field(repr=False, compare=False)

    @property
    def entries(self) -> list[tuple[float, float]]:
        return list(zip(self.angles.tolist(), self.cumulative.tolist()))

    @property
    def items_per_customer(self) -> float:
        return self.pool_size / self.customers_seen


def build_function(pool: IncrementPool) -> AngleFunction:
    if pool.pool_size == 0:
        raise EmptyPoolError("cannot build an angle function from an empty pool")
    angles, weights = pool.sorted_entries()
    angles, weights = angles[::-1].copy(), weights[::-1]
    cumulative = np.cumsum(weights / pool.pool_size)
    # suffix minimum is non-decreasing, which makes the last qualifying
    # position binary-searchable even though cumulative itself is not monotone
    suffix_min = np.minimum.accumulate(cumulative[::-1])[::-1].copy()
    return AngleFunction(angles, cumulative, pool.pool_size, max(pool.customers_seen, 1), suffix_min)


def capacity_share(f: AngleFunction, capacity: float, i: int, horizon: int) -> float:
    """Per-pooled-item capacity bound the function is compared against."""
    remaining = horizon - i + 1
    return capacity / (f.items_per_customer * remaining)


def retrieve_threshold(f: AngleFunction, capacity: float, i: int, horizon: int) -> Optional[float]:
    """Smallest pooled angle whose function value is within the capacity share.

    ``i`` is the 1-based index of the current customer and ``horizon`` the
    expected number of customers. Returns ``None`` when no angle qualifies.
    """
    if not 1 <= i <= horizon:
        raise ValueError(f"step {i} outside 1..{horizon}")
    bound = capacity_share(f, capacity, i, horizon)
    k = int(np.searchsorted(f._suffix_min, bound, side="right"))
    if k == 0:
        return None
    return float(f.angles[k - 1])
