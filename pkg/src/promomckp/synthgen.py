"""Synthetic discount campaigns.

For every customer and discount level ``D``:

* value (conversion uplift) ~ Normal(mean=A*D**2, variance=S*D**2)
* revenue uplift ~ Normal(mean=P*(Cm - D), variance=S_p) * (1 + value)
* weight = -revenue uplift

Level ``D = 0`` is the base item (0, 0). The default constants are not
fitted to any real data; they are picked so that most items land in the
positive-value/positive-weight quadrant with some mass in all four.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from promomckp.model import BASE_ITEM, Instance, Item, OfferSet

DEFAULT_LEVELS = tuple(round(0.05 * k, 2) for k in range(9))
BLOCK_SIZE = 4096


class ParameterError(ValueError):
    pass


@dataclass(frozen=True)
class SimParams:
    conv_scale: float = 0.4
    conv_var_scale: float = 0.05
    price: float = 100.0
    commission: float = 0.15
    revenue_var: float = 25.0
    discount_levels: tuple[float, ...] = field(default=DEFAULT_LEVELS)
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "discount_levels", tuple(float(d) for d in self.discount_levels))
        self.validate()

    def validate(self) -> None:
        levels = self.discount_levels
        if not levels or levels[0] != 0:
            raise ParameterError("discount_levels must start with 0")
        if any(b <= a for a, b in zip(levels, levels[1:])):
            raise ParameterError("discount_levels must be strictly increasing")
        if any(not 0 <= d <= 1 for d in levels):
            raise ParameterError("discount_levels must lie in [0, 1]")
        for name in ("conv_scale", "conv_var_scale", "price", "revenue_var"):
            if not getattr(self, name) > 0:
                raise ParameterError(f"{name} must be positive")
        if not 0 < self.commission <= 1:
            raise ParameterError("commission must lie in (0, 1]")

    def expected_value(self, d: float) -> float:
        return self.conv_scale * d * d

    def expected_weight(self, d: float) -> float:
        return -self.price * (self.commission - d) * (1.0 + self.expected_value(d))

    @classmethod
    def from_json(cls, path, **overrides) -> "SimParams":
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**data)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["discount_levels"] = list(self.discount_levels)
        return d


def sample_arrays(params: SimParams, num_customers: int) -> tuple[np.ndarray, np.ndarray]:
    """Draw (values, weights) of shape (num_customers, levels - 1).

    Customers are drawn in fixed-size blocks from spawned seed streams, so
    any block can be generated independently of the others.
    """
    if num_customers < 1:
        raise ParameterError("num_customers must be >= 1")
    d = np.asarray(params.discount_levels[1:])
    n_blocks = -(-num_customers // BLOCK_SIZE)
    streams = np.random.SeedSequence(params.seed).spawn(n_blocks)
    values, weights = [], []
    for b, ss in enumerate(streams):
        n = min(BLOCK_SIZE, num_customers - b * BLOCK_SIZE)
        rng = np.random.default_rng(ss)
        conv = rng.normal(params.conv_scale * d**2, np.sqrt(params.conv_var_scale * d**2), size=(n, len(d)))
        rev = rng.normal(params.price * (params.commission - d), np.sqrt(params.revenue_var), size=(n, len(d)))
        values.append(conv)
        weights.append(-rev * (1.0 + conv))
    return np.vstack(values), np.vstack(weights)


def generate(params: SimParams, num_customers: int, capacity: float = 0.0) -> Instance:
    values, weights = sample_arrays(params, num_customers)
    offers = []
    for cid in range(num_customers):
        row_v = values[cid].tolist()
        row_w = weights[cid].tolist()
        items = (BASE_ITEM,) + tuple(Item(k, v, w) for k, (v, w) in enumerate(zip(row_v, row_w), start=1))
        offers.append(OfferSet(cid, items))
    return Instance(tuple(offers), float(capacity))


def parse_levels(text: str) -> tuple[float, ...]:
    return tuple(float(x) for x in text.split(",") if x.strip())
