"""Resource bounds for the exhaustive searches.

Every enumeration in the package is exact and deterministic, so the only
protection against factorial blow-up is a hard bound checked up front.
The ``SKELCOV_BOUND`` environment variable overrides the defaults, either
with a single integer (applied to every count bound) or with a comma
separated list such as ``max_degree=8,max_betti=4``.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, fields, replace

from .errors import InvalidInput, ResourceBoundExceeded

ENV_VAR = "SKELCOV_BOUND"

_COUNT_FIELDS = ("max_group_order", "max_gluing", "max_automorphisms", "max_search")


@dataclass(frozen=True)
class Bounds:
    max_degree: int = 7
    max_betti: int = 3
    max_group_order: int = math.factorial(10)
    max_gluing: int = 10**6
    max_automorphisms: int = 10**5
    max_search: int = 10**7

    def check(self, name: str, value: int) -> None:
        limit = getattr(self, name)
        if value > limit:
            raise ResourceBoundExceeded(f"{name}: {value} exceeds bound {limit}")

    def with_overrides(self, value: str | None) -> Bounds:
        if not value:
            return self
        value = value.strip()
        if value.isdigit():
            return replace(self, **{k: int(value) for k in _COUNT_FIELDS})
        known = {f.name for f in fields(self)}
        updates = {}
        for item in value.split(","):
            key, sep, val = item.partition("=")
            key = key.strip()
            if not sep or key not in known or not val.strip().isdigit():
                raise InvalidInput(f"bad bound override {item!r}")
            updates[key] = int(val)
        return replace(self, **updates)


def default_bounds() -> Bounds:
    """Defaults with the environment override applied."""
    return Bounds().with_overrides(os.environ.get(ENV_VAR))


def resolve(bounds: Bounds | None) -> Bounds:
    return default_bounds() if bounds is None else bounds
