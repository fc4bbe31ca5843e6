"""Settings, classes and budgets for the five Farey families."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from ..errors import ConfigurationError
from ..rings.finite_field import _factor_prime_power
from ..rings.quadratic import SUPPORTED_DISCRIMINANTS, units


class Kind(str, Enum):
    STANDARD = "standard"
    COMPLEX = "complex"
    HEISENBERG = "heisenberg"
    QUATERNIONIC = "quaternionic"
    TREE = "tree"


_DELTA = {Kind.STANDARD: 1, Kind.COMPLEX: 2, Kind.HEISENBERG: 4, Kind.QUATERNIONIC: 10}


@dataclass(frozen=True)
class FareySetting:
    """One of the five geometries with its arithmetic parameters.

    ``t0`` is the truncation; for the tree it is the integer level ``n0``.
    """

    kind: Kind
    disc: int | None = None
    q: int | None = None
    t0: float = 0.0

    def __post_init__(self):
        kind = Kind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind in (Kind.COMPLEX, Kind.HEISENBERG):
            if self.disc not in SUPPORTED_DISCRIMINANTS:
                raise ConfigurationError(
                    f"{kind.value} needs a discriminant in {SUPPORTED_DISCRIMINANTS}, got {self.disc}"
                )
        elif self.disc is not None:
            raise ConfigurationError(f"{kind.value} takes no discriminant")
        if kind is Kind.TREE:
            if self.q is None:
                raise ConfigurationError("tree needs a field order q")
            try:
                _factor_prime_power(self.q)
            except ValueError as exc:
                raise ConfigurationError(str(exc)) from None
            if self.t0 != int(self.t0):
                raise ConfigurationError("tree truncation must be an integer level")
            object.__setattr__(self, "t0", int(self.t0))
        elif self.q is not None:
            raise ConfigurationError(f"{kind.value} takes no field order")

    @classmethod
    def standard(cls, t0: float = 0.0) -> FareySetting:
        return cls(Kind.STANDARD, t0=t0)

    @classmethod
    def complex(cls, disc: int, t0: float = 0.0) -> FareySetting:
        return cls(Kind.COMPLEX, disc=disc, t0=t0)

    @classmethod
    def heisenberg(cls, disc: int, t0: float = 0.0) -> FareySetting:
        return cls(Kind.HEISENBERG, disc=disc, t0=t0)

    @classmethod
    def quaternionic(cls, t0: float = 0.0) -> FareySetting:
        return cls(Kind.QUATERNIONIC, t0=t0)

    @classmethod
    def tree(cls, q: int, n0: int = 0) -> FareySetting:
        return cls(Kind.TREE, q=q, t0=n0)

    @property
    def delta(self) -> float:
        """Critical exponent of the lattice."""
        if self.kind is Kind.TREE:
            return math.log(self.q)
        return float(_DELTA[self.kind])

    @property
    def unit_count(self) -> int:
        if self.kind in (Kind.COMPLEX, Kind.HEISENBERG):
            return len(units(self.disc))
        if self.kind is Kind.QUATERNIONIC:
            return 24
        if self.kind is Kind.TREE:
            return self.q - 1
        return 2

    def label(self) -> str:
        if self.kind in (Kind.COMPLEX, Kind.HEISENBERG):
            return f"{self.kind.value}(D={self.disc})"
        if self.kind is Kind.TREE:
            return f"tree(q={self.q})"
        return self.kind.value

    def with_t0(self, t0) -> FareySetting:
        return FareySetting(self.kind, self.disc, self.q, t0)


@dataclass(frozen=True)
class FareyClass:
    """Canonical representative of one orbit of Farey points.

    ``numerator`` is a ring element, or the pair ``(a, alpha)`` in the
    Heisenberg and quaternionic kinds.  ``height`` is the exact integer height
    measure used for budgets: the denominator itself (standard), its norm
    (complex, Heisenberg, quaternionic) or ``q**deg`` (tree).
    """

    setting: FareySetting
    numerator: Any
    denominator: Any
    height: int
    canonical: bool = field(default=True, compare=False)

    def sort_key(self):
        return (self.height, _key(self.denominator), _key(self.numerator))


def _key(x):
    if isinstance(x, int):
        return (x,)
    if isinstance(x, tuple):
        return tuple(_key(v) for v in x)
    return x.key()


@dataclass(frozen=True)
class EnumBudget:
    """Height budget, optional shard and optional deterministic subsampling.

    A shard ``(lo, hi)`` selects the classes with ``lo < height <= hi``.
    ``subsample`` in (0, 1] keeps each class independently of the shard layout,
    decided by a hash of its canonical data and ``seed``.
    """

    max_height: int
    shard: tuple[int, int] | None = None
    subsample: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if int(self.max_height) != self.max_height or self.max_height < 1:
            raise ConfigurationError("budget height must be an integer >= 1")
        object.__setattr__(self, "max_height", int(self.max_height))
        if not 0.0 < self.subsample <= 1.0:
            raise ConfigurationError("subsampling probability must lie in (0, 1]")
        if self.shard is not None:
            lo, hi = self.shard
            if not 0 <= lo <= hi:
                raise ConfigurationError(f"bad shard {self.shard}")

    @property
    def lo(self) -> int:
        return 0 if self.shard is None else self.shard[0]

    @property
    def hi(self) -> int:
        return self.max_height if self.shard is None else min(self.shard[1], self.max_height)

    def admits(self, height: int) -> bool:
        return self.lo < height <= self.hi


def shard_bounds(max_height: int, shards: int, exponent: float = 2.0) -> list[tuple[int, int]]:
    """Split ``(0, max_height]`` into ``shards`` intervals of roughly equal work.

    Work up to height ``h`` is taken proportional to ``h**exponent``.
    """
    if shards < 1:
        raise ConfigurationError("shard count must be >= 1")
    cuts = [0]
    for k in range(1, shards):
        cut = int(max_height * (k / shards) ** (1.0 / exponent))
        cuts.append(max(cut, cuts[-1]))
    cuts.append(max_height)
    return [(lo, hi) for lo, hi in zip(cuts, cuts[1:])]
