"""The Hurwitz order of Hamilton's quaternions over Q.

An element ``x0 + x1 i + x2 j + x3 k`` with all ``x_m`` integers or all
half-odd integers is stored by its doubled coordinates ``t_m = 2 x_m``, which
are integers of a common parity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

from ..errors import DomainError


def _qmul(s, t):
    a0, a1, a2, a3 = s
    b0, b1, b2, b3 = t
    return (
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    )


@dataclass(frozen=True)
class HurwitzQuat:
    """A Hurwitz quaternion given by doubled coordinates ``t``."""

    t: tuple[int, int, int, int]

    def __post_init__(self):
        t = tuple(int(v) for v in self.t)
        if len(t) != 4:
            raise DomainError("a quaternion has four coordinates")
        if len({v & 1 for v in t}) != 1:
            raise DomainError(f"doubled coordinates {t} have mixed parity")
        object.__setattr__(self, "t", t)

    @classmethod
    def from_coords(cls, x0, x1=0, x2=0, x3=0) -> HurwitzQuat:
        doubled = []
        for v in (x0, x1, x2, x3):
            d = Fraction(v) * 2
            if d.denominator != 1:
                raise DomainError(f"coordinate {v} is not a half-integer")
            doubled.append(int(d))
        return cls(tuple(doubled))

    @classmethod
    def one(cls) -> HurwitzQuat:
        return cls((2, 0, 0, 0))

    @classmethod
    def zero(cls) -> HurwitzQuat:
        return cls((0, 0, 0, 0))

    @property
    def coords(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(v, 2) for v in self.t)

    def _coerce(self, other):
        if isinstance(other, HurwitzQuat):
            return other
        if isinstance(other, int):
            return HurwitzQuat((2 * other, 0, 0, 0))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return HurwitzQuat(tuple(x + y for x, y in zip(self.t, o.t)))

    __radd__ = __add__

    def __neg__(self):
        return HurwitzQuat(tuple(-x for x in self.t))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return HurwitzQuat(tuple(x - y for x, y in zip(self.t, o.t)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return HurwitzQuat(tuple(v // 2 for v in _qmul(self.t, o.t)))

    def __rmul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self

    def conj(self) -> HurwitzQuat:
        t0, t1, t2, t3 = self.t
        return HurwitzQuat((t0, -t1, -t2, -t3))

    def norm(self) -> int:
        return sum(v * v for v in self.t) // 4

    def trace(self) -> int:
        return self.t[0]

    def is_zero(self) -> bool:
        return not any(self.t)

    def __bool__(self):
        return not self.is_zero()

    def is_unit(self) -> bool:
        return self.norm() == 1

    def key(self) -> tuple[int, int, int, int]:
        return self.t

    def right_divmod(self, b: HurwitzQuat) -> tuple[HurwitzQuat, HurwitzQuat]:
        """Return ``(q, r)`` with ``self = q*b + r`` and ``n(r) < n(b)``."""
        n = b.norm()
        if n == 0:
            raise DomainError("division by zero")
        num = _qmul(self.t, b.conj().t)  # 4 * self * conj(b), so x_m = num_m / (4n)
        q = _nearest_hurwitz(num, 4 * n)
        return q, self - q * b

    def left_divmod(self, b: HurwitzQuat) -> tuple[HurwitzQuat, HurwitzQuat]:
        """Return ``(q, r)`` with ``self = b*q + r`` and ``n(r) < n(b)``."""
        n = b.norm()
        if n == 0:
            raise DomainError("division by zero")
        num = _qmul(b.conj().t, self.t)
        q = _nearest_hurwitz(num, 4 * n)
        return q, self - b * q

    def right_divides(self, x: HurwitzQuat) -> bool:
        """True iff ``x = y * self`` for some Hurwitz ``y``."""
        n = self.norm()
        if n == 0:
            return x.is_zero()
        num = _qmul(x.t, self.conj().t)
        return _is_hurwitz_fraction(num, 4 * n)

    def left_divides(self, x: HurwitzQuat) -> bool:
        """True iff ``x = self * y`` for some Hurwitz ``y``."""
        n = self.norm()
        if n == 0:
            return x.is_zero()
        num = _qmul(self.conj().t, x.t)
        return _is_hurwitz_fraction(num, 4 * n)

    def right_exact_div(self, b: HurwitzQuat) -> HurwitzQuat:
        """Return ``y`` with ``self = y * b``."""
        n = b.norm()
        num = _qmul(self.t, b.conj().t)
        return _exact_fraction(num, 4 * n)

    def left_exact_div(self, b: HurwitzQuat) -> HurwitzQuat:
        """Return ``y`` with ``self = b * y``."""
        n = b.norm()
        num = _qmul(b.conj().t, self.t)
        return _exact_fraction(num, 4 * n)

    def __repr__(self):
        return "HurwitzQuat(" + ", ".join(str(c) for c in self.coords) + ")"

    def __str__(self):
        if all(v % 2 == 0 for v in self.t):
            return "[" + ",".join(str(v // 2) for v in self.t) + "]"
        return "[" + ",".join(f"{v}/2" for v in self.t) + "]"


def _is_hurwitz_fraction(num, den) -> bool:
    # num / den are the real coordinates; doubled coordinates are 2 num / den
    if any((2 * v) % den for v in num):
        return False
    return len({(2 * v // den) & 1 for v in num}) == 1


def _exact_fraction(num, den) -> HurwitzQuat:
    if den == 0:
        raise DomainError("division by zero")
    if not _is_hurwitz_fraction(num, den):
        raise DomainError("quotient is not a Hurwitz quaternion")
    return HurwitzQuat(tuple(2 * v // den for v in num))


def _nearest_hurwitz(num, den) -> HurwitzQuat:
    """Hurwitz quaternion nearest to ``num / den``; ties favour the smaller sum."""
    cands = []
    # nearest Lipschitz point: doubled coordinates even
    lip = tuple(2 * math.floor(Fraction(v, den) + Fraction(1, 2)) for v in num)
    # nearest point with half-odd coordinates
    half = tuple(2 * math.floor(Fraction(v, den)) + 1 for v in num)
    for cand in (lip, half):
        dist = sum((Fraction(c, 2) - Fraction(v, den)) ** 2 for c, v in zip(cand, num))
        cands.append((dist, sum(cand), cand))
    cands.sort()
    return HurwitzQuat(cands[0][2])


@lru_cache(maxsize=None)
def hurwitz_units() -> tuple[HurwitzQuat, ...]:
    """The 24 units of the Hurwitz order, sorted by key."""
    found = []
    for t in product((-2, 0, 2), repeat=4):
        if sum(v * v for v in t) == 4:
            found.append(HurwitzQuat(t))
    for t in product((-1, 1), repeat=4):
        found.append(HurwitzQuat(t))
    return tuple(sorted(found, key=HurwitzQuat.key))


def canonical_left_associate(x: HurwitzQuat) -> HurwitzQuat:
    """The left unit multiple ``u*x`` with the largest key."""
    return max((u * x for u in hurwitz_units()), key=HurwitzQuat.key)


def right_gcd(x: HurwitzQuat, y: HurwitzQuat) -> HurwitzQuat:
    """A canonical generator ``g`` of the left ideal ``O x + O y = O g``."""
    while not y.is_zero():
        x, y = y, x.right_divmod(y)[1]
    if x.is_zero():
        return x
    return canonical_left_associate(x)


HURWITZ_BASIS = (
    HurwitzQuat((1, 1, 1, 1)),
    HurwitzQuat((0, 2, 0, 0)),
    HurwitzQuat((0, 0, 2, 0)),
    HurwitzQuat((0, 0, 0, 2)),
)


def to_basis(x: HurwitzQuat) -> tuple[int, int, int, int]:
    """Integer coordinates of ``x`` in :data:`HURWITZ_BASIS`."""
    t0, t1, t2, t3 = x.t
    return (t0, (t1 - t0) // 2, (t2 - t0) // 2, (t3 - t0) // 2)


def from_basis(c) -> HurwitzQuat:
    c0, c1, c2, c3 = (int(v) for v in c)
    return HurwitzQuat((c0, c0 + 2 * c1, c0 + 2 * c2, c0 + 2 * c3))
