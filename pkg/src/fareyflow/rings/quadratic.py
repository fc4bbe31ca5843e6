"""Rings of integers of imaginary quadratic fields of class number one.

Elements are stored in the basis ``1, omega`` with ``omega = (D + sqrt(D)) / 2``,
which is an integral basis for every fundamental discriminant ``D``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from ..errors import DomainError

SUPPORTED_DISCRIMINANTS = (-3, -4, -7, -8, -11)


def _check_disc(disc: int) -> None:
    if disc not in SUPPORTED_DISCRIMINANTS:
        raise DomainError(
            f"discriminant {disc} is not one of {SUPPORTED_DISCRIMINANTS}"
        )


def omega_norm(disc: int) -> int:
    return (disc * disc - disc) // 4


def reduced_shift(disc: int) -> int:
    """Integer k with omega = theta + k, theta the reduced generator."""
    return (disc - 1) // 2 if disc % 2 else disc // 2


def _mul(a1, b1, a2, b2, disc):
    nw = (disc * disc - disc) // 4
    return a1 * a2 - b1 * b2 * nw, a1 * b2 + a2 * b1 + b1 * b2 * disc


def _round_half_up(x: Fraction) -> int:
    return math.floor(x + Fraction(1, 2))


@dataclass(frozen=True, order=False)
class QuadInt:
    """The algebraic integer ``a + b*omega`` of discriminant ``disc``."""

    a: int
    b: int
    disc: int

    def __post_init__(self):
        _check_disc(self.disc)

    # construction helpers
    @classmethod
    def zero(cls, disc: int) -> QuadInt:
        return cls(0, 0, disc)

    @classmethod
    def one(cls, disc: int) -> QuadInt:
        return cls(1, 0, disc)

    @classmethod
    def omega(cls, disc: int) -> QuadInt:
        return cls(0, 1, disc)

    def _coerce(self, other) -> QuadInt:
        if isinstance(other, QuadInt):
            if other.disc != self.disc:
                raise DomainError("elements of different rings")
            return other
        if isinstance(other, int):
            return QuadInt(other, 0, self.disc)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadInt(self.a + o.a, self.b + o.b, self.disc)

    __radd__ = __add__

    def __neg__(self):
        return QuadInt(-self.a, -self.b, self.disc)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadInt(self.a - o.a, self.b - o.b, self.disc)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b = _mul(self.a, self.b, o.a, o.b, self.disc)
        return QuadInt(a, b, self.disc)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> QuadInt:
        if n < 0:
            raise DomainError("negative powers are not integral")
        result, base = QuadInt.one(self.disc), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conj(self) -> QuadInt:
        return QuadInt(self.a + self.b * self.disc, -self.b, self.disc)

    def norm(self) -> int:
        return self.a * self.a + self.a * self.b * self.disc + self.b * self.b * omega_norm(self.disc)

    def trace(self) -> int:
        return 2 * self.a + self.b * self.disc

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_unit(self) -> bool:
        return self.norm() == 1

    def __bool__(self):
        return not self.is_zero()

    def to_number(self) -> QuadNumber:
        return QuadNumber(Fraction(self.a), Fraction(self.b), self.disc)

    def __complex__(self):
        return complex(self.a + self.b * self.disc / 2, self.b * math.sqrt(-self.disc) / 2)

    def key(self) -> tuple[int, int]:
        """Ordering key ``(2 Re, 2 Im / sqrt|D|)``, integral and exact."""
        return (2 * self.a + self.b * self.disc, self.b)

    def exact_div(self, other: QuadInt) -> QuadInt:
        """Return ``self / other``; raise DomainError if not integral."""
        o = self._coerce(other)
        n = o.norm()
        if n == 0:
            raise DomainError("division by zero")
        num = self * o.conj()
        if num.a % n or num.b % n:
            raise DomainError(f"{other} does not divide {self}")
        return QuadInt(num.a // n, num.b // n, self.disc)

    def divides(self, other: QuadInt) -> bool:
        n = self.norm()
        if n == 0:
            return other.is_zero()
        num = other * self.conj()
        return num.a % n == 0 and num.b % n == 0

    def __divmod__(self, other):
        """Euclidean division with remainder of strictly smaller norm."""
        o = self._coerce(other)
        n = o.norm()
        if n == 0:
            raise DomainError("division by zero")
        num = self * o.conj()
        k = reduced_shift(self.disc)
        # exact quotient in the reduced basis 1, theta
        v = Fraction(num.b, n)
        u = Fraction(num.a, n) + v * k
        best = None
        for du in (-1, 0, 1):
            for dv in (-1, 0, 1):
                qv = _round_half_up(v) + dv
                qu = _round_half_up(u) + du
                q = QuadInt(qu - qv * k, qv, self.disc)
                r = self - q * o
                rn = r.norm()
                if best is None or rn < best[0]:
                    best = (rn, q, r)
        _, q, r = best
        if r.norm() >= n:
            raise AssertionError("Euclidean step failed")  # unreachable for supported D
        return q, r

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __repr__(self):
        return f"QuadInt({self.a}, {self.b}, D={self.disc})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}w"
        sign = "+" if self.b > 0 else "-"
        return f"{self.a}{sign}{abs(self.b)}w"


@dataclass(frozen=True)
class QuadNumber:
    """An element ``a + b*omega`` of the quadratic field, rational coordinates."""

    a: Fraction
    b: Fraction
    disc: int

    @classmethod
    def coerce(cls, x, disc: int) -> QuadNumber:
        if isinstance(x, QuadNumber):
            return x
        if isinstance(x, QuadInt):
            return x.to_number()
        if isinstance(x, (int, Fraction)):
            return cls(Fraction(x), Fraction(0), disc)
        raise TypeError(f"cannot coerce {type(x).__name__}")

    def _c(self, other):
        try:
            o = QuadNumber.coerce(other, self.disc)
        except TypeError:
            return NotImplemented
        if o.disc != self.disc:
            raise DomainError("elements of different fields")
        return o

    def __add__(self, other):
        o = self._c(other)
        if o is NotImplemented:
            return o
        return QuadNumber(self.a + o.a, self.b + o.b, self.disc)

    __radd__ = __add__

    def __neg__(self):
        return QuadNumber(-self.a, -self.b, self.disc)

    def __sub__(self, other):
        o = self._c(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._c(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._c(other)
        if o is NotImplemented:
            return o
        a, b = _mul(self.a, self.b, o.a, o.b, self.disc)
        return QuadNumber(a, b, self.disc)

    __rmul__ = __mul__

    def conj(self) -> QuadNumber:
        return QuadNumber(self.a + self.b * self.disc, -self.b, self.disc)

    def norm(self) -> Fraction:
        return self.a * self.a + self.a * self.b * self.disc + self.b * self.b * omega_norm(self.disc)

    def trace(self) -> Fraction:
        return 2 * self.a + self.b * self.disc

    def inverse(self) -> QuadNumber:
        n = self.norm()
        if n == 0:
            raise DomainError("division by zero")
        c = self.conj()
        return QuadNumber(c.a / n, c.b / n, self.disc)

    def __truediv__(self, other):
        o = self._c(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._c(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_integral(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1

    def to_int(self) -> QuadInt:
        if not self.is_integral():
            raise DomainError(f"{self} is not integral")
        return QuadInt(int(self.a), int(self.b), self.disc)

    def __eq__(self, other):
        if isinstance(other, (QuadInt, int, Fraction)):
            other = QuadNumber.coerce(other, self.disc)
        if not isinstance(other, QuadNumber):
            return NotImplemented
        return (self.a, self.b, self.disc) == (other.a, other.b, other.disc)

    def __hash__(self):
        return hash((self.a, self.b, self.disc))

    def __complex__(self):
        return complex(float(self.a) + float(self.b) * self.disc / 2,
                       float(self.b) * math.sqrt(-self.disc) / 2)


@lru_cache(maxsize=None)
def units(disc: int) -> tuple[QuadInt, ...]:
    """All units of the ring of integers, sorted by key."""
    _check_disc(disc)
    found = []
    for b in range(-2, 3):
        for a in range(-4, 5):
            x = QuadInt(a, b, disc)
            if x.norm() == 1:
                found.append(x)
    return tuple(sorted(found, key=QuadInt.key))


def canonical_associate(x: QuadInt) -> QuadInt:
    """The unit multiple of ``x`` with the largest key."""
    return max((u * x for u in units(x.disc)), key=QuadInt.key)


def quad_gcd(x: QuadInt, y: QuadInt) -> QuadInt:
    """A canonical generator of the ideal ``(x, y)``; zero if both vanish."""
    if x.disc != y.disc:
        raise DomainError("elements of different rings")
    while not y.is_zero():
        x, y = y, divmod(x, y)[1]
    if x.is_zero():
        return x
    return canonical_associate(x)


def quad_xgcd(x: QuadInt, y: QuadInt) -> tuple[QuadInt, QuadInt, QuadInt]:
    """Return ``(g, s, t)`` with ``s*x + t*y = g`` and ``g`` the canonical gcd."""
    disc = x.disc
    r0, r1 = x, y
    s0, s1 = QuadInt.one(disc), QuadInt.zero(disc)
    t0, t1 = QuadInt.zero(disc), QuadInt.one(disc)
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    g = canonical_associate(r0)
    u = g.exact_div(r0)
    return g, s0 * u, t0 * u


def trace_zero_generator(disc: int) -> QuadInt:
    """Generator ``tau0`` of the trace-zero sublattice of the ring."""
    if disc % 2:
        return QuadInt(-disc, 2, disc)
    return QuadInt(-disc // 2, 1, disc)


def kronecker(d: int, n: int) -> int:
    """Kronecker symbol ``(d / n)`` for ``n >= 1``."""
    if n <= 0:
        raise DomainError("kronecker symbol needs n >= 1")
    result = 1
    while n % 2 == 0:
        n //= 2
        if d % 2 == 0:
            return 0
        if d % 8 in (3, 5):
            result = -result
    # Jacobi symbol (d / n) for odd n
    a = d % n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0
