"""Finite fields GF(q) and the polynomial rings GF(q)[Y].

Field elements are integers ``0 .. q-1``. For a prime power ``q = p^e`` the
integer ``x`` encodes the polynomial with base-``p`` digits of ``x`` as
coefficients, reduced modulo a fixed irreducible polynomial of degree ``e``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from ..errors import DomainError


def _factor_prime_power(q: int) -> tuple[int, int]:
    if q < 2:
        raise DomainError(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise DomainError(f"{q} is not a prime power")
    return p, e


class GF:
    """Arithmetic tables for the field with ``q`` elements."""

    def __init__(self, q: int):
        p, e = _factor_prime_power(q)
        self.q, self.p, self.e = q, p, e
        digits = [[(x // p**m) % p for m in range(e)] for x in range(q)]
        modulus = _irreducible(p, e)
        add = np.zeros((q, q), dtype=np.int64)
        mul = np.zeros((q, q), dtype=np.int64)
        for x in range(q):
            for y in range(q):
                add[x, y] = sum(((digits[x][m] + digits[y][m]) % p) * p**m for m in range(e))
                mul[x, y] = _encode(_polymulmod(digits[x], digits[y], modulus, p), p)
        self.add = add
        self.mul = mul
        self.neg = np.array([int(np.nonzero(add[x] == 0)[0][0]) for x in range(q)])
        inv = np.zeros(q, dtype=np.int64)
        for x in range(1, q):
            inv[x] = int(np.nonzero(mul[x] == 1)[0][0])
        self.inv = inv

    def units(self) -> range:
        return range(1, self.q)

    def __repr__(self):
        return f"GF({self.q})"


def _encode(coeffs, p):
    return sum(c * p**m for m, c in enumerate(coeffs))


def _polymulmod(a, b, modulus, p):
    e = len(modulus) - 1
    prod = [0] * (len(a) + len(b))
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    # modulus is monic of degree e
    for deg in range(len(prod) - 1, e - 1, -1):
        c = prod[deg]
        if c:
            for m in range(e + 1):
                prod[deg - e + m] = (prod[deg - e + m] - c * modulus[m]) % p
    return (prod + [0] * e)[:e]


def _irreducible(p: int, e: int):
    """Smallest monic irreducible polynomial of degree ``e`` over GF(p)."""
    if e == 1:
        return [0, 1]
    for low in product(range(p), repeat=e):
        poly = list(low) + [1]
        if poly[0] == 0:
            continue
        if not any(_has_factor(poly, d, p) for d in range(1, e // 2 + 1)):
            return poly
    raise AssertionError("no irreducible polynomial found")


def _has_factor(poly, d, p):
    for low in product(range(p), repeat=d):
        divisor = list(low) + [1]
        if _polyrem(poly, divisor, p) == [0] * d:
            return True
    return False


def _polyrem(a, b, p):
    a = list(a)
    db = len(b) - 1
    for deg in range(len(a) - 1, db - 1, -1):
        c = a[deg]
        if c:
            for m in range(db + 1):
                a[deg - db + m] = (a[deg - db + m] - c * b[m]) % p
    return (a + [0] * db)[:db]


@lru_cache(maxsize=None)
def field(q: int) -> GF:
    return GF(q)


@dataclass(frozen=True)
class PolyFq:
    """A polynomial over GF(q); ``coeffs[m]`` is the coefficient of ``Y^m``."""

    coeffs: tuple[int, ...]
    q: int

    def __post_init__(self):
        c = list(int(v) for v in self.coeffs)
        if any(v < 0 or v >= self.q for v in c):
            raise DomainError("coefficient outside GF(q)")
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def field(self) -> GF:
        return field(self.q)

    @classmethod
    def constant(cls, c: int, q: int) -> PolyFq:
        return cls((c,), q)

    @classmethod
    def monomial(cls, deg: int, q: int, c: int = 1) -> PolyFq:
        return cls((0,) * deg + (c,), q)

    def degree(self) -> int:
        """Degree, with ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def _coerce(self, other):
        if isinstance(other, PolyFq):
            if other.q != self.q:
                raise DomainError("polynomials over different fields")
            return other
        if isinstance(other, int):
            return PolyFq((other % self.q,), self.q) if self.field.e == 1 else PolyFq((other,), self.q)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        F = self.field
        n = max(len(self.coeffs), len(o.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = o.coeffs + (0,) * (n - len(o.coeffs))
        return PolyFq(tuple(int(F.add[x, y]) for x, y in zip(a, b)), self.q)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return PolyFq(tuple(int(F.neg[x]) for x in self.coeffs), self.q)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def scale(self, c: int) -> PolyFq:
        F = self.field
        return PolyFq(tuple(int(F.mul[c, x]) for x in self.coeffs), self.q)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not self.coeffs or not o.coeffs:
            return PolyFq((), self.q)
        F = self.field
        out = [0] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(o.coeffs):
                    out[i + j] = int(F.add[out[i + j], F.mul[x, y]])
        return PolyFq(tuple(out), self.q)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> PolyFq:
        result, base = PolyFq((1,), self.q), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other):
        o = self._coerce(other)
        if o.is_zero():
            raise DomainError("division by zero polynomial")
        F = self.field
        r = list(self.coeffs)
        dq = o.degree()
        inv_lead = int(F.inv[o.lead()])
        quot = [0] * max(len(r) - dq, 0)
        for deg in range(len(r) - 1, dq - 1, -1):
            c = r[deg]
            if c:
                f = int(F.mul[c, inv_lead])
                quot[deg - dq] = f
                for m, y in enumerate(o.coeffs):
                    r[deg - dq + m] = int(F.add[r[deg - dq + m], F.neg[F.mul[f, y]]])
        return PolyFq(tuple(quot), self.q), PolyFq(tuple(r), self.q)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self) -> PolyFq:
        if self.is_zero():
            return self
        return self.scale(int(self.field.inv[self.lead()]))

    def norm(self) -> int:
        """Absolute value ``q^deg``; zero for the zero polynomial."""
        return 0 if self.is_zero() else self.q ** self.degree()

    def key(self) -> tuple[int, ...]:
        return (self.degree(),) + tuple(reversed(self.coeffs))

    def __call__(self, x: int) -> int:
        F = self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = int(F.add[F.mul[acc, x], c])
        return acc

    def __repr__(self):
        return f"PolyFq({self.coeffs}, q={self.q})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for m, c in enumerate(self.coeffs):
            if c:
                terms.append(str(c) if m == 0 else (f"{c}Y^{m}" if c != 1 else f"Y^{m}"))
        return "+".join(reversed(terms))


def poly_gcd(a: PolyFq, b: PolyFq) -> PolyFq:
    """Monic gcd; zero if both vanish."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a: PolyFq, b: PolyFq) -> tuple[PolyFq, PolyFq, PolyFq]:
    """Return ``(g, s, t)`` with ``s*a + t*b = g`` monic."""
    q = a.q
    r0, r1 = a, b
    s0, s1 = PolyFq((1,), q), PolyFq((), q)
    t0, t1 = PolyFq((), q), PolyFq((1,), q)
    while not r1.is_zero():
        quo, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - quo * s1
        t0, t1 = t1, t0 - quo * t1
    if r0.is_zero():
        return r0, s0, t0
    c = int(r0.field.inv[r0.lead()])
    return r0.scale(c), s0.scale(c), t0.scale(c)


def polys_of_degree_below(n: int, q: int):
    """All polynomials of degree < n, in increasing key order."""
    yield PolyFq((), q)
    for deg in range(n):
        for lead in range(1, q):
            for rest in product(range(q), repeat=deg):
                yield PolyFq(rest[::-1] + (lead,), q)


def monic_of_degree(d: int, q: int):
    for rest in product(range(q), repeat=d):
        yield PolyFq(rest[::-1] + (1,), q)
