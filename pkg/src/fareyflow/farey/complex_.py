"""Complex Farey fractions p/q in O'_K \\ C, where O'_K acts by r -> u^2 r + b."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import numpy as np

from ..errors import DomainError
from ..hashing import keep_threshold, priority
from ..rings import lattice
from ..rings.quadratic import QuadInt, canonical_associate, quad_gcd, units
from .quadgrid import QuadGrid
from .setting import EnumBudget, FareyClass, FareySetting


@lru_cache(maxsize=None)
def square_units(disc: int) -> tuple[QuadInt, ...]:
    """The group ``{u^2}``, sorted by key."""
    return tuple(sorted({u * u for u in units(disc)}, key=QuadInt.key))


class ResidueRing:
    """Canonical residues modulo a fixed nonzero ``c``."""

    def __init__(self, c: QuadInt):
        self.c = c
        w = QuadInt.omega(c.disc)
        g2 = c * w
        self.H = lattice.hnf([[c.a, c.b], [g2.a, g2.b]])

    def reduce(self, x: QuadInt) -> QuadInt:
        v = lattice.reduce_mod((x.a, x.b), self.H)
        return QuadInt(v[0], v[1], x.disc)

    def __iter__(self):
        for v in lattice.coset_reps(self.H):
            yield QuadInt(v[0], v[1], self.c.disc)


def fold_numerator(p: QuadInt, R: ResidueRing) -> QuadInt:
    return min((R.reduce(z * p) for z in square_units(p.disc)), key=QuadInt.key)


def canonicalize(setting: FareySetting, p: QuadInt, q: QuadInt) -> FareyClass:
    if q.is_zero():
        raise DomainError("zero denominator")
    if not quad_gcd(p, q).is_unit():
        raise DomainError("numerator and denominator are not coprime")
    c = canonical_associate(q)
    u = c.exact_div(q)
    R = ResidueRing(c)
    return FareyClass(setting, fold_numerator(u * p, R), c, c.norm())


def canonical_denominators(disc: int, lo: int, hi: int):
    """Canonical associates with ``lo < n(c) <= hi``, ordered by norm and key."""
    if hi < 1:
        return []
    grid = QuadGrid(disc, hi)
    mask = grid.canonical_mask() & (grid.n > lo)
    return [QuadInt(int(a), int(b), disc) for a, b in zip(grid.a[mask], grid.b[mask])]


def classes_for(setting: FareySetting, c: QuadInt, seed: int = 0, cut: int = 1 << 64):
    R = ResidueRing(c)
    n = c.norm()
    for p in R:
        if not quad_gcd(p, c).is_unit():
            continue
        if fold_numerator(p, R) != p:
            continue
        if cut < (1 << 64) and cut <= priority((p.a, p.b, c.a, c.b), seed):
            continue
        yield FareyClass(setting, p, c, n)


def enumerate_classes(setting: FareySetting, budget: EnumBudget):
    cut = keep_threshold(budget.subsample)
    for c in canonical_denominators(setting.disc, budget.lo, budget.hi):
        yield from classes_for(setting, c, budget.seed, cut)


def per_denominator_count(setting: FareySetting, c: QuadInt) -> int:
    return sum(1 for _ in classes_for(setting, canonical_associate(c)))


def fixed_fractions(disc: int, zeta: QuadInt):
    """Denominator norms of the fractions ``r mod O`` with ``zeta*r = r``."""
    m = zeta - 1
    out = []
    for beta in ResidueRing(m):
        num = beta * m.conj()
        den = m.norm()
        g = quad_gcd(QuadInt(num.a, num.b, disc), QuadInt(den, 0, disc))
        if g.is_zero():
            out.append(1)
            continue
        # r = num / den in lowest terms has denominator den / g
        out.append(QuadInt(den, 0, disc).exact_div(g).norm())
    return out


def cardinality(disc: int, X: int, grid: QuadGrid | None = None) -> int:
    """Exact count of classes with ``n(q) <= X`` by an ideal sieve and Burnside."""
    if X < 1:
        return 0
    grid = grid or QuadGrid(disc, X)
    _, phi = grid.sieve()
    w = len(units(disc))
    k = grid.prefix(X)
    total = int(phi[:k].sum())
    if total % w:
        raise AssertionError("ideal totient sum not divisible by unit count")
    fixed = total // w
    burnside = fixed
    for z in square_units(disc):
        if z == QuadInt.one(disc):
            continue
        burnside += sum(1 for h in fixed_fractions(disc, z) if h <= X)
    g = len(square_units(disc))
    if burnside % g:
        raise AssertionError("Burnside count is not an integer")
    return burnside // g


def per_denominator_counts(disc: int, X: int):
    """Norms of canonical denominators and their class counts, as arrays."""
    grid = QuadGrid(disc, X)
    _, phi = grid.sieve()
    mask = grid.canonical_mask()
    norms = grid.n[mask]
    counts = phi[mask].astype(np.int64)
    g = len(square_units(disc))
    small = np.nonzero(norms <= 4)[0]
    counts = counts // g
    setting = FareySetting.complex(disc)
    for i in small:
        c = QuadInt(int(grid.a[mask][i]), int(grid.b[mask][i]), disc)
        counts[i] = per_denominator_count(setting, c)
    return norms, counts


def point(p: QuadInt, q: QuadInt):
    """Exact coordinates of ``p/q`` in the basis ``1, omega``."""
    num = p * q.conj()
    n = q.norm()
    return Fraction(num.a, n), Fraction(num.b, n)
