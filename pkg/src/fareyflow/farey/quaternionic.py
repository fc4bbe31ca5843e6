"""Quaternionic Heisenberg Farey fractions over the Hurwitz order O.

A class is represented by a triple ``(a, alpha, c)`` with
``tr(ā c) = n(alpha)`` and ``O a + O alpha + O c = O``.  The stabilizer acts
on triples by translations ``(a + v̄ alpha + v0 c, alpha + v c, c)`` with
``tr(v0) = n(v)``, by rotations ``(u a, U alpha, u c)`` and, without moving the
point ``(a c^-1, alpha c^-1)``, by right unit multiplication.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

from ..errors import DomainError
from ..hashing import keep_threshold, priority
from ..rings import lattice
from ..rings.hurwitz import (
    HURWITZ_BASIS,
    HurwitzQuat,
    from_basis,
    hurwitz_units,
    right_gcd,
    to_basis,
)
from .setting import EnumBudget, FareyClass, FareySetting

RHO = HURWITZ_BASIS[0]  # (1 + i + j + k)/2, of trace 1
PURE = (HurwitzQuat((0, 2, 0, 0)), HurwitzQuat((0, 0, 2, 0)), HurwitzQuat((0, 0, 0, 2)))


def translation_partner(v: HurwitzQuat) -> HurwitzQuat:
    """An element ``v0`` of O with ``tr(v0) = n(v)``."""
    return RHO * v.norm()


def canonical_denominator(c: HurwitzQuat) -> tuple[HurwitzQuat, HurwitzQuat, HurwitzQuat]:
    """Return ``(c*, u, lam)`` with ``c* = u c lam`` of largest key."""
    best = None
    for u in hurwitz_units():
        uc = u * c
        for lam in hurwitz_units():
            x = uc * lam
            if best is None or x.t > best[0].t:
                best = (x, u, lam)
    return best


def is_primitive(a: HurwitzQuat, alpha: HurwitzQuat, c: HurwitzQuat) -> bool:
    return right_gcd(right_gcd(a, alpha), c).is_unit()


class Denominator:
    """Lattice data for a fixed denominator ``c``, in Hurwitz-basis coordinates."""

    def __init__(self, c: HurwitzQuat):
        if c.is_zero():
            raise DomainError("zero denominator")
        self.c, self.norm = c, c.norm()
        self.H_alpha = lattice.hnf([to_basis(b * c) for b in HURWITZ_BASIS])
        f = [(b.conj() * c).trace() for b in HURWITZ_BASIS]
        self.g, self.U, self.Uinv = lattice.functional_basis(f)
        kernel = [lattice.apply_rows(self.Uinv, to_basis(p * c))[1:] for p in PURE]
        self.H_a = lattice.hnf(kernel)
        self.stabilizer = [
            ((c * lam.conj()).right_exact_div(c), lam)
            for lam in hurwitz_units()
            if c.right_divides(c * lam.conj())
        ]

    def alphas(self):
        for v in lattice.coset_reps(self.H_alpha):
            yield from_basis(v)

    def a_solutions(self, m: int):
        if m % self.g:
            return
        for y in lattice.coset_reps(self.H_a):
            yield from_basis(lattice.combine(self.U, [m // self.g, *y]))

    def reduce_alpha(self, alpha: HurwitzQuat) -> HurwitzQuat:
        return from_basis(lattice.reduce_mod(to_basis(alpha), self.H_alpha))

    def normalize(self, a: HurwitzQuat, alpha: HurwitzQuat, red=None) -> tuple[HurwitzQuat, HurwitzQuat]:
        """Representative of the translation orbit of ``(a, alpha)``."""
        red = self.reduce_alpha(alpha) if red is None else red
        v = (red - alpha).right_exact_div(self.c)
        a = a + v.conj() * alpha + translation_partner(v) * self.c
        x = lattice.apply_rows(self.Uinv, to_basis(a))
        y = lattice.reduce_mod(x[1:], self.H_a)
        return from_basis(lattice.combine(self.U, [x[0], *y])), red

    def _images(self, a, alpha):
        for (u, lam), U in product(self.stabilizer, hurwitz_units()):
            yield u * a * lam, U * alpha * lam

    def orbit_key(self, a: HurwitzQuat, alpha: HurwitzQuat):
        best = None
        for ia, ial in self._images(a, alpha):
            na, nal = self.normalize(ia, ial)
            key = to_basis(nal) + to_basis(na)
            if best is None or key < best[0]:
                best = (key, na, nal)
        return best

    def is_canonical(self, a: HurwitzQuat, alpha: HurwitzQuat) -> bool:
        """Whether a normalized pair is the smallest of its orbit."""
        ka, kal = to_basis(a), to_basis(alpha)
        for ia, ial in self._images(a, alpha):
            red = self.reduce_alpha(ial)
            kr = to_basis(red)
            if kr > kal:
                continue
            if kr < kal or to_basis(self.normalize(ia, ial, red)[0]) < ka:
                return False
        return True


def check_triple(a: HurwitzQuat, alpha: HurwitzQuat, c: HurwitzQuat) -> None:
    if c.is_zero():
        raise DomainError("zero denominator")
    if (a.conj() * c).trace() != alpha.norm():
        raise DomainError("trace condition tr(ā c) = n(alpha) fails")
    if not is_primitive(a, alpha, c):
        raise DomainError("triple does not generate the unit left ideal")


def canonicalize(setting: FareySetting, a: HurwitzQuat, alpha: HurwitzQuat, c: HurwitzQuat) -> FareyClass:
    check_triple(a, alpha, c)
    cc, u, lam = canonical_denominator(c)
    _, na, nal = Denominator(cc).orbit_key(u * a * lam, alpha * lam)
    return FareyClass(setting, (na, nal), cc, cc.norm())


@lru_cache(maxsize=8)
def _all_canonical(hi: int) -> tuple[HurwitzQuat, ...]:
    bound = 4 * hi
    r = 0
    while (r + 1) ** 2 <= bound:
        r += 1
    found = set()
    for t in product(range(-r, r + 1), repeat=4):
        s = sum(v * v for v in t)
        if s == 0 or s > bound or len({v & 1 for v in t}) != 1:
            continue
        x = HurwitzQuat(t)
        cc = canonical_denominator(x)[0]
        if cc == x:
            found.add(x)
    return tuple(sorted(found, key=lambda x: (x.norm(), x.t)))


def canonical_denominators(lo: int, hi: int) -> list[HurwitzQuat]:
    """Canonical two-sided unit-class representatives with ``lo < n(c) <= hi``."""
    if hi < 1:
        return []
    return [c for c in _all_canonical(hi) if lo < c.norm()]


def classes_for(setting: FareySetting, c: HurwitzQuat, seed: int = 0, cut: int = 1 << 64):
    den = Denominator(c)
    for alpha in den.alphas():
        for a in den.a_solutions(alpha.norm()):
            if not is_primitive(a, alpha, c):
                continue
            if not den.is_canonical(a, alpha):
                continue
            if cut < (1 << 64) and cut <= priority(to_basis(alpha) + to_basis(a) + to_basis(c), seed):
                continue
            yield FareyClass(setting, (a, alpha), c, den.norm)


def enumerate_classes(setting: FareySetting, budget: EnumBudget):
    cut = keep_threshold(budget.subsample)
    for c in canonical_denominators(budget.lo, budget.hi):
        yield from classes_for(setting, c, budget.seed, cut)


def per_denominator_count(setting: FareySetting, c: HurwitzQuat) -> int:
    return sum(1 for _ in classes_for(setting, canonical_denominator(c)[0]))


def cardinality(X: int) -> int:
    setting = FareySetting.quaternionic()
    return sum(per_denominator_count(setting, c) for c in canonical_denominators(0, X))


def point(a: HurwitzQuat, alpha: HurwitzQuat, c: HurwitzQuat):
    """Exact coordinates of ``(a c^-1, alpha c^-1)`` as Fraction 4-tuples."""
    n = c.norm()
    cb = c.conj()
    return (
        tuple(v / n for v in (a * cb).coords),
        tuple(v / n for v in (alpha * cb).coords),
    )
