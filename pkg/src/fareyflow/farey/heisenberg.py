"""Heisenberg Farey fractions: triples (a, alpha, c) over O_K with
tr(a c̄) = n(alpha) and <a, alpha, c> = O_K, modulo the Picard stabilizer.

For a fixed denominator c the translations (v0, v) act on numerators by
``(a, alpha) -> (a + v̄ alpha + v0 c, alpha + v c)`` and the rotations
``zeta`` in ``{u^3}`` by ``alpha -> zeta alpha``.  Scalar units move ``c``,
so each orbit has a unique representative with ``c`` a canonical associate.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import numpy as np

from ..errors import DomainError
from ..hashing import keep_threshold, priority
from ..rings import lattice
from ..rings.quadratic import (
    QuadInt,
    QuadNumber,
    canonical_associate,
    omega_norm,
    quad_gcd,
    trace_zero_generator,
    units,
)
from .quadgrid import QuadGrid, mul_coords, norm_coords
from .setting import EnumBudget, FareyClass, FareySetting


@lru_cache(maxsize=None)
def rotations(disc: int) -> tuple[QuadInt, ...]:
    """The rotation group ``{u^3 : u unit}``, sorted by key."""
    return tuple(sorted({u * u * u for u in units(disc)}, key=QuadInt.key))


def trace_gcd(disc: int) -> int:
    """Generator of the ideal ``tr(O_K)`` of Z."""
    return 2 if disc % 2 == 0 else 1


@lru_cache(maxsize=None)
def w_prime_basis(disc: int) -> tuple[QuadInt, QuadInt]:
    """Basis of the lattice ``W' = {v : n(v) in tr(O_K)}`` of admissible translations."""
    t = trace_gcd(disc)
    gens = [
        [a, b]
        for a in range(-3, 4)
        for b in range(-3, 4)
        if QuadInt(a, b, disc).norm() % t == 0 and (a, b) != (0, 0)
    ]
    H = lattice.hnf(gens)
    return QuadInt(H[0][0], H[0][1], disc), QuadInt(H[1][0], H[1][1], disc)


def w_prime_index(disc: int) -> int:
    b1, b2 = w_prime_basis(disc)
    return abs(b1.a * b2.b - b1.b * b2.a)


def translation_partner(v: QuadInt) -> QuadInt:
    """Some ``v0`` in O_K with ``tr(v0) = n(v)``; needs ``v`` in W'."""
    disc, m = v.disc, v.norm()
    if disc % 2:
        y = m % 2
        return QuadInt((m - y * disc) // 2, y, disc)
    if m % 2:
        raise DomainError(f"{v} is not an admissible translation")
    return QuadInt(m // 2, 0, disc)


class Denominator:
    """Lattice data attached to a fixed nonzero denominator ``c``."""

    def __init__(self, c: QuadInt):
        if c.is_zero():
            raise DomainError("zero denominator")
        disc = c.disc
        self.c, self.disc, self.norm = c, disc, c.norm()
        gens = [c * w for w in w_prime_basis(disc)]
        self.H_alpha = lattice.hnf([[g.a, g.b] for g in gens])
        cb = c.conj()
        w = QuadInt.omega(disc)
        f = (cb.trace(), (w * cb).trace())
        self.g, U, self.Uinv = lattice.functional_basis(f)
        self.part = QuadInt(U[0][0], U[0][1], disc)
        self.ell = QuadInt(U[1][0], U[1][1], disc)
        ct = c * trace_zero_generator(disc)
        self.k = abs(lattice.apply_rows(self.Uinv, (ct.a, ct.b))[1])

    def alphas(self):
        for v in lattice.coset_reps(self.H_alpha):
            yield QuadInt(v[0], v[1], self.disc)

    def reduce_alpha(self, alpha: QuadInt) -> QuadInt:
        v = lattice.reduce_mod((alpha.a, alpha.b), self.H_alpha)
        return QuadInt(v[0], v[1], self.disc)

    def a_solutions(self, m: int):
        """Representatives of the solutions of ``tr(a c̄) = m`` modulo translations."""
        if m % self.g:
            return []
        base = self.part * (m // self.g)
        return [base + self.ell * j for j in range(self.k)]

    def reduce_a(self, a: QuadInt) -> QuadInt:
        x = lattice.apply_rows(self.Uinv, (a.a, a.b))
        return self.part * x[0] + self.ell * (x[1] % self.k)

    def normalize(self, a: QuadInt, alpha: QuadInt) -> tuple[QuadInt, QuadInt]:
        """Representative of the translation orbit of ``(a, alpha)``."""
        red = self.reduce_alpha(alpha)
        v = (red - alpha).exact_div(self.c)
        a = a + v.conj() * alpha + translation_partner(v) * self.c
        return self.reduce_a(a), red

    def is_primitive(self, a: QuadInt, alpha: QuadInt) -> bool:
        return quad_gcd(quad_gcd(a, alpha), self.c).is_unit()

    def orbit_key(self, a: QuadInt, alpha: QuadInt):
        """Smallest normalized numerator over the rotation orbit."""
        best = None
        for z in rotations(self.disc):
            na, nal = self.normalize(a, z * alpha)
            key = (nal.a, nal.b, na.a, na.b)
            if best is None or key < best[0]:
                best = (key, na, nal)
        return best


def check_triple(a: QuadInt, alpha: QuadInt, c: QuadInt) -> None:
    if c.is_zero():
        raise DomainError("zero denominator")
    if (a * c.conj()).trace() != alpha.norm():
        raise DomainError("trace condition tr(a c̄) = n(alpha) fails")
    if not quad_gcd(quad_gcd(a, alpha), c).is_unit():
        raise DomainError("triple is not primitive")


def canonicalize(setting: FareySetting, a: QuadInt, alpha: QuadInt, c: QuadInt) -> FareyClass:
    check_triple(a, alpha, c)
    cc = canonical_associate(c)
    u = cc.exact_div(c)
    den = Denominator(cc)
    _, na, nal = den.orbit_key(u * a, u * alpha)
    return FareyClass(setting, (na, nal), cc, cc.norm())


def classes_for(setting: FareySetting, c: QuadInt, seed: int = 0, cut: int = 1 << 64):
    den = Denominator(c)
    for alpha in den.alphas():
        for a in den.a_solutions(alpha.norm()):
            if not den.is_primitive(a, alpha):
                continue
            key, na, nal = den.orbit_key(a, alpha)
            if (na, nal) != (a, alpha):
                continue
            if cut < (1 << 64) and cut <= priority(key + (c.a, c.b), seed):
                continue
            yield FareyClass(setting, (a, alpha), c, den.norm)


def canonical_denominators(disc: int, lo: int, hi: int):
    if hi < 1:
        return []
    grid = QuadGrid(disc, hi)
    mask = grid.canonical_mask() & (grid.n > lo)
    return [QuadInt(int(a), int(b), disc) for a, b in zip(grid.a[mask], grid.b[mask])]


def enumerate_classes(setting: FareySetting, budget: EnumBudget):
    cut = keep_threshold(budget.subsample)
    for c in canonical_denominators(setting.disc, budget.lo, budget.hi):
        yield from classes_for(setting, c, budget.seed, cut)


def per_denominator_count(setting: FareySetting, c: QuadInt) -> int:
    return sum(1 for _ in classes_for(setting, canonical_associate(c)))


def point(a: QuadInt, alpha: QuadInt, c: QuadInt) -> tuple[QuadNumber, QuadNumber]:
    """The Heisenberg point ``(w0, w) = (a/c, alpha/c)``."""
    cn = c.to_number()
    return a.to_number() / cn, alpha.to_number() / cn


# -- exact counting -----------------------------------------------------------


def _xgcd_arrays(x: np.ndarray, y: np.ndarray):
    """Vectorized extended gcd: ``s*x + t*y = g >= 0``."""
    r0, r1 = x.copy(), y.copy()
    s0, s1 = np.ones_like(x), np.zeros_like(x)
    t0, t1 = np.zeros_like(x), np.ones_like(x)
    active = r1 != 0
    while active.any():
        q = np.zeros_like(x)
        q[active] = r0[active] // r1[active]
        r0, r1 = np.where(active, r1, r0), np.where(active, r0 - q * r1, r1)
        s0, s1 = np.where(active, s1, s0), np.where(active, s0 - q * s1, s1)
        t0, t1 = np.where(active, t1, t0), np.where(active, t0 - q * t1, t1)
        active = r1 != 0
    neg = r0 < 0
    return np.where(neg, -r0, r0), np.where(neg, -s0, s0), np.where(neg, -t0, t0)


def _solution_count(disc: int, g: int) -> int:
    """Number of ``alpha mod gO`` with ``g | n(alpha)``."""
    total = 1
    m, p = g, 2
    factors = []
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            factors.append((p, e))
        p += 1
    if m > 1:
        factors.append((m, 1))
    for p, e in factors:
        total *= _solution_count_prime_power(disc, p, e)
    return total


@lru_cache(maxsize=None)
def _solution_count_prime_power(disc: int, p: int, e: int) -> int:
    pe = p**e
    if pe * pe <= 4_000_000:
        x = np.arange(pe, dtype=np.int64)
        n = norm_coords(x[:, None], x[None, :], disc)
        return int(np.count_nonzero(n % pe == 0))
    from ..rings.quadratic import kronecker

    return _local_solution_count(kronecker(disc, p), p, e)


def _local_solution_count(chi: int, p: int, e: int) -> int:
    """Closed form of the count above from the local structure of ``O`` at ``p``.

    Sorting ``alpha = p^k beta`` by the largest power of ``p`` dividing it, the
    condition only involves ``beta`` modulo ``p^j`` with ``j = e - 2k``.  Non-divisible
    ``beta`` with ``p^j | n(beta)`` number ``2(p^j - p^(j-1))`` for split primes,
    ``p - 1`` for ramified primes when ``j = 1`` and none otherwise.
    """

    def primitive(j: int) -> int:
        if chi == 1:
            return 2 * (p**j - p ** (j - 1))
        if chi == 0 and j == 1:
            return p - 1
        return 0

    total = 1  # alpha = 0
    for k in range(e):
        m, j = e - k, max(0, e - 2 * k)
        total += p ** (2 * m) - p ** (2 * m - 2) if j == 0 else p ** (2 * (m - j)) * primitive(j)
    return total


def _denominator_arrays(grid: QuadGrid):
    disc = grid.disc
    a, b = grid.a, grid.b
    nw = omega_norm(disc)
    f1 = 2 * a + b * disc
    f2 = 2 * b * nw + a * disc
    g = np.gcd(f1, f2)
    tau = trace_zero_generator(disc)
    ta, tb = mul_coords(a, b, tau.a, tau.b, disc)
    k = np.gcd(ta, tb)
    return f1, f2, g, k, ta, tb


def _all_orbit_counts(grid: QuadGrid) -> np.ndarray:
    """Translation orbits of all (not necessarily primitive) numerators per c."""
    disc = grid.disc
    _, _, g, k, _, _ = _denominator_arrays(grid)
    idx = w_prime_index(disc)
    ug, inv = np.unique(g, return_inverse=True)
    dens = np.array([_solution_count(disc, int(v)) for v in ug], dtype=np.int64)
    sol = dens[inv]
    num = k * grid.n * idx * sol
    gg = g * g
    if np.any(num % gg):
        raise AssertionError("non-integral orbit count")
    return num // gg


def _fixed_candidates(disc: int, zeta: QuadInt):
    """Translations ``v`` mod ``(zeta-1) W'`` with ``(zeta-1) | n(v)``."""
    m = zeta - 1
    basis = w_prime_basis(disc)
    H = lattice.hnf([[(m * b).a, (m * b).b] for b in basis])
    out = []
    for v in lattice.coset_reps(H):
        x = QuadInt(v[0], v[1], disc)
        if m.divides(QuadInt(x.norm(), 0, disc)):
            out.append(x)
    return out


def _fixed_orbit_count(grid: QuadGrid, zeta: QuadInt, X: int, chunk: int = 1 << 18) -> int:
    """Sum over all c with n(c) <= X of primitive orbits fixed by the rotation."""
    disc = grid.disc
    m = zeta - 1
    mn = m.norm()
    mca, mcb = m.conj().a, m.conj().b
    kmax = grid.prefix(X)
    total = 0
    cands = _fixed_candidates(disc, zeta)
    for start in range(0, kmax, chunk):
        sl = slice(start, min(start + chunk, kmax))
        ca, cb = grid.a[sl], grid.b[sl]
        sub = _Chunk(grid, sl)
        for v in cands:
            # alpha = c v / (zeta - 1) must be integral
            pa, pb = mul_coords(ca, cb, v.a, v.b, disc)
            qa, qb = mul_coords(pa, pb, mca, mcb, disc)
            ok = (qa % mn == 0) & (qb % mn == 0)
            if not ok.any():
                continue
            total += sub.count_primitive(np.nonzero(ok)[0], qa[ok] // mn, qb[ok] // mn)
    return total


class _Chunk:
    """Denominator data for a slice of the grid, used by the fixed-point count."""

    def __init__(self, grid: QuadGrid, sl: slice):
        self.disc = grid.disc
        self.ca, self.cb, self.cn = grid.a[sl], grid.b[sl], grid.n[sl]
        self.f1 = 2 * self.ca + self.cb * self.disc
        self.f2 = 2 * self.cb * omega_norm(self.disc) + self.ca * self.disc
        self.g, self.s1, self.s2 = _xgcd_arrays(self.f1, self.f2)
        tau = trace_zero_generator(self.disc)
        ta, tb = mul_coords(self.ca, self.cb, tau.a, tau.b, self.disc)
        self.k = np.gcd(ta, tb)
        self.la, self.lb = ta // self.k, tb // self.k

    def count_primitive(self, idx, al_a, al_b) -> int:
        disc = self.disc
        g = self.g[idx]
        mnorm = norm_coords(al_a, al_b, disc)
        ok = mnorm % g == 0
        idx, al_a, al_b, mnorm, g = idx[ok], al_a[ok], al_b[ok], mnorm[ok], g[ok]
        if idx.size == 0:
            return 0
        k = self.k[idx]
        rep = np.repeat(np.arange(idx.size), k)
        j = np.arange(rep.size) - np.repeat(np.cumsum(k) - k, k)
        i = idx[rep]
        q = mnorm[rep] // g[rep]
        a_a = q * self.s1[i] + j * self.la[i]
        a_b = q * self.s2[i] + j * self.lb[i]
        ca, cb = self.ca[i], self.cb[i]
        return int(np.count_nonzero(_unit_ideal(disc, ca, cb, a_a, a_b, al_a[rep], al_b[rep])))


def _reduce_mod(disc, xa, xb, ca, cb, cn):
    """Reduce ``x`` modulo ``c`` to a representative of bounded size."""
    pa, pb = mul_coords(xa, xb, ca + cb * disc, -cb, disc)  # x * conj(c)
    qa = np.floor_divide(2 * pa + cn, 2 * cn)
    qb = np.floor_divide(2 * pb + cn, 2 * cn)
    ra, rb = mul_coords(qa, qb, ca, cb, disc)
    return xa - ra, xb - rb


def _unit_ideal(disc, ca, cb, xa, xb, ya, yb) -> np.ndarray:
    """True where the ideal ``<x, y, c>`` is the whole ring."""
    cn = norm_coords(ca, cb, disc)
    xa, xb = _reduce_mod(disc, xa, xb, ca, cb, cn)
    ya, yb = _reduce_mod(disc, ya, yb, ca, cb, cn)
    vecs = []
    for ea, eb in ((xa, xb), (ya, yb), (ca, cb)):
        vecs.append((ea, eb))
        vecs.append(mul_coords(ea, eb, 0, 1, disc))
    g = np.zeros_like(xa)
    for i in range(len(vecs)):
        for j in range(i + 1, len(vecs)):
            (a1, b1), (a2, b2) = vecs[i], vecs[j]
            g = np.gcd(g, a1 * b2 - a2 * b1)
    return g == 1


def cardinality(disc: int, X: int, grid: QuadGrid | None = None) -> int:
    """Exact number of classes with ``n(c) <= X``.

    Counts translation orbits of primitive numerators by Moebius inversion
    over ideals, then folds the rotations by Burnside's lemma.
    """
    if X < 1:
        return 0
    grid = grid or QuadGrid(disc, X)
    mu, _ = grid.sieve()
    k = grid.prefix(X)
    T = _all_orbit_counts(grid)[:k]
    S = np.concatenate([[0], np.cumsum(T)])
    nz = np.nonzero(mu[:k])[0]
    pos = np.searchsorted(grid.n[:k], X // grid.n[nz], side="right")
    # each ideal has w generators in the grid
    w = len(units(disc))
    signed = int(np.sum(mu[nz].astype(np.int64) * S[pos]))
    if signed % w:
        raise AssertionError("primitive orbit sum not divisible by unit count")
    primitive = signed // w
    fixed = sum(_fixed_orbit_count(grid, z, X) for z in rotations(disc) if z != QuadInt.one(disc))
    burnside = primitive + fixed
    denom = w * len(rotations(disc))
    if burnside % denom:
        raise AssertionError("Burnside count is not an integer")
    return burnside // denom


def point_fraction(x: QuadNumber) -> tuple[Fraction, Fraction]:
    return x.a, x.b
