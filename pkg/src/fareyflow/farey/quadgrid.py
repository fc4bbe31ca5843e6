"""Vectorized tables of the elements of O_K up to a norm bound, with
multiplicative sieves over ideals (Moebius function and the ideal totient)."""

from __future__ import annotations

import math

import numpy as np

from ..rings.quadratic import kronecker, omega_norm, units


def primes_up_to(n: int) -> np.ndarray:
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    is_p = np.ones(n + 1, dtype=bool)
    is_p[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if is_p[p]:
            is_p[p * p :: p] = False
    return np.nonzero(is_p)[0].astype(np.int64)


def mul_coords(a1, b1, a2, b2, disc):
    nw = omega_norm(disc)
    return a1 * a2 - b1 * b2 * nw, a1 * b2 + a2 * b1 + b1 * b2 * disc


def norm_coords(a, b, disc):
    return a * a + a * b * disc + b * b * omega_norm(disc)


class QuadGrid:
    """All nonzero ``a + b*omega`` with norm at most ``X``, sorted by norm."""

    def __init__(self, disc: int, X: int):
        self.disc, self.X = disc, int(X)
        bmax = math.isqrt(4 * self.X // -disc) + 1
        a_parts, b_parts = [], []
        for b in range(-bmax, bmax + 1):
            rem = self.X - (-disc) * b * b / 4.0
            if rem < 0:
                continue
            centre = -b * disc / 2.0
            r = math.sqrt(rem)
            lo, hi = math.floor(centre - r) - 1, math.ceil(centre + r) + 1
            a = np.arange(lo, hi + 1, dtype=np.int64)
            a_parts.append(a)
            b_parts.append(np.full(a.size, b, dtype=np.int64))
        a = np.concatenate(a_parts)
        b = np.concatenate(b_parts)
        n = norm_coords(a, b, disc)
        keep = (n > 0) & (n <= self.X)
        a, b, n = a[keep], b[keep], n[keep]
        k1 = 2 * a + b * disc
        order = np.lexsort((b, k1, n))
        self.a, self.b, self.n = a[order], b[order], n[order]
        self._amin, self._bmin = int(self.a.min(initial=0)), int(self.b.min(initial=0))
        shape = (int(self.a.max(initial=0)) - self._amin + 1, int(self.b.max(initial=0)) - self._bmin + 1)
        self._index = np.full(shape, -1, dtype=np.int64)
        self._index[self.a - self._amin, self.b - self._bmin] = np.arange(self.a.size)

    def __len__(self):
        return int(self.a.size)

    def prefix(self, bound: int) -> int:
        """Number of elements with norm at most ``bound``."""
        return int(np.searchsorted(self.n, bound, side="right"))

    def index_of(self, a, b) -> np.ndarray:
        ia, ib = np.asarray(a) - self._amin, np.asarray(b) - self._bmin
        ok = (ia >= 0) & (ia < self._index.shape[0]) & (ib >= 0) & (ib < self._index.shape[1])
        out = np.full(np.shape(ia), -1, dtype=np.int64)
        out[ok] = self._index[ia[ok], ib[ok]]
        return out

    def canonical_mask(self) -> np.ndarray:
        """True where the element is the canonical associate of its ideal."""
        k1, k2 = 2 * self.a + self.b * self.disc, self.b
        mask = np.ones(self.a.size, dtype=bool)
        for u in units(self.disc):
            ua, ub = mul_coords(self.a, self.b, u.a, u.b, self.disc)
            u1, u2 = 2 * ua + ub * self.disc, ub
            mask &= (k1 > u1) | ((k1 == u1) & (k2 >= u2))
        return mask

    def prime_ideals(self):
        """One generator ``(a, b, norm)`` per prime ideal of norm at most X."""
        first = {}
        norms, idx = np.unique(self.n, return_index=True)
        first = dict(zip(norms.tolist(), idx.tolist()))
        out = []
        for p in primes_up_to(self.X).tolist():
            chi = kronecker(self.disc, p)
            if chi == -1:
                if p * p <= self.X:
                    out.append((p, 0, p * p))
                continue
            i = first[p]
            a, b = int(self.a[i]), int(self.b[i])
            out.append((a, b, p))
            if chi == 1:
                ca, cb = a + b * self.disc, -b
                out.append((ca, cb, p))
        out.sort(key=lambda g: g[2])
        return out

    def multiples(self, pa: int, pb: int, pn: int) -> np.ndarray:
        """Indices of all grid elements divisible by ``pa + pb*omega``."""
        k = self.prefix(self.X // pn)
        ma, mb = mul_coords(self.a[:k], self.b[:k], pa, pb, self.disc)
        return self.index_of(ma, mb)

    def sieve(self):
        """Return ``(mu, phi)`` evaluated at every grid element."""
        mu = np.ones(len(self), dtype=np.int8)
        phi = self.n.copy()
        for pa, pb, pn in self.prime_ideals():
            idx = self.multiples(pa, pb, pn)
            phi[idx] = phi[idx] // pn * (pn - 1)
            mu[idx] = -mu[idx]
            if pn * pn <= self.X:
                sa, sb = mul_coords(pa, pb, pa, pb, self.disc)
                mu[self.multiples(sa, sb, pn * pn)] = 0
        return mu, phi
