"""Standard Farey fractions p/q mod 1."""

from __future__ import annotations

import math

import numpy as np

from ..errors import DomainError
from ..hashing import keep_threshold, priority, priority_array
from .setting import EnumBudget, FareyClass, FareySetting


def totients(n: int) -> np.ndarray:
    """Euler's totient of ``0 .. n`` by a sieve (``phi(0) = 0``)."""
    phi = np.arange(n + 1, dtype=np.int64)
    for p in range(2, n + 1):
        if phi[p] == p:
            phi[p::p] -= phi[p::p] // p
    return phi


def cardinality(Q: int) -> int:
    return int(totients(Q)[1:].sum())


def euler_phi(q: int) -> int:
    if q < 1:
        raise DomainError("denominator must be positive")
    result, m, p = q, q, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def canonicalize(setting: FareySetting, p: int, q: int) -> FareyClass:
    if q == 0:
        raise DomainError("zero denominator")
    if q < 0:
        p, q = -p, -q
    if math.gcd(p, q) != 1:
        raise DomainError(f"{p}/{q} is not in lowest terms")
    return FareyClass(setting, p % q, q, q)


def enumerate_classes(setting: FareySetting, budget: EnumBudget):
    cut = keep_threshold(budget.subsample)
    for q in range(budget.lo + 1, budget.hi + 1):
        for p in range(q):
            if math.gcd(p, q) == 1:
                if cut <= priority((p, q), budget.seed):
                    continue
                yield FareyClass(setting, p, q, q)


def batches(budget: EnumBudget, chunk: int = 1 << 20):
    """Yield ``(p, q)`` int64 arrays covering the budget in height order."""
    cut = keep_threshold(budget.subsample)
    q = budget.lo + 1
    while q <= budget.hi:
        qs, total = [], 0
        while q <= budget.hi and (total == 0 or total + q <= chunk):
            qs.append(q)
            total += q
            q += 1
        qq = np.repeat(np.array(qs, dtype=np.int64), qs)
        starts = np.repeat(np.cumsum([0] + qs[:-1]), qs)
        pp = np.arange(total, dtype=np.int64) - starts
        keep = np.gcd(pp, qq) == 1
        pp, qq = pp[keep], qq[keep]
        if cut < (1 << 64):
            sel = priority_array([pp, qq], budget.seed) < np.uint64(cut)
            pp, qq = pp[sel], qq[sel]
        yield pp, qq


def inverse_mod_array(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Vectorized modular inverse of coprime ``p`` modulo ``q`` in ``[0, q)``."""
    r0, r1 = q.copy(), p % q
    s0, s1 = np.zeros_like(p), np.ones_like(p)
    active = r1 != 0
    while active.any():
        quo = np.zeros_like(p)
        quo[active] = r0[active] // r1[active]
        r0, r1 = np.where(active, r1, r0), np.where(active, r0 - quo * r1, r1)
        s0, s1 = np.where(active, s1, s0), np.where(active, s0 - quo * s1, s1)
        active = r1 != 0
    # now r0 = gcd = 1 and s0 * p = 1 mod q
    if not np.all(r0 == 1):
        raise DomainError("inputs are not coprime")
    return s0 % q
