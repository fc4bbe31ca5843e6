"""Farey fractions P/Q over GF(q)[Y], folded by the affine maps r -> (r + b)/d."""

from __future__ import annotations

from ..errors import DomainError
from ..hashing import keep_threshold, priority
from ..rings.finite_field import PolyFq, field, monic_of_degree, poly_gcd, polys_of_degree_below
from .setting import EnumBudget, FareyClass, FareySetting


def _fold(P: PolyFq, Q: PolyFq) -> PolyFq:
    """Smallest unit multiple of the residue ``P mod Q``."""
    P = P % Q
    return min((P.scale(d) for d in field(Q.q).units()), key=PolyFq.key)


def canonicalize(setting: FareySetting, P: PolyFq, Q: PolyFq) -> FareyClass:
    if Q.is_zero():
        raise DomainError("zero denominator")
    if poly_gcd(P, Q).degree() != 0:
        raise DomainError("numerator and denominator are not coprime")
    F = field(Q.q)
    lead_inv = int(F.inv[Q.lead()])
    P, Q = P.scale(lead_inv), Q.scale(lead_inv)
    return FareyClass(setting, _fold(P, Q), Q, Q.norm())


def per_denominator_count(Q: PolyFq) -> int:
    """Classes with denominator ``Q`` up to units: Phi(Q)/(q-1), or 1 if Q is constant."""
    if Q.degree() == 0:
        return 1
    return poly_totient(Q) // (Q.q - 1)


def poly_totient(Q: PolyFq) -> int:
    """Number of units of GF(q)[Y]/(Q), by counting coprime residues."""
    return sum(1 for P in polys_of_degree_below(Q.degree(), Q.q) if poly_gcd(P, Q).degree() == 0)


def max_degree(setting: FareySetting, max_height: int) -> int:
    d, h = 0, 1
    while h * setting.q <= max_height:
        h *= setting.q
        d += 1
    return d


def enumerate_classes(setting: FareySetting, budget: EnumBudget):
    q = setting.q
    cut = keep_threshold(budget.subsample)
    for deg in range(max_degree(setting, budget.max_height) + 1):
        height = q**deg
        if not budget.admits(height):
            continue
        for Q in monic_of_degree(deg, q):
            for P in polys_of_degree_below(deg, q):
                if poly_gcd(P, Q).degree() != 0:
                    continue
                if _fold(P, Q) != P:
                    continue
                if cut <= priority(P.coeffs + (-1,) + Q.coeffs, budget.seed):
                    continue
                yield FareyClass(setting, P, Q, height)


def closed_form_count(q: int, n: int) -> int:
    """Exact number of classes with ``deg Q <= n``."""
    return 1 + q * (q ** (2 * n) - 1) // (q * q - 1)
