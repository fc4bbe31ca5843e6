"""Exact arithmetic in the rings underlying the Farey families."""

from __future__ import annotations

from math import gcd

from ..errors import DomainError
from . import lattice
from .finite_field import GF, PolyFq, field, poly_gcd, poly_xgcd, polys_of_degree_below
from .hurwitz import (
    HurwitzQuat,
    canonical_left_associate,
    hurwitz_units,
    right_gcd,
)
from .quadratic import (
    SUPPORTED_DISCRIMINANTS,
    QuadInt,
    QuadNumber,
    canonical_associate,
    kronecker,
    quad_gcd,
    quad_xgcd,
    trace_zero_generator,
    units,
)

__all__ = [
    "GF",
    "HurwitzQuat",
    "PolyFq",
    "QuadInt",
    "QuadNumber",
    "SUPPORTED_DISCRIMINANTS",
    "canonical_associate",
    "canonical_left_associate",
    "field",
    "gcd_ring",
    "hurwitz_units",
    "inverse_mod",
    "kronecker",
    "norm_trace",
    "quad_residue_hnf",
    "reduce_residue",
    "residues",
    "trace_zero_generator",
    "units",
]


def gcd_ring(a, b):
    """Canonical gcd in Z, O_K or GF(q)[Y].

    For Hurwitz quaternions this is the canonical right gcd, the generator of
    the left ideal ``O a + O b``.
    """
    if not a and not b:
        raise DomainError("gcd of two zeros")
    if isinstance(a, int) and isinstance(b, int):
        return gcd(a, b)
    if isinstance(a, QuadInt) and isinstance(b, QuadInt):
        return quad_gcd(a, b)
    if isinstance(a, PolyFq) and isinstance(b, PolyFq):
        if a.q != b.q:
            raise DomainError("polynomials over different fields")
        return poly_gcd(a, b)
    if isinstance(a, HurwitzQuat) and isinstance(b, HurwitzQuat):
        return right_gcd(a, b)
    raise DomainError(f"unsupported operands {type(a).__name__}, {type(b).__name__}")


def quad_residue_hnf(m: QuadInt):
    """Hermite normal form of the ideal ``m O`` in the ``1, omega`` basis."""
    if m.is_zero():
        raise DomainError("zero modulus")
    w = QuadInt.omega(m.disc)
    g1, g2 = m, m * w
    return lattice.hnf([[g1.a, g1.b], [g2.a, g2.b]])


def reduce_residue(a, m):
    """Canonical representative of ``a`` modulo ``m``."""
    if isinstance(a, int):
        if m == 0:
            raise DomainError("zero modulus")
        return a % abs(m)
    if isinstance(a, QuadInt):
        v = lattice.reduce_mod([a.a, a.b], quad_residue_hnf(m))
        return QuadInt(v[0], v[1], a.disc)
    if isinstance(a, PolyFq):
        if m.is_zero():
            raise DomainError("zero modulus")
        return a % m
    raise DomainError(f"unsupported operand {type(a).__name__}")


def inverse_mod(a, m):
    """Inverse of ``a`` modulo ``m``, as a canonical residue."""
    if isinstance(a, int):
        if m == 0:
            raise DomainError("zero modulus")
        g, s, _ = lattice.xgcd(a, m)
        if g != 1:
            raise DomainError(f"{a} is not invertible modulo {m}")
        return s % abs(m)
    if isinstance(a, QuadInt):
        if m.is_zero():
            raise DomainError("zero modulus")
        g, s, _ = quad_xgcd(a, m)
        if not g.is_unit():
            raise DomainError(f"{a} is not invertible modulo {m}")
        return reduce_residue(s * g.conj(), m)
    if isinstance(a, PolyFq):
        if m.is_zero():
            raise DomainError("zero modulus")
        g, s, _ = poly_xgcd(a, m)
        if g.degree() != 0:
            raise DomainError(f"{a} is not invertible modulo {m}")
        return s % m
    raise DomainError(f"unsupported operand {type(a).__name__}")


def residues(m):
    """Canonical residue system modulo ``m``."""
    if isinstance(m, int):
        if m == 0:
            raise DomainError("zero modulus")
        return list(range(abs(m)))
    if isinstance(m, QuadInt):
        H = quad_residue_hnf(m)
        return [QuadInt(v[0], v[1], m.disc) for v in lattice.coset_reps(H)]
    if isinstance(m, PolyFq):
        if m.is_zero():
            raise DomainError("zero modulus")
        return list(polys_of_degree_below(m.degree(), m.q))
    raise DomainError(f"unsupported modulus {type(m).__name__}")


def norm_trace(x) -> tuple[int, int]:
    """Reduced norm and reduced trace."""
    if isinstance(x, int):
        return x * x, 2 * x
    if isinstance(x, (QuadInt, QuadNumber, HurwitzQuat)):
        return x.norm(), x.trace()
    raise DomainError(f"norm and trace are not defined for {type(x).__name__}")
