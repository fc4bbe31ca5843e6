"""Canonical Farey classes of the five families, their enumeration and counts.

Every function here dispatches on :class:`FareySetting.kind`.  Heights are the
exact integers stored in :attr:`FareyClass.height`.
"""

from __future__ import annotations

from ..errors import ConfigurationError, DomainError
from ..rings.finite_field import PolyFq
from ..rings.hurwitz import HurwitzQuat
from ..rings.quadratic import QuadInt
from . import complex_, heisenberg, quaternionic, standard, tree
from .setting import EnumBudget, FareyClass, FareySetting, Kind, shard_bounds

__all__ = [
    "EnumBudget",
    "FareyClass",
    "FareySetting",
    "Kind",
    "canonicalize",
    "cardinality",
    "enumerate_classes",
    "per_denominator_count",
    "shard_bounds",
]

_MODULES = {
    Kind.STANDARD: standard,
    Kind.COMPLEX: complex_,
    Kind.HEISENBERG: heisenberg,
    Kind.QUATERNIONIC: quaternionic,
    Kind.TREE: tree,
}


def enumerate_classes(setting: FareySetting, budget: EnumBudget):
    """Stream the canonical classes admitted by ``budget`` in height order."""
    return _MODULES[setting.kind].enumerate_classes(setting, budget)


def cardinality(setting: FareySetting, height: int) -> int:
    """Exact number of classes whose height is at most ``height``."""
    if height < 1:
        raise ConfigurationError("height bound must be >= 1")
    kind = setting.kind
    if kind is Kind.STANDARD:
        return standard.cardinality(height)
    if kind is Kind.COMPLEX:
        return complex_.cardinality(setting.disc, height)
    if kind is Kind.HEISENBERG:
        return heisenberg.cardinality(setting.disc, height)
    if kind is Kind.QUATERNIONIC:
        return quaternionic.cardinality(height)
    return tree.closed_form_count(setting.q, tree.max_degree(setting, height))


def _quad(x, disc: int) -> QuadInt:
    if isinstance(x, QuadInt):
        if x.disc != disc:
            raise DomainError(f"element of discriminant {x.disc} used with D={disc}")
        return x
    if isinstance(x, int):
        return QuadInt(x, 0, disc)
    if isinstance(x, tuple) and len(x) == 2:
        return QuadInt(x[0], x[1], disc)
    raise DomainError(f"cannot read {x!r} as an integer of discriminant {disc}")


def _quat(x) -> HurwitzQuat:
    if isinstance(x, HurwitzQuat):
        return x
    if isinstance(x, int):
        return HurwitzQuat((2 * x, 0, 0, 0))
    return HurwitzQuat.from_coords(*x)


def _poly(x, q: int) -> PolyFq:
    if isinstance(x, PolyFq):
        return x
    if isinstance(x, int):
        return PolyFq((x,), q)
    return PolyFq(tuple(x), q)


def canonicalize(raw, setting: FareySetting) -> FareyClass:
    """Canonical class of a raw point.

    ``raw`` is ``(p, q)`` for the standard, complex and tree kinds and
    ``(a, alpha, c)`` for the Heisenberg and quaternionic kinds.  Ring elements
    may be given as objects or as plain coordinates.
    """
    kind = setting.kind
    if kind is Kind.STANDARD:
        p, q = raw
        return standard.canonicalize(setting, int(p), int(q))
    if kind is Kind.COMPLEX:
        p, q = (_quad(x, setting.disc) for x in raw)
        return complex_.canonicalize(setting, p, q)
    if kind is Kind.HEISENBERG:
        a, alpha, c = (_quad(x, setting.disc) for x in raw)
        return heisenberg.canonicalize(setting, a, alpha, c)
    if kind is Kind.QUATERNIONIC:
        a, alpha, c = (_quat(x) for x in raw)
        return quaternionic.canonicalize(setting, a, alpha, c)
    P, Q = (_poly(x, setting.q) for x in raw)
    return tree.canonicalize(setting, P, Q)


def per_denominator_count(setting: FareySetting, c) -> int:
    """Number of classes whose denominator lies in the unit orbit of ``c``."""
    kind = setting.kind
    if kind is Kind.STANDARD:
        return standard.euler_phi(abs(int(c)))
    if kind is Kind.COMPLEX:
        return complex_.per_denominator_count(setting, _quad(c, setting.disc))
    if kind is Kind.HEISENBERG:
        return heisenberg.per_denominator_count(setting, _quad(c, setting.disc))
    if kind is Kind.QUATERNIONIC:
        return quaternionic.per_denominator_count(setting, _quat(c))
    Q = _poly(c, setting.q)
    if Q.is_zero():
        raise DomainError("zero denominator")
    return tree.per_denominator_count(Q)
