"""Flowed coordinates of Farey classes.

For a coprime ``p/q`` complete ``gamma = [[p, p'], [q, q']]`` with determinant
one.  Then ``gamma^-1 n(p/q) Phi^t`` equals, up to sign,
``n(y) D(mu) S`` with ``y = -q'/q`` and ``mu = e^{t/2} / q``, where
``D(mu) = diag(mu, 1/mu)``.  The modulus of ``mu`` gives the excursion
parameter ``s`` and its argument is absorbed by ``M``, so the flowed point is
the Cartan involute of ``n(y) Phi^-s``.  :func:`matrix_identity_check` verifies
this in exact arithmetic before anything relies on it.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .errors import DomainError, NumericError
from .farey import complex_, heisenberg, tree
from .farey.setting import FareyClass, FareySetting, Kind
from .rings import inverse_mod
from .rings.finite_field import PolyFq, field, poly_xgcd
from .rings.lattice import xgcd
from .rings.quadratic import QuadInt, QuadNumber, quad_xgcd, trace_zero_generator

# -- excursion parameter and closed-form coordinates ---------------------------


@dataclass(frozen=True)
class FlowedPoint:
    """Excursion parameter ``s`` (an integer level for trees) and the second
    coordinate ``y``, which is ``None`` where it is not produced."""

    s: float | int
    y: Any
    source: FareyClass


def excursion_param(cls: FareyClass, t) -> float | int:
    """``s`` for the flow time ``t``; for trees ``t`` is the index ``n`` of ``Phi^{2n}``."""
    kind = cls.setting.kind
    if kind is Kind.TREE:
        return int(t) - cls.denominator.degree()
    if kind is Kind.STANDARD:
        return t - 2 * math.log(cls.height)
    if kind is Kind.COMPLEX:
        return t - math.log(cls.height)
    return t - 0.5 * math.log(cls.height)


def _standard_y(p: int, q: int) -> Fraction:
    return Fraction((-inverse_mod(p, q)) % q, q)


def flow_coordinates(cls: FareyClass, t) -> FlowedPoint:
    """Closed-form ``(s, y)``; ``y`` is a canonical class for the complex and tree kinds.

    Unit denominators are accepted: the identity holds with ``gamma = S``-type
    completions and gives the class of ``0``.
    """
    setting = cls.setting
    s = excursion_param(cls, t)
    kind = setting.kind
    if kind is Kind.STANDARD:
        return FlowedPoint(s, _standard_y(cls.numerator, cls.denominator), cls)
    if kind is Kind.COMPLEX:
        p, q = cls.numerator, cls.denominator
        pbar = inverse_mod(p, q) if not q.is_unit() else QuadInt.zero(q.disc)
        return FlowedPoint(s, complex_.canonicalize(setting, -pbar, q), cls)
    if kind is Kind.TREE:
        P, Q = cls.numerator, cls.denominator
        Pbar = inverse_mod(P, Q) if Q.degree() > 0 else PolyFq((), Q.q)
        return FlowedPoint(s, tree.canonicalize(setting, -Pbar, Q), cls)
    return FlowedPoint(s, None, cls)


# -- exact matrix identity -------------------------------------------------------


class Laurent:
    """Laurent polynomial in a formal variable ``X`` over an exact field."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: v for k, v in (terms or {}).items() if v != 0}

    @classmethod
    def const(cls, c) -> Laurent:
        return cls({0: c})

    @classmethod
    def monomial(cls, c, k: int) -> Laurent:
        return cls({k: c})

    def __add__(self, other: Laurent) -> Laurent:
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return Laurent(out)

    def __neg__(self) -> Laurent:
        return Laurent({k: -v for k, v in self.terms.items()})

    def __sub__(self, other: Laurent) -> Laurent:
        return self + (-other)

    def __mul__(self, other: Laurent) -> Laurent:
        out: dict = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = k1 + k2
                out[k] = out[k] + v1 * v2 if k in out else v1 * v2
        return Laurent(out)

    def is_zero(self) -> bool:
        return not self.terms


class RatFunc:
    """Element ``num/den`` of ``GF(q)(Y)``; equality by cross-multiplication."""

    __slots__ = ("num", "den")

    def __init__(self, num: PolyFq, den: PolyFq | None = None):
        if den is not None and den.is_zero():
            raise DomainError("zero denominator")
        self.num, self.den = num, den if den is not None else PolyFq((1,), num.q)

    def __add__(self, o: RatFunc) -> RatFunc:
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    def __neg__(self) -> RatFunc:
        return RatFunc(-self.num, self.den)

    def __sub__(self, o: RatFunc) -> RatFunc:
        return self + (-o)

    def __mul__(self, o: RatFunc) -> RatFunc:
        return RatFunc(self.num * o.num, self.den * o.den)

    def inverse(self) -> RatFunc:
        return RatFunc(self.den, self.num)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def degree(self) -> int:
        """Valuation degree ``deg num - deg den`` (requires nonzero)."""
        return self.num.degree() - self.den.degree()


def _matmul(A, B):
    return [
        [A[i][0] * B[0][j] + A[i][1] * B[1][j] for j in range(2)]
        for i in range(2)
    ]


def completion(cls: FareyClass):
    """``(p', q')`` with ``p q' - p' q = 1``."""
    kind = cls.setting.kind
    p, q = cls.numerator, cls.denominator
    if kind is Kind.STANDARD:
        g, a, b = xgcd(p, q)  # a p + b q = 1
        if g != 1:
            raise DomainError("numerator and denominator are not coprime")
        return -b, a
    if kind is Kind.COMPLEX:
        g, a, b = quad_xgcd(p, q)
        if not g.is_unit():
            raise DomainError("numerator and denominator are not coprime")
        gi = g.conj()  # inverse of a unit
        return -b * gi, a * gi
    if kind is Kind.TREE:
        g, a, b = poly_xgcd(p, q)
        if g.degree() != 0:
            raise DomainError("numerator and denominator are not coprime")
        return -b, a
    raise DomainError(f"no completion for {kind.value} classes")


def matrix_identity_check(cls: FareyClass, n: int | None = None) -> bool:
    """Exact check of the flow identity for ``cls``.

    Standard and complex classes use a formal ``X = e^{t/2}`` and test
    ``gamma^-1 n(p/q) Phi^t = +-n(y) D(X/q) S``.  Tree classes use the integer
    flow index ``n`` (default ``deg Q + 1``) and test
    ``gamma^-1 n(P/Q) Phi^{2n} ~ n(y) Phi^{-2m} S diag(1, u)`` with
    ``|u| = 1`` and ``m = n - deg Q``.
    """
    kind = cls.setting.kind
    if kind not in (Kind.STANDARD, Kind.COMPLEX, Kind.TREE):
        raise DomainError(f"no matrix identity for {kind.value} classes")
    p, q = cls.numerator, cls.denominator
    unit_den = {
        Kind.STANDARD: lambda: abs(q) == 1,
        Kind.COMPLEX: lambda: q.is_unit(),
        Kind.TREE: lambda: q.degree() == 0,
    }[kind]()
    if unit_den:
        raise DomainError("unit denominator: the class is the cusp itself")
    pp, qq = completion(cls)
    if kind is Kind.TREE:
        return _tree_identity(p, q, pp, qq, q.degree() + 1 if n is None else n)

    if kind is Kind.STANDARD:
        F = Fraction
        p_, q_, pp_, qq_ = F(p), F(q), F(pp), F(qq)
        one, zero = F(1), F(0)
    else:
        p_, q_, pp_, qq_ = (x.to_number() for x in (p, q, pp, qq))
        one = QuadNumber.coerce(1, q.disc)
        zero = QuadNumber.coerce(0, q.disc)
    L = Laurent.const
    # gamma^-1 = [[q', -p'], [-q, p]] since det gamma = 1
    g_inv = [[L(qq_), L(-pp_)], [L(-q_), L(p_)]]
    n_r = [[L(one), L(p_ / q_)], [L(zero), L(one)]]
    phi = [[Laurent.monomial(one, -1), L(zero)], [L(zero), Laurent.monomial(one, 1)]]
    lhs = _matmul(_matmul(g_inv, n_r), phi)
    y = -qq_ / q_
    n_y = [[L(one), L(y)], [L(zero), L(one)]]
    # D(mu) with mu = X/q
    d_mu = [[Laurent.monomial(one / q_, 1), L(zero)], [L(zero), Laurent.monomial(q_, -1)]]
    S = [[L(zero), L(-one)], [L(one), L(zero)]]
    rhs = _matmul(_matmul(n_y, d_mu), S)
    same = all((lhs[i][j] - rhs[i][j]).is_zero() for i in range(2) for j in range(2))
    opposite = all((lhs[i][j] + rhs[i][j]).is_zero() for i in range(2) for j in range(2))
    return same or opposite


def _tree_identity(P: PolyFq, Q: PolyFq, PP: PolyFq, QQ: PolyFq, n: int) -> bool:
    fq = P.q
    R = RatFunc
    one, zero = R(PolyFq((1,), fq)), R(PolyFq((), fq))
    Yk = lambda k: R(PolyFq.monomial(k, fq)) if k >= 0 else R(PolyFq((1,), fq), PolyFq.monomial(-k, fq))
    m = n - Q.degree()
    g_inv = [[R(QQ), -R(PP)], [-R(Q), R(P)]]
    n_r = [[one, R(P, Q)], [zero, one]]
    phi = [[one, zero], [zero, Yk(2 * n)]]
    lhs = _matmul(_matmul(g_inv, n_r), phi)
    y = -R(QQ, Q)
    base = _matmul(_matmul([[one, y], [zero, one]], [[one, zero], [zero, Yk(-2 * m)]]), [[zero, -one], [one, zero]])
    # solve lhs = lam * base * diag(1, u): first column fixes lam, second fixes u
    lam = lhs[1][0] * base[1][0].inverse()
    if not (lhs[0][0] - lam * base[0][0]).is_zero():
        return False
    u = lhs[0][1] * (lam * base[0][1]).inverse()
    if not (lhs[1][1] - lam * base[1][1] * u).is_zero():
        return False
    return not u.is_zero() and u.degree() == 0


# -- upper half-plane oracle -------------------------------------------------------


@dataclass(frozen=True)
class UpperHalfPlanePoint:
    """Point of the upper half-plane with a unit tangent direction angle."""

    z: complex
    angle: float = math.pi / 2

    def __post_init__(self):
        if not self.z.imag > 0:
            raise DomainError(f"{self.z} is not in the upper half-plane")


def _apply(word_letter: str, z: complex, angle: float) -> tuple[complex, float]:
    if word_letter == "T":
        return z + 1, angle
    if word_letter == "t":
        return z - 1, angle
    # S: z -> -1/z has derivative 1/z^2
    return -1 / z, angle - 2 * cmath.phase(z)


def fd_reduce(pt: UpperHalfPlanePoint, max_steps: int = 10_000, tol: float = 1e-12):
    """Move ``pt`` into ``|Re z| <= 1/2, |z| >= 1`` by ``T``, ``T^-1`` and ``S``.

    Returns the reduced point and the applied word, leftmost letter first
    applied.
    """
    z, angle = pt.z, pt.angle
    word = []
    for _ in range(max_steps):
        shift = math.floor(z.real + 0.5)
        if abs(z.real) > 0.5 + tol and shift:
            letter = "t" if shift > 0 else "T"
            z = complex(z.real - shift, z.imag)
            word.extend(letter * abs(shift))
            continue
        if abs(z) < 1 - tol:
            z, angle = _apply("S", z, angle)
            word.append("S")
            continue
        return UpperHalfPlanePoint(z, math.remainder(angle, 2 * math.pi)), "".join(word)
    raise NumericError(f"fundamental domain reduction did not converge in {max_steps} steps")


def hyperbolic_distance(z1: complex, z2: complex) -> float:
    num = abs(z1 - z2) ** 2
    return math.acosh(1 + num / (2 * z1.imag * z2.imag)) if num else 0.0


_BOUNDARY = ((1, 0, 0, 1), (1, 1, 0, 1), (1, -1, 0, 1), (0, -1, 1, 0), (0, -1, 1, 1), (0, -1, 1, -1),
             (1, -1, 1, 0), (-1, -1, 1, 0))


def modular_distance(z1: complex, z2: complex) -> float:
    """Hyperbolic distance between reduced points, allowing boundary identifications."""
    best = math.inf
    for a, b, c, d in _BOUNDARY:
        w = (a * z2 + b) / (c * z2 + d)
        best = min(best, hyperbolic_distance(z1, w))
    return best


def frame_basepoint(p: int, q: int, t: float) -> complex:
    """Basepoint of ``n(p/q) Phi^t`` applied to the frame at ``i``."""
    return complex(p / q, math.exp(-t))


def dual_basepoint(y: Fraction, s: float) -> complex:
    """Basepoint of the Cartan involute of ``n(y) Phi^-s``: ``S n(y) Phi^-s S^-1 i``."""
    return -1 / complex(float(y), math.exp(s))


def oracle_distance(p: int, q: int, s0: float) -> float:
    """Distance between the reduced frame and the reduced closed-form prediction."""
    t = 2 * math.log(q) + s0
    z1 = fd_reduce(UpperHalfPlanePoint(frame_basepoint(p, q, t)))[0].z
    z2 = fd_reduce(UpperHalfPlanePoint(dual_basepoint(_standard_y(p, q), s0)))[0].z
    return modular_distance(z1, z2)


# -- bins in the horosphere quotients ---------------------------------------------


def _floor_bin(x: Fraction, bins: int) -> int:
    return (x.numerator * bins) // x.denominator


def complex_x_bin(setting: FareySetting, num: QuadInt, den: QuadInt, bins: int) -> tuple[int, int]:
    """Bin of ``num/den`` in ``O' \\ C``: minimal coordinate bin over ``u^2`` rotations."""
    best = None
    for z in complex_.square_units(setting.disc):
        x, y = complex_.point(z * num, den)
        b = (_floor_bin(x - math.floor(x), bins), _floor_bin(y - math.floor(y), bins))
        if best is None or b < best:
            best = b
    return best


def heisenberg_fold(a: QuadInt, alpha: QuadInt, c: QuadInt):
    """Fold ``(w0, w) = (a/c, alpha/c)`` by the translations of the lattice.

    Returns ``(w, h)`` with ``w`` as coordinates in the basis of admissible
    translations, reduced to ``[0, 1)^2``, and ``h`` the vertical coordinate
    of ``w0`` as a fraction of its period, reduced to ``[0, 1)``.
    """
    disc = c.disc
    w0, w = heisenberg.point(a, alpha, c)
    b1, b2 = heisenberg.w_prime_basis(disc)
    det = b1.a * b2.b - b1.b * b2.a
    # coordinates of w in (b1, b2)
    x1 = (w.a * b2.b - w.b * b2.a) / det
    x2 = (b1.a * w.b - b1.b * w.a) / det
    k1, k2 = math.floor(x1), math.floor(x2)
    v = b1 * (-k1) + b2 * (-k2)
    w_red = w + v.to_number()
    v0 = heisenberg.translation_partner(v).to_number()
    w0 = w0 + v0 + w * v.conj().to_number()
    # vertical coordinate: w0 = re + h * tau0 with tau0 the trace-zero generator
    tau0 = trace_zero_generator(disc).to_number()
    h = w0.b / tau0.b
    return (x1 - k1, x2 - k2), h - math.floor(h), w_red, w0


def heisenberg_bin(cls: FareyClass, bins: int = 10) -> tuple[int, int, int]:
    """Invariant bin of a Heisenberg class: minimum over ``{u^3}`` rotations of
    the bin of the translation-folded point."""
    a, alpha = cls.numerator
    c = cls.denominator
    best = None
    for z in heisenberg.rotations(c.disc):
        (x1, x2), h, _, _ = heisenberg_fold(a, z * alpha, c)
        b = (_floor_bin(x1, bins), _floor_bin(x2, bins), _floor_bin(h, bins))
        if best is None or b < best:
            best = b
    return best


def tree_digits(P: PolyFq, Q: PolyFq, digits: int) -> tuple[int, ...]:
    """First ``digits`` coefficients of ``P/Q`` in powers ``Y^-1, Y^-2, ...``;
    requires ``deg P < deg Q``."""
    F = field(Q.q)
    inv_lead = int(F.inv[Q.lead()])
    shift = PolyFq.monomial(1, Q.q)
    r, out = P, []
    for _ in range(digits):
        r = r * shift
        a = F.mul[r.lead()][inv_lead] if r.degree() == Q.degree() else 0
        out.append(int(a))
        if a:
            r = r - Q.scale(int(a))
    return tuple(out)


def tree_x_bin(P: PolyFq, Q: PolyFq, digits: int = 1) -> int:
    """Bin of ``P/Q`` in ``GF(q)((Y^-1))`` modulo the polynomials and the unit
    scalings: the smallest leading-digit index over the scaled numerators."""
    q = Q.q
    P = P % Q
    best = None
    for d in field(q).units():
        idx = 0
        for a in tree_digits(P.scale(d), Q, digits):
            idx = idx * q + a
        if best is None or idx < best:
            best = idx
    return best
