"""Limit laws of the excursion parameter, counting constants and the zeta
values they need."""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import ConfigurationError, DomainError
from .farey.setting import FareySetting, Kind
from .rings.quadratic import SUPPORTED_DISCRIMINANTS, kronecker, omega_norm


# -- limit laws ---------------------------------------------------------------


@dataclass(frozen=True)
class LimitLaw:
    """Truncated exponential law ``delta e^{delta (t0 - s)} ds`` on ``s >= t0``.

    When ``q`` is set the law is the geometric law on integer levels
    ``m >= t0`` with masses ``(q^2 - 1) q^{2 t0 - 2} q^{-2m}``.
    """

    delta: float
    t0: float = 0.0
    q: int | None = None

    @classmethod
    def for_setting(cls, setting: FareySetting) -> LimitLaw:
        if setting.kind is Kind.TREE:
            return cls(math.log(setting.q), int(setting.t0), setting.q)
        return cls(setting.delta, float(setting.t0))

    @property
    def discrete(self) -> bool:
        return self.q is not None

    def cdf(self, s):
        s = np.asarray(s, dtype=float)
        if self.discrete:
            levels = np.floor(s) - self.t0 + 1
            out = 1.0 - np.power(float(self.q), -2.0 * np.maximum(levels, 0))
        else:
            out = -np.expm1(self.delta * (self.t0 - np.maximum(s, self.t0)))
        return out if out.ndim else float(out)

    def cdf_left(self, s):
        """Left limit ``P(S < s)``."""
        if not self.discrete:
            return self.cdf(s)
        s = np.asarray(s, dtype=float)
        levels = np.ceil(s) - self.t0
        out = 1.0 - np.power(float(self.q), -2.0 * np.maximum(levels, 0))
        return out if out.ndim else float(out)

    def density(self, s):
        if self.discrete:
            raise DomainError("geometric law has no density; use pmf")
        s = np.asarray(s, dtype=float)
        return np.where(s >= self.t0, self.delta * np.exp(self.delta * (self.t0 - s)), 0.0)

    def pmf(self, m: int) -> Fraction:
        if not self.discrete:
            raise DomainError("continuous law has no mass function")
        if m < self.t0:
            return Fraction(0)
        q = self.q
        return Fraction(q * q - 1) * Fraction(q) ** (2 * self.t0 - 2) / Fraction(q) ** (2 * m)

    def quantile(self, p):
        p = np.asarray(p, dtype=float)
        if self.discrete:
            m = np.ceil(-np.log1p(-p) / (2 * math.log(self.q)) - 1 + self.t0 - 1e-12)
            out = np.maximum(m, self.t0)
        else:
            out = self.t0 - np.log1p(-p) / self.delta
        return out if out.ndim else float(out)

    def bin_edges(self, bins: int) -> tuple[float, ...]:
        """Equal-mass edges ``t0 = e_0 < ... < e_bins = inf`` (continuous laws)."""
        if self.discrete:
            return tuple(float(self.t0 + k) for k in range(bins)) + (math.inf,)
        return tuple(float(v) for v in self.quantile(np.arange(bins) / bins)) + (math.inf,)


def limit_s_cdf(law: LimitLaw, s):
    return law.cdf(s)


# -- zeta values --------------------------------------------------------------


@lru_cache(maxsize=None)
def _bernoulli(n: int) -> Fraction:
    B = [Fraction(1)]
    for m in range(1, n + 1):
        B.append(-sum(math.comb(m + 1, k) * B[k] for k in range(m)) / (m + 1))
    return B[n]


def hurwitz_zeta(s: int, x: float, N: int = 30, terms: int = 12) -> float:
    """Hurwitz zeta by Euler-Maclaurin summation; error below 1e-15 for s >= 2."""
    if s < 2:
        raise DomainError("only s >= 2 is supported")
    head = math.fsum((n + x) ** -s for n in range(N))
    y = N + x
    tail = y ** (1 - s) / (s - 1) + 0.5 * y**-s
    rising = float(s)  # s (s+1) ... (s + 2k - 2)
    for k in range(1, terms + 1):
        tail += float(_bernoulli(2 * k)) / math.factorial(2 * k) * rising * y ** (-s - 2 * k + 1)
        rising *= (s + 2 * k - 1) * (s + 2 * k)
    return head + tail


def riemann_zeta(s: int) -> float:
    return hurwitz_zeta(s, 1.0)


def dirichlet_l(s: int, disc: int) -> float:
    """``L(s, chi_D)`` for the Kronecker character of ``D``, via Hurwitz zeta."""
    m = abs(disc)
    total = math.fsum(kronecker(disc, a) * hurwitz_zeta(s, a / m) for a in range(1, m + 1))
    return total / m**s


def catalan() -> float:
    return dirichlet_l(2, -4)


_memo_lock = threading.Lock()
_zeta_memo: dict[tuple[int, int, float], float] = {}


def zeta_dedekind(disc: int, s: int, tol: float = 1e-9) -> float:
    """Dedekind zeta of Q(sqrt D) as a lattice sum with a rigorous tail bound."""
    if disc not in SUPPORTED_DISCRIMINANTS or s not in (2, 3):
        raise ConfigurationError(f"zeta_K({s}) for D={disc} is not supported")
    key = (disc, s, tol)
    with _memo_lock:
        if key in _zeta_memo:
            return _zeta_memo[key]
    value, _ = lattice_zeta(disc, s, tol)
    with _memo_lock:
        _zeta_memo.setdefault(key, value)
        return _zeta_memo[key]


def lattice_constants(disc: int):
    """Area constant ``A`` and error constants ``(c1, c2)`` of the count
    ``N(x) = #{0 != lam : n(lam) <= x} = A x + E(x)``, ``|E| <= c1 sqrt(x) + c2``."""
    covol = math.sqrt(-disc) / 2
    # reduced generator theta of O = Z + Z theta, with real part 0 or 1/2
    theta = complex((disc % 2) / 2, math.sqrt(-disc) / 2)
    diam = 1 + abs(theta)
    A = math.pi / covol
    return A, 2 * math.pi * diam / covol, math.pi * diam * diam / covol + 1


def lattice_radius(disc: int, s: int, tol: float) -> int:
    w = 6 if disc == -3 else 4 if disc == -4 else 2
    _, c1, c2 = lattice_constants(disc)
    R = 16.0
    while (s * c1 * R ** (0.5 - s) / (s - 0.5) + c2 * R**-s) / w > tol:
        R *= 1.25
    return int(math.ceil(R))


def lattice_zeta(disc: int, s: int, tol: float = 1e-9, R: int | None = None):
    """Return ``(value, error_bound)``; optionally with an explicit norm cutoff."""
    w = 6 if disc == -3 else 4 if disc == -4 else 2
    R = R or lattice_radius(disc, s, tol)
    A, c1, c2 = lattice_constants(disc)
    nw = omega_norm(disc)
    bmax = math.isqrt(4 * R // -disc) + 1
    partial = []
    count = 0
    for b in range(-bmax, bmax + 1):
        rem = R - (-disc) * b * b / 4.0
        if rem < 0:
            continue
        centre = -b * disc / 2.0
        r = math.sqrt(rem)
        a = np.arange(math.floor(centre - r) - 1, math.ceil(centre + r) + 2, dtype=np.int64)
        n = a * a + a * b * disc + b * b * nw
        n = n[(n > 0) & (n <= R)]
        count += n.size
        partial.append(np.sum(np.power(n.astype(float), -s)))
    head = math.fsum(partial)
    tail = -count * float(R) ** -s + s * A * float(R) ** (1 - s) / (s - 1)
    err = (s * c1 * float(R) ** (0.5 - s) / (s - 0.5) + c2 * float(R) ** -s) / w
    return (head + tail) / w, err


def zeta_function_field(q: int, s: int) -> Fraction:
    """Zeta function of GF(q)(Y): ``1 / ((1 - q^-s)(1 - q^{1-s}))``."""
    if s in (0, 1):
        raise DomainError("zeta of GF(q)(Y) has poles at s = 0 and s = 1")
    qs = Fraction(q) ** -s
    return 1 / ((1 - qs) * (1 - q * qs))


# -- counting constants -------------------------------------------------------


@dataclass(frozen=True)
class CountConstant:
    """Leading constant ``C`` with ``Card ~ C * X**exponent``.

    ``X`` is the integer height bound of the setting: the denominator bound
    (standard), the norm bound (complex, Heisenberg, quaternionic) or
    ``q**n`` (tree).
    """

    setting: FareySetting
    value: float
    exponent: int
    breakdown: dict = field(default_factory=dict)
    closed_form: Callable[[int], int] | None = field(default=None, compare=False)


def count_constant(setting: FareySetting) -> CountConstant:
    kind = setting.kind
    if kind is Kind.STANDARD:
        return CountConstant(setting, 3 / math.pi**2, 2, {"numerator": 3, "pi_power": 2})
    if kind is Kind.COMPLEX:
        D = setting.disc
        w = setting.unit_count
        zk = zeta_dedekind(D, 2)
        value = 2 * math.pi / (w * w * zk * math.sqrt(-D))
        return CountConstant(setting, value, 2, {"units": w, "zeta_K(2)": zk, "sqrt|D|": math.sqrt(-D)})
    if kind is Kind.HEISENBERG:
        D = setting.disc
        w = setting.unit_count
        z3 = riemann_zeta(3)
        zk = zeta_dedekind(D, 3)
        dlt = 1 if D == -3 else 0
        value = 3 * (1 + 2 * dlt) * z3 / (2 * math.pi * w * w * math.sqrt(-D) * zk)
        return CountConstant(
            setting, value, 2, {"units": w, "zeta(3)": z3, "zeta_K(3)": zk, "sqrt|D|": math.sqrt(-D)}
        )
    if kind is Kind.QUATERNIONIC:
        DA, mA, units_ = 2, 24, 24
        prod = 1
        for p in (2,):
            prod *= (p - 1) * (p * p + 1) * (p**3 - 1)
        value = 2**4 * 3**6 * 5 * 7 * DA**4 / (math.pi**8 * mA * units_**4 * prod)
        return CountConstant(
            setting, value, 5, {"D_A": DA, "m_A": mA, "units": units_, "ramified_product": prod}
        )
    if kind is Kind.TREE:
        q = setting.q
        genus = 0
        zm1 = zeta_function_field(q, -1)
        value = Fraction(q) ** (2 * genus - 2) * q**3 / ((q - 1) ** 2 * (q * q - 1) * (q + 1) * zm1)
        return CountConstant(
            setting,
            float(value),
            2,
            {"genus": genus, "zeta_K(-1)": zm1, "exact": value},
            closed_form=lambda n, q=q: 1 + q * (q ** (2 * n) - 1) // (q * q - 1),
        )
    raise ConfigurationError(f"unsupported setting {setting}")
