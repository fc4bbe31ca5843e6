import math
from fractions import Fraction
from functools import reduce

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fareyflow.errors import ConfigurationError, DomainError
from fareyflow.farey import FareySetting, cardinality
from fareyflow.limits import LimitLaw
from fareyflow.pipeline import accumulate, build_config, s_values
from fareyflow.stats import (
    BinSpec,
    EmpiricalMeasure,
    TestResult,
    ks_against,
    merge,
    product_deviation,
    star_discrepancy,
)

SPEC = BinSpec(3, 2, (0.0, 0.5, 1.5, math.inf))


# -- KS ----------------------------------------------------------------------------


def test_ks_single_sample_at_the_median():
    law = LimitLaw(1.0)
    assert ks_against(law, [math.log(2)]).statistic == pytest.approx(0.5)


def test_ks_exact_quantiles():
    law = LimitLaw(2.0, 0.5)
    N = 9
    samples = law.quantile(np.arange(1, N + 1) / (N + 1))
    assert ks_against(law, samples).statistic <= 1 / 10 + 1e-12


def test_ks_empty_input():
    with pytest.raises(DomainError):
        ks_against(LimitLaw(1.0), [])


def _ks_brute(samples, cdf):
    """sup |F_n - F| over a dense grid plus both sides of every sample."""
    x = np.sort(np.asarray(samples, float))
    grid = np.concatenate([x, np.nextafter(x, -np.inf), np.linspace(x.min() - 1, x.max() + 1, 2001)])
    emp = np.searchsorted(x, grid, side="right") / x.size
    return float(np.max(np.abs(emp - cdf(grid))))


@given(st.lists(st.floats(-2, 8), min_size=1, max_size=40), st.sampled_from([1.0, 2.0, 4.0]))
def test_ks_against_brute_force(samples, delta):
    law = LimitLaw(delta, 0.0)
    got = ks_against(law, samples).statistic
    assert got == pytest.approx(_ks_brute(samples, law.cdf), abs=1e-9)


@given(st.lists(st.integers(0, 6), min_size=1, max_size=30), st.sampled_from([2, 3]))
def test_ks_discrete_against_brute_force(levels, q):
    law = LimitLaw(math.log(q), 0, q=q)
    got = ks_against(law, levels).statistic
    assert got == pytest.approx(_ks_brute(levels, law.cdf), abs=1e-12)


@given(st.lists(st.floats(0, 5), min_size=1, max_size=30), st.lists(st.integers(1, 5), min_size=30, max_size=30))
def test_ks_weights_are_multiplicities(values, weights):
    w = weights[: len(values)]
    law = LimitLaw(1.0)
    repeated = np.repeat(values, w)
    assert ks_against(law, values, weights=w).statistic == pytest.approx(ks_against(law, repeated).statistic)


class _Reparametrized:
    """The law of ``phi(S)`` for a strictly increasing ``phi`` with inverse ``inv``."""

    def __init__(self, law, inv):
        self.law, self.inv = law, inv

    def cdf(self, u):
        return self.law.cdf(self.inv(np.asarray(u, float)))

    def cdf_left(self, u):
        return self.law.cdf_left(self.inv(np.asarray(u, float)))


@given(st.lists(st.floats(0, 6), min_size=1, max_size=50), st.sampled_from([1.0, 2.0, 10.0]))
def test_ks_invariant_under_monotone_reparametrization(samples, delta):
    law = LimitLaw(delta, 0.0)
    base = ks_against(law, samples).statistic
    warped = ks_against(_Reparametrized(law, np.log), np.exp(samples)).statistic
    assert warped == pytest.approx(base, abs=1e-12)
    # an affine change of variable maps one truncated exponential law to another
    other = LimitLaw(2 * delta, 1.0)
    affine = ks_against(other, 1.0 + np.asarray(samples) / 2).statistic
    assert affine == pytest.approx(base, abs=1e-12)


# -- discrepancy ---------------------------------------------------------------------


@pytest.mark.parametrize("N", [1, 2, 7, 100])
def test_star_discrepancy_of_a_regular_grid(N):
    assert star_discrepancy(np.arange(N) / N).statistic == pytest.approx(1 / N)


def test_star_discrepancy_of_zero():
    assert star_discrepancy([0.0]).statistic == 1


def test_farey_x_discrepancy():
    Q = 1000
    xs = np.concatenate([np.arange(q)[np.gcd(np.arange(q), q) == 1] / q for q in range(1, Q + 1)])
    assert star_discrepancy(xs).statistic <= 0.01


def _star_2d_brute(pts):
    pts = np.asarray(pts, float)
    xs = np.append(pts[:, 0], 1.0)
    ys = np.append(pts[:, 1], 1.0)
    n = len(pts)
    best = 0.0
    for a in xs:
        for b in ys:
            closed = np.sum((pts[:, 0] <= a) & (pts[:, 1] <= b)) / n
            opened = np.sum((pts[:, 0] < a) & (pts[:, 1] < b)) / n
            best = max(best, closed - a * b, a * b - opened)
    return best


@given(st.lists(st.tuples(st.floats(0, 0.999), st.floats(0, 0.999)), min_size=1, max_size=25))
def test_two_dimensional_discrepancy_against_corner_scan(pts):
    assert star_discrepancy(pts).statistic == pytest.approx(_star_2d_brute(pts), abs=1e-12)


def test_discrepancy_errors():
    with pytest.raises(DomainError):
        star_discrepancy(np.zeros((0,)))
    with pytest.raises(DomainError):
        star_discrepancy(np.zeros((3, 3)))


# -- product deviation ---------------------------------------------------------------------


def test_product_deviation_of_a_product():
    h = np.multiply.outer(np.multiply.outer([1, 2, 3], [4, 1]), [2, 2, 5])
    assert product_deviation(h).statistic == pytest.approx(0, abs=1e-15)


def test_product_deviation_two_by_two():
    # relative frequencies 1/2 off the diagonal against a product of 1/4 everywhere:
    # every cell deviates by 1/4, so the relative L2 distance is 1
    h = np.array([[0, 1], [1, 0]])
    p = h / h.sum()
    assert np.all(np.abs(p - 0.25) == 0.25)
    assert product_deviation(h).statistic == pytest.approx(1.0)
    # one extra unit on an off-diagonal cell of the uniform 2x2 table
    h = np.array([[1, 2], [1, 1]])
    p = h / 5
    prod = np.outer(p.sum(1), p.sum(0))
    assert product_deviation(h).statistic == pytest.approx(np.linalg.norm(p - prod) / np.linalg.norm(prod))
    assert product_deviation(h).statistic > 0


def test_product_deviation_errors():
    with pytest.raises(DomainError):
        product_deviation(np.ones((1, 4)))
    with pytest.raises(DomainError):
        product_deviation(np.zeros((2, 2)))


# -- accumulators and merge ------------------------------------------------------------------


@st.composite
def measures(draw, samples=True):
    acc = EmpiricalMeasure(SPEC, keep_samples=samples, reservoir_size=4)
    for _ in range(draw(st.integers(0, 3))):
        n = draw(st.integers(0, 6))
        xb = draw(st.lists(st.integers(0, 2), min_size=n, max_size=n))
        yb = draw(st.lists(st.integers(0, 1), min_size=n, max_size=n))
        s = draw(st.lists(st.floats(-1, 4), min_size=n, max_size=n))
        h = draw(st.lists(st.integers(1, 9), min_size=n, max_size=n))
        x = [v / 3 for v in xb]
        y = [v / 2 for v in yb]
        recs = [(draw(st.integers(0, 1 << 20)), ("row", k)) for k in h]
        acc.add(xb, yb, SPEC.s_bin(s), h, x, y, recs)
    return acc


def test_merge_examples():
    a = EmpiricalMeasure(SPEC)
    a.add([0, 2], [1, 1], [0, 2], [3, 5])
    empty = EmpiricalMeasure(SPEC)
    assert merge(a, empty) == a
    b = EmpiricalMeasure(SPEC)
    b.add([1], [0], [1], [5])
    assert merge(a, b) == merge(b, a)
    assert merge(a, b).count == a.count + b.count == 3
    assert merge(a, b).tail_count(4) == 1 and merge(a, b).tail_count(5) == 3


@given(measures(), measures(), measures())
def test_merge_is_a_commutative_monoid(a, b, c):
    empty = EmpiricalMeasure(SPEC, keep_samples=True, reservoir_size=4)
    assert merge(a, empty) == a == merge(empty, a)
    assert merge(a, b) == merge(b, a)
    assert merge(merge(a, b), c) == merge(a, merge(b, c))
    m = merge(a, b)
    assert m.count == a.count + b.count
    assert int(m.hist.sum()) == m.count


@given(measures())
def test_histogram_mass_equals_count(a):
    assert int(a.hist.sum()) == a.count == int(a.height_counts.sum())
    assert a.consolidate().x_samples.size == a.count


@given(st.lists(st.tuples(st.integers(0, 2), st.integers(0, 1), st.integers(0, 2), st.integers(1, 9)), max_size=30), st.integers(1, 4))
def test_splitting_a_stream_does_not_change_the_result(points, parts):
    def build(chunk):
        acc = EmpiricalMeasure(SPEC)
        if chunk:
            xb, yb, sb, h = zip(*chunk)
            acc.add(xb, yb, sb, h)
        return acc

    whole = build(points)
    pieces = [build(points[i::parts]) for i in range(parts)]
    assert reduce(merge, pieces) == whole


def test_merge_rejects_mismatched_binning():
    with pytest.raises(ConfigurationError):
        merge(EmpiricalMeasure(SPEC), EmpiricalMeasure(BinSpec(2, 2)))
    with pytest.raises(ConfigurationError):
        merge(EmpiricalMeasure(SPEC), EmpiricalMeasure(SPEC, keep_samples=True))


def test_add_checks_lengths():
    with pytest.raises(DomainError):
        EmpiricalMeasure(SPEC).add([0, 1], [0], [0, 0], [1, 1])
    with pytest.raises(DomainError):
        EmpiricalMeasure(SPEC, keep_samples=True).add([0], [0], [0], [1])


def test_binspec_validation():
    with pytest.raises(ConfigurationError):
        BinSpec(0, 1)
    with pytest.raises(ConfigurationError):
        BinSpec(1, 1, (1.0, 1.0))
    assert list(SPEC.s_bin([-5, 0.2, 0.5, 3, 1e9])) == [0, 0, 1, 2, 2]


def test_test_result_passes_iff_statistic_within_threshold():
    assert TestResult("a", 0.1, 5, 0.1).passed is True
    assert TestResult("a", 0.11, 5, 0.1).passed is False
    assert TestResult("a", 0.11, 5).passed is None
    assert TestResult("a", 0.1, 5, 0.2).as_dict() == {"name": "a", "statistic": 0.1, "n": 5, "threshold": 0.2, "pass": True}


# -- exact structural identity ----------------------------------------------------------------


@pytest.mark.parametrize("Q, t0", [(300, 0.0), (500, -1.0), (211, 0.7)])
def test_standard_tail_is_a_ratio_of_cardinalities(Q, t0):
    config = build_config("marginal", {"setting": "standard", "height": str(Q), "t0": t0, "sample_rows": 0})
    acc = accumulate(config)
    s = s_values(config, acc.heights)
    total = cardinality(FareySetting.standard(), Q)
    assert acc.count == total
    for sigma, h in zip(s, acc.heights):
        # points with s >= sigma are those of height at most h
        emp_tail = Fraction(int(acc.height_counts[s >= sigma].sum()), acc.count)
        assert emp_tail * total == cardinality(FareySetting.standard(), int(h))


def test_complex_tail_is_a_ratio_of_cardinalities():
    config = build_config("marginal", {"setting": "complex", "disc": -3, "norm": 300, "sample_rows": 0})
    acc = accumulate(config)
    s = s_values(config, acc.heights)
    for sigma, h in list(zip(s, acc.heights))[::7]:
        assert int(acc.height_counts[s >= sigma].sum()) == cardinality(FareySetting.complex(-3), int(h))
