from collections import Counter
from functools import lru_cache

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from fareyflow.errors import ConfigurationError, DomainError
from fareyflow.farey import (
    EnumBudget,
    FareySetting,
    canonicalize,
    cardinality,
    enumerate_classes,
    per_denominator_count,
    shard_bounds,
)
from fareyflow.farey import heisenberg as heis
from fareyflow.farey import quaternionic as quat
from fareyflow.rings import PolyFq, QuadInt, SUPPORTED_DISCRIMINANTS
from fareyflow.rings.finite_field import monic_of_degree, poly_gcd, polys_of_degree_below
from fareyflow.rings.hurwitz import HurwitzQuat, hurwitz_units
from fareyflow.rings.quadratic import trace_zero_generator, units


def gauss(x, y):
    return QuadInt(x + 2 * y, y, -4)


def listing(setting, height, shard=None):
    return sorted(enumerate_classes(setting, EnumBudget(height, shard)), key=lambda c: c.sort_key())


# -- examples -------------------------------------------------------------------------


def test_standard_height_three():
    classes = listing(FareySetting.standard(), 3)
    assert [(c.numerator, c.denominator) for c in classes] == [(0, 1), (1, 2), (1, 3), (2, 3)]


def test_complex_gaussian_norm_two():
    classes = listing(FareySetting.complex(-4), 2)
    assert len(classes) == 2
    assert sorted(c.height for c in classes) == [1, 2]


def test_tree_q2_degree_one():
    s = FareySetting.tree(2)
    classes = listing(s, 2)
    assert len(classes) == 3
    Y = PolyFq((0, 1), 2)
    assert {(c.numerator, c.denominator) for c in classes} == {
        (PolyFq((), 2), PolyFq((1,), 2)),
        (PolyFq((1,), 2), Y),
        (PolyFq((1,), 2), Y + 1),
    }


@pytest.mark.parametrize(
    "setting, height, expected",
    [(FareySetting.standard(), 3, 4), (FareySetting.tree(2), 4, 11)],
)
def test_cardinality_examples(setting, height, expected):
    assert cardinality(setting, height) == expected


def test_standard_cardinality_matches_mertens():
    import math

    Q = 10**5
    assert abs(cardinality(FareySetting.standard(), Q) / (3 / math.pi**2 * Q * Q) - 1) < 1e-3


def test_canonicalize_examples():
    assert canonicalize((7, 5), FareySetting.standard()) == canonicalize((2, 5), FareySetting.standard())
    assert canonicalize((7, 5), FareySetting.standard()).numerator == 2
    cx = FareySetting.complex(-4)
    one, den = gauss(1, 0), gauss(1, 1)
    assert canonicalize((gauss(0, 1) * one, den), cx) == canonicalize((one, den), cx)
    tr = FareySetting.tree(3)
    P, Q = PolyFq((1, 2), 3), PolyFq((1, 0, 1), 3)
    assert canonicalize((P.scale(2), Q), tr) == canonicalize((P, Q), tr)


def test_canonicalize_rejects_bad_input():
    with pytest.raises(DomainError):
        canonicalize((2, 4), FareySetting.standard())
    with pytest.raises(DomainError):
        canonicalize((gauss(2, 0), gauss(1, 1)), FareySetting.complex(-4))
    D = -4
    with pytest.raises(DomainError):
        canonicalize((QuadInt(1, 0, D), QuadInt(1, 0, D), QuadInt(1, 0, D)), FareySetting.heisenberg(D))


@pytest.mark.parametrize(
    "setting, c, expected",
    [
        (FareySetting.standard(), 6, 2),
        (FareySetting.tree(2), PolyFq((0, 0, 1), 2), 2),
        (FareySetting.complex(-4), gauss(1, 1), 1),
    ],
)
def test_per_denominator_count_examples(setting, c, expected):
    assert per_denominator_count(setting, c) == expected


def test_unsupported_discriminant():
    with pytest.raises(ConfigurationError):
        FareySetting.complex(-15)
    with pytest.raises(ConfigurationError):
        FareySetting.heisenberg(-20)
    with pytest.raises(ConfigurationError):
        FareySetting.tree(6)


def test_budget_validation():
    with pytest.raises(ConfigurationError):
        EnumBudget(0)
    with pytest.raises(ConfigurationError):
        EnumBudget(10, subsample=0.0)
    with pytest.raises(ConfigurationError):
        shard_bounds(10, 0)


def test_critical_exponents():
    import math

    assert FareySetting.standard().delta == 1
    assert FareySetting.complex(-3).delta == 2
    assert FareySetting.heisenberg(-7).delta == 4
    assert FareySetting.quaternionic().delta == 10
    assert FareySetting.tree(5).delta == pytest.approx(math.log(5))


# -- exactness against brute force ---------------------------------------------------


def test_standard_exact_against_brute_force():
    got = [(c.numerator, c.denominator) for c in listing(FareySetting.standard(), 200)]
    assert sorted(got) == oracles.standard_brute(200)
    assert cardinality(FareySetting.standard(), 200) == len(got)


def test_standard_per_denominator_is_totient():
    for q in range(1, 200):
        brute = sum(1 for p in range(q) if __import__("math").gcd(p, q) == 1)
        assert per_denominator_count(FareySetting.standard(), q) == brute


@pytest.mark.slow
@pytest.mark.parametrize("D", SUPPORTED_DISCRIMINANTS)
def test_complex_exact_against_brute_force(D):
    s = FareySetting.complex(D)
    brute = oracles.complex_brute_count(D, 50)
    assert cardinality(s, 50) == brute
    assert sum(1 for _ in enumerate_classes(s, EnumBudget(50))) == brute


@pytest.mark.parametrize("D", SUPPORTED_DISCRIMINANTS)
def test_heisenberg_exact_against_brute_force(D):
    s = FareySetting.heisenberg(D)
    brute = oracles.heisenberg_brute_counts(D, 25)
    classes = list(enumerate_classes(s, EnumBudget(25)))
    per_norm = Counter(c.height for c in classes)
    assert [per_norm[n] for n in range(1, 26)] == brute
    assert cardinality(s, 25) == sum(brute)


@pytest.mark.parametrize("D", [-3, -4, -8])
def test_heisenberg_classes_biject_with_orbits(D):
    labels, keys, _ = oracles.heisenberg_orbits(D, 12)
    label_of = dict(zip(keys, labels))
    s = FareySetting.heisenberg(D)
    hit = [label_of[oracles.heisenberg_class_key(D, *c.numerator, c.denominator)] for c in enumerate_classes(s, EnumBudget(12))]
    assert len(hit) == len(set(hit)) == len(set(labels))


@pytest.mark.slow
def test_quaternionic_exact_against_brute_force():
    labels, keys, norms = oracles.quaternion_orbits(9)
    label_of = dict(zip(keys, labels))
    classes = list(enumerate_classes(FareySetting.quaternionic(), EnumBudget(9)))
    hit = [label_of[oracles.quaternion_class_key(*c.numerator, c.denominator)] for c in classes]
    assert len(hit) == len(set(hit)) == len(set(labels))
    per_norm = Counter(c.height for c in classes)
    brute = oracles.quaternion_brute_counts(9)
    assert [per_norm[n] for n in range(1, 10)] == brute
    assert cardinality(FareySetting.quaternionic(), 9) == sum(brute)


def _tree_brute(q, n):
    """Orbits of P/Q under r -> d r + b, counted per monic denominator."""
    total = 0
    for deg in range(n + 1):
        for Q in monic_of_degree(deg, q):
            orbits = set()
            for P in polys_of_degree_below(deg, q):
                if poly_gcd(P, Q).degree() != 0:
                    continue
                orbits.add(frozenset((P.scale(d) % Q).coeffs for d in range(1, q)))
            total += len(orbits)
    return total


@pytest.mark.parametrize("q, n", [(2, 1), (2, 3), (2, 5), (3, 2), (3, 4), (3, 5)])
def test_tree_exact_against_brute_force(q, n):
    s = FareySetting.tree(q)
    brute = _tree_brute(q, n)
    assert cardinality(s, q**n) == brute
    assert sum(1 for _ in enumerate_classes(s, EnumBudget(q**n))) == brute


# -- determinism and invariance ----------------------------------------------------------


SHARDED = [
    (FareySetting.standard(), 60),
    (FareySetting.complex(-3), 40),
    (FareySetting.heisenberg(-7), 15),
    (FareySetting.quaternionic(), 4),
    (FareySetting.tree(3), 27),
]


@pytest.mark.parametrize("setting, height", SHARDED, ids=lambda v: getattr(v, "label", lambda: str(v))())
@pytest.mark.parametrize("shards", [2, 3, 7])
def test_shards_partition_the_enumeration(setting, height, shards):
    whole = listing(setting, height)
    pieces = []
    for bounds in shard_bounds(height, shards):
        part = listing(setting, height, bounds)
        assert all(bounds[0] < c.height <= bounds[1] for c in part)
        pieces.extend(part)
    assert sorted(pieces, key=lambda c: c.sort_key()) == whole


@pytest.mark.parametrize("setting, height", SHARDED[:3] + SHARDED[4:], ids=lambda v: getattr(v, "label", lambda: str(v))())
def test_enumeration_is_height_ordered_and_canonical(setting, height):
    classes = list(enumerate_classes(setting, EnumBudget(height)))
    heights = [c.height for c in classes]
    assert heights == sorted(heights)
    for c in classes:
        raw = (*c.numerator, c.denominator) if isinstance(c.numerator, tuple) else (c.numerator, c.denominator)
        assert canonicalize(raw, setting) == c


def test_subsampling_is_shard_independent():
    s = FareySetting.complex(-4)
    full = {c for c in enumerate_classes(s, EnumBudget(60, subsample=0.3, seed=5))}
    parts = set()
    for bounds in shard_bounds(60, 4):
        parts |= set(enumerate_classes(s, EnumBudget(60, bounds, subsample=0.3, seed=5)))
    assert full == parts
    everything = set(enumerate_classes(s, EnumBudget(60)))
    assert full < everything and 0.15 < len(full) / len(everything) < 0.45


@lru_cache(maxsize=None)
def _sample(setting, height):
    return tuple(enumerate_classes(setting, EnumBudget(height)))


@given(st.data(), st.integers(-30, 30), st.booleans())
def test_standard_invariance(data, k, flip):
    c = data.draw(st.sampled_from(_sample(FareySetting.standard(), 40)))
    p, q = c.numerator + k * c.denominator, c.denominator
    if flip:
        p, q = -p, -q
    assert canonicalize((p, q), c.setting) == c


@given(st.sampled_from(SUPPORTED_DISCRIMINANTS), st.data(), st.integers(-5, 5), st.integers(-5, 5))
def test_complex_invariance(D, data, b1, b2):
    s = FareySetting.complex(D)
    c = data.draw(st.sampled_from(_sample(s, 30)))
    u = data.draw(st.sampled_from(units(D)))
    scale = data.draw(st.sampled_from(units(D)))
    p = u * u * c.numerator + QuadInt(b1, b2, D) * c.denominator
    assert canonicalize((scale * p, scale * c.denominator), s) == c


@given(st.sampled_from([2, 3, 4, 5]), st.data())
def test_tree_invariance(q, data):
    s = FareySetting.tree(q)
    c = data.draw(st.sampled_from(_sample(s, q**3)))
    d = data.draw(st.integers(1, q - 1))
    e = data.draw(st.integers(1, q - 1))
    B = PolyFq(tuple(data.draw(st.lists(st.integers(0, q - 1), max_size=3))), q)
    P = c.numerator.scale(d) + B * c.denominator
    assert canonicalize((P.scale(e), c.denominator.scale(e)), s) == c


@given(st.sampled_from(SUPPORTED_DISCRIMINANTS), st.data())
def test_heisenberg_invariance(D, data):
    s = FareySetting.heisenberg(D)
    cls = data.draw(st.sampled_from(_sample(s, 20)))
    (a, alpha), c = cls.numerator, cls.denominator
    b1, b2 = heis.w_prime_basis(D)
    v = b1 * data.draw(st.integers(-3, 3)) + b2 * data.draw(st.integers(-3, 3))
    v0 = heis.translation_partner(v) + trace_zero_generator(D) * data.draw(st.integers(-3, 3))
    a, alpha = a + v.conj() * alpha + v0 * c, alpha + v * c
    zeta = data.draw(st.sampled_from(heis.rotations(D)))
    alpha = zeta * alpha
    u = data.draw(st.sampled_from(units(D)))
    assert canonicalize((u * a, u * alpha, u * c), s) == cls


_PURE = (HurwitzQuat((0, 2, 0, 0)), HurwitzQuat((0, 0, 2, 0)), HurwitzQuat((0, 0, 0, 2)))
_HURWITZ_BASIS = (HurwitzQuat((1, 1, 1, 1)), *_PURE)


@given(st.data())
def test_quaternionic_invariance(data):
    s = FareySetting.quaternionic()
    cls = data.draw(st.sampled_from(_sample(s, 4)))
    (a, alpha), c = cls.numerator, cls.denominator
    coeffs = data.draw(st.lists(st.integers(-2, 2), min_size=4, max_size=4))
    v = HurwitzQuat.zero()
    for k, b in zip(coeffs, _HURWITZ_BASIS):
        v = v + b * k
    pure = HurwitzQuat.zero()
    for k, b in zip(data.draw(st.lists(st.integers(-2, 2), min_size=3, max_size=3)), _PURE):
        pure = pure + b * k
    v0 = quat.translation_partner(v) + pure
    a, alpha = a + v.conj() * alpha + v0 * c, alpha + v * c
    units24 = hurwitz_units()
    u, U, lam = (data.draw(st.sampled_from(units24)) for _ in range(3))
    a, alpha, c = u * a, U * alpha, u * c
    assert canonicalize((a * lam, alpha * lam, c * lam), s) == cls


@pytest.mark.parametrize("setting, height", SHARDED, ids=lambda v: getattr(v, "label", lambda: str(v))())
def test_canonicalize_is_idempotent(setting, height):
    for c in _sample(setting, height):
        raw = (*c.numerator, c.denominator) if isinstance(c.numerator, tuple) else (c.numerator, c.denominator)
        once = canonicalize(raw, setting)
        raw2 = (*once.numerator, once.denominator) if isinstance(once.numerator, tuple) else (once.numerator, once.denominator)
        assert canonicalize(raw2, setting) == once


def test_per_denominator_counts_sum_to_cardinality():
    for s, height in [(FareySetting.complex(-7), 30), (FareySetting.heisenberg(-4), 20), (FareySetting.tree(3), 27)]:
        dens = {c.denominator for c in enumerate_classes(s, EnumBudget(height))}
        assert sum(per_denominator_count(s, d) for d in dens) == cardinality(s, height)


# -- growth ------------------------------------------------------------------------------

# Each pair (h1, h2) corresponds to a flow-time step; ``power`` turns the
# height ratio into the expected count ratio e^(delta * step).
GROWTH = [
    (FareySetting.standard(), 2000, 4000, 2),
    (FareySetting.complex(-4), 2000, 4000, 2),
    (FareySetting.complex(-11), 2000, 4000, 2),
    (FareySetting.heisenberg(-3), 200, 400, 2),
    (FareySetting.heisenberg(-8), 200, 400, 2),
    (FareySetting.tree(2), 2**8, 2**9, 2),
    (FareySetting.tree(3), 3**5, 3**6, 2),
]


@pytest.mark.parametrize("setting, h1, h2, power", GROWTH, ids=lambda v: getattr(v, "label", lambda: str(v))())
def test_growth_rate(setting, h1, h2, power):
    ratio = cardinality(setting, h2) / cardinality(setting, h1)
    assert ratio / (h2 / h1) ** power == pytest.approx(1, abs=0.1)


@pytest.mark.xfail(reason="norms reachable on a desk are far from the asymptotic regime of fifth-power growth")
def test_quaternionic_growth_rate():
    s = FareySetting.quaternionic()
    ratio = cardinality(s, 12) / cardinality(s, 6)
    assert ratio / 2**5 == pytest.approx(1, abs=0.1)


def test_growth_is_monotone_for_every_kind():
    for s, h in [(FareySetting.quaternionic(), 6), (FareySetting.heisenberg(-11), 30)]:
        counts = [cardinality(s, x) for x in range(1, h + 1)]
        assert counts == sorted(counts)


@pytest.mark.parametrize("D", SUPPORTED_DISCRIMINANTS)
@pytest.mark.parametrize("p", [2, 3, 5, 7, 11])
def test_heisenberg_local_solution_counts(D, p):
    import numpy as np

    from fareyflow.rings.quadratic import kronecker

    for e in range(1, 6):
        if p**e > 400:
            break
        x = np.arange(p**e)
        norms = heis.norm_coords(x[:, None], x[None, :], D)
        assert heis._local_solution_count(kronecker(D, p), p, e) == int(np.count_nonzero(norms % p**e == 0))
