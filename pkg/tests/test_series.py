"""Series ring: arithmetic, calculus, evaluation, serialization."""

import random
from fractions import Fraction

import pytest

from taumap.series import (
    Monomial,
    PolicyMismatchError,
    TruncatedSeries,
    TruncationPolicy,
    series_from_json_terms,
    series_from_text,
    series_to_json_terms,
    series_to_text,
)


POLICY = TruncationPolicy(n_max=3, deg_max=6, t0_max=6)


def t(k, policy=POLICY):
    return TruncatedSeries.variable(policy, k)


def tbar(k, policy=POLICY):
    return TruncatedSeries.variable(policy, k, barred=True)


class Point:
    def __init__(self, t0, values):
        self.t0 = t0
        self.t = values


def random_series(rng, policy=POLICY, terms=4):
    out = TruncatedSeries.zero(policy)
    for _ in range(rng.randint(1, terms)):
        mono_vars = {}
        for _ in range(rng.randint(0, 3)):
            k = rng.randint(1, policy.n_max)
            barred = rng.random() < 0.5
            mono_vars[(barred, k)] = mono_vars.get((barred, k), 0) + 1
        factors = tuple(
            (k, barred, e) for (barred, k), e in sorted(mono_vars.items())
        )
        mono = Monomial(rng.randint(0, 2), factors)
        coeff = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
        out = out + TruncatedSeries(policy, {mono: coeff})
    return out


def random_point(rng, n=3):
    return Point(
        rng.uniform(0.2, 1.5),
        [complex(rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8)) for _ in range(n)],
    )


# -- monomials and policy ------------------------------------------------------


def test_monomial_canonical_order_enforced():
    with pytest.raises(ValueError):
        Monomial(0, ((2, False, 1), (1, False, 1)))
    with pytest.raises(ValueError):
        Monomial(0, ((1, False, 1), (1, False, 2)))
    with pytest.raises(ValueError):
        Monomial(0, ((1, False, 0),))


def test_policy_filters_terms():
    pol = TruncationPolicy(2, 2, 1)
    s = TruncatedSeries(
        pol,
        {
            Monomial(0, ((3, False, 1),)): Fraction(1),  # index too large
            Monomial(0, ((1, False, 3),)): Fraction(1),  # degree too large
            Monomial(2, ()): Fraction(1),  # t0 power too large
            Monomial(1, ((2, True, 1),)): Fraction(5),
        },
    )
    assert len(s) == 1
    assert s.coefficient(Monomial(1, ((2, True, 1),))) == 5


# -- products -------------------------------------------------------------------


def test_mul_single_terms():
    prod = t(1) * tbar(1)
    assert prod.coefficient(Monomial(0, ((1, False, 1), (1, True, 1)))) == 1
    assert len(prod) == 1


def test_mul_by_zero_annihilates():
    s = TruncatedSeries.constant(POLICY, 1) + t(1)
    assert not (s * TruncatedSeries.zero(POLICY))


def test_square_of_sum():
    s = t(1) + tbar(2)
    sq = s * s
    assert sq.coefficient(Monomial(0, ((1, False, 2),))) == 1
    assert sq.coefficient(Monomial(0, ((1, False, 1), (2, True, 1)))) == 2
    assert sq.coefficient(Monomial(0, ((2, True, 2),))) == 1
    assert len(sq) == 3


def test_mul_policy_mismatch_rejected():
    other = TruncationPolicy(2, 2, 2)
    with pytest.raises(PolicyMismatchError):
        t(1) * TruncatedSeries.variable(other, 1)


def test_truncation_is_hard_filter():
    pol = TruncationPolicy(3, 2, 6)
    a = TruncatedSeries.variable(pol, 1)
    cube = a * a * a
    assert not cube  # degree 3 exceeds deg_max = 2


# -- exponential -----------------------------------------------------------------


def test_exp_of_zero():
    assert TruncatedSeries.zero(POLICY).exp_no_constant() == TruncatedSeries.constant(
        POLICY, 1
    )


def test_exp_single_variable_matches_taylor():
    pol = TruncationPolicy(2, 2, 2)
    e = TruncatedSeries.variable(pol, 1).exp_no_constant()
    assert e.coefficient(Monomial()) == 1
    assert e.coefficient(Monomial(0, ((1, False, 1),))) == 1
    assert e.coefficient(Monomial(0, ((1, False, 2),))) == Fraction(1, 2)
    assert len(e) == 3


def test_exp_two_variables_multinomial():
    pol = TruncationPolicy(2, 2, 2)
    e = (
        TruncatedSeries.variable(pol, 1) + TruncatedSeries.variable(pol, 2)
    ).exp_no_constant()
    assert e.coefficient(Monomial(0, ((1, False, 1), (2, False, 1)))) == 1
    assert e.coefficient(Monomial(0, ((2, False, 2),))) == Fraction(1, 2)
    assert len(e) == 6


def test_exp_rejects_constant_term():
    with pytest.raises(ValueError):
        (TruncatedSeries.constant(POLICY, 1) + t(1)).exp_no_constant()


def test_exp_is_additive_on_random_inputs():
    rng = random.Random(7)
    pol = TruncationPolicy(2, 4, 4)
    for _ in range(20):
        a = random_series(rng, pol).filter(lambda m: m.degree + m.t0_power > 0)
        b = random_series(rng, pol).filter(lambda m: m.degree + m.t0_power > 0)
        assert (a + b).exp_no_constant() == a.exp_no_constant() * b.exp_no_constant()


# -- derivatives -----------------------------------------------------------------


def test_derivative_examples():
    s = TruncatedSeries(POLICY, {Monomial(1, ((1, False, 2),)): Fraction(1)})
    d = s.diff_t(1)
    assert d.coefficient(Monomial(1, ((1, False, 1),))) == 2

    cube = TruncatedSeries(POLICY, {Monomial(3, ()): Fraction(1)})
    assert cube.diff_t0().coefficient(Monomial(2, ())) == 3

    mixed = TruncatedSeries(
        POLICY, {Monomial(1, ((1, False, 1), (2, True, 1))): Fraction(1)}
    )
    d2 = mixed.diff_tbar(2)
    assert d2.coefficient(Monomial(1, ((1, False, 1),))) == 1
    assert not mixed.diff_tbar(1)


def test_derivatives_commute_on_random_series():
    rng = random.Random(11)
    for _ in range(30):
        s = random_series(rng)
        assert s.diff_t(1).diff_tbar(2) == s.diff_tbar(2).diff_t(1)
        assert s.diff_t0().diff_t(2) == s.diff_t(2).diff_t0()


def test_ring_axioms_on_random_series():
    rng = random.Random(13)
    for _ in range(15):
        a, b, c = (random_series(rng) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a * b == b * a


# -- evaluation ------------------------------------------------------------------


def test_evaluate_examples():
    pair = t(1) * tbar(1)
    value = pair.evaluate(Point(1.0, [0.1 + 0.2j, 0, 0]))
    assert abs(value - 0.05) < 1e-15

    one = TruncatedSeries.constant(POLICY, 1)
    assert one.evaluate(Point(123.0, [])) == 1

    s = TruncatedSeries(
        POLICY, {Monomial(2, ((2, False, 1), (2, True, 1))): Fraction(1)}
    )
    value = s.evaluate(Point(0.5, [0, 0.1j, 0]))
    assert abs(value - 0.0025) < 1e-16


def test_evaluate_index_out_of_range():
    with pytest.raises(IndexError):
        t(3).evaluate(Point(1.0, [0.1]))


def test_evaluate_is_ring_homomorphism():
    rng = random.Random(17)
    pol = TruncationPolicy(3, 12, 12)  # roomy: products below never truncate
    for _ in range(20):
        a = random_series(rng, pol)
        b = random_series(rng, pol)
        pt = random_point(rng)
        lhs = (a * b).evaluate(pt)
        rhs = a.evaluate(pt) * b.evaluate(pt)
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs), abs(rhs))
        lhs = (a + b).evaluate(pt)
        rhs = a.evaluate(pt) + b.evaluate(pt)
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs), abs(rhs))


# -- exactness -------------------------------------------------------------------


def test_no_floating_point_in_coefficients():
    rng = random.Random(19)
    s = random_series(rng)
    prod = s * s * s
    for _, coeff in prod.items():
        assert isinstance(coeff, Fraction)


# -- serialization ---------------------------------------------------------------


def test_text_round_trip_bit_exact():
    rng = random.Random(23)
    for _ in range(20):
        s = random_series(rng)
        again = series_from_text(series_to_text(s), POLICY)
        assert again == s


def test_json_round_trip_bit_exact():
    rng = random.Random(29)
    for _ in range(20):
        s = random_series(rng)
        again = series_from_json_terms(series_to_json_terms(s), POLICY)
        assert again == s


def test_text_form_shape():
    s = TruncatedSeries(
        POLICY, {Monomial(2, ((1, False, 1), (2, True, 3))): Fraction(-3, 2)}
    )
    assert series_to_text(s).strip() == "-3/2 * t0^2 * t1^1 * tbar2^3"
