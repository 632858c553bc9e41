import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from constellation.constants import (
    ProductValue,
    c_constant,
    k_constant,
    pdf_ratio,
    predicted_pdf,
    probability_ratio,
    z_integer,
    z_product,
)
from constellation.errors import ToleranceNotMet
from constellation.patterns import Pattern, is_admissible, signature
from constellation.sieve import is_prime

P = Pattern.of
BASIC = {1: P(2), 2: P(2, 6), 3: P(2, 6, 8), 4: P(2, 6, 8, 12), 5: P(2, 6, 8, 12, 18)}
# twice the twin prime constant, from the literature (independent of this code)
TWICE_C2 = 1.3203236316937391


@pytest.mark.parametrize("m, z", [(1, 2), (2, 3), (3, 4), (4, 10), (5, 18), (6, 28), (8, 162)])
def test_z_integer(m, z):
    assert z_integer(m) == z


@pytest.mark.parametrize("m, Z", [(0, Fraction(1)), (1, Fraction(1, 2)), (2, Fraction(1, 6)), (4, Fraction(1, 30)), (6, Fraction(1, 210))])
def test_z_product(m, Z):
    assert z_product(m) == Z


def test_k1_against_twin_prime_constant():
    k = k_constant(1)
    assert k.value == pytest.approx(1.32032, abs=1e-4)
    assert abs(k.value - TWICE_C2) <= k.tail_bound
    assert k.value >= TWICE_C2  # omitted factors are all < 1


def test_k2_and_c2():
    assert k_constant(2).value == pytest.approx(2.8574, abs=1e-3)
    assert c_constant(2).value == pytest.approx(0.34997, abs=1e-3)
    assert c_constant(1).value == pytest.approx(0.757392, abs=1e-4)


@pytest.mark.parametrize("m", [1, 2, 3, 5])
def test_k_against_independent_product(m):
    q = max(p for p in range(2, m + 2) if is_prime(p))
    with mpmath.workdps(30):
        prod = mpmath.mpf(z_integer(m))
        for p in range(m + 2, 20_001):
            if is_prime(p):
                prod *= 1 - mpmath.mpf(1) / (p - q + 1) ** (m + 1)
        assert k_constant(m, 20_000).value == pytest.approx(float(prod), rel=1e-13)


def test_single_factor_truncation():
    k = k_constant(1, 3)
    assert k.value == pytest.approx(1.5)
    assert k.tail_bound > 0.1
    c = c_constant(1, 3)
    assert c.value == pytest.approx(2 / 3)
    assert c.tail_bound > 0.1


@pytest.mark.parametrize("m", [1, 2, 3])
def test_k_monotone_and_converging_in_truncation(m):
    cuts = [10, 100, 1000, 10**4, 10**5]
    vals = [k_constant(m, P_) for P_ in cuts]
    for a, b in zip(vals, vals[1:]):
        assert b.value <= a.value
        assert b.tail_bound <= a.tail_bound
    for cut in cuts:
        assert abs(k_constant(m, 2 * cut).value - k_constant(m, cut).value) <= k_constant(m, cut).tail_bound


@pytest.mark.parametrize("m", range(1, 7))
def test_basic_pdf_below_one(m):
    assert c_constant(m).value < 1


def test_tolerance_not_met():
    with pytest.raises(ToleranceNotMet):
        k_constant(1, 1000, tolerance=1e-6)
    extended = k_constant(1, 1000, tolerance=1e-6, extend=True)
    assert extended.tail_bound <= 1e-6
    assert extended.truncation_prime > 1000


def test_truncation_validation():
    with pytest.raises(ValueError):
        k_constant(2, 3)
    with pytest.raises(ValueError):
        k_constant(0)


def test_product_value_json_shape():
    assert ProductValue(1.0, 7, 0.5).to_dict() == {"value": 1.0, "truncation_prime": 7, "tail_bound": 0.5}


def test_probability_ratio():
    for q in (3, 5, 7, 11, 13):
        assert probability_ratio(1, q, 1) == Fraction(q - 1, q - 2)
    assert probability_ratio(2, 5, 2) == 2
    assert probability_ratio(3, 101, 0) == 1
    with pytest.raises(ValueError):
        probability_ratio(2, 3, 1)
    with pytest.raises(ValueError):
        probability_ratio(2, 5, 3)


@given(st.integers(1, 6), st.sampled_from([p for p in range(3, 200) if is_prime(p)]), st.integers(1, 6))
def test_collisions_raise_frequency(m, p, g):
    assume(p > m + 1 and g <= m)
    assert probability_ratio(m, p, g) > 1


def test_predicted_pdf_examples():
    c1 = c_constant(1).value
    assert predicted_pdf(P(2)).value == pytest.approx(c1)
    assert predicted_pdf(P(6)).value == pytest.approx(0.378696, abs=1e-4)
    assert predicted_pdf(P(2, 12)).value == pytest.approx(0.23331, abs=1e-3)
    assert predicted_pdf(P(2, 12)).value == pytest.approx(c_constant(2).value * 2 / 3)
    assert predicted_pdf(P(10, 30)).value == pytest.approx(c_constant(2).value / 2)


def test_predicted_pdf_inadmissible_is_infinite():
    assert predicted_pdf(P(2, 4)).value == math.inf


@pytest.mark.parametrize(
    "a, b, ratio",
    [(P(6), P(2), Fraction(1, 2)), (P(14), P(2), Fraction(5, 6)), (P(30), P(2), Fraction(3, 8)),
     (P(2, 12), P(2, 6), Fraction(2, 3)), (P(10, 30), P(2, 6), Fraction(1, 2)), (P(4), P(2), 1),
     (P(2, 14), P(2, 6), Fraction(4, 5))],
)
def test_pdf_ratio(a, b, ratio):
    assert pdf_ratio(a, b) == ratio


def test_pdf_ratio_errors():
    with pytest.raises(ValueError):
        pdf_ratio(P(2), P(2, 6))
    with pytest.raises(ValueError):
        pdf_ratio(P(2, 4), P(2, 6))


even_patterns = st.lists(st.integers(1, 60), min_size=1, max_size=5, unique=True).map(
    lambda xs: Pattern(tuple(sorted(2 * x for x in xs)))
)


@given(even_patterns)
@settings(max_examples=200)
def test_single_collision_formula_matches_general_formula(pat):
    assume(is_admissible(pat))
    sig = signature(pat)
    assume(all(g == 1 for _, g in sig.collisions))
    m = pat.m
    expected = Fraction(1)
    for p, _ in sig.collisions:
        expected *= Fraction(p - m - 1, p - m)
    assert pdf_ratio(pat, BASIC[m]) == expected


@given(even_patterns, st.integers(0, 3), st.booleans())
@settings(max_examples=200)
def test_equal_signature_equal_prediction(a, doublings, reflect):
    assume(is_admissible(a))
    # doubling adds only the prime 2 to differences; reflection keeps the difference set
    offs = [x * 2**doublings for x in a.offsets]
    if reflect:
        top = offs[-1]
        offs = sorted(top - x for x in [0] + offs[:-1])
    b = Pattern(tuple(offs))
    assert signature(a) == signature(b)
    assert predicted_pdf(a).value == predicted_pdf(b).value


def test_equal_signature_examples():
    assert predicted_pdf(P(2)).value == predicted_pdf(P(4)).value == predicted_pdf(P(64)).value
    assert predicted_pdf(P(2, 6)).value == predicted_pdf(P(8, 12)).value
    # 23 divides 96 - 4, so (4, 96) picks up a 20/21 factor
    assert pdf_ratio(P(4, 96), P(2, 6)) == Fraction(20, 21)
