import math
from fractions import Fraction
from math import gcd, lcm

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from loxodromic.errors import ZeroInput
from loxodromic.fields import QQ, Factored, function_field
from loxodromic.ffield import Poly
from loxodromic.places import (ARCHIMEDEAN, INFINITE_PLACE, Place, abs_log, coordinate_norm_log,
                               finite_poly, finite_prime, ord_at, parse_place, product_formula_check,
                               relevant_places, weil_height, weil_height_by_places,
                               weil_height_exact)
from strategies import nonzero_rationals, rational_functions, rationals

F2 = function_field(2)
t2 = F2.t()


def primitive_height_int(point) -> int:
    """max |c_i| of the primitive integer representative of [1 : x_1 : ... : x_n]."""
    coords = [Fraction(1)] + [Fraction(x) for x in point]
    L = 1
    for c in coords:
        L = lcm(L, c.denominator)
    ints = [c.numerator * (L // c.denominator) for c in coords]
    g = 0
    for i in ints:
        g = gcd(g, i)
    return max(abs(i) // g for i in ints)


def test_abs_log_examples():
    v = abs_log(finite_prime(3), Fraction(2, 3))
    assert v.value == pytest.approx(math.log(3))
    assert v.exact_ord == (finite_prime(3), -1)
    assert abs_log(ARCHIMEDEAN, Fraction(-5)).value == pytest.approx(math.log(5))
    w = abs_log(finite_poly(Poly.t(F2.F)), t2.inverse())
    assert w.value == 1
    assert w.ord == -1


def test_abs_log_zero_rejected():
    with pytest.raises(ZeroInput):
        abs_log(ARCHIMEDEAN, Fraction(0))


def test_relevant_places_examples():
    got = relevant_places([Fraction(2, 3), Fraction(5)])
    assert set(got) == {ARCHIMEDEAN, finite_prime(2), finite_prime(3), finite_prime(5)}
    assert relevant_places([Fraction(1)]) == [ARCHIMEDEAN]
    x = t2 / (t2 + F2.one())
    assert {str(p) for p in relevant_places([x])} == {"inf", "poly:t", "poly:t+1"}


def test_coordinate_norm_log_examples():
    pt = (Fraction(2, 3), Fraction(5))
    assert coordinate_norm_log(ARCHIMEDEAN, pt) == pytest.approx(math.log(5))
    assert coordinate_norm_log(finite_prime(3), pt) == pytest.approx(math.log(3))
    # |2/3|_5 = 1 dominates |5|_5 = 1/5
    assert coordinate_norm_log(finite_prime(5), pt) == 0
    assert coordinate_norm_log(finite_prime(5), (Fraction(5),)) == pytest.approx(-math.log(5))


def test_weil_height_examples():
    assert weil_height((Fraction(2, 3), Fraction(5))) == pytest.approx(math.log(15))
    assert weil_height_exact((Fraction(2, 3), Fraction(5))).exact == 15
    assert weil_height((Fraction(1), Fraction(1))) == 0
    h = weil_height_exact((t2, t2.inverse()))
    assert h.exact == 2
    assert weil_height_by_places((t2, t2.inverse())) == pytest.approx(2)


def test_product_formula_examples():
    v = product_formula_check(Fraction(6))
    assert v.holds
    assert v.ords[finite_prime(2)] == 1 and v.ords[finite_prime(3)] == 1
    assert product_formula_check(Fraction(1)).holds
    w = product_formula_check(t2**2 / (t2 + F2.one()))
    assert w.holds


def test_place_parsing():
    assert parse_place("p:7") == finite_prime(7)
    assert str(parse_place("poly:t+1", F2)) == "poly:t+1"
    assert parse_place("inf", F2) == INFINITE_PLACE
    with pytest.raises(ValueError):
        parse_place("p:8")
    with pytest.raises(ValueError):
        parse_place("poly:t^2+1", F2)  # (t+1)^2 in char 2


@given(nonzero_rationals(10**9, 10**9))
def test_product_formula_q_against_factorint(x):
    verdict = product_formula_check(x)
    assert verdict.holds
    ref = {p: e for p, e in sympy.factorint(abs(x.numerator)).items()}
    for p, e in sympy.factorint(x.denominator).items():
        ref[p] = ref.get(p, 0) - e
    got = {v.prime: o for v, o in verdict.ords.items() if not v.archimedean}
    assert got == {p: e for p, e in ref.items() if e}


@pytest.mark.parametrize("q", [2, 3])
def test_product_formula_function_field(q):
    K = function_field(q)

    @given(rational_functions(q, nonzero=True))
    def inner(x):
        v = product_formula_check(x)
        assert v.holds
        total = sum(pl.prime.deg * o for pl, o in v.ords.items() if pl.kind == "poly")
        assert total + v.ords[INFINITE_PLACE] == 0

    inner()
    assert K.q == q


@given(st.lists(rationals(10**5, 10**5), min_size=1, max_size=4))
def test_height_matches_primitive_representative(pt):
    pt = tuple(pt)
    H = primitive_height_int(pt)
    h = weil_height_exact(pt)
    assert h.exact == H
    assert weil_height_by_places(pt) == pytest.approx(math.log(H), abs=1e-9)


@given(rationals(1000, 1000), rationals(1000, 1000))
def test_height_nonnegative_and_symmetric(x, y):
    assert weil_height((x, y)) >= 0
    assert weil_height((x, y)) == weil_height((y, x))


@given(rational_functions(3), rational_functions(3))
def test_function_field_height_oracle(x, y):
    h = weil_height_exact((x, y))
    assert h.exact >= 0
    assert weil_height_by_places((x, y)) == pytest.approx(h.exact)


@given(nonzero_rationals(1000, 1000), st.sampled_from([2, 3, 5, 7, 11, 13]))
def test_places_outside_support_are_trivial(x, p):
    places = relevant_places([x])
    v = finite_prime(p)
    if v not in places:
        assert abs_log(v, x).value == 0
        assert ord_at(v, x) == 0


def test_factored_height_agrees():
    x = Fraction(2**40 * 3, 5**7)
    y = Fraction(7, 2**5)
    f = tuple(Factored.from_element(c, QQ) for c in (x, y))
    assert weil_height(f) == pytest.approx(weil_height((x, y)))


def test_place_is_frozen_value():
    assert Place("prime", 5) == finite_prime(5)
    assert hash(Place("prime", 5)) == hash(finite_prime(5))
