import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from loxodromic.errors import NotLoxodromic, OverflowGuard
from loxodromic.fields import QQ, function_field
from loxodromic.henon import PlaneAutomorphism
from loxodromic.orbits import (NoCycleInWindow, Periodic, asymptotic_decomposition,
                               detect_periodicity, find_unbounded_place, iterate_orbit, log_orbit)
from loxodromic.places import ARCHIMEDEAN, INFINITE_PLACE, abs_log, finite_prime, relevant_places
from loxodromic.torus import GLZ2Matrix, PseudoMonomialMap, TorusPoint, dynamical_degree
from strategies import glz2

ROT = PseudoMonomialMap.make([[0, -1], [1, 0]], (1, 1), QQ)
H = PlaneAutomorphism.henon((0, 0, 1), 1)
F21 = PseudoMonomialMap.make([[2, 1], [1, 1]], (2, 1), QQ)
L2 = math.log(2)


def test_iterate_orbit_examples():
    recs = iterate_orbit(ROT, (2, 3), 0, 4)
    want = [(2, 3), (Fraction(1, 3), 2), (Fraction(1, 2), Fraction(1, 3)), (3, Fraction(1, 2)), (2, 3)]
    assert [r.point for r in recs] == want
    only = iterate_orbit(F21, (5, 7), 0, 0)
    assert len(only) == 1 and only[0].point == (5, 7)
    assert only[0].height == pytest.approx(math.log(7))
    assert [r.point for r in iterate_orbit(H, (1, 0), 0, 3)] == [(1, 0), (0, -1), (-1, 1), (1, 2)]


def test_negative_indices():
    recs = iterate_orbit(F21, (1, 1), -3, 3)
    assert [r.n for r in recs] == list(range(-3, 4))
    fwd = {r.n: r.point for r in recs}
    for n in range(-3, 3):
        assert F21(fwd[n]) == fwd[n + 1]


def test_overflow_guard_keeps_partial_records():
    with pytest.raises(OverflowGuard) as exc:
        iterate_orbit(H, (1, 0), 0, 40, max_digits=50)
    partial = exc.value.partial
    assert partial and partial[-1].n < 40


def test_detect_periodicity_examples():
    assert detect_periodicity(ROT, (2, 3), 20) == Periodic(0, 4)
    assert detect_periodicity(H, (0, 0), 20) == Periodic(0, 1)
    v = detect_periodicity(H, (1, 0), 20)
    assert isinstance(v, NoCycleInWindow)
    assert v.height_trend == "increasing" and v.increasing_from == 3


def test_sign_flip_has_period_two():
    f = PseudoMonomialMap.make([[1, 0], [0, 1]], (-1, 1), QQ)
    assert detect_periodicity(f, (1, 1), 10) == Periodic(0, 2)


def test_log_orbit_examples():
    lo = log_orbit(F21, (1, 1), ARCHIMEDEAN, 5)
    assert lo.u[0] == (0, 0)
    assert lo.u[1] == pytest.approx((L2, 0))
    assert lo.u[2] == pytest.approx((3 * L2, L2))
    trivial = PseudoMonomialMap.make([[2, 1], [1, 1]], (1, 1), QQ)
    assert all(u == (0, 0) for u in log_orbit(trivial, (1, 1), ARCHIMEDEAN, 10).u)
    assert all(u == (0, 0) for u in log_orbit(F21, (1, 1), finite_prime(3), 10).u)
    assert log_orbit(F21, (1, 1), finite_prime(2), 3).ords == [(0, 0), (1, 0), (3, 1), (8, 4)]


def test_asymptotic_decomposition_examples():
    dec = asymptotic_decomposition(F21, (1, 1), ARCHIMEDEAN)
    assert dec.w0 == pytest.approx((0, -L2))
    assert abs(dec.a_plus) > 1e-3
    trivial = PseudoMonomialMap.make([[2, 1], [1, 1]], (1, 1), QQ)
    d0 = asymptotic_decomposition(trivial, (1, 1), ARCHIMEDEAN)
    assert d0.w0 == (0, 0) and d0.vanishes
    with pytest.raises(NotLoxodromic):
        asymptotic_decomposition(ROT, (1, 1), ARCHIMEDEAN)


def test_find_unbounded_place_examples():
    v, dec = find_unbounded_place(F21, (1, 1))
    assert v == ARCHIMEDEAN and not dec.vanishes
    trivial = PseudoMonomialMap.make([[2, 1], [1, 1]], (1, 1), QQ)
    assert find_unbounded_place(trivial, (1, 1)) is None
    f31 = PseudoMonomialMap.make([[2, 1], [1, 1]], (3, 1), QQ)
    assert find_unbounded_place(f31, (1, 1))[0] == ARCHIMEDEAN
    d3 = asymptotic_decomposition(f31, (1, 1), finite_prime(3))
    assert d3.exact_vanishing is False


@st.composite
def maps_and_points(draw, bound=4):
    M = draw(glz2(bound, loxodromic=True))
    b = tuple(Fraction(draw(st.integers(1, 12)) * draw(st.sampled_from([1, -1])),
                       draw(st.integers(1, 12))) for _ in range(2))
    p = tuple(Fraction(draw(st.integers(1, 12)), draw(st.integers(1, 12))) for _ in range(2))
    return PseudoMonomialMap(M, TorusPoint(*b)), TorusPoint(*p)


@given(maps_and_points())
def test_recursion_matches_exact_orbit(fp):
    f, p = fp
    for v in relevant_places([*f.translation, *p]):
        lo = log_orbit(f, p, v, 30)
        assert lo.checked_upto == 30
        if v.archimedean:
            assert lo.max_rel_error <= 1e-9


@given(maps_and_points())
def test_closed_form_reconstruction(fp):
    f, p = fp
    for v in relevant_places([*f.translation, *p]):
        lo = log_orbit(f, p, v, 30, check_upto=-1)
        dec = asymptotic_decomposition(f, p, v)
        for n in range(31):
            rec = dec.reconstruct(n)
            for a, b in zip(rec, lo.u[n]):
                assert abs(a - b) <= 1e-6 * max(1.0, abs(b))


@st.composite
def fixed_point_instances(draw):
    """Loxodromic f with f(p) = p up to sign; the orbit of p is finite."""
    M = draw(glz2(4, loxodromic=True))
    e = [[draw(st.integers(-3, 3)) for _ in range(2)] for _ in range(2)]  # exponents of 2 and 3
    p = TorusPoint(*(Fraction(2) ** e[0][i] * Fraction(3) ** e[1][i] for i in range(2)))
    Mp = M.monomial_apply(p)
    signs = (draw(st.sampled_from([1, -1])), draw(st.sampled_from([1, -1])))
    b = TorusPoint(signs[0] * p[0] / Mp[0], signs[1] * p[1] / Mp[1])
    return PseudoMonomialMap(M, b), p


@given(fixed_point_instances())
def test_bounded_orbits_are_detected_periodic(fp):
    f, p = fp
    assert find_unbounded_place(f, p) is None
    assert isinstance(detect_periodicity(f, p, 512), Periodic)


@given(maps_and_points())
def test_unbounded_place_means_growth(fp):
    f, p = fp
    found = find_unbounded_place(f, p)
    if found is None:
        assert isinstance(detect_periodicity(f, p, 512), Periodic)
        return
    recs = iterate_orbit(f, p, 0, 25)
    lam = dynamical_degree(f).value
    for n in range(15, 26):
        assert recs[n].height / recs[n - 1].height == pytest.approx(lam, rel=0.05)


def test_function_field_log_orbit():
    K = function_field(2)
    t = K.t()
    f = PseudoMonomialMap.make([[2, 1], [1, 1]], (t, t + K.one()), K)
    lo = log_orbit(f, (t, t), INFINITE_PLACE, 12)
    assert lo.checked_upto == 12
    dec = asymptotic_decomposition(f, (t, t), INFINITE_PLACE)
    assert dec.exact_vanishing is False
    pt = iterate_orbit(f, (t, t), 5, 5)[0].point
    assert tuple(abs_log(INFINITE_PLACE, c).value for c in pt) == pytest.approx(lo.u[5])


def test_order_four_matrix_is_not_loxodromic():
    assert GLZ2Matrix(0, -1, 1, 0) ** 4 == GLZ2Matrix.identity()
    with pytest.raises(NotLoxodromic):
        find_unbounded_place(ROT, (2, 3))
