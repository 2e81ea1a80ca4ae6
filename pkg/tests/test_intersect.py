import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from loxodromic.errors import (IncompatibleDegrees, NotLoxodromic, OverflowGuard, PeriodicStartPoint,
                               VanishingLeadingCoefficient)
from loxodromic.fields import QQ, function_field
from loxodromic.frobenius import AdditivePoly, FrobGeneratorWord, Transvection
from loxodromic.henon import PlaneAutomorphism, inverse_plane, plane_power
from loxodromic.intersect import (IntersectionWindow, banach_density_estimate,
                                  common_iterate_search, decompose_arithmetic_progressions,
                                  find_intersections, offset_bound, parse_variety,
                                  reduce_to_forward, reduce_to_iterates, reduce_to_same_point,
                                  spectral_compatibility, subvariety_visit_set)
from loxodromic.places import ARCHIMEDEAN
from loxodromic.torus import PseudoMonomialMap, TorusPoint, apply, compose, inverse, maps_equal, power

F = PseudoMonomialMap.make([[2, 1], [1, 1]], (2, 3), QQ)
G = PseudoMonomialMap.make([[3, 1], [2, 1]], (5, 7), QQ)
P = TorusPoint(1, 1)
DIAGONAL = parse_variety({"polynomials": [{"terms": [[1, 0, 0, 0, "1"], [0, 0, 1, 0, "-1"]]},
                                          {"terms": [[0, 1, 0, 0, "1"], [0, 0, 0, 1, "-1"]]}]})


def brute_pairs(f, p, g, q, fr, gr):
    def orbit(h, x, lo, hi):
        pts, cur = {}, x
        for n in range(0, hi + 1):
            if n >= lo:
                pts[n] = cur
            if n < hi:
                cur = apply(h, cur)
        return pts

    fo, go = orbit(f, p, *fr), orbit(g, q, *gr)
    return sorted((n, m) for n, a in fo.items() for m, b in go.items() if a == b)


def test_find_intersections_examples():
    g = compose(F, F)
    got = find_intersections(F, P, g, P, IntersectionWindow((0, 40), (0, 20)))
    assert got.pairs == [(2 * k, k) for k in range(21)]
    q = apply(F, P)
    got = find_intersections(F, P, F, q, IntersectionWindow((0, 20), (0, 20)))
    assert got.pairs == [(k + 1, k) for k in range(20)]
    got = find_intersections(F, P, F, TorusPoint(7, 1), IntersectionWindow((0, 30), (0, 30)))
    assert got.pairs == []


def test_find_intersections_against_brute_force():
    g = compose(F, F)
    for q in (P, apply(F, P), TorusPoint(7, 1), apply(g, apply(F, P))):
        got = find_intersections(F, P, g, q, IntersectionWindow((0, 7), (0, 3))).pairs
        assert got == brute_pairs(F, P, g, q, (0, 7), (0, 3))


def test_budget_and_iota():
    with pytest.raises(OverflowGuard):
        find_intersections(F, P, F, P, IntersectionWindow((0, 100), (0, 100)), budget=1000)
    rot = PseudoMonomialMap.make([[0, -1], [1, 0]], (1, 1), QQ)
    iset = find_intersections(rot, TorusPoint(2, 3), rot, TorusPoint(2, 3),
                              IntersectionWindow((0, 8), (0, 8)))
    assert iset.f_periodic
    with pytest.raises(PeriodicStartPoint):
        iset.iota_image


def test_reduce_to_forward_examples():
    g = compose(F, F)
    win = IntersectionWindow((-10, 10), (-10, 10))
    assert reduce_to_forward(F, P, g, P, win).signs == ("+", "+")
    g_inv = power(inverse(F), 2)
    red = reduce_to_forward(F, P, g_inv, P, win)
    assert red.signs == ("+", "-")
    assert maps_equal(red.f, F) and maps_equal(red.g, inverse(g_inv))
    empty = reduce_to_forward(F, P, F, TorusPoint(7, 1), win)
    assert empty.signs == ("+", "+") and set(empty.counts.values()) == {0}


def test_reduce_to_same_point_examples():
    g = compose(F, F)
    win = IntersectionWindow((0, 20), (0, 20))
    red = reduce_to_same_point(F, P, g, P, win)
    assert red.r == P and red.shift == (0, 0)
    q = apply(F, P)
    red = reduce_to_same_point(F, P, F, q, win)
    assert red.r == q and red.shift == (1, 0)
    assert red.window == IntersectionWindow((-1, 19), (0, 20))
    assert reduce_to_same_point(F, P, F, TorusPoint(7, 1), win) is None


def test_reduce_to_iterates_examples():
    g = compose(F, F)
    pairs = [(2 * k, k) for k in range(21)]
    red = reduce_to_iterates(F, P, g, P, 2, 2, pairs)
    assert red.classes[(0, 0)] == [(4 * j, 2 * j) for j in range(11)]
    # N is always even, so the second class has l = 0 too
    assert red.classes[(0, 1)] == [(4 * j + 2, 2 * j + 1) for j in range(10)]
    assert red.dominant == (0, 0)
    # the dominant class (l, k) = (0, 0) reindexes (4j, 2j) as (2j, j) for f^2 and g^2
    assert red.reindexed == [(2 * j, j) for j in range(11)]
    fn, fp, gm, gq = red.sub_instance
    assert maps_equal(fn, power(F, 2)) and fp == P
    sub = find_intersections(fn, fp, gm, gq, IntersectionWindow((0, 20), (0, 10))).pairs
    assert sub == [(2 * j, j) for j in range(11)]
    assert all(not v for v in reduce_to_iterates(F, P, g, P, 2, 3, []).classes.values())
    single = reduce_to_iterates(F, P, g, P, 1, 1, pairs)
    assert list(single.classes) == [(0, 0)] and single.classes[(0, 0)] == pairs


def brute_density(S, window, min_length):
    lo, hi = window
    best = 0.0
    for a in range(lo, hi + 1):
        for b in range(a + min_length - 1, hi + 1):
            best = max(best, sum(1 for s in S if a <= s <= b) / (b - a + 1))
    return best


def test_density_examples():
    evens = [n for n in range(-100, 101) if n % 2 == 0]
    d = banach_density_estimate(evens, (-100, 100))
    assert abs(d.value - 0.5) <= 1 / d.min_length
    squares = [k * k for k in range(101)]
    assert banach_density_estimate(squares, (0, 10000)).value <= 0.02
    assert banach_density_estimate(range(0, 51), (0, 50)).value == 1.0


@given(st.sets(st.integers(0, 40)), st.integers(1, 41))
def test_density_against_brute_force(S, L):
    assert banach_density_estimate(S, (0, 40), L).value == pytest.approx(brute_density(S, (0, 40), L))


@given(st.sets(st.integers(0, 60)), st.sets(st.integers(0, 60)), st.integers(1, 61))
def test_density_subadditive(A, B, L):
    w = (0, 60)
    assert banach_density_estimate(A | B, w, L).value <= (
        banach_density_estimate(A, w, L).value + banach_density_estimate(B, w, L).value + 1e-12)


def test_decomposition_examples():
    S = set(range(1, 98, 3)) | {12}
    d = decompose_arithmetic_progressions(S, (0, 99))
    assert d.progressions == [(3, 1)] and d.sporadic == [12]
    empty = decompose_arithmetic_progressions(set(), (0, 100))
    assert empty.progressions == [] and empty.sporadic == []
    full = decompose_arithmetic_progressions(set(range(101)), (0, 100))
    assert full.progressions == [(1, 0)] and full.sporadic == []


def test_decomposition_on_inclusive_window_with_100():
    # 100 = 1 mod 3 belongs to the class too, so it is missing from S and the class is not full
    S = set(range(1, 98, 3)) | {12}
    d = decompose_arithmetic_progressions(S, (0, 100))
    assert d.reconstruct((0, 100)) == S
    assert (3, 1) not in d.progressions


@st.composite
def synthetic_sets(draw):
    lo, hi = 0, draw(st.integers(30, 200))
    W = hi - lo + 1
    progs = []
    for _ in range(draw(st.integers(0, 3))):
        a = draw(st.integers(1, W // 3))
        progs.append((a, draw(st.integers(0, a - 1))))
    S = {x for a, b in progs for x in range(b, hi + 1, a)}
    S |= set(draw(st.lists(st.integers(lo, hi), max_size=5)))
    return S, (lo, hi), progs


@given(synthetic_sets())
def test_decomposition_reconstructs_exactly(data):
    S, w, progs = data
    d = decompose_arithmetic_progressions(S, w)
    assert d.reconstruct(w) == S
    assert len(set(d.progressions)) == len(d.progressions)
    # every generating class is covered by the extracted progressions
    covered = d.reconstruct(w) - set(d.sporadic)
    for a, b in progs:
        assert set(range(b, w[1] + 1, a)) <= covered


def test_spectral_compatibility_examples():
    assert spectral_compatibility(F, compose(F, F), 12) == (2, 1)
    assert spectral_compatibility(F, F, 12) == (1, 1)
    assert spectral_compatibility(F, G, 12) is None
    rot = PseudoMonomialMap.make([[0, -1], [1, 0]], (1, 1), QQ)
    with pytest.raises(NotLoxodromic):
        spectral_compatibility(F, rot, 3)


def test_common_iterate_examples():
    c = common_iterate_search(F, power(F, 3), 12)
    assert (c.N, c.M, c.kind) == (3, 1, "canonical")
    g2 = PseudoMonomialMap.make([[2, 1], [1, 1]], (4, 6), QQ)
    assert common_iterate_search(F, g2, 10) is None
    c = common_iterate_search(F, inverse(F), 12)
    assert (c.N, c.M) == (1, -1)


def test_common_iterate_plane_and_frobenius():
    H = PlaneAutomorphism.henon((0, 0, 1), 1)
    c = common_iterate_search(H, plane_power(H, 3), 6)
    assert (c.N, c.M) == (3, 1)
    assert common_iterate_search(H, inverse_plane(H), 4).M == -1
    H3 = PlaneAutomorphism.henon((0, 0, 0, 1), 1)
    assert common_iterate_search(H, H3, 5) is None
    K = function_field(2)
    t = K.t()
    g = FrobGeneratorWord(K, (Transvection("upper", AdditivePoly(K, [t, K.one()])),), (t, K.zero()))
    c = common_iterate_search(g, g @ g, 4)
    assert (c.N, c.M) == (2, 1)


@pytest.mark.parametrize("k", [2, 3, 5])
def test_construction_recovery(k):
    g = power(F, k)
    iset = find_intersections(F, P, g, P, IntersectionWindow((0, 60), (0, 60 // k)))
    assert iset.pairs == [(k * n, n) for n in range(60 // k + 1)]
    c = common_iterate_search(F, g, 6)
    assert (c.N, c.M) == (k, 1)
    assert maps_equal(power(F, c.N), power(g, c.M))


def test_offset_bound_examples():
    assert offset_bound(F, P, F, P, ARCHIMEDEAN).C == 1
    q = apply(F, apply(F, P))
    assert offset_bound(F, P, F, q, ARCHIMEDEAN).C == 3
    with pytest.raises(IncompatibleDegrees):
        offset_bound(F, P, G, P, ARCHIMEDEAN)
    fixed = PseudoMonomialMap.make([[2, 1], [1, 1]], (1, 1), QQ)
    with pytest.raises(VanishingLeadingCoefficient):
        offset_bound(F, P, fixed, P, ARCHIMEDEAN)


@pytest.mark.parametrize("shift", [0, 1, 2, 4])
def test_offset_bound_validity(shift):
    f = PseudoMonomialMap.make([[2, 1], [1, 1]], (2, 5), QQ)
    g = PseudoMonomialMap.make([[2, 1], [1, 1]], (2, 5), QQ)
    p = P
    q = p
    for _ in range(shift):
        q = apply(g, q)
    ob = offset_bound(f, p, g, q, ARCHIMEDEAN)
    pairs = find_intersections(f, p, g, q, IntersectionWindow((0, 40), (0, 40))).pairs
    assert pairs
    for n, m in pairs:
        if n >= ob.threshold and m >= ob.threshold:
            assert abs(n - m) <= ob.C


def test_visit_set_examples():
    vs = subvariety_visit_set(F, F, P, P, DIAGONAL, (0, 60))
    assert vs.indices == list(range(61))
    assert vs.decomposition.progressions == [(1, 0)]
    vs = subvariety_visit_set(F, F, P, TorusPoint(7, 1), DIAGONAL, (0, 30))
    assert vs.indices == []
    # graph of f: y = f(x), with alpha x1^2 x2 and beta x1 x2 for f = ([[2,1],[1,1]], (2,3))
    graph = parse_variety({"polynomials": [{"terms": [[0, 0, 1, 0, "1"], [2, 1, 0, 0, "-2"]]},
                                           {"terms": [[0, 0, 0, 1, "1"], [1, 1, 0, 0, "-3"]]}]})
    vs = subvariety_visit_set(F, power(F, 2), P, P, graph, (0, 40))
    assert vs.indices == [1]
    assert vs.decomposition.sporadic == [1] and vs.undecided == []


def test_visit_set_cancellation_needs_materialising():
    # x1 + x1 - 2 x1 vanishes by grouping; x1^2 - x1 * x1 too
    V = parse_variety({"polynomials": [{"terms": [[1, 0, 0, 0, "1"], [1, 0, 0, 0, "1"],
                                                  [1, 0, 0, 0, "-2"]]},
                                       {"terms": [[2, 0, 0, 0, "1"], [1, 0, 1, 0, "-1"]]}]})
    vs = subvariety_visit_set(F, F, P, P, V, (0, 50))
    assert vs.indices == list(range(51))


def test_visit_set_grid_variant():
    vs = subvariety_visit_set(F, power(F, 2), P, P, DIAGONAL, (0, 12), grid=True, g_window=(0, 6))
    assert vs.pairs == [(2 * m, m) for m in range(7)]


def test_visit_set_function_field():
    K = function_field(3)
    t = K.t()
    f = PseudoMonomialMap.make([[2, 1], [1, 1]], (t, t + K.one()), K)
    p = TorusPoint(t, K.one())
    V = parse_variety({"polynomials": [{"terms": [[1, 0, 0, 0, "1"], [0, 0, 1, 0, "-1"]]},
                                       {"terms": [[0, 1, 0, 0, "1"], [0, 0, 0, 1, "-1"]]}]}, K)
    vs = subvariety_visit_set(f, f, p, p, V, (0, 25))
    assert vs.indices == list(range(26))


def test_soundness_of_reported_pairs():
    g = compose(F, F)
    iset = find_intersections(F, P, g, P, IntersectionWindow((-6, 8), (-3, 4)))
    for n, m in iset.pairs:
        assert apply(power(F, n), P) == apply(power(g, m), P)
    assert (0, 0) in iset.pairs
