"""Hypothesis strategies shared by the test modules."""
from fractions import Fraction

import hypothesis.strategies as st

from loxodromic.fields import function_field
from loxodromic.ffield import Poly, RationalFunction
from loxodromic.torus import GLZ2Matrix, PseudoMonomialMap, TorusPoint, matrix_is_loxodromic


def nonzero_rationals(max_num=10**6, max_den=10**6):
    return st.builds(Fraction, st.integers(-max_num, max_num).filter(bool),
                     st.integers(1, max_den))


def rationals(max_num=10**6, max_den=10**6):
    return st.builds(Fraction, st.integers(-max_num, max_num), st.integers(1, max_den))


@st.composite
def polys(draw, q, max_deg=6, nonzero=False):
    F = function_field(q).F
    coeffs = draw(st.lists(st.integers(0, q - 1), min_size=1, max_size=max_deg + 1))
    f = Poly(F, coeffs)
    if nonzero and f.is_zero():
        f = Poly.const(F, 1)
    return f


@st.composite
def rational_functions(draw, q, max_deg=5, nonzero=False):
    num = draw(polys(q, max_deg, nonzero=nonzero))
    den = draw(polys(q, max_deg, nonzero=True))
    return RationalFunction(num, den)


_GENS = (GLZ2Matrix(1, 1, 0, 1), GLZ2Matrix(1, -1, 0, 1), GLZ2Matrix(1, 0, 1, 1),
         GLZ2Matrix(1, 0, -1, 1), GLZ2Matrix(0, 1, 1, 0), GLZ2Matrix(-1, 0, 0, 1))


def _word_product(word):
    M = GLZ2Matrix.identity()
    for g in word:
        M = M @ g
    return M


def glz2(bound=5, loxodromic=False):
    """GL_2(Z) matrices as short generator words, entries capped at ``bound``."""
    s = st.lists(st.sampled_from(_GENS), min_size=0, max_size=8).map(_word_product)
    s = s.filter(lambda M: max(abs(v) for v in (M.a, M.b, M.c, M.d)) <= bound)
    if loxodromic:
        s = s.filter(matrix_is_loxodromic)
    return s


@st.composite
def torus_maps(draw, bound=5, loxodromic=False, max_num=30):
    M = draw(glz2(bound, loxodromic))
    b = (draw(nonzero_rationals(max_num, max_num)), draw(nonzero_rationals(max_num, max_num)))
    return PseudoMonomialMap(M, TorusPoint(*b))


def torus_points(max_num=30):
    return st.builds(lambda x, y: TorusPoint(x, y), nonzero_rationals(max_num, max_num),
                     nonzero_rationals(max_num, max_num))

