"""Pseudo-monomial automorphisms of the torus G_m^2 over Q or F_q(t).

A map is a pair (M, b) with M in GL_2(Z) and b = (alpha, beta) acting by

    f(x, y) = (alpha * x**a * y**b, beta * x**c * y**d).

Written additively on the torus this is f(u) = M u + b, so composition follows
the semidirect product law f o g = (M_f M_g, M_f(b_g) + b_f).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InvariantViolation, ZeroInput
from .fields import (DEFAULT_MAX_DEGREE, DEFAULT_MAX_DIGITS, QQ, Factored, check_size,
                     field_of, format_element)
from .quadratic import QuadraticNumber


@dataclass(frozen=True)
class GLZ2Matrix:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.det not in (1, -1):
            raise InvariantViolation(f"det = {self.det} is not +-1 for {self.rows()}")

    @classmethod
    def from_rows(cls, rows) -> GLZ2Matrix:
        (a, b), (c, d) = rows
        return cls(int(a), int(b), int(c), int(d))

    @classmethod
    def identity(cls) -> GLZ2Matrix:
        return cls(1, 0, 0, 1)

    def rows(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> int:
        return self.a + self.d

    def __matmul__(self, other: GLZ2Matrix) -> GLZ2Matrix:
        return GLZ2Matrix(self.a * other.a + self.b * other.c, self.a * other.b + self.b * other.d,
                          self.c * other.a + self.d * other.c, self.c * other.b + self.d * other.d)

    def inverse(self) -> GLZ2Matrix:
        D = self.det
        return GLZ2Matrix(self.d * D, -self.b * D, -self.c * D, self.a * D)

    def __pow__(self, n: int) -> GLZ2Matrix:
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        r = GLZ2Matrix.identity()
        while n:
            if n & 1:
                r = r @ base
            base = base @ base
            n >>= 1
        return r

    def apply_vector(self, v):
        """M v for a column vector (any ring elements)."""
        x, y = v
        return (self.a * x + self.b * y, self.c * x + self.d * y)

    def monomial_apply(self, point):
        """(x^a y^b, x^c y^d): the multiplicative action on the torus."""
        x, y = point
        return (_mono(x, self.a, y, self.b), _mono(x, self.c, y, self.d))


def _mono(x, i: int, y, j: int):
    # int ** negative would give a float
    if type(x) is int:
        x = Fraction(x)
    if type(y) is int:
        y = Fraction(y)
    if i == 0:
        return y**j
    if j == 0:
        return x**i
    return x**i * y**j


class TorusPoint(tuple):
    """A point (x, y) of G_m^2; both coordinates nonzero."""

    def __new__(cls, x, y):
        for c in (x, y):
            if not isinstance(c, Factored) and (c == 0 or (hasattr(c, "is_zero") and c.is_zero())):
                raise ZeroInput("torus points have nonzero coordinates")
        return super().__new__(cls, (x, y))

    @property
    def x(self):
        return self[0]

    @property
    def y(self):
        return self[1]

    @property
    def field(self):
        return field_of(self[0])

    def factored(self) -> TorusPoint:
        f = self.field
        return TorusPoint(Factored.from_element(self[0], f), Factored.from_element(self[1], f))

    def evaluate(self, max_size: int | None = None) -> TorusPoint:
        return TorusPoint(*(c.evaluate(max_size) if isinstance(c, Factored) else c for c in self))

    def __str__(self):
        return f"({format_element(self[0])}, {format_element(self[1])})"

    def __repr__(self):
        return f"TorusPoint{self}"


def torus_point(x, y, field=None) -> TorusPoint:
    field = field or (field_of(x) if not isinstance(x, int) else QQ)
    return TorusPoint(field.coerce(x), field.coerce(y))


@dataclass(frozen=True)
class PseudoMonomialMap:
    matrix: GLZ2Matrix
    translation: TorusPoint

    @classmethod
    def make(cls, rows, translation, field=None) -> PseudoMonomialMap:
        m = rows if isinstance(rows, GLZ2Matrix) else GLZ2Matrix.from_rows(rows)
        return cls(m, torus_point(*translation, field=field))

    @classmethod
    def identity(cls, field=QQ) -> PseudoMonomialMap:
        return cls(GLZ2Matrix.identity(), TorusPoint(field.one(), field.one()))

    @property
    def field(self):
        return self.translation.field

    def factored(self) -> PseudoMonomialMap:
        return PseudoMonomialMap(self.matrix, self.translation.factored())

    def __call__(self, p):
        return apply(self, p)

    def __repr__(self):
        return f"PseudoMonomialMap({self.matrix.rows()}, {self.translation})"


def _match(f: PseudoMonomialMap, p):
    """Bring translation and point to a common representation."""
    b = f.translation
    factored = any(isinstance(c, Factored) for c in (*b, *p))
    if factored:
        field = f.field
        b = TorusPoint(*(Factored.from_element(c, field) for c in b))
        p = TorusPoint(*(Factored.from_element(c, field) for c in p))
    return b, p


def apply(f: PseudoMonomialMap, p, max_digits: int = DEFAULT_MAX_DIGITS,
          max_degree: int = DEFAULT_MAX_DEGREE) -> TorusPoint:
    b, p = _match(f, p)
    mx, my = f.matrix.monomial_apply(p)
    out = TorusPoint(b[0] * mx, b[1] * my)
    check_size(out, max_digits, max_degree)
    return out


def compose(f: PseudoMonomialMap, g: PseudoMonomialMap) -> PseudoMonomialMap:
    """f o g."""
    bf, bg = _match(f, g.translation)
    mx, my = f.matrix.monomial_apply(bg)
    return PseudoMonomialMap(f.matrix @ g.matrix, TorusPoint(mx * bf[0], my * bf[1]))


def inverse(f: PseudoMonomialMap) -> PseudoMonomialMap:
    minv = f.matrix.inverse()
    mx, my = minv.monomial_apply(f.translation)
    return PseudoMonomialMap(minv, TorusPoint(mx**-1, my**-1))


def power(f: PseudoMonomialMap, n: int) -> PseudoMonomialMap:
    base = f if n >= 0 else inverse(f)
    n = abs(n)
    result = PseudoMonomialMap.identity(f.field)
    if isinstance(f.translation[0], Factored):
        result = result.factored()
    while n:
        if n & 1:
            result = compose(result, base)
        n >>= 1
        if n:
            base = compose(base, base)
    return result


def maps_equal(f: PseudoMonomialMap, g: PseudoMonomialMap) -> bool:
    if f.matrix != g.matrix:
        return False
    bf, bg = _match(f, g.translation)
    return bf == bg


@dataclass(frozen=True)
class DynamicalDegree:
    value: float
    exact: QuadraticNumber
    trace: int
    det: int
    discriminant: int

    def __float__(self):
        return self.value


def spectral_radius(M: GLZ2Matrix) -> QuadraticNumber:
    t, D = M.trace, M.det
    disc = t * t - 4 * D
    if disc <= 0:
        return QuadraticNumber(1)
    rho = (QuadraticNumber(abs(t)) + QuadraticNumber.sqrt(disc)) / 2
    return rho if rho > 1 else QuadraticNumber(1)


def dominant_eigenvalues(M: GLZ2Matrix) -> tuple[QuadraticNumber, QuadraticNumber]:
    """(mu_big, mu_small) signed eigenvalues of a loxodromic matrix, |mu_big| > 1."""
    if not matrix_is_loxodromic(M):
        raise ValueError("eigenvalue split needs a loxodromic matrix")
    rho = spectral_radius(M)
    big = rho if M.trace > 0 else -rho
    return big, QuadraticNumber(M.det) / big


def dynamical_degree(f) -> DynamicalDegree:
    M = f.matrix if isinstance(f, PseudoMonomialMap) else f
    rho = spectral_radius(M)
    return DynamicalDegree(float(rho), rho, M.trace, M.det, M.trace**2 - 4 * M.det)


def matrix_is_loxodromic(M: GLZ2Matrix) -> bool:
    if M.det == 1:
        return abs(M.trace) > 2
    return M.trace != 0


def is_loxodromic(f) -> bool:
    return matrix_is_loxodromic(f.matrix if isinstance(f, PseudoMonomialMap) else f)


def matrix_power_trace(M: GLZ2Matrix, n: int) -> int:
    """Tr(M^n) from t_{k+1} = Tr(M) t_k - det(M) t_{k-1}, t_0 = 2."""
    if n < 0:
        raise ValueError("n must be >= 0")
    t_prev, t_cur = 2, M.trace
    if n == 0:
        return 2
    tr, det = M.trace, M.det
    for _ in range(n - 1):
        t_prev, t_cur = t_cur, tr * t_cur - det * t_prev
    return t_cur


__all__ = [
    "DynamicalDegree", "GLZ2Matrix", "PseudoMonomialMap", "TorusPoint", "apply",
    "compose", "dominant_eigenvalues", "dynamical_degree", "inverse", "is_loxodromic",
    "maps_equal", "matrix_is_loxodromic", "matrix_power_trace", "power", "spectral_radius",
    "torus_point",
]
