"""Frobenius-linear automorphisms of the plane over F_q(t).

Additive polynomials a(x) = sum c_i x^(p^i) form a noncommutative ring under
composition; the group GL_2 of that ring, extended by translations, acts on
the plane by (x, y) -> (a(x) + b(y) + b1, c(x) + d(y) + b2).  Maps are given as
generator words (diagonal scalings, transvections, the swap) plus a final
translation; their matrix form is a canonical description of the map.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import CharacteristicMismatch, OverflowGuard
from .fields import DEFAULT_MAX_DEGREE, FunctionField
from .ffield import RationalFunction
from .places import weil_height_exact


class AdditivePoly:
    """sum_i coeffs[i] * x^(p^i) over F_q(t)."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FunctionField, coeffs=()):
        self.field = field
        c = [field.coerce(x) for x in coeffs]
        while c and c[-1].is_zero():
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def identity(cls, field) -> AdditivePoly:
        return cls(field, (field.one(),))

    @classmethod
    def frobenius(cls, field) -> AdditivePoly:
        return cls(field, (field.zero(), field.one()))

    @classmethod
    def scalar(cls, field, c) -> AdditivePoly:
        return cls(field, (c,))

    @property
    def p(self) -> int:
        return self.field.characteristic

    def is_zero(self) -> bool:
        return not self.coeffs

    def _same(self, other: AdditivePoly):
        if other.field != self.field:
            raise CharacteristicMismatch(f"{self.field} vs {other.field}")

    def __add__(self, other: AdditivePoly) -> AdditivePoly:
        self._same(other)
        n = max(len(self.coeffs), len(other.coeffs))
        z = self.field.zero()
        return AdditivePoly(self.field, [
            (self.coeffs[i] if i < len(self.coeffs) else z) + (other.coeffs[i] if i < len(other.coeffs) else z)
            for i in range(n)])

    def __neg__(self) -> AdditivePoly:
        return AdditivePoly(self.field, [-c for c in self.coeffs])

    def __sub__(self, other: AdditivePoly) -> AdditivePoly:
        return self + (-other)

    def __call__(self, x):
        acc = self.field.zero()
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                acc = acc + c * x.frobenius(i)
        return acc

    def compose(self, other: AdditivePoly) -> AdditivePoly:
        """(self o other)(x) = sum_ij a_i b_j^(p^i) x^(p^(i+j))."""
        self._same(other)
        if self.is_zero() or other.is_zero():
            return AdditivePoly(self.field, ())
        out = [self.field.zero()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b.frobenius(i)
        return AdditivePoly(self.field, out)

    def __eq__(self, other):
        return isinstance(other, AdditivePoly) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def to_json(self) -> list:
        return [self.field.format(c) for c in self.coeffs] or ["0"]

    def __repr__(self):
        return f"AdditivePoly({self.to_json()}, q={self.field.q})"


def additive_compose(a: AdditivePoly, b: AdditivePoly) -> AdditivePoly:
    if a.field.characteristic != b.field.characteristic:
        raise CharacteristicMismatch(f"characteristic {a.p} vs {b.p}")
    return a.compose(b)


@dataclass(frozen=True)
class Diagonal:
    u: RationalFunction
    v: RationalFunction

    def __post_init__(self):
        if self.u.is_zero() or self.v.is_zero():
            raise ValueError("diagonal entries must be nonzero")

    def __call__(self, pt):
        return (self.u * pt[0], self.v * pt[1])

    def inverse(self) -> Diagonal:
        return Diagonal(self.u.inverse(), self.v.inverse())

    def matrix(self, field):
        z = AdditivePoly(field, ())
        return ((AdditivePoly.scalar(field, self.u), z), (z, AdditivePoly.scalar(field, self.v)))


@dataclass(frozen=True)
class Transvection:
    side: str  # "upper": (x + a(y), y); "lower": (x, y + a(x))
    a: AdditivePoly

    def __post_init__(self):
        if self.side not in ("upper", "lower"):
            raise ValueError(f"transvection side {self.side!r}")

    def __call__(self, pt):
        x, y = pt
        if self.side == "upper":
            return (x + self.a(y), y)
        return (x, y + self.a(x))

    def inverse(self) -> Transvection:
        return Transvection(self.side, -self.a)

    def matrix(self, field):
        one, z = AdditivePoly.identity(field), AdditivePoly(field, ())
        if self.side == "upper":
            return ((one, self.a), (z, one))
        return ((one, z), (self.a, one))


@dataclass(frozen=True)
class Swap:
    def __call__(self, pt):
        return (pt[1], pt[0])

    def inverse(self) -> Swap:
        return self

    def matrix(self, field):
        one, z = AdditivePoly.identity(field), AdditivePoly(field, ())
        return ((z, one), (one, z))


@dataclass(frozen=True)
class FrobGeneratorWord:
    field: FunctionField
    generators: tuple = ()
    translation: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        tr = self.translation or (self.field.zero(), self.field.zero())
        object.__setattr__(self, "translation", tuple(self.field.coerce(c) for c in tr))

    @classmethod
    def identity(cls, field) -> FrobGeneratorWord:
        return cls(field)

    def linear(self, pt):
        for g in reversed(self.generators):
            pt = g(pt)
        return pt

    def __call__(self, pt):
        return apply_frobenius_map(self, pt)

    def matrix(self):
        """Canonical (2x2 additive matrix, translation) form of the map."""
        F = self.field
        one, z = AdditivePoly.identity(F), AdditivePoly(F, ())
        M = ((one, z), (z, one))
        for g in self.generators:
            M = _matmul(M, g.matrix(F))
        return M, self.translation

    def __matmul__(self, other: FrobGeneratorWord) -> FrobGeneratorWord:
        lx, ly = self.linear(other.translation)
        b1, b2 = self.translation
        return FrobGeneratorWord(self.field, self.generators + other.generators, (lx + b1, ly + b2))


def _matmul(A, B):
    return tuple(tuple(A[i][0].compose(B[0][j]) + A[i][1].compose(B[1][j]) for j in range(2))
                 for i in range(2))


def apply_frobenius_map(g: FrobGeneratorWord, point, max_degree: int = DEFAULT_MAX_DEGREE):
    pt = tuple(g.field.coerce(c) for c in point)
    pt = g.linear(pt)
    out = (pt[0] + g.translation[0], pt[1] + g.translation[1])
    for c in out:
        if c.size() > max_degree:
            raise OverflowGuard(f"degree {c.size()} exceeds limit {max_degree}")
    return out


def invert_frobenius_word(g: FrobGeneratorWord) -> FrobGeneratorWord:
    gens = tuple(x.inverse() for x in reversed(g.generators))
    inv_linear = FrobGeneratorWord(g.field, gens)
    b1, b2 = inv_linear.linear(g.translation)
    return FrobGeneratorWord(g.field, gens, (-b1, -b2))


def frobenius_power(g: FrobGeneratorWord, n: int) -> FrobGeneratorWord:
    base = g if n >= 0 else invert_frobenius_word(g)
    out = FrobGeneratorWord.identity(g.field)
    for _ in range(abs(n)):
        out = out @ base
    return out


def frobenius_maps_equal(f: FrobGeneratorWord, g: FrobGeneratorWord) -> bool:
    return f.matrix() == g.matrix()


def frobenius_orbit_heights(g: FrobGeneratorWord, point, n_max: int,
                            max_degree: int = DEFAULT_MAX_DEGREE) -> list[tuple[int, int]]:
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    pt = tuple(g.field.coerce(c) for c in point)
    out = [(0, weil_height_exact(pt).exact)]
    for n in range(1, n_max + 1):
        try:
            pt = apply_frobenius_map(g, pt, max_degree)
        except OverflowGuard as exc:
            exc.partial = out
            raise
        out.append((n, weil_height_exact(pt).exact))
    return out
