"""Polynomial automorphisms of the affine plane over Q as words of Henon and affine factors.

Words are applied right to left.  For degree questions and exact identity
tests a word is rewritten in the amalgamated product of the affine group A and
the triangular group E = {(alpha x + q(y), beta y + gamma)} over their
intersection S; a Henon factor (y, p(y) - delta x) is the swap composed with the
triangular map (p(y) - delta x, y).  In a reduced alternating word no factor
lies in S, the degree is the product of the triangular degrees, and a nonempty
reduced word is never the identity.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InvariantViolation, OverflowGuard
from .fields import DEFAULT_MAX_DIGITS, QQ
from .places import weil_height_exact

# univariate polynomials over Q: tuples of Fractions, constant term first


def _ptrim(c) -> tuple:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _padd(p, q) -> tuple:
    n = max(len(p), len(q))
    return _ptrim((p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n))


def _pscale(p, c) -> tuple:
    return _ptrim(c * x for x in p)


def _pmul(p, q) -> tuple:
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        if x:
            for j, y in enumerate(q):
                out[i + j] += x * y
    return _ptrim(out)


def _peval(p, y):
    acc = 0
    for c in reversed(p):
        acc = acc * y + c
    return acc


def _pcompose_linear(p, beta, gamma) -> tuple:
    """p(beta*y + gamma) by Horner in the polynomial ring."""
    lin = _ptrim((Fraction(gamma), Fraction(beta)))
    acc: tuple = ()
    for c in reversed(p):
        acc = _padd(_pmul(acc, lin), (c,))
    return acc


def _pdeg(p) -> int:
    return len(p) - 1


@dataclass(frozen=True)
class HenonFactor:
    """(x, y) -> (y, poly(y) - delta * x)."""

    poly: tuple
    delta: Fraction

    def __post_init__(self):
        poly = _ptrim(Fraction(c) for c in self.poly)
        object.__setattr__(self, "poly", poly)
        object.__setattr__(self, "delta", Fraction(self.delta))
        if _pdeg(poly) < 2:
            raise InvariantViolation(f"Henon polynomial has degree {_pdeg(poly)} < 2")
        if self.delta == 0:
            raise InvariantViolation("Henon delta must be nonzero")

    def __call__(self, p):
        x, y = p
        return (y, _peval(self.poly, y) - self.delta * x)

    @property
    def degree(self) -> int:
        return _pdeg(self.poly)


@dataclass(frozen=True)
class AffineFactor:
    """(x, y) -> (a x + b y + e, c x + d y + f)."""

    matrix: tuple
    translation: tuple = (Fraction(0), Fraction(0))

    def __post_init__(self):
        (a, b), (c, d) = self.matrix
        m = ((Fraction(a), Fraction(b)), (Fraction(c), Fraction(d)))
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "translation", tuple(Fraction(v) for v in self.translation))
        if self.det == 0:
            raise InvariantViolation("affine factor has det 0")

    @classmethod
    def identity(cls) -> AffineFactor:
        return cls(((1, 0), (0, 1)))

    @property
    def det(self) -> Fraction:
        (a, b), (c, d) = self.matrix
        return a * d - b * c

    def __call__(self, p):
        (a, b), (c, d) = self.matrix
        e, f = self.translation
        x, y = p
        return (a * x + b * y + e, c * x + d * y + f)

    def __matmul__(self, other: AffineFactor) -> AffineFactor:
        (a, b), (c, d) = self.matrix
        (a2, b2), (c2, d2) = other.matrix
        e2, f2 = other.translation
        e, f = self.translation
        return AffineFactor(((a * a2 + b * c2, a * b2 + b * d2), (c * a2 + d * c2, c * b2 + d * d2)),
                            (a * e2 + b * f2 + e, c * e2 + d * f2 + f))

    def inverse(self) -> AffineFactor:
        (a, b), (c, d) = self.matrix
        D = self.det
        inv = ((d / D, -b / D), (-c / D, a / D))
        e, f = self.translation
        return AffineFactor(inv, (-(inv[0][0] * e + inv[0][1] * f), -(inv[1][0] * e + inv[1][1] * f)))

    def is_identity(self) -> bool:
        return self.matrix == ((1, 0), (0, 1)) and self.translation == (0, 0)

    def is_triangular(self) -> bool:
        """Second coordinate depends on y only: the intersection of A and E."""
        return self.matrix[1][0] == 0


SWAP = AffineFactor(((0, 1), (1, 0)))


@dataclass(frozen=True)
class PlaneAutomorphism:
    word: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "word", tuple(self.word))

    @classmethod
    def identity(cls) -> PlaneAutomorphism:
        return cls(())

    @classmethod
    def henon(cls, poly, delta=1) -> PlaneAutomorphism:
        return cls((HenonFactor(tuple(poly), delta),))

    @property
    def field(self):
        return QQ

    def __call__(self, p):
        return apply_plane(self, p)

    def __matmul__(self, other: PlaneAutomorphism) -> PlaneAutomorphism:
        return PlaneAutomorphism(self.word + other.word)


def _check_digits(point, max_digits: int) -> None:
    for c in point:
        c = Fraction(c)
        if max(c.numerator.bit_length(), c.denominator.bit_length()) * 0.30103 > max_digits:
            raise OverflowGuard(f"plane coordinate exceeds {max_digits} digits")


def apply_plane(f: PlaneAutomorphism, p, max_digits: int = DEFAULT_MAX_DIGITS) -> tuple:
    pt = (Fraction(p[0]), Fraction(p[1]))
    for factor in reversed(f.word):
        pt = factor(pt)
        _check_digits(pt, max_digits)
    return pt


def inverse_factor_word(factor) -> tuple:
    if isinstance(factor, AffineFactor):
        return (factor.inverse(),)
    # ((p(X) - Y)/delta, X) = A o Henon(p, 1) o swap with A(u, v) = (v/delta, u)
    A = AffineFactor(((0, 1 / factor.delta), (1, 0)))
    return (A, HenonFactor(factor.poly, 1), SWAP)


def inverse_plane(f: PlaneAutomorphism) -> PlaneAutomorphism:
    word: list = []
    for factor in f.word:
        word = list(inverse_factor_word(factor)) + word
    return PlaneAutomorphism(tuple(word))


def plane_power(f: PlaneAutomorphism, n: int) -> PlaneAutomorphism:
    base = f if n >= 0 else inverse_plane(f)
    return PlaneAutomorphism(base.word * abs(n))


# -- amalgamated product normal form -------------------------------------


@dataclass(frozen=True)
class Triangular:
    """(alpha x + q(y), beta y + gamma) with deg q >= 2 once reduced."""

    alpha: Fraction
    q: tuple
    beta: Fraction
    gamma: Fraction

    @property
    def degree(self) -> int:
        return max(1, _pdeg(self.q))

    def __call__(self, p):
        x, y = p
        return (self.alpha * x + _peval(self.q, y), self.beta * y + self.gamma)

    @classmethod
    def from_affine(cls, A: AffineFactor) -> Triangular:
        (a, b), (_, d) = A.matrix
        e, f = A.translation
        return cls(a, _ptrim((e, b)), d, f)

    def to_affine(self) -> AffineFactor:
        q0 = self.q[0] if len(self.q) > 0 else Fraction(0)
        q1 = self.q[1] if len(self.q) > 1 else Fraction(0)
        return AffineFactor(((self.alpha, q1), (0, self.beta)), (q0, self.gamma))

    def __matmul__(self, other: Triangular) -> Triangular:
        q = _padd(_pscale(other.q, self.alpha), _pcompose_linear(self.q, other.beta, other.gamma))
        return Triangular(self.alpha * other.alpha, q, self.beta * other.beta,
                          self.beta * other.gamma + self.gamma)


def _expand(f: PlaneAutomorphism) -> list:
    out: list = []
    for factor in f.word:
        if isinstance(factor, AffineFactor):
            out.append(factor)
        else:
            out.append(SWAP)
            out.append(Triangular(-factor.delta, factor.poly, Fraction(1), Fraction(0)))
    return out


def _simplify(el):
    if isinstance(el, Triangular) and _pdeg(el.q) <= 1:
        return el.to_affine()
    return el


def _merge(left, right):
    """left o right when they share a group (or one lies in S), else None."""
    if isinstance(left, AffineFactor) and isinstance(right, AffineFactor):
        return left @ right
    if isinstance(left, Triangular) and isinstance(right, Triangular):
        return _simplify(left @ right)
    if isinstance(left, AffineFactor) and left.is_triangular():
        return _simplify(Triangular.from_affine(left) @ right)
    if isinstance(right, AffineFactor) and right.is_triangular():
        return _simplify(left @ Triangular.from_affine(right))
    return None


def _reduce(elements: list) -> list:
    stack: list = []
    for el in elements:
        el = _simplify(el)
        stack.append(el)
        while len(stack) >= 2:
            m = _merge(stack[-2], stack[-1])
            if m is None:
                break
            stack[-2:] = [m]
        if stack and isinstance(stack[-1], AffineFactor) and stack[-1].is_identity():
            stack.pop()
    # a trailing S element next to E may only become mergeable after later
    # pushes; one more left-to-right sweep settles that
    changed = True
    while changed and len(stack) >= 2:
        changed = False
        for i in range(len(stack) - 1):
            m = _merge(stack[i], stack[i + 1])
            if m is not None:
                stack[i:i + 2] = [] if isinstance(m, AffineFactor) and m.is_identity() else [m]
                changed = True
                break
    return stack


def normal_form(f: PlaneAutomorphism) -> list:
    """Reduced alternating word (composition order, leftmost applied last)."""
    return _reduce(_expand(f))


def plane_degree(f: PlaneAutomorphism) -> int:
    """Algebraic degree of the map itself."""
    d = 1
    for el in normal_form(f):
        if isinstance(el, Triangular):
            d *= el.degree
    return d


def cyclic_normal_form(f: PlaneAutomorphism) -> list:
    word = normal_form(f)
    while len(word) >= 2 and type(word[0]) is type(word[-1]):
        # conjugate by the last factor: x1 ... xk -> (xk x1) x2 ... x_{k-1}
        word = _reduce([word[-1]] + word[:-1])
    return word


def plane_dynamical_degree(f: PlaneAutomorphism) -> int:
    word = cyclic_normal_form(f)
    if len(word) <= 1:
        return 1
    d = 1
    for el in word:
        if isinstance(el, Triangular):
            d *= el.degree
    return d


def plane_is_identity(f: PlaneAutomorphism) -> bool:
    return not normal_form(f)


def plane_maps_equal(f: PlaneAutomorphism, g: PlaneAutomorphism) -> bool:
    return plane_is_identity(f @ inverse_plane(g))


@dataclass(frozen=True)
class GrowthRecord:
    n: int
    point: tuple
    height: float
    ratio: float | None
    exact: int


@dataclass(frozen=True)
class GrowthProfile:
    records: list
    truncated: bool
    bounded_prefix: int  # leading steps whose height stays <= h(p)


def height_growth_profile(f: PlaneAutomorphism, p, n_max: int,
                          max_digits: int = DEFAULT_MAX_DIGITS) -> GrowthProfile:
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    pt = (Fraction(p[0]), Fraction(p[1]))
    records = []
    truncated = False
    prev = None
    for n in range(n_max + 1):
        if n:
            try:
                pt = apply_plane(f, pt, max_digits)
            except OverflowGuard:
                truncated = True
                break
        h = weil_height_exact(pt)
        ratio = None if prev is None or prev == 0 else h.value / prev
        records.append(GrowthRecord(n, pt, h.value, ratio, h.exact))
        prev = h.value
    h0 = records[0].exact
    bounded = 0
    for r in records:
        if r.exact > h0:
            break
        bounded += 1
    return GrowthProfile(records, truncated, bounded)
