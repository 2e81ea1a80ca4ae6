"""Monomial valuations, their GL_2(Z) pushforward, eigenweights, Mobius fixed points."""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ConeExit, NotLoxodromic, ZeroPolynomial
from .fields import QQ, field_of
from .quadratic import QuadraticNumber
from .torus import (GLZ2Matrix, PseudoMonomialMap, dominant_eigenvalues, matrix_is_loxodromic)


def _q(x) -> QuadraticNumber:
    return x if isinstance(x, QuadraticNumber) else QuadraticNumber(x)


class MonomialWeight:
    """Projective class of a weight (s, t); v(x^i y^j) = s i + t j.

    User weights must lie in the open positive quadrant; pushforwards may leave
    it (the formula still defines a valuation on Laurent polynomials).
    """

    __slots__ = ("s", "t")

    def __init__(self, s, t, cone: bool = True):
        s, t = _q(s), _q(t)
        if cone and (s.sign() <= 0 or t.sign() <= 0):
            raise ConeExit(f"weight ({s}, {t}) is not in the open positive quadrant")
        if s.sign() == 0 and t.sign() == 0:
            raise ValueError("the zero weight has no projective class")
        self.s, self.t = s, t

    @property
    def in_cone(self) -> bool:
        return self.s.sign() > 0 and self.t.sign() > 0

    def normalized(self) -> MonomialWeight:
        """Representative with max(|s|, |t|) = 1."""
        m = abs(self.s) if abs(self.s) >= abs(self.t) else abs(self.t)
        return MonomialWeight(self.s / m, self.t / m, cone=False)

    def scaled_by(self, other: MonomialWeight) -> QuadraticNumber | None:
        """c with self = c * other, or None when the classes differ."""
        if other.s.sign() == 0:
            return self.t / other.t if self.s.sign() == 0 else None
        c = self.s / other.s
        return c if self.t == c * other.t else None

    def pair(self) -> tuple[QuadraticNumber, QuadraticNumber]:
        return (self.s, self.t)

    def __eq__(self, other):
        if not isinstance(other, MonomialWeight):
            return NotImplemented
        # positive rescaling only: v and -v are different valuations
        return (self.s * other.t == self.t * other.s and self.s.sign() == other.s.sign()
                and self.t.sign() == other.t.sign())

    def __hash__(self):
        n = self.normalized()
        return hash((n.s, n.t))

    def __repr__(self):
        return f"MonomialWeight({self.s}, {self.t})"

    def to_json(self) -> list:
        return [self.s.to_json(), self.t.to_json()]


@dataclass(frozen=True)
class LaurentPolynomial:
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (i, j), c in self.terms.items():
            if c != 0:
                clean[(int(i), int(j))] = c
        object.__setattr__(self, "terms", clean)

    @classmethod
    def monomial(cls, i: int, j: int, c=1) -> LaurentPolynomial:
        return cls({(i, j): c})

    @classmethod
    def from_json(cls, triples, fld=QQ) -> LaurentPolynomial:
        out: dict = {}
        for i, j, c in triples:
            key = (int(i), int(j))
            out[key] = out.get(key, fld.zero()) + fld.parse(c)
        return cls(out)

    def to_json(self) -> list:
        return [[i, j, field_of(c).format(c)] for (i, j), c in sorted(self.terms.items())]

    def is_zero(self) -> bool:
        return not self.terms

    def support(self):
        return sorted(self.terms)

    def __add__(self, other: LaurentPolynomial) -> LaurentPolynomial:
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return LaurentPolynomial(out)

    def __mul__(self, other: LaurentPolynomial) -> LaurentPolynomial:
        out: dict = {}
        for (i, j), c in self.terms.items():
            for (k, l), d in other.terms.items():
                key = (i + k, j + l)
                out[key] = out[key] + c * d if key in out else c * d
        return LaurentPolynomial(out)

    def pullback(self, f: PseudoMonomialMap) -> LaurentPolynomial:
        """P o f: x^i y^j -> alpha^i beta^j x^(a i + c j) y^(b i + d j)."""
        M = f.matrix
        alpha, beta = f.translation
        out = {}
        for (i, j), c in self.terms.items():
            key = (M.a * i + M.c * j, M.b * i + M.d * j)
            out[key] = c * alpha**i * beta**j
        return LaurentPolynomial(out)


def monomial_valuation_eval(w: MonomialWeight, P: LaurentPolynomial) -> QuadraticNumber:
    if P.is_zero():
        raise ZeroPolynomial("the valuation of 0 is +infinity")
    return min(w.s * i + w.t * j for i, j in P.terms)


def pushforward_weight(M: GLZ2Matrix, w: MonomialWeight) -> MonomialWeight:
    s, t = w.s, w.t
    return MonomialWeight(M.a * s + M.b * t, M.c * s + M.d * t, cone=False)


@dataclass(frozen=True)
class EigenWeight:
    weight: MonomialWeight
    lam: QuadraticNumber
    matrix: GLZ2Matrix  # the matrix actually stabilising the cone: conj @ M^power @ conj
    power: int
    conjugation: tuple[int, int]  # diagonal signs

    def check(self) -> bool:
        img = self.matrix.apply_vector(self.weight.pair())
        return img[0] == self.lam * self.weight.s and img[1] == self.lam * self.weight.t


def _conjugate(M: GLZ2Matrix, signs: tuple[int, int]) -> GLZ2Matrix:
    e1, e2 = signs
    return GLZ2Matrix(M.a, e1 * e2 * M.b, e1 * e2 * M.c, M.d)


_SIGNS = ((1, 1), (1, -1), (-1, 1), (-1, -1))


def eigenweights(M: GLZ2Matrix) -> EigenWeight:
    if not matrix_is_loxodromic(M):
        raise NotLoxodromic(f"{M.rows()} is not loxodromic")
    candidates = [(1, (1, 1)), (2, (1, 1))]
    candidates += [(pw, sg) for pw in (1, 2) for sg in _SIGNS[1:]]
    for pw, signs in candidates:
        N = _conjugate(M**pw, signs)
        mu, _ = dominant_eigenvalues(N)
        if mu.sign() <= 0:
            continue
        # (a - mu) s + b t = 0 with b != 0 for loxodromic N
        s, t = QuadraticNumber(N.b), mu - N.a
        if s.sign() != t.sign():
            continue
        if s.sign() < 0:
            s, t = -s, -t
        w = MonomialWeight(s, t).normalized()
        if w.s.is_rational() and w.t.is_rational():
            raise AssertionError("eigenweight ratio must be irrational")
        return EigenWeight(w, mu, N, pw, signs)
    raise ConeExit(f"no normalisation of {M.rows()} fixes a positive eigendirection")


@dataclass(frozen=True)
class MobiusFixedPoints:
    v_plus: QuadraticNumber
    v_minus: QuadraticNumber
    multiplier_plus: QuadraticNumber
    multiplier_minus: QuadraticNumber
    derivative_plus: QuadraticNumber
    derivative_minus: QuadraticNumber


def mobius_fixed_points(M: GLZ2Matrix) -> MobiusFixedPoints:
    """Fixed slopes of u -> (a u + b)/(c u + d).

    At a fixed slope u the vector (u, 1) is an eigenvector with eigenvalue
    c u + d; the multiplier reported is the other eigenvalue det/(c u + d), and
    the Mobius derivative equals det/(c u + d)^2.
    """
    if not matrix_is_loxodromic(M):
        raise NotLoxodromic(f"{M.rows()} is not loxodromic")
    a, b, c, d = M.a, M.b, M.c, M.d
    disc = (d - a) ** 2 + 4 * b * c
    root = QuadraticNumber.sqrt(disc)
    roots = [(QuadraticNumber(a - d) + root) / (2 * c), (QuadraticNumber(a - d) - root) / (2 * c)]
    data = []
    for u in roots:
        mu = c * u + d
        deriv = QuadraticNumber(M.det) / (mu * mu)
        data.append((u, QuadraticNumber(M.det) / mu, deriv))
    data.sort(key=lambda r: abs(r[2]) < 1, reverse=True)
    (up, mp, dp), (um, mm, dm) = data
    return MobiusFixedPoints(up, um, mp, mm, dp, dm)


@dataclass(frozen=True)
class FunctorialityVerdict:
    holds: bool
    pushed_side: QuadraticNumber
    pulled_side: QuadraticNumber


def check_eigenvaluation_functoriality(f: PseudoMonomialMap, w: MonomialWeight,
                                       P: LaurentPolynomial) -> FunctorialityVerdict:
    lhs = monomial_valuation_eval(pushforward_weight(f.matrix, w), P)
    rhs = monomial_valuation_eval(w, P.pullback(f))
    return FunctorialityVerdict(lhs == rhs, lhs, rhs)
