"""Normalised absolute values over Q and F_q(t), coordinate norms, Weil heights.

Normalisations (all logs natural):

* Q, archimedean: log|x|.
* Q, prime p: log|x|_p = -ord_p(x) * log p.
* F_q(t), monic irreducible pi: log|x|_pi = -deg(pi) * ord_pi(x).
* F_q(t), infinity: log|x|_inf = deg(num) - deg(den).

The degree weights make the product formula hold over F_q(t).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import sympy

from .errors import SpecParseError, ZeroInput
from .ffield import Poly, RationalFunction, format_poly, parse_poly
from .fields import QQ, Factored, FunctionField, RationalField, field_of, function_field

ARCH = "arch"
PRIME = "prime"
INF = "inf"
POLY = "poly"


@dataclass(frozen=True)
class Place:
    kind: str
    prime: int | Poly | None = None

    def __post_init__(self):
        if self.kind == PRIME and not sympy.isprime(self.prime):
            raise ValueError(f"{self.prime} is not prime")
        if self.kind == POLY:
            if not isinstance(self.prime, Poly) or self.prime.lead != 1:
                raise ValueError("polynomial places need a monic polynomial")
            if not self.prime.is_irreducible():
                raise ValueError(f"{format_poly(self.prime)} is not irreducible")

    @property
    def archimedean(self) -> bool:
        return self.kind == ARCH

    @property
    def normalizer(self) -> float:
        """log|x|_v = -ord_v(x) * normalizer at non-archimedean places."""
        if self.kind == PRIME:
            return math.log(self.prime)
        if self.kind == POLY:
            return float(self.prime.deg)
        return 1.0

    def sort_key(self):
        if self.kind in (ARCH, INF):
            return (0, ())
        if self.kind == PRIME:
            return (1, (self.prime,))
        return (1, self.prime.key())

    def __lt__(self, other: Place):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        if self.kind == PRIME:
            return f"p:{self.prime}"
        if self.kind == POLY:
            return f"poly:{format_poly(self.prime)}"
        return self.kind

    def __repr__(self):
        return f"Place({self})"


ARCHIMEDEAN = Place(ARCH)
INFINITE_PLACE = Place(INF)


def finite_prime(p: int) -> Place:
    return Place(PRIME, int(p))


def finite_poly(pi: Poly) -> Place:
    return Place(POLY, pi)


def parse_place(text: str, field=QQ) -> Place:
    text = text.strip()
    if text == "arch":
        return ARCHIMEDEAN
    if text == "inf":
        return INFINITE_PLACE
    try:
        if text.startswith("p:"):
            return finite_prime(int(text[2:]))
        if text.startswith("poly:"):
            if not isinstance(field, FunctionField):
                raise SpecParseError("polynomial places need a function field")
            return finite_poly(parse_poly(field.F, text[5:]).monic())
    except ValueError as exc:
        raise SpecParseError(str(exc)) from exc
    raise SpecParseError(f"unknown place {text!r}")


def place_for_field(v: Place, field) -> None:
    if isinstance(field, RationalField) and v.kind not in (ARCH, PRIME):
        raise ValueError(f"place {v} does not belong to Q")
    if isinstance(field, FunctionField):
        if v.kind not in (INF, POLY):
            raise ValueError(f"place {v} does not belong to {field}")
        if v.kind == POLY and v.prime.F != field.F:
            raise ValueError(f"place {v} lives over another finite field")


@dataclass(frozen=True)
class LogAbs:
    value: float
    exact_ord: tuple[Place, int] | None = None

    @property
    def ord(self) -> int | None:
        return None if self.exact_ord is None else self.exact_ord[1]


def _multiplicity_poly(pi: Poly, f: Poly) -> int:
    n = 0
    while True:
        q, r = divmod(f, pi)
        if not r.is_zero():
            return n
        f, n = q, n + 1


def ord_at(v: Place, x) -> int:
    """Order of x at a non-archimedean place (ord_inf = deg den - deg num)."""
    if isinstance(x, Factored):
        if v.kind == INF:
            return -x.degree()
        return x.exponent(v.prime)
    if v.kind == PRIME:
        x = Fraction(x)
        return (int(sympy.multiplicity(v.prime, abs(x.numerator)))
                - int(sympy.multiplicity(v.prime, x.denominator)))
    if v.kind == POLY:
        return _multiplicity_poly(v.prime, x.num) - _multiplicity_poly(v.prime, x.den)
    if v.kind == INF:
        return -x.degree
    raise ValueError("the archimedean place has no order")


def _log_sum(pairs) -> float:
    """sum of e * log(p); exponents may lie far beyond float range."""
    pairs = list(pairs)
    big = max((abs(e) for _, e in pairs), default=0)
    if big < 2**1000:
        return sum(e * math.log(p) for p, e in pairs)
    s = sum(float(Fraction(e, big)) * math.log(p) for p, e in pairs)
    try:
        return s * float(big)
    except OverflowError:
        return math.copysign(math.inf, s) if s else 0.0


def _arch_log(x) -> float:
    if isinstance(x, Factored):
        return _log_sum(x.exps)
    x = Fraction(x)
    return math.log(abs(x.numerator)) - math.log(x.denominator)


def _is_zero(x) -> bool:
    if isinstance(x, Factored):
        return False
    if isinstance(x, RationalFunction):
        return x.is_zero()
    return x == 0


def abs_log(v: Place, x) -> LogAbs:
    if _is_zero(x):
        raise ZeroInput("log|0|_v is -infinity")
    if v.kind == ARCH:
        return LogAbs(_arch_log(x))
    o = ord_at(v, x)
    return LogAbs(-o * v.normalizer, (v, o))


def relevant_places(xs) -> list[Place]:
    """Places where some input is not a unit, plus arch/inf; sorted."""
    xs = list(xs)
    if any(_is_zero(x) for x in xs):
        raise ZeroInput("relevant_places needs nonzero inputs")
    if not xs:
        return [ARCHIMEDEAN]
    field = field_of(xs[0])
    out: set[Place] = set()
    for x in xs:
        fx = x if isinstance(x, Factored) else Factored.from_element(x, field)
        for p, _ in fx.exps:
            out.add(finite_prime(p) if isinstance(field, RationalField) else finite_poly(p))
    out.add(ARCHIMEDEAN if isinstance(field, RationalField) else INFINITE_PLACE)
    return sorted(out)


def coordinate_norm_log(v: Place, point) -> float:
    vals = [abs_log(v, x).value for x in point if not _is_zero(x)]
    return max(vals) if vals else -math.inf


def _log_plus(x: float) -> float:
    return x if x > 0 else 0.0


@dataclass(frozen=True)
class WeilHeight:
    """Height with exact backing.

    Over Q with plain rationals ``exact`` is the integer H with h = log H.
    Over F_q(t) ``exact`` is h itself (an integer).  Factored points over Q
    carry exact finite-place data only, so ``exact`` is None there.
    """

    value: float
    exact: int | None
    kind: str  # "log" or "int"

    def __float__(self):
        return self.value


def weil_height_exact(point) -> WeilHeight:
    nonzero = [x for x in point if not _is_zero(x)]
    if not nonzero:
        field = field_of(point[0]) if point else QQ
        return WeilHeight(0.0, 1 if field == QQ else 0, "log" if field == QQ else "int")
    field = field_of(nonzero[0])
    if isinstance(field, RationalField):
        if any(isinstance(x, Factored) for x in nonzero):
            return WeilHeight(_factored_height_q(nonzero), None, "log")
        # sum over p of log+ max|x_i|_p is log of the lcm of the denominators
        fr = [Fraction(x) for x in nonzero]
        lcm = 1
        for x in fr:
            lcm = math.lcm(lcm, x.denominator)
        big = max([lcm] + [abs(x.numerator) * (lcm // x.denominator) for x in fr])
        return WeilHeight(math.log(big), big, "log")
    if any(isinstance(x, Factored) for x in nonzero):
        fs = [Factored.from_element(x, field) for x in nonzero]
        primes = {p for f in fs for p, _ in f.exps}
        total = sum(p.deg * max(0, max(-f.exponent(p) for f in fs)) for p in primes)
        total += max(0, max(f.degree() for f in fs))
        return WeilHeight(float(total), total, "int")
    lcm = nonzero[0].den
    for x in nonzero[1:]:
        lcm = lcm * x.den // lcm.gcd(x.den)
    total = lcm.deg + max(0, max(x.degree for x in nonzero))
    return WeilHeight(float(total), total, "int")


def _factored_height_q(xs) -> float:
    fs = [x if isinstance(x, Factored) else Factored.from_element(x, QQ) for x in xs]
    primes = {p for f in fs for p, _ in f.exps}
    finite = _log_sum((p, max(0, max(-f.exponent(p) for f in fs))) for p in primes)
    arch = max(0.0, max(_arch_log(f) for f in fs))
    return finite + arch


def weil_height(point) -> float:
    return weil_height_exact(point).value


def weil_height_by_places(point) -> float:
    """The defining sum over relevant places; factors every coordinate."""
    nonzero = [x for x in point if not _is_zero(x)]
    if not nonzero:
        return 0.0
    return sum(_log_plus(coordinate_norm_log(v, point)) for v in relevant_places(nonzero))


@dataclass(frozen=True)
class ProductFormulaVerdict:
    holds: bool
    ords: dict
    detail: str


def product_formula_check(x) -> ProductFormulaVerdict:
    if _is_zero(x):
        raise ZeroInput("product formula needs x != 0")
    field = field_of(x)
    places = relevant_places([x])
    ords = {v: ord_at(v, x) for v in places if not v.archimedean}
    if isinstance(field, RationalField):
        # |x|_arch * prod_p |x|_p = 1  <=>  prod_p p^ord_p = |x|
        rebuilt = Fraction(1)
        for v, o in ords.items():
            rebuilt *= Fraction(v.prime) ** o
        target = abs(Fraction(x.evaluate() if isinstance(x, Factored) else x))
        holds = rebuilt == target
        return ProductFormulaVerdict(holds, ords, f"prod p^ord_p = {rebuilt}, |x| = {target}")
    total = sum((v.prime.deg * o if v.kind == POLY else o) for v, o in ords.items())
    if INFINITE_PLACE not in ords:
        total += ord_at(INFINITE_PLACE, x)
    return ProductFormulaVerdict(total == 0, ords, f"sum deg*ord = {total}")


__all__ = [
    "ARCHIMEDEAN", "INFINITE_PLACE", "LogAbs", "Place", "ProductFormulaVerdict", "WeilHeight",
    "abs_log", "coordinate_norm_log", "finite_poly", "finite_prime", "function_field",
    "ord_at", "parse_place", "place_for_field", "product_formula_check", "relevant_places",
    "weil_height", "weil_height_by_places", "weil_height_exact",
]
