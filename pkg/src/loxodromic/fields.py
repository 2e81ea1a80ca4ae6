"""Base fields Q and F_q(t): parsing, formatting, factoring, and factored elements.

Orbits of torus maps have coordinates whose digit count grows like lambda**n, so
they are carried in :class:`Factored` form: a unit times a finite product of
prime (or monic irreducible) powers.  That form is canonical, hence exact
equality and hashing stay cheap even when the materialised number would not fit
in memory.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import sympy

from .errors import CharacteristicMismatch, OverflowGuard, SpecParseError, ZeroInput
from .ffield import (GF, Poly, RationalFunction, factor_poly, format_rational_function,
                     get_field, parse_rational_function)

DEFAULT_MAX_DIGITS = 200_000
DEFAULT_MAX_DEGREE = 10_000


class RationalField:
    characteristic = 0
    name = "QQ"

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def parse(self, text) -> Fraction:
        try:
            return Fraction(str(text).strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise SpecParseError(f"bad rational {text!r}") from exc

    def format(self, x) -> str:
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    def coerce(self, x):
        if isinstance(x, (int, Fraction)):
            return Fraction(x)
        if isinstance(x, Factored) and x.field == self:
            return x
        if isinstance(x, str):
            return self.parse(x)
        raise CharacteristicMismatch(f"{x!r} is not an element of Q")

    def size(self, x) -> int:
        """Decimal digits of the larger of numerator and denominator."""
        if isinstance(x, Factored):
            return x.size()
        x = Fraction(x)
        return max(_digits(x.numerator), _digits(x.denominator))

    def factor(self, x) -> tuple[int, dict[int, int]]:
        x = Fraction(x)
        if x == 0:
            raise ZeroInput("cannot factor 0")
        exps: dict[int, int] = {}
        for p, e in sympy.factorint(abs(x.numerator)).items():
            exps[int(p)] = exps.get(int(p), 0) + int(e)
        for p, e in sympy.factorint(x.denominator).items():
            exps[int(p)] = exps.get(int(p), 0) - int(e)
        return (1 if x > 0 else -1), dict(sorted(exps.items()))

    def unit_mul(self, a: int, b: int) -> int:
        return a * b

    def unit_pow(self, a: int, e: int) -> int:
        return a if e % 2 else 1

    def prime_key(self, p):
        return p

    def prime_log_size(self, p) -> float:
        return math.log10(p)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"

    def spec(self) -> dict:
        return {}


class FunctionField:
    name = "Fq(t)"

    def __init__(self, q: int):
        self.F: GF = get_field(q)

    @property
    def q(self) -> int:
        return self.F.q

    @property
    def characteristic(self) -> int:
        return self.F.p

    def zero(self):
        return RationalFunction(Poly(self.F, ()))

    def one(self):
        return RationalFunction(Poly.const(self.F, 1))

    def t(self):
        return RationalFunction.t(self.F)

    def parse(self, text) -> RationalFunction:
        try:
            return parse_rational_function(self.F, str(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise SpecParseError(f"bad element of F_{self.q}(t): {text!r}") from exc

    def format(self, x) -> str:
        return format_rational_function(x)

    def coerce(self, x):
        if isinstance(x, RationalFunction):
            if x.F != self.F:
                raise CharacteristicMismatch(f"element of F_{x.F.q}(t) used over F_{self.q}(t)")
            return x
        if isinstance(x, Factored) and x.field == self:
            return x
        if isinstance(x, int):
            return RationalFunction(Poly.const(self.F, self.F.from_int(x)))
        if isinstance(x, str):
            return self.parse(x)
        raise CharacteristicMismatch(f"{x!r} is not an element of F_{self.q}(t)")

    def size(self, x) -> int:
        if isinstance(x, Factored):
            return x.size()
        return x.size()

    def factor(self, x: RationalFunction) -> tuple[int, dict[Poly, int]]:
        if x.is_zero():
            raise ZeroInput("cannot factor 0")
        u1, num = factor_poly(x.num)
        _, den = factor_poly(x.den)
        exps = dict(num)
        for p, e in den.items():
            exps[p] = exps.get(p, 0) - e
        return u1, dict(sorted(exps.items(), key=lambda kv: kv[0].key()))

    def unit_mul(self, a: int, b: int) -> int:
        return self.F.mul(a, b)

    def unit_pow(self, a: int, e: int) -> int:
        return self.F.pow(a, e)

    def prime_key(self, p: Poly):
        return p.key()

    def prime_log_size(self, p: Poly) -> float:
        return float(p.deg)

    def __eq__(self, other):
        return isinstance(other, FunctionField) and other.q == self.q

    def __hash__(self):
        return hash(("Fq(t)", self.q))

    def __repr__(self):
        return f"F_{self.q}(t)"

    def spec(self) -> dict:
        return {"p": self.characteristic, "q": self.q}


QQ = RationalField()


@lru_cache(maxsize=None)
def function_field(q: int) -> FunctionField:
    return FunctionField(q)


def field_of(x):
    if isinstance(x, Factored):
        return x.field
    if isinstance(x, (int, Fraction)):
        return QQ
    if isinstance(x, RationalFunction):
        return function_field(x.F.q)
    raise TypeError(f"no base field for {x!r}")


def _digits(n: int) -> int:
    n = abs(n)
    if n < 10**15:
        return len(str(n))
    return int(n.bit_length() * 0.30102999566398120) + 1


class Factored:
    """Exact nonzero field element stored as ``unit * prod(prime ** exp)``.

    Over Q the unit is +-1 and primes are ints; over F_q(t) the unit is an
    element of F_q* and primes are monic irreducible polynomials.
    """

    __slots__ = ("field", "unit", "exps", "_hash")

    def __init__(self, field, unit, exps):
        self.field = field
        self.unit = unit
        items = [(p, e) for p, e in exps.items() if e] if isinstance(exps, dict) else [
            (p, e) for p, e in exps if e]
        items.sort(key=lambda kv: field.prime_key(kv[0]))
        self.exps = tuple(items)
        self._hash = None

    @classmethod
    def from_element(cls, x, field=None) -> Factored:
        if isinstance(x, Factored):
            return x
        field = field or field_of(x)
        x = field.coerce(x)
        unit, exps = field.factor(x)
        return cls(field, unit, exps)

    @classmethod
    def one(cls, field) -> Factored:
        return cls(field, 1, ())

    def exponent(self, prime) -> int:
        for p, e in self.exps:
            if p == prime:
                return e
        return 0

    def _coerce(self, other):
        if isinstance(other, Factored):
            if other.field != self.field:
                raise CharacteristicMismatch(f"{self.field} vs {other.field}")
            return other
        return Factored.from_element(other, self.field)

    def __mul__(self, other):
        other = self._coerce(other)
        exps = dict(self.exps)
        for p, e in other.exps:
            exps[p] = exps.get(p, 0) + e
        return Factored(self.field, self.field.unit_mul(self.unit, other.unit), exps)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e == 0:
            return Factored.one(self.field)
        return Factored(self.field, self.field.unit_pow(self.unit, e),
                        [(p, x * e) for p, x in self.exps])

    def inverse(self) -> Factored:
        return self**-1

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __neg__(self):
        return self * Factored.from_element(-self.field.one(), self.field)

    def __eq__(self, other):
        if not isinstance(other, Factored):
            try:
                other = self._coerce(other)
            except (TypeError, CharacteristicMismatch, ZeroInput):
                return False
        return self.field == other.field and self.unit == other.unit and self.exps == other.exps

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.unit, self.exps))
        return self._hash

    def size(self) -> int:
        """Approximate digits (Q) or degree (F_q(t)) of the materialised element."""
        # integer arithmetic in 1/1024 units: exponents may be far beyond float range
        w = {p: math.ceil(self.field.prime_log_size(p) * 1024) for p, _ in self.exps}
        pos = sum(e * w[p] for p, e in self.exps if e > 0)
        neg = sum(-e * w[p] for p, e in self.exps if e < 0)
        return -(-max(pos, neg) // 1024)

    def evaluate(self, max_size: int | None = None):
        if max_size is not None and self.size() > max_size:
            raise OverflowGuard(f"materialising needs ~{self.size()} digits/degree > {max_size}")
        f = self.field
        if isinstance(f, RationalField):
            num = den = 1
            for p, e in self.exps:
                if e > 0:
                    num *= p**e
                else:
                    den *= p ** (-e)
            return Fraction(self.unit * num, den)
        num = Poly.const(f.F, self.unit)
        den = Poly.const(f.F, 1)
        for p, e in self.exps:
            if e > 0:
                num = num * p**e
            else:
                den = den * p ** (-e)
        return RationalFunction(num, den, _reduced=True)

    def degree(self) -> int:
        """deg(num) - deg(den) over F_q(t)."""
        return sum(e * p.deg for p, e in self.exps)

    def canonical(self) -> str:
        return format_element(self)

    def __repr__(self):
        return f"Factored({format_element(self)})"


def format_element(x) -> str:
    if isinstance(x, Factored):
        f = x.field
        parts = [str(x.unit)] if x.unit != 1 else []
        for p, e in x.exps:
            base = str(p) if isinstance(f, RationalField) else f"({p})"
            parts.append(base if e == 1 else f"{base}^{e}")
        return "*".join(parts) or "1"
    return field_of(x).format(x)


def element_size(x) -> int:
    if isinstance(x, Factored):
        return x.size()
    return field_of(x).size(x)


def check_size(values, max_digits: int = DEFAULT_MAX_DIGITS,
               max_degree: int = DEFAULT_MAX_DEGREE) -> None:
    for x in values:
        if x is None:
            continue
        if isinstance(x, Factored):
            # stored size: the exponent digits, not the materialised value
            if sum(e.bit_length() for _, e in x.exps) * 0.30103 > max_digits:
                raise OverflowGuard(f"factored exponents exceed {max_digits} digits")
            continue
        limit = max_digits if field_of(x) == QQ else max_degree
        if element_size(x) > limit:
            raise OverflowGuard(f"coordinate exceeds size limit {limit}")


def parse_field(spec: dict):
    """Pick the base field from a map spec: ``p``/``q`` keys mean F_q(t)."""
    if "q" in spec or "p" in spec:
        q = int(spec.get("q", spec.get("p")))
        field = function_field(q)
        if "p" in spec and int(spec["p"]) != field.characteristic:
            raise SpecParseError(f"p = {spec['p']} is not the characteristic of F_{q}")
        return field
    return QQ


def parse_point(text: str, field) -> tuple:
    parts = [s for s in str(text).split(",")]
    return tuple(field.parse(s) for s in parts)
