from __future__ import annotations

import math
from fractions import Fraction
from functools import total_ordering

import sympy


def squarefree_decompose(n: int) -> tuple[int, int]:
    """n = k**2 * D with D squarefree and positive, for n > 0."""
    if n <= 0:
        raise ValueError("squarefree_decompose needs n > 0")
    k, D = 1, 1
    for p, e in sympy.factorint(n).items():
        k *= p ** (e // 2)
        if e % 2:
            D *= p
    return int(k), int(D)


@total_ordering
class QuadraticNumber:
    """Exact a + b*sqrt(D) with a, b rational and D squarefree (D = 1: rational)."""

    __slots__ = ("a", "b", "D")

    def __init__(self, a=0, b=0, D: int = 1):
        a, b = Fraction(a), Fraction(b)
        if D < 1:
            raise ValueError("radicand must be positive")
        if D == 1 or b == 0:
            a, b, D = a + b, Fraction(0), 1
        self.a, self.b, self.D = a, b, D

    @classmethod
    def sqrt(cls, n: int) -> QuadraticNumber:
        if n == 0:
            return cls(0)
        k, D = squarefree_decompose(n)
        return cls(0, k, D)

    def _coerce(self, other):
        if isinstance(other, QuadraticNumber):
            if other.D != self.D and other.D != 1 and self.D != 1:
                raise ValueError(f"Q(sqrt {self.D}) and Q(sqrt {other.D}) do not mix")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadraticNumber(other)
        return NotImplemented

    def _radicand(self, other) -> int:
        return self.D if self.D != 1 else other.D

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QuadraticNumber(self.a + other.a, self.b + other.b, self._radicand(other))

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.D)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        D = self._radicand(other)
        return QuadraticNumber(self.a * other.a + self.b * other.b * D,
                               self.a * other.b + self.b * other.a, D)

    __rmul__ = __mul__

    def conjugate(self) -> QuadraticNumber:
        return QuadraticNumber(self.a, -self.b, self.D)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.D

    def inverse(self) -> QuadraticNumber:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero quadratic number")
        return QuadraticNumber(self.a / n, -self.b / n, self.D)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        r, x = QuadraticNumber(1, 0, self.D), self
        while e:
            if e & 1:
                r = r * x
            x = x * x
            e >>= 1
        return r

    def sign(self) -> int:
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0 or sa == sb:
            return sa or sb
        if sa == 0:
            return sb
        # opposite signs: compare a^2 with b^2 D
        diff = self.a * self.a - self.b * self.b * self.D
        return sa if diff > 0 else sb

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QuadraticNumber(other)
        if not isinstance(other, QuadraticNumber):
            return NotImplemented
        return self.a == other.a and self.b == other.b and (self.D == other.D or self.b == 0)

    def __lt__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return (self - other).sign() < 0

    def __hash__(self):
        return hash((self.a, self.b, self.D if self.b else 1))

    def is_rational(self) -> bool:
        return self.b == 0

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.D)

    def to_json(self) -> dict:
        return {"rat": _fmt(self.a), "surd": _fmt(self.b), "D": self.D}

    @classmethod
    def from_json(cls, obj) -> QuadraticNumber:
        if isinstance(obj, (int, str)):
            return cls(Fraction(str(obj)))
        return cls(Fraction(obj["rat"]), Fraction(obj.get("surd", "0")), int(obj.get("D", 1)))

    def __repr__(self):
        return f"QuadraticNumber({self})"

    def __str__(self):
        if self.b == 0:
            return _fmt(self.a)
        surd = f"{_fmt(abs(self.b))}√{self.D}" if abs(self.b) != 1 else f"√{self.D}"
        if self.a == 0:
            return surd if self.b > 0 else f"-{surd}"
        return f"{_fmt(self.a)}{'+' if self.b > 0 else '-'}{surd}"


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
