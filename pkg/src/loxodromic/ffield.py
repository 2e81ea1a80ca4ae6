"""Finite fields F_q, polynomials over F_q and the rational function field F_q(t).

Elements of F_q are plain ints in ``range(q)``.  For q = p**k with k > 1 an
element encodes its base-p digit vector over the first monic irreducible
polynomial of degree k (lexicographic search), with multiplication tabulated.
"""
from __future__ import annotations

import re
from functools import lru_cache
from itertools import product

import numpy as np
import sympy

from .errors import CharacteristicMismatch, ZeroInput


def _prime_power(q: int) -> tuple[int, int]:
    fac = sympy.factorint(q)
    if q < 2 or len(fac) != 1:
        raise ValueError(f"q = {q} is not a prime power")
    ((p, k),) = fac.items()
    return int(p), int(k)


class GF:
    __slots__ = ("q", "p", "k", "_mul", "_add", "_inv", "_neg", "modulus")

    def __init__(self, q: int):
        self.q = q
        self.p, self.k = _prime_power(q)
        self.modulus = None
        self._mul = self._add = self._inv = self._neg = None
        if self.k > 1:
            self._build_tables()

    def _build_tables(self) -> None:
        p, k, q = self.p, self.k, self.q
        base = get_field(p)
        modulus = next(m for m in monic_polys(base, k) if m.is_irreducible())
        self.modulus = modulus

        def digits(a):
            return tuple((a // p**i) % p for i in range(k))

        def encode(coeffs):
            return sum(c * p**i for i, c in enumerate(coeffs))

        polys = [Poly(base, digits(a)) for a in range(q)]
        self._add = [[encode([(x + y) % p for x, y in zip(digits(a), digits(b))])
                      for b in range(q)] for a in range(q)]
        self._mul = [[encode((polys[a] * polys[b] % modulus).coeffs) for b in range(q)]
                     for a in range(q)]
        self._neg = [encode([(-x) % p for x in digits(a)]) for a in range(q)]
        self._inv = [0] * q
        for a in range(1, q):
            self._inv[a] = self._mul[a].index(1)

    def add(self, a: int, b: int) -> int:
        if self._add is None:
            return (a + b) % self.p
        return self._add[a][b]

    def neg(self, a: int) -> int:
        if self._neg is None:
            return (-a) % self.p
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self._mul is None:
            return (a * b) % self.p
        return self._mul[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_q")
        if self._inv is None:
            return pow(a, -1, self.p)
        return self._inv[a]

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def frob(self, a: int, i: int = 1) -> int:
        """a ** (p ** i)."""
        if self.k == 1:
            return a
        return self.pow(a, pow(self.p, i % self.k))

    def from_int(self, n: int) -> int:
        return n % self.p

    def __eq__(self, other):
        return isinstance(other, GF) and other.q == self.q

    def __hash__(self):
        return hash(("GF", self.q))

    def __repr__(self):
        return f"GF({self.q})"


@lru_cache(maxsize=None)
def get_field(q: int) -> GF:
    return GF(q)


def _trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class Poly:
    """Polynomial over F_q in the variable t, coefficients low degree first."""

    __slots__ = ("F", "coeffs")

    def __init__(self, F: GF, coeffs=()):
        self.F = F
        self.coeffs = _trim(coeffs)

    @classmethod
    def const(cls, F: GF, c: int) -> Poly:
        return cls(F, (c,))

    @classmethod
    def t(cls, F: GF) -> Poly:
        return cls(F, (0, 1))

    @classmethod
    def monomial(cls, F: GF, deg: int, c: int = 1) -> Poly:
        return cls(F, (0,) * deg + (c,))

    @property
    def deg(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (1,)

    def _check(self, other):
        if isinstance(other, int):
            return Poly.const(self.F, self.F.from_int(other))
        if not isinstance(other, Poly):
            return NotImplemented
        if other.F != self.F:
            raise CharacteristicMismatch(f"{self.F} vs {other.F}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        F = self.F
        out = list(a)
        for i, c in enumerate(b):
            out[i] = F.add(out[i], c)
        return Poly(F, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.F, [self.F.neg(c) for c in self.coeffs])

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: int) -> Poly:
        F = self.F
        return Poly(F, [F.mul(c, x) for x in self.coeffs])

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly(self.F, ())
        F = self.F
        if F.k == 1:
            p = F.p
            if min(len(a), len(b)) > 48:
                out = np.convolve(np.array(a, dtype=np.int64), np.array(b, dtype=np.int64)) % p
                return Poly(F, [int(x) for x in out])
            out = [0] * (len(a) + len(b) - 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        out[i + j] += x * y
            return Poly(F, [x % p for x in out])
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
        return Poly(F, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        r = Poly.const(self.F, 1)
        a = self
        while e:
            if e & 1:
                r = r * a
            a = a * a
            e >>= 1
        return r

    def __divmod__(self, other):
        other = self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        F = self.F
        r = list(self.coeffs)
        db = other.deg
        inv_lead = F.inv(other.lead)
        if len(r) - 1 < db:
            return Poly(F, ()), self
        qc = [0] * (len(r) - db)
        b = other.coeffs
        for i in range(len(r) - 1, db - 1, -1):
            c = r[i]
            if c == 0:
                continue
            c = F.mul(c, inv_lead)
            qc[i - db] = c
            for j, y in enumerate(b):
                r[i - db + j] = F.sub(r[i - db + j], F.mul(c, y))
        return Poly(F, qc), Poly(F, r[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self) -> Poly:
        if self.is_zero():
            return self
        return self.scale(self.F.inv(self.lead))

    def gcd(self, other: Poly) -> Poly:
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def __call__(self, x: int) -> int:
        F = self.F
        acc = 0
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), c)
        return acc

    def frobenius(self, i: int = 1) -> Poly:
        """self ** (p ** i), computed by spreading exponents."""
        F = self.F
        step = F.p**i
        out = [0] * (self.deg * step + 1) if self.coeffs else []
        for e, c in enumerate(self.coeffs):
            if c:
                out[e * step] = F.frob(c, i)
        return Poly(F, out)

    def powmod(self, e: int, mod: Poly) -> Poly:
        r = Poly.const(self.F, 1)
        a = self % mod
        while e:
            if e & 1:
                r = r * a % mod
            a = a * a % mod
            e >>= 1
        return r

    def is_irreducible(self) -> bool:
        """Trial division by every monic polynomial of degree <= deg/2."""
        if self.deg < 1:
            return False
        if self.deg == 1:
            return True
        for d in range(1, self.deg // 2 + 1):
            for m in monic_polys(self.F, d):
                if (self % m).is_zero():
                    return False
        return True

    def is_irreducible_rabin(self) -> bool:
        n = self.deg
        if n < 1:
            return False
        f = self.monic()
        t = Poly.t(self.F)
        q = self.F.q
        for r in sympy.primefactors(n):
            h = t.powmod(q ** (n // r), f) - t
            if not f.gcd(h).is_one():
                return False
        return ((t.powmod(q**n, f) - t) % f).is_zero()

    def key(self):
        return (self.deg, tuple(reversed(self.coeffs)))

    def __eq__(self, other):
        if isinstance(other, int):
            other = Poly.const(self.F, self.F.from_int(other))
        return isinstance(other, Poly) and self.F == other.F and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.F.q, self.coeffs))

    def __lt__(self, other: Poly):
        return self.key() < other.key()

    def __repr__(self):
        return f"Poly({format_poly(self)!r}, q={self.F.q})"

    def __str__(self):
        return format_poly(self)


def monic_polys(F: GF, d: int):
    """All monic polynomials of degree d, in increasing lexicographic order."""
    for lower in product(range(F.q), repeat=d):
        yield Poly(F, tuple(reversed(lower)) + (1,))


def factor_poly(f: Poly) -> tuple[int, dict[Poly, int]]:
    """Factor f into a unit of F_q times monic irreducibles (trial division)."""
    if f.is_zero():
        raise ZeroInput("cannot factor the zero polynomial")
    unit = f.lead
    rest = f.monic()
    out: dict[Poly, int] = {}
    d = 1
    while rest.deg >= 2 * d:
        if rest.is_irreducible_rabin():
            break
        for m in monic_polys(f.F, d):
            while True:
                qt, r = divmod(rest, m)
                if not r.is_zero():
                    break
                out[m] = out.get(m, 0) + 1
                rest = qt
        d += 1
    if rest.deg >= 1:
        out[rest] = out.get(rest, 0) + 1
    return unit, dict(sorted(out.items(), key=lambda kv: kv[0].key()))


class RationalFunction:
    """Element num/den of F_q(t) with gcd(num, den) = 1 and den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None, _reduced: bool = False):
        F = num.F
        if den is None:
            den = Poly.const(F, 1)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not _reduced:
            if num.is_zero():
                den = Poly.const(F, 1)
            else:
                g = num.gcd(den)
                if not g.is_one():
                    num, den = num // g, den // g
                lead = den.lead
                if lead != 1:
                    inv = F.inv(lead)
                    num, den = num.scale(inv), den.scale(inv)
        self.num = num
        self.den = den

    @property
    def F(self) -> GF:
        return self.num.F

    @classmethod
    def const(cls, F: GF, c: int) -> RationalFunction:
        return cls(Poly.const(F, F.from_int(c) if c >= F.q or c < 0 else c))

    @classmethod
    def t(cls, F: GF) -> RationalFunction:
        return cls(Poly.t(F))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            if other.F != self.F:
                raise CharacteristicMismatch(f"{self.F} vs {other.F}")
            return other
        if isinstance(other, Poly):
            return RationalFunction(other)
        if isinstance(other, int):
            return RationalFunction(Poly.const(self.F, self.F.from_int(other)))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _reduced=True)

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
        # cross-cancel first to keep the products small
        g1 = self.num.gcd(other.den) if not self.num.is_zero() else Poly.const(self.F, 1)
        g2 = other.num.gcd(self.den) if not other.num.is_zero() else Poly.const(self.F, 1)
        num = (self.num // g1) * (other.num // g2)
        den = (self.den // g2) * (other.den // g1)
        if num.is_zero():
            return RationalFunction(num)
        lead = den.lead
        if lead != 1:
            inv = self.F.inv(lead)
            num, den = num.scale(inv), den.scale(inv)
        return RationalFunction(num, den, _reduced=True)

    __rmul__ = __mul__

    def inverse(self) -> RationalFunction:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in F_q(t)")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return RationalFunction(self.num**e, self.den**e, _reduced=True) if e else RationalFunction(Poly.const(self.F, 1))

    def frobenius(self, i: int = 1) -> RationalFunction:
        return RationalFunction(self.num.frobenius(i), self.den.frobenius(i), _reduced=True)

    @property
    def degree(self) -> int:
        """deg(num) - deg(den); minus the order at the infinite place."""
        return self.num.deg - self.den.deg

    def size(self) -> int:
        return max(self.num.deg, self.den.deg)

    def __eq__(self, other):
        if isinstance(other, (int, Poly)):
            other = self._coerce(other)
        return (isinstance(other, RationalFunction) and self.F == other.F
                and self.num.coeffs == other.num.coeffs and self.den.coeffs == other.den.coeffs)

    def __hash__(self):
        return hash((self.F.q, self.num.coeffs, self.den.coeffs))

    def __repr__(self):
        return f"RationalFunction({format_rational_function(self)!r}, q={self.F.q})"

    def __str__(self):
        return format_rational_function(self)


# -- text form -----------------------------------------------------------

_TERM = re.compile(r"^(\d*)\*?(t(?:\^(\d+))?)?$")


def parse_poly(F: GF, text: str) -> Poly:
    s = text.replace(" ", "")
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    if not s:
        raise ValueError("empty polynomial")
    out = Poly(F, ())
    for sign, body in re.findall(r"([+-]?)([^+-]+)", s):
        m = _TERM.match(body)
        if not m or (not m.group(1) and not m.group(2)):
            raise ValueError(f"bad polynomial term {body!r} in {text!r}")
        c = int(m.group(1)) if m.group(1) else 1
        if c >= F.q:
            raise ValueError(f"coefficient {c} outside 0..{F.q - 1}")
        if F.k == 1:
            c %= F.p
        d = 0
        if m.group(2):
            d = int(m.group(3)) if m.group(3) else 1
        term = Poly.monomial(F, d, c)
        out = out - term if sign == "-" else out + term
    return out


def _split_top_level(s: str) -> list[str]:
    depth = 0
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "/" and depth == 0:
            return [s[:i], s[i + 1:]]
    return [s]


def parse_rational_function(F: GF, text: str) -> RationalFunction:
    parts = _split_top_level(text.replace(" ", ""))
    num = parse_poly(F, parts[0])
    den = parse_poly(F, parts[1]) if len(parts) > 1 else Poly.const(F, 1)
    return RationalFunction(num, den)


def format_poly(f: Poly) -> str:
    if f.is_zero():
        return "0"
    parts = []
    for e in range(f.deg, -1, -1):
        c = f.coeffs[e]
        if c == 0:
            continue
        mono = "" if e == 0 else ("t" if e == 1 else f"t^{e}")
        if not mono:
            parts.append(str(c))
        elif c == 1:
            parts.append(mono)
        else:
            parts.append(f"{c}{mono}")
    return "+".join(parts)


def format_rational_function(x: RationalFunction) -> str:
    if x.den.is_one():
        return format_poly(x.num)
    return f"{format_poly(x.num)}/{format_poly(x.den)}"
