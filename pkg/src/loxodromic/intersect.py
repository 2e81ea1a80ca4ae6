"""Orbit intersections, their reductions, window densities, progressions and common iterates."""
from __future__ import annotations

import math
import random
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import frobenius as fb
from . import henon as hn
from . import torus as tr
from .errors import (IncompatibleDegrees, NotLoxodromic, OverflowGuard, PeriodicStartPoint,
                     VanishingLeadingCoefficient)
from .fields import QQ, Factored, RationalField, format_element
from .orbits import Dynamics, asymptotic_decomposition
from .places import Place

DEFAULT_WINDOW_BUDGET = 4_000_000


@dataclass(frozen=True)
class IntersectionWindow:
    f_range: tuple[int, int]
    g_range: tuple[int, int]

    def __post_init__(self):
        for lo, hi in (self.f_range, self.g_range):
            if lo > hi:
                raise ValueError(f"empty interval [{lo}, {hi}]")

    @property
    def size(self) -> int:
        return (self.f_range[1] - self.f_range[0] + 1) * (self.g_range[1] - self.g_range[0] + 1)


@dataclass
class IntersectionSet:
    pairs: list
    window: IntersectionWindow
    f_periodic: bool = False
    truncated: bool = False

    @property
    def iota_image(self) -> list[int]:
        """n-values of the pairs; only meaningful when p is not f-periodic."""
        if self.f_periodic:
            raise PeriodicStartPoint("p is f-periodic: the index projection is not injective")
        return sorted({n for n, _ in self.pairs})


def _orbit(dyn: Dynamics, p, lo: int, hi: int) -> tuple[dict, bool]:
    start = dyn.prepare(p)
    pts = {}
    truncated = False
    try:
        if lo <= 0 <= hi:
            pts[0] = start
        pt = start
        for n in range(1, hi + 1):
            pt = dyn.step(pt)
            if n >= lo:
                pts[n] = pt
        pt = start
        for n in range(-1, lo - 1, -1):
            pt = dyn.step(pt, backward=True)
            if n <= hi:
                pts[n] = pt
    except OverflowGuard:
        truncated = True
    return pts, truncated


def _same_kind(f, g) -> None:
    if type(f) is not type(g):
        raise TypeError("f and g must be the same kind of map")
    if f.field != g.field:
        raise TypeError(f"f and g live over different fields: {f.field} vs {g.field}")


def find_intersections(f, p, g, q, window: IntersectionWindow,
                       budget: int = DEFAULT_WINDOW_BUDGET) -> IntersectionSet:
    _same_kind(f, g)
    if window.size > budget:
        raise OverflowGuard(f"window has {window.size} index pairs > budget {budget}")
    df, dg = Dynamics(f), Dynamics(g)
    fo, t1 = _orbit(df, p, *window.f_range)
    go, t2 = _orbit(dg, q, *window.g_range)
    index = defaultdict(list)
    for m, pt in go.items():
        index[pt].append(m)
    pairs = []
    for n, pt in fo.items():
        for m in index.get(pt, ()):
            if go[m] == pt:
                pairs.append((n, m))
    pairs.sort()
    periodic = len(set(fo.values())) < len(fo)
    return IntersectionSet(pairs, window, periodic, t1 or t2)


def _inverse(f):
    if isinstance(f, tr.PseudoMonomialMap):
        return tr.inverse(f)
    if isinstance(f, hn.PlaneAutomorphism):
        return hn.inverse_plane(f)
    return fb.invert_frobenius_word(f)


def _power(f, n: int):
    if isinstance(f, tr.PseudoMonomialMap):
        return tr.power(f, n)
    if isinstance(f, hn.PlaneAutomorphism):
        return hn.plane_power(f, n)
    return fb.frobenius_power(f, n)


@dataclass(frozen=True)
class ForwardReduction:
    signs: tuple[str, str]
    counts: dict
    f: object
    g: object


_QUADRANTS = (("+", "+"), ("+", "-"), ("-", "+"), ("-", "-"))


def reduce_to_forward(f, p, g, q, window: IntersectionWindow) -> ForwardReduction:
    """Split the pairs by sign of (n, m); n = 0 and m = 0 count as forward."""
    pairs = find_intersections(f, p, g, q, window).pairs
    counts = {qd: 0 for qd in _QUADRANTS}
    for n, m in pairs:
        counts[("+" if n >= 0 else "-", "+" if m >= 0 else "-")] += 1
    best = max(_QUADRANTS, key=lambda qd: (counts[qd], -_QUADRANTS.index(qd)))
    return ForwardReduction(best, counts,
                            f if best[0] == "+" else _inverse(f),
                            g if best[1] == "+" else _inverse(g))


@dataclass(frozen=True)
class SamePointReduction:
    r: tuple
    shift: tuple[int, int]
    window: IntersectionWindow


def reduce_to_same_point(f, p, g, q, window: IntersectionWindow) -> SamePointReduction | None:
    pairs = [(n, m) for n, m in find_intersections(f, p, g, q, window).pairs if n >= 0 and m >= 0]
    if not pairs:
        return None
    n0, m0 = min(pairs)
    dyn = Dynamics(f)
    pt = dyn.prepare(p)
    for _ in range(n0):
        pt = dyn.step(pt)
    (a, b), (c, d) = window.f_range, window.g_range
    return SamePointReduction(pt, (n0, m0), IntersectionWindow((a - n0, b - n0), (c - m0, d - m0)))


@dataclass(frozen=True)
class IterateReduction:
    classes: dict  # (l, k) -> pairs in that residue class
    dominant: tuple[int, int]
    sub_instance: tuple  # (f^n, f^l(p), g^m, g^k(q))
    reindexed: list  # dominant pairs as indices for the iterates


def reduce_to_iterates(f, p, g, q, n: int, m: int, pairs) -> IterateReduction:
    if n == 0 or m == 0:
        raise ValueError("iterate exponents must be nonzero")
    classes = {(l, k): [] for l in range(abs(n)) for k in range(abs(m))}
    for N, M in pairs:
        classes[(N % abs(n), M % abs(m))].append((N, M))
    dominant = max(classes, key=lambda c: (len(classes[c]), -c[0], -c[1]))
    l, k = dominant
    df, dg = Dynamics(f), Dynamics(g)
    fp, gq = df.prepare(p), dg.prepare(q)
    for _ in range(l):
        fp = df.step(fp)
    for _ in range(k):
        gq = dg.step(gq)
    sub = (_power(f, n), fp, _power(g, m), gq)
    reindexed = [((N - l) // n, (M - k) // m) for N, M in classes[dominant]]
    return IterateReduction(classes, dominant, sub, reindexed)


# -- window statistics ---------------------------------------------------


@dataclass(frozen=True)
class DensityEstimate:
    value: float
    window: tuple[int, int]
    min_length: int
    best_interval: tuple[int, int]
    per_length: dict = field(repr=False, default_factory=dict)


def banach_density_estimate(S, window: tuple[int, int], min_length: int | None = None,
                            ) -> DensityEstimate:
    """max |S n I| / |I| over subintervals I of the window with |I| >= min_length.

    The default scan keeps intervals of at least half the window, the finite
    stand-in for |I| -> infinity.
    """
    lo, hi = window
    W = hi - lo + 1
    if min_length is None:
        min_length = max(1, math.ceil(W / 2))
    min_length = max(1, min(min_length, W))
    ind = np.zeros(W, dtype=np.int64)
    for s in S:
        if not lo <= s <= hi:
            raise ValueError(f"{s} lies outside the window {window}")
        ind[s - lo] = 1
    P = np.concatenate([[0], np.cumsum(ind)])
    best, best_iv = -1.0, (lo, hi)
    per_length = {}
    for length in range(min_length, W + 1):
        counts = P[length:] - P[:-length]
        i = int(np.argmax(counts))
        ratio = counts[i] / length
        per_length[length] = float(ratio)
        if ratio > best:
            best, best_iv = float(ratio), (lo + i, lo + i + length - 1)
    return DensityEstimate(best, (lo, hi), min_length, best_iv, per_length)


@dataclass(frozen=True)
class ProgressionDecomposition:
    progressions: list  # (step, offset) with 0 <= offset < step
    sporadic: list

    def reconstruct(self, window: tuple[int, int]) -> set:
        lo, hi = window
        out = set(self.sporadic)
        for a, b in self.progressions:
            start = lo + ((b - lo) % a)
            out.update(range(start, hi + 1, a))
        return out


def decompose_arithmetic_progressions(S, window: tuple[int, int]) -> ProgressionDecomposition:
    """Greedy minimal-step extraction of full residue classes of the window."""
    lo, hi = window
    W = hi - lo + 1
    S = set(S)
    for s in S:
        if not lo <= s <= hi:
            raise ValueError(f"{s} lies outside the window {window}")
    member = np.zeros(W, dtype=bool)
    for s in S:
        member[s - lo] = True
    covered = np.zeros(W, dtype=bool)
    progs = []
    for a in range(1, W // 3 + 1):
        residues = sorted({(lo + int(i)) % a for i in np.flatnonzero(member & ~covered)})
        if not residues:
            break
        for b in residues:
            start = (b - lo) % a
            cls = member[start::a]
            if len(cls) >= 3 and cls.all() and not covered[start::a].all():
                progs.append((a, b))
                covered[start::a] = True
    sporadic = sorted(lo + int(i) for i in np.flatnonzero(member & ~covered))
    dec = ProgressionDecomposition(progs, sporadic)
    assert dec.reconstruct(window) == S
    return dec


# -- spectral compatibility and common iterates --------------------------


def spectral_compatibility(f, g, bound: int):
    """Least (a, b) in [1, bound]^2 with lambda(f)^a = lambda(g)^b, decided on traces."""
    if not (tr.is_loxodromic(f) and tr.is_loxodromic(g)):
        raise NotLoxodromic("spectral compatibility needs loxodromic maps")
    Mf, Mg = f.matrix, g.matrix
    tf = {a: tr.matrix_power_trace(Mf, 2 * a) for a in range(1, bound + 1)}
    tg = {b: tr.matrix_power_trace(Mg, 2 * b) for b in range(1, bound + 1)}
    for a in range(1, bound + 1):
        for b in range(1, bound + 1):
            if tf[a] == tg[b]:
                return (a, b)
    return None


@dataclass(frozen=True)
class CommonIterateCertificate:
    N: int
    M: int
    kind: str  # "canonical" or "pointwise-screened"
    witness: dict


def _signed_range(bound: int):
    for m in range(1, bound + 1):
        yield m
        yield -m


def _torus_witness(h) -> dict:
    return {"matrix": h.matrix.rows(), "translation": [format_element(c) for c in h.translation]}


def _random_points(field, k: int, rng: random.Random):
    pts = []
    for _ in range(k):
        if isinstance(field, RationalField):
            pts.append(tuple(Fraction(rng.randint(-10, 10), rng.randint(1, 10)) for _ in range(2)))
        else:
            t = field.t()
            pts.append(tuple(t ** rng.randint(0, 3) + field.coerce(rng.randint(0, field.q - 1))
                             for _ in range(2)))
    return pts


def _pointwise_agree(fN, gM, field, seed: int = 0) -> bool:
    rng = random.Random(seed)
    for pt in _random_points(field, 5, rng):
        try:
            if fN(pt) != gM(pt):
                return False
        except OverflowGuard:
            continue
    return True


def common_iterate_search(f, g, bound: int) -> CommonIterateCertificate | None:
    _same_kind(f, g)
    if isinstance(f, tr.PseudoMonomialMap):
        return _common_iterate_torus(f, g, bound)
    if isinstance(f, hn.PlaneAutomorphism):
        df, dg = hn.plane_dynamical_degree(f), hn.plane_dynamical_degree(g)
        for N in range(1, bound + 1):
            for M in _signed_range(bound):
                if df**N != dg ** abs(M):
                    continue
                fN, gM = hn.plane_power(f, N), hn.plane_power(g, M)
                if hn.plane_maps_equal(fN, gM):
                    if not _pointwise_agree(fN, gM, QQ):
                        raise AssertionError("normal form and pointwise evaluation disagree")
                    nf = hn.normal_form(fN)
                    return CommonIterateCertificate(N, M, "canonical",
                                                    {"normal_form_length": len(nf),
                                                     "degree": hn.plane_degree(fN)})
        return None
    for N in range(1, bound + 1):
        for M in _signed_range(bound):
            fN, gM = fb.frobenius_power(f, N), fb.frobenius_power(g, M)
            if fb.frobenius_maps_equal(fN, gM):
                if not _pointwise_agree(fN, gM, f.field):
                    raise AssertionError("canonical matrices and pointwise evaluation disagree")
                mat, tra = fN.matrix()
                return CommonIterateCertificate(N, M, "canonical", {
                    "matrix": [[e.to_json() for e in row] for row in mat],
                    "translation": [f.field.format(c) for c in tra]})
    return None


def _common_iterate_torus(f, g, bound: int):
    f, g = f.factored(), g.factored()
    lox = tr.is_loxodromic(f) and tr.is_loxodromic(g)
    Mf, Mg = f.matrix, g.matrix
    tf = {N: tr.matrix_power_trace(Mf, 2 * N) for N in range(1, bound + 1)}
    tg = {M: tr.matrix_power_trace(Mg, 2 * M) for M in range(1, bound + 1)}
    for N in range(1, bound + 1):
        for M in _signed_range(bound):
            if lox and tf[N] != tg[abs(M)]:
                continue
            if Mf**N != Mg**M:
                continue
            fN, gM = tr.power(f, N), tr.power(g, M)
            if tr.maps_equal(fN, gM):
                return CommonIterateCertificate(N, M, "canonical", _torus_witness(fN))
    return None


# -- offset bound --------------------------------------------------------


@dataclass(frozen=True)
class OffsetBound:
    C: int
    ratio: float  # |a+_g / a+_f|
    lam: float
    threshold: int  # pairs with n, m >= threshold are covered


def offset_bound(f, p, g, q, v: Place) -> OffsetBound:
    lf, lg = tr.spectral_radius(f.matrix), tr.spectral_radius(g.matrix)
    if lf != lg:
        raise IncompatibleDegrees(f"lambda(f) = {lf} but lambda(g) = {lg}")
    df = asymptotic_decomposition(f, p, v)
    dg = asymptotic_decomposition(g, q, v)
    for name, d in (("f", df), ("g", dg)):
        if d.vanishes or abs(d.a_plus) <= 1e-12:
            raise VanishingLeadingCoefficient(f"a_+ vanishes for {name} at {v}")
    lam = float(lf)
    ratio = abs(dg.a_plus / df.a_plus)
    C = math.ceil(abs(math.log(ratio)) / math.log(lam) - 1e-9) + 1
    # below the threshold the lam^-n terms may still move the comparison
    tail = max(1.0, abs(df.a_minus / df.a_plus), abs(dg.a_minus / dg.a_plus))
    threshold = max(0, math.ceil(math.log(100.0 * tail) / (2 * math.log(lam))))
    return OffsetBound(C, ratio, lam, threshold)


# -- visit sets ----------------------------------------------------------

_CHECK_PRIMES = (2**61 - 1, 2**89 - 1, 998_244_353)


def _term_value(term, pt):
    *exps, c = term
    out = c
    for x, e in zip(pt, exps):
        if e:
            out = out * x**e
    return out


def _vanishes(poly, pt, field) -> bool | None:
    """Exact zero test; None when neither cancellation nor a residue decides it."""
    if not any(isinstance(x, Factored) for x in pt):
        total = field.zero()
        for term in poly:
            total = total + _term_value(term, pt)
        return total == 0
    groups: dict = {}
    for term in poly:
        *exps, c = term
        m = Factored.one(field)
        for x, e in zip(pt, exps):
            if e:
                m = m * x**e
        key = m.exps
        coeff = c * Factored(field, m.unit, ()).evaluate()
        groups[key] = groups[key] + coeff if key in groups else coeff
    live = {k: c for k, c in groups.items() if c != 0}
    if not live:
        return True
    if len(live) == 1:
        return False
    mons = [(Factored(field, 1, k), c) for k, c in live.items()]
    if all(m.size() <= 5000 for m, _ in mons):
        total = field.zero()
        for m, c in mons:
            total = total + c * m.evaluate()
        return total == 0
    if isinstance(field, RationalField):
        for ell in _CHECK_PRIMES:
            if any(p % ell == 0 for m, _ in mons for p, _ in m.exps):
                continue
            s = 0
            for m, c in mons:
                c = Fraction(c)
                val = c.numerator * pow(c.denominator, -1, ell)
                for p, e in m.exps:
                    val = val * pow(p, e % (ell - 1), ell)
                s = (s + val) % ell
            if s:
                return False
    return None


@dataclass
class VisitSet:
    indices: list
    decomposition: ProgressionDecomposition
    undecided: list
    pairs: list | None = None


def parse_variety(obj, field=QQ) -> list:
    """{"polynomials": [{"terms": [[e1, e2, e3, e4, "c"], ...]}, ...]}."""
    polys = []
    for poly in obj["polynomials"]:
        terms = []
        for t in poly["terms"]:
            *exps, c = t
            if len(exps) != 4:
                raise ValueError("variety terms need four exponents over (x1, x2, y1, y2)")
            terms.append((*(int(e) for e in exps), field.parse(c)))
        polys.append(terms)
    return polys


def subvariety_visit_set(f, g, x0, y0, V, window: tuple[int, int], grid: bool = False,
                         g_window: tuple[int, int] | None = None) -> VisitSet:
    """Indices n with (f^n(x0), g^n(y0)) on V; with grid=True all (n, m) pairs."""
    _same_kind(f, g)
    field = f.field
    df, dg = Dynamics(f), Dynamics(g)
    fo, t1 = _orbit(df, x0, *window)
    go, t2 = _orbit(dg, y0, *(g_window or window))
    if t1 or t2:
        raise OverflowGuard("orbit outgrew the size limit inside the window")

    def on_v(a, b):
        pt = (*a, *b)
        verdicts = [_vanishes(poly, pt, field) for poly in V]
        if any(v is False for v in verdicts):
            return False
        if all(v is True for v in verdicts):
            return True
        return None

    undecided = []
    if not grid:
        hits = []
        for n in range(window[0], window[1] + 1):
            r = on_v(fo[n], go[n])
            if r is None:
                undecided.append(n)
            elif r:
                hits.append(n)
        return VisitSet(hits, decompose_arithmetic_progressions(hits, window), undecided)
    pairs = []
    for n, a in sorted(fo.items()):
        for m, b in sorted(go.items()):
            r = on_v(a, b)
            if r is None:
                undecided.append((n, m))
            elif r:
                pairs.append((n, m))
    ns = sorted({n for n, _ in pairs})
    return VisitSet(ns, decompose_arithmetic_progressions(ns, window), undecided, pairs)
