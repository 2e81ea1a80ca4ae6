"""Orbit iteration, periodicity detection and per-place log orbits of torus maps."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import frobenius as fb
from . import henon as hn
from . import torus as tr
from .errors import NotLoxodromic, OverflowGuard
from .fields import DEFAULT_MAX_DEGREE, DEFAULT_MAX_DIGITS, QQ, Factored, format_element
from .places import Place, abs_log, ord_at, place_for_field, relevant_places, weil_height_exact
from .quadratic import QuadraticNumber

ARCH_TOL = 1e-9
RECON_TOL = 1e-6


class Dynamics:
    """Uniform view of the three map types used by the engines."""

    def __init__(self, f, max_digits: int = DEFAULT_MAX_DIGITS, max_degree: int = DEFAULT_MAX_DEGREE):
        self.f = f
        self.max_digits = max_digits
        self.max_degree = max_degree
        if isinstance(f, tr.PseudoMonomialMap):
            self.kind = "torus"
            self.f = f.factored()
        elif isinstance(f, hn.PlaneAutomorphism):
            self.kind = "plane"
        elif isinstance(f, fb.FrobGeneratorWord):
            self.kind = "frobenius"
        else:
            raise TypeError(f"unsupported map {f!r}")
        self._inv = None

    @property
    def field(self):
        return self.f.field

    def prepare(self, p):
        if self.kind == "torus":
            return tr.TorusPoint(*p).factored()
        if self.kind == "plane":
            return (Fraction(p[0]), Fraction(p[1]))
        return tuple(self.f.field.coerce(c) for c in p)

    def step(self, p, backward: bool = False):
        g = self.inverse_map() if backward else self.f
        if self.kind == "torus":
            return tr.apply(g, p, self.max_digits, self.max_degree)
        if self.kind == "plane":
            return hn.apply_plane(g, p, self.max_digits)
        return fb.apply_frobenius_map(g, p, self.max_degree)

    def inverse_map(self):
        if self._inv is None:
            if self.kind == "torus":
                self._inv = tr.inverse(self.f)
            elif self.kind == "plane":
                self._inv = hn.inverse_plane(self.f)
            else:
                self._inv = fb.invert_frobenius_word(self.f)
        return self._inv

    def height(self, p):
        return weil_height_exact(p)

    def power(self, n: int):
        if self.kind == "torus":
            return tr.power(self.f, n)
        if self.kind == "plane":
            return hn.plane_power(self.f, n)
        return fb.frobenius_power(self.f, n)


def format_point(p) -> str:
    return ",".join(format_element(c) for c in p)


@dataclass(frozen=True)
class OrbitRecord:
    n: int
    point: tuple
    height: float
    exact_height: int | None = None


def iterate_orbit(f, p, n_min: int, n_max: int, **limits) -> list[OrbitRecord]:
    """Exact orbit segment f^n(p) for n_min <= n <= n_max (negative n use f^-1)."""
    if n_min > n_max:
        raise ValueError("n_min must be <= n_max")
    dyn = f if isinstance(f, Dynamics) else Dynamics(f, **limits)
    start = dyn.prepare(p)
    out: dict[int, OrbitRecord] = {}

    def record(n, pt):
        if n_min <= n <= n_max:
            h = dyn.height(pt)
            out[n] = OrbitRecord(n, pt, h.value, h.exact)

    try:
        record(0, start)
        pt = start
        for n in range(1, n_max + 1):
            pt = dyn.step(pt)
            record(n, pt)
        pt = start
        for n in range(-1, n_min - 1, -1):
            pt = dyn.step(pt, backward=True)
            record(n, pt)
    except OverflowGuard as exc:
        raise OverflowGuard(str(exc), partial=[out[k] for k in sorted(out)]) from exc
    return [out[k] for k in sorted(out)]


@dataclass(frozen=True)
class Periodic:
    preperiod: int
    period: int


@dataclass(frozen=True)
class NoCycleInWindow:
    max_height_seen: float
    height_trend: str  # "increasing", "bounded", "mixed"
    increasing_from: int | None  # heights strictly increase from this n on
    steps: int
    truncated: bool = False
    exceeded_height_bound: bool = False


def detect_periodicity(f, p, window: int, height_bound: float = math.inf, **limits):
    """First repeat of the exact orbit within ``window`` steps, verified exactly.

    Never certifies aperiodicity: without a repeat the verdict only reports
    height statistics of the scanned window.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    dyn = f if isinstance(f, Dynamics) else Dynamics(f, **limits)
    pt = dyn.prepare(p)
    seen = {pt: 0}
    history = [pt]
    heights = [dyn.height(pt).value]
    truncated = exceeded = False
    for n in range(1, window + 1):
        try:
            pt = dyn.step(pt)
        except OverflowGuard:
            truncated = True
            break
        if pt in seen:
            m = seen[pt]
            if history[m] == pt:
                return Periodic(m, n - m)
        seen[pt] = n
        history.append(pt)
        h = dyn.height(pt).value
        heights.append(h)
        if h > height_bound:
            exceeded = True
            break
    return _no_cycle(heights, truncated, exceeded)


def _no_cycle(heights, truncated, exceeded) -> NoCycleInWindow:
    # least n with h_k > h_(k-1) for every k >= n, needing at least two rises
    inc_from = None
    for i in range(len(heights) - 1, 0, -1):
        if heights[i - 1] < heights[i]:
            inc_from = i
        else:
            break
    if inc_from is not None and len(heights) - inc_from < 2:
        inc_from = None
    if inc_from is not None:
        trend = "increasing"
    elif max(heights) - min(heights) <= ARCH_TOL:
        trend = "bounded"
    else:
        trend = "mixed"
    return NoCycleInWindow(max(heights), trend, inc_from, len(heights) - 1, truncated, exceeded)


# -- log orbits ----------------------------------------------------------


def _log_vector(v: Place, pt):
    a, b = abs_log(v, pt[0]), abs_log(v, pt[1])
    return (a.value, b.value), (None if v.archimedean else (a.ord, b.ord))


@dataclass
class LogOrbit:
    place: Place
    u: list  # float pairs
    ords: list | None = None  # exact integer ord pairs at non-archimedean places
    checked_upto: int = -1  # last n compared with the exact orbit
    max_rel_error: float = 0.0


def _big_float(o: int) -> float:
    return float(o) if o.bit_length() < 1000 else math.copysign(math.inf, o)


def _ord_recursion(M, o0, oc, n_max):
    ords = [tuple(o0)]
    for _ in range(n_max):
        ox, oy = ords[-1]
        ords.append((M.a * ox + M.b * oy + oc[0], M.c * ox + M.d * oy + oc[1]))
    return ords


def log_orbit(f: tr.PseudoMonomialMap, p, v: Place, n_max: int, check_upto: int = 30) -> LogOrbit:
    """u_{n+1} = M u_n + log|b|_v, plus a comparison with abs_log of the exact orbit.

    The recursion runs on integer ord vectors wherever they exist, so float error
    does not get amplified by lam^n along the stable direction.
    """
    place_for_field(v, f.field)
    M = f.matrix
    p = tr.TorusPoint(*p)
    u0, o0 = _log_vector(v, p)
    c, oc = _log_vector(v, f.translation)
    ords = None
    if o0 is not None:
        ords = _ord_recursion(M, o0, oc, n_max)
        k = -v.normalizer
        us = [(k * _big_float(x), k * _big_float(y)) for x, y in ords]
    elif f.field == QQ:
        # log|x| = sum_p ord_p(x) log p at the archimedean place
        us = [(0.0, 0.0)] * (n_max + 1)
        for pl in relevant_places([*f.translation, *p]):
            if pl.archimedean:
                continue
            lp = math.log(pl.prime)
            per = _ord_recursion(M, [ord_at(pl, x) for x in p], [ord_at(pl, x) for x in f.translation], n_max)
            us = [(a + lp * _big_float(x), b + lp * _big_float(y)) for (a, b), (x, y) in zip(us, per)]
    else:
        us = [u0]
        for _ in range(n_max):
            x, y = us[-1]
            us.append((M.a * x + M.b * y + c[0], M.c * x + M.d * y + c[1]))
    lo = LogOrbit(v, us, ords)
    upto = min(n_max, check_upto)
    if upto >= 0:
        _cross_check(lo, f, p, upto)
    return lo


def _cross_check(lo: LogOrbit, f, p, upto: int) -> None:
    recs = iterate_orbit(f, p, 0, upto)
    worst = 0.0
    for r in recs:
        exact, ords = _log_vector(lo.place, r.point)
        if lo.ords is not None and tuple(lo.ords[r.n]) != tuple(ords):
            raise AssertionError(f"ord recursion disagrees with the exact orbit at n = {r.n}")
        for a, b in zip(lo.u[r.n], exact):
            worst = max(worst, abs(a - b) / max(1.0, abs(b)))
    if lo.place.archimedean and worst > ARCH_TOL:
        raise AssertionError(f"log recursion drifted from the exact orbit: {worst:.3g}")
    lo.checked_upto = upto
    lo.max_rel_error = worst


@dataclass(frozen=True)
class AsymptoticDecomposition:
    a_plus: float
    a_minus: float
    w_plus: tuple
    w_minus: tuple
    w0: tuple
    lam_plus: float  # signed eigenvalue with |lam_plus| > 1
    lam_minus: float
    exact_vanishing: bool | None = None  # exact verdict on a_plus = a_minus = 0 when available
    w0_exact: tuple | None = field(default=None, compare=False)

    def reconstruct(self, n: int) -> tuple:
        lp, lm = self.lam_plus**n, self.lam_minus**n
        return tuple(self.a_plus * lp * wp + self.a_minus * lm * wm + z
                     for wp, wm, z in zip(self.w_plus, self.w_minus, self.w0))

    @property
    def vanishes(self) -> bool:
        if self.exact_vanishing is not None:
            return self.exact_vanishing
        return abs(self.a_plus) <= ARCH_TOL and abs(self.a_minus) <= ARCH_TOL


def _eigvec(M: tr.GLZ2Matrix, mu: QuadraticNumber) -> tuple:
    # (a - mu) s + b t = 0 with b != 0 for loxodromic M
    s, t = float(M.b), float(mu - M.a)
    nrm = math.hypot(s, t)
    if s < 0 or (s == 0 and t < 0):
        nrm = -nrm
    return (s / nrm, t / nrm)


def _solve_i_minus_m(M: tr.GLZ2Matrix, c):
    """(I - M)^-1 c with exact rational arithmetic when c is rational."""
    a, b, cc, d = 1 - M.a, -M.b, -M.c, 1 - M.d
    det = a * d - b * cc
    x, y = c
    return ((d * x - b * y) / det, (-cc * x + a * y) / det)


def asymptotic_decomposition(f: tr.PseudoMonomialMap, p, v: Place) -> AsymptoticDecomposition:
    """u_n = a_+ lam^n w_+ + a_- lam^-n w_- + w0 with w0 = (I - M)^-1 log|b|_v.

    (a_+, a_-) are the coordinates of u_0 - w0 in the eigenbasis.
    """
    M = f.matrix
    if not tr.matrix_is_loxodromic(M):
        raise NotLoxodromic(f"{M.rows()} is not loxodromic")
    place_for_field(v, f.field)
    p = tr.TorusPoint(*p)
    u0, o0 = _log_vector(v, p)
    c, oc = _log_vector(v, f.translation)
    mu_big, mu_small = tr.dominant_eigenvalues(M)
    wp, wm = _eigvec(M, mu_big), _eigvec(M, mu_small)
    exact = None
    w0_exact = None
    if o0 is not None:
        # everything is -normalizer * (rational vector): decide vanishing exactly
        w0q = _solve_i_minus_m(M, (Fraction(oc[0]), Fraction(oc[1])))
        w0_exact = w0q
        r = (o0[0] - w0q[0], o0[1] - w0q[1])
        exact = r == (0, 0)
        k = -v.normalizer
        w0 = (k * float(w0q[0]), k * float(w0q[1]))
        diff = (k * float(r[0]), k * float(r[1]))
    elif f.field == QQ:
        # log|x| = sum_p ord_p(x) log p, and the log p are Q-independent, so the
        # residual u0 - w0 vanishes iff every per-prime rational vector does
        w0, diff = [0.0, 0.0], [0.0, 0.0]
        exact = True
        for pl in relevant_places([*f.translation, *p]):
            if pl.archimedean:
                continue
            wq = _solve_i_minus_m(M, tuple(Fraction(ord_at(pl, x)) for x in f.translation))
            r = tuple(ord_at(pl, x) - w for x, w in zip(p, wq))
            if r != (0, 0):
                exact = False
            lp = math.log(pl.prime)
            for i in range(2):
                w0[i] += lp * float(wq[i])
                diff[i] += lp * float(r[i])
    else:
        w0 = _solve_i_minus_m(M, c)
        diff = (u0[0] - w0[0], u0[1] - w0[1])
    basis = np.array([[wp[0], wm[0]], [wp[1], wm[1]]])
    ap, am = np.linalg.solve(basis, np.array(diff))
    if exact:
        ap = am = 0.0
    return AsymptoticDecomposition(float(ap), float(am), wp, wm, tuple(w0), float(mu_big),
                                   float(mu_small), exact, w0_exact)


def find_unbounded_place(f: tr.PseudoMonomialMap, p):
    """First place (arch/inf first) where the forward orbit of p is unbounded."""
    if not tr.is_loxodromic(f):
        raise NotLoxodromic("find_unbounded_place needs a loxodromic map")
    p = tr.TorusPoint(*p)
    for v in relevant_places([*f.translation, *p]):
        dec = asymptotic_decomposition(f, p, v)
        if not dec.vanishes:
            return v, dec
    return None
