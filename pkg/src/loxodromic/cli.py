"""Command-line front end; every subcommand prints one JSON report on stdout."""
from __future__ import annotations

import argparse
import datetime as _dt
import hashlib
import json
import math
import sys

from . import __version__
from . import henon as hn
from . import intersect as ix
from . import orbits as ob
from . import torus as tr
from . import valuations as va
from .errors import LoxodromicError, OverflowGuard, PeriodicStartPoint, SpecParseError
from .config import Limits
from .fields import (DEFAULT_MAX_DEGREE, DEFAULT_MAX_DIGITS, QQ, Factored, format_element,
                     function_field, parse_point)
from .places import abs_log, parse_place, weil_height_exact
from .quadratic import QuadraticNumber
from .specs import load_map, serialize_map

EXIT_OK, EXIT_INPUT, EXIT_LIMIT = 0, 2, 3
DEFAULT_MAX_WINDOW = Limits().max_window


def num(x) -> float | None:
    """Decimal rendering with 12 significant digits."""
    x = float(x)
    if math.isinf(x) or math.isnan(x):
        return None
    return float(f"{x:.12g}")


def quad(x: QuadraticNumber) -> dict:
    return {"decimal": num(x), "exact": x.to_json()}


def _range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(s) for s in text.split(":"))
    except ValueError as exc:
        raise SpecParseError(f"bad range {text!r}; expected lo:hi") from exc
    if lo > hi:
        raise SpecParseError(f"empty range {text!r}")
    return lo, hi


def _field_from_flag(text: str | None):
    if not text or text.upper() in ("Q", "QQ"):
        return QQ
    t = text.upper().lstrip("F")
    try:
        return function_field(int(t))
    except ValueError as exc:
        raise SpecParseError(f"bad field {text!r}; use Q or F<q>") from exc


def _pt(p) -> list[str]:
    return [format_element(c) for c in p]


class Context:
    def __init__(self, args):
        self.args = args
        self.limits = Limits(args.max_digits, args.max_degree, args.max_window)
        self.warnings: list[str] = []
        self.inputs: dict = {}

    def load(self, path: str):
        with open(path, encoding="utf-8") as fh:
            self.inputs[path] = fh.read()
        return load_map(path)

    def check_window(self, size: int):
        if size > self.limits.max_window:
            raise OverflowGuard(f"window of {size} indices exceeds --max-window {self.limits.max_window}")


# -- subcommands ----------------------------------------------------------


def cmd_analyze(ctx: Context):
    f = ctx.load(ctx.args.map)
    out = {"map": serialize_map(f)}
    if isinstance(f, tr.PseudoMonomialMap):
        M = f.matrix
        dd = tr.dynamical_degree(f)
        lox = tr.is_loxodromic(f)
        out.update({"kind": "torus", "trace": M.trace, "det": M.det,
                    "lambda": quad(dd.exact), "loxodromic": lox})
        if lox:
            mob = va.mobius_fixed_points(M)
            out["mobius"] = {"v_plus": quad(mob.v_plus), "v_minus": quad(mob.v_minus),
                             "multiplier_plus": quad(mob.multiplier_plus),
                             "multiplier_minus": quad(mob.multiplier_minus),
                             "derivative_plus": quad(mob.derivative_plus),
                             "derivative_minus": quad(mob.derivative_minus)}
            ew = va.eigenweights(M)
            out["eigenweight"] = {"weight": [quad(ew.weight.s), quad(ew.weight.t)],
                                  "eigenvalue": quad(ew.lam), "power": ew.power,
                                  "conjugation": list(ew.conjugation), "matrix": ew.matrix.rows()}
        else:
            ctx.warnings.append("map is not loxodromic; Mobius and eigenweight data omitted")
    elif isinstance(f, hn.PlaneAutomorphism):
        lam = hn.plane_dynamical_degree(f)
        out.update({"kind": "plane", "degree": hn.plane_degree(f), "lambda": lam,
                    "loxodromic": lam > 1, "normal_form_length": len(hn.normal_form(f))})
    else:
        mat, trans = f.matrix()
        out.update({"kind": "frobenius", "field": {"p": f.field.characteristic, "q": f.field.q},
                    "matrix": [[e.to_json() for e in row] for row in mat],
                    "translation": [f.field.format(c) for c in trans]})
    return out


def cmd_orbit(ctx: Context):
    a = ctx.args
    f = ctx.load(a.map)
    p = parse_point(a.point, f.field)
    lo, hi = _range(a.range)
    ctx.check_window(hi - lo + 1)
    place = parse_place(a.place, f.field) if a.place else None
    dyn = ob.Dynamics(f, ctx.limits.max_digits, ctx.limits.max_degree)
    try:
        recs = ob.iterate_orbit(dyn, p, lo, hi)
        truncated = None
    except OverflowGuard as exc:
        recs, truncated = exc.partial or [], exc
    rows = []
    for r in recs:
        row = {"n": r.n, "point": _pt(r.point), "height": num(r.height)}
        if r.exact_height is not None:
            row["height_exact"] = r.exact_height
        if place is not None:
            logs = [abs_log(place, c) for c in r.point]
            row["u"] = [num(x.value) for x in logs]
            if not place.archimedean:
                row["ord"] = [x.ord for x in logs]
        rows.append(row)
    out = {"rows": rows}
    if isinstance(f, tr.PseudoMonomialMap) and place is not None and tr.is_loxodromic(f):
        dec = ob.asymptotic_decomposition(f, p, place)
        out["decomposition"] = {"a_plus": num(dec.a_plus), "a_minus": num(dec.a_minus),
                                "w_plus": [num(x) for x in dec.w_plus],
                                "w_minus": [num(x) for x in dec.w_minus],
                                "w0": [num(x) for x in dec.w0], "vanishes": dec.vanishes}
    if truncated is not None:
        ctx.warnings.append(f"orbit truncated: {truncated}")
        raise _Partial(out)
    return out


def _density_payload(d: ix.DensityEstimate) -> dict:
    return {"value": num(d.value), "window": list(d.window), "min_length": d.min_length,
            "best_interval": list(d.best_interval)}


def _decomp_payload(d: ix.ProgressionDecomposition) -> dict:
    return {"progressions": [list(x) for x in d.progressions], "sporadic": d.sporadic}


def _cert_payload(c) -> dict | None:
    if c is None:
        return None
    return {"N": c.N, "M": c.M, "kind": c.kind, "witness": c.witness}


def cmd_intersect(ctx: Context):
    a = ctx.args
    f, g = ctx.load(a.f), ctx.load(a.g)
    p, q = parse_point(a.p, f.field), parse_point(a.q, g.field)
    fr = _range(a.window)
    gr = _range(a.g_window) if a.g_window else fr
    win = ix.IntersectionWindow(fr, gr)
    iset = ix.find_intersections(f, p, g, q, win, budget=ctx.limits.max_window)
    out = {"pairs": [list(x) for x in iset.pairs], "count": len(iset.pairs),
           "truncated": iset.truncated}
    if iset.truncated:
        ctx.warnings.append("an orbit hit the size limit; pairs cover the computed part only")
    try:
        iota = iset.iota_image
        out["iota_image"] = iota
        out["density"] = _density_payload(ix.banach_density_estimate(iota, fr))
        out["decomposition"] = _decomp_payload(ix.decompose_arithmetic_progressions(iota, fr))
    except PeriodicStartPoint as exc:
        ctx.warnings.append(str(exc))
        out["iota_image"] = None
    out["certificate"] = _cert_payload(ix.common_iterate_search(f, g, a.bound))
    return out


def cmd_common_iterate(ctx: Context):
    f, g = ctx.load(ctx.args.f), ctx.load(ctx.args.g)
    out = {"certificate": _cert_payload(ix.common_iterate_search(f, g, ctx.args.bound))}
    if isinstance(f, tr.PseudoMonomialMap) and tr.is_loxodromic(f) and tr.is_loxodromic(g):
        sc = ix.spectral_compatibility(f, g, ctx.args.bound)
        out["spectral_compatibility"] = list(sc) if sc else None
    return out


def cmd_dml(ctx: Context):
    a = ctx.args
    f, g = ctx.load(a.f), ctx.load(a.g)
    with open(a.variety, encoding="utf-8") as fh:
        text = fh.read()
    ctx.inputs[a.variety] = text
    try:
        V = ix.parse_variety(json.loads(text), f.field)
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise SpecParseError(f"variety file: {exc}") from exc
    try:
        s0, s1 = a.start.split(";")
    except ValueError as exc:
        raise SpecParseError("--start must be 'x1,x2;y1,y2'") from exc
    x0, y0 = parse_point(s0, f.field), parse_point(s1, g.field)
    win = _range(a.window)
    W = win[1] - win[0] + 1
    ctx.check_window(W * W if a.grid else W)
    vs = ix.subvariety_visit_set(f, g, x0, y0, V, win, grid=a.grid)
    out = {"visits": vs.indices, "decomposition": _decomp_payload(vs.decomposition),
           "density": _density_payload(ix.banach_density_estimate(vs.indices, win))}
    if vs.pairs is not None:
        out["pairs"] = [list(x) for x in vs.pairs]
    if vs.undecided:
        out["undecided"] = [x if isinstance(x, int) else list(x) for x in vs.undecided]
        ctx.warnings.append(f"{len(vs.undecided)} indices could not be decided exactly")
    return out


def cmd_height(ctx: Context):
    fld = _field_from_flag(ctx.args.field)
    p = parse_point(ctx.args.point, fld)
    h = weil_height_exact(p)
    out = {"point": _pt(p), "height": num(h.value), "kind": h.kind}
    if h.exact is not None:
        out["exact"] = str(h.exact)
    return out


def cmd_valuation(ctx: Context):
    a = ctx.args
    f = ctx.load(a.map)
    if not isinstance(f, tr.PseudoMonomialMap):
        raise SpecParseError("valuation needs a torus map")
    out = {}
    if a.weight:
        s, t = (QQ.parse(x) for x in a.weight.split(","))
        w = va.MonomialWeight(s, t)
    else:
        ew = va.eigenweights(f.matrix)
        w = ew.weight
        out["eigenweight"] = {"weight": [quad(w.s), quad(w.t)], "eigenvalue": quad(ew.lam),
                              "check": ew.check()}
    pushed = va.pushforward_weight(f.matrix, w)
    out["pushforward"] = [quad(pushed.s), quad(pushed.t)]
    if a.poly:
        try:
            P = va.LaurentPolynomial.from_json(json.loads(a.poly), f.field)
        except (json.JSONDecodeError, ValueError, TypeError) as exc:
            raise SpecParseError(f"--poly: {exc}") from exc
        out["value"] = quad(va.monomial_valuation_eval(w, P))
        fv = va.check_eigenvaluation_functoriality(f, w, P)
        out["functoriality"] = {"holds": fv.holds, "pushed": quad(fv.pushed_side),
                                "pulled": quad(fv.pulled_side)}
    return out


# -- plumbing -------------------------------------------------------------


class _Partial(Exception):
    def __init__(self, results):
        super().__init__("partial")
        self.results = results


COMMANDS = {"analyze": cmd_analyze, "orbit": cmd_orbit, "intersect": cmd_intersect,
            "common-iterate": cmd_common_iterate, "dml": cmd_dml, "height": cmd_height,
            "valuation": cmd_valuation}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="loxodromic", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-digits", type=int, default=DEFAULT_MAX_DIGITS)
    common.add_argument("--max-degree", type=int, default=DEFAULT_MAX_DEGREE)
    common.add_argument("--max-window", type=int, default=DEFAULT_MAX_WINDOW)
    common.add_argument("--report", help="also write the report to this file")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("analyze", parents=[common], help="degrees, loxodromy, fixed slopes")
    s.add_argument("map")

    s = sub.add_parser("orbit", parents=[common], help="exact orbit rows with heights")
    s.add_argument("map")
    s.add_argument("--point", required=True)
    s.add_argument("--range", default="0:20")
    s.add_argument("--place")

    s = sub.add_parser("intersect", parents=[common], help="orbit intersections in a window")
    s.add_argument("f")
    s.add_argument("g")
    s.add_argument("--p", required=True)
    s.add_argument("--q", required=True)
    s.add_argument("--window", default="0:100")
    s.add_argument("--g-window")
    s.add_argument("--bound", type=int, default=12)

    s = sub.add_parser("common-iterate", parents=[common], help="search f^N = g^M")
    s.add_argument("f")
    s.add_argument("g")
    s.add_argument("--bound", type=int, default=12)

    s = sub.add_parser("dml", parents=[common], help="visit set of a subvariety")
    s.add_argument("f")
    s.add_argument("g")
    s.add_argument("--variety", required=True)
    s.add_argument("--start", required=True)
    s.add_argument("--window", default="0:100")
    s.add_argument("--grid", action="store_true", help="scan all (n, m) instead of the diagonal")

    s = sub.add_parser("height", parents=[common], help="Weil height of a point")
    s.add_argument("--point", required=True)
    s.add_argument("--field", default="Q", help="Q or F<q> for F_q(t)")

    s = sub.add_parser("valuation", parents=[common], help="eigenweight and monomial valuations")
    s.add_argument("map")
    s.add_argument("--weight", help="s,t (rational); default is the eigenweight")
    s.add_argument("--poly", help='JSON list of [i, j, "coeff"] triples')
    return ap


def _digest(argv, inputs: dict) -> str:
    h = hashlib.sha256()
    h.update(json.dumps(list(argv)).encode())
    for k in sorted(inputs):
        h.update(k.encode())
        h.update(inputs[k].encode())
    return h.hexdigest()


def _json_default(x):
    if isinstance(x, QuadraticNumber):
        return x.to_json()
    if isinstance(x, Factored):
        return x.canonical()
    return str(x)


def run_command(argv) -> tuple[dict | None, int]:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return None, EXIT_INPUT if exc.code else EXIT_OK
    try:
        ctx = Context(args)
    except ValueError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return None, EXIT_INPUT
    ctx.report_path = args.report
    code = EXIT_OK
    try:
        results = COMMANDS[args.command](ctx)
    except _Partial as exc:
        results, code = exc.results, EXIT_LIMIT
    except OverflowGuard as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        ctx.warnings.append(f"resource limit: {exc}")
        results, code = None, EXIT_LIMIT
    except (LoxodromicError, ValueError, KeyError, OSError) as exc:
        print(f"input error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return None, EXIT_INPUT
    report = {"command": argv,
              "inputs_digest": _digest(argv, ctx.inputs), "results": results,
              "warnings": ctx.warnings, "version": __version__,
              "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat()}
    if ctx.report_path:
        with open(ctx.report_path, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True, default=_json_default)
    return report, code


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    report, code = run_command(argv)
    if report is not None:
        json.dump(report, sys.stdout, indent=2, sort_keys=True, default=_json_default)
        sys.stdout.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
