"""JSON map specs: parse, validate, serialize."""
from __future__ import annotations

import json
from fractions import Fraction

from . import frobenius as fb
from . import henon as hn
from . import torus as tr
from .errors import InvariantViolation, SpecParseError
from .fields import QQ, RationalField, parse_field


def _need(obj: dict, key: str, where: str):
    if key not in obj:
        raise SpecParseError(f"{where}: missing field {key!r}")
    return obj[key]


def _rat(x, where: str) -> Fraction:
    try:
        return QQ.parse(x)
    except (ValueError, ZeroDivisionError, SpecParseError) as exc:
        raise SpecParseError(f"{where}: bad rational {x!r}") from exc


def _pair(x, where: str) -> list:
    if not isinstance(x, list) or len(x) != 2:
        raise SpecParseError(f"{where}: expected a list of two entries")
    return x


def parse_map_spec(text):
    """Map object from a JSON string (or an already decoded dict)."""
    if isinstance(text, (str, bytes)):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpecParseError(f"invalid JSON: {exc}") from exc
    else:
        obj = text
    if not isinstance(obj, dict):
        raise SpecParseError("map spec must be a JSON object")
    kind = _need(obj, "type", "map spec")
    if kind == "torus":
        return _parse_torus(obj)
    if kind == "plane":
        return _parse_plane(obj)
    if kind == "frobenius":
        return _parse_frobenius(obj)
    raise SpecParseError(f"type: unknown map type {kind!r}")


def _parse_torus(obj):
    field = parse_field(obj)
    rows = _pair(_need(obj, "matrix", "torus"), "matrix")
    try:
        rows = [[int(v) for v in _pair(r, "matrix row")] for r in rows]
    except (TypeError, ValueError) as exc:
        raise SpecParseError("matrix: entries must be integers") from exc
    trans = _pair(_need(obj, "translation", "torus"), "translation")
    vals = [field.parse(v) for v in trans]
    if any(v == 0 for v in vals):
        raise InvariantViolation("translation: torus coordinates must be nonzero")
    return tr.PseudoMonomialMap.make(rows, vals, field)


def _parse_plane(obj):
    if "p" in obj or "q" in obj:
        raise SpecParseError("plane maps are supported over Q only")
    word = _need(obj, "word", "plane")
    if not isinstance(word, list):
        raise SpecParseError("word: expected a list")
    factors = []
    for i, item in enumerate(word):
        where = f"word[{i}]"
        if not isinstance(item, dict) or len(item) != 1:
            raise SpecParseError(f"{where}: expected {{'henon': ...}} or {{'affine': ...}}")
        (tag, body), = item.items()
        if tag == "henon":
            poly = [_rat(c, where + ".poly") for c in _need(body, "poly", where)]
            delta = _rat(body.get("delta", "1"), where + ".delta")
            factors.append(hn.HenonFactor(tuple(poly), delta))
        elif tag == "affine":
            m = [[_rat(c, where + ".matrix") for c in _pair(r, where)] for r in
                 _pair(_need(body, "matrix", where), where)]
            t = [_rat(c, where + ".translation") for c in _pair(body.get("translation", ["0", "0"]), where)]
            factors.append(hn.AffineFactor(tuple(map(tuple, m)), tuple(t)))
        else:
            raise SpecParseError(f"{where}: unknown factor {tag!r}")
    return hn.PlaneAutomorphism(tuple(factors))


def _parse_frobenius(obj):
    if "q" not in obj and "p" not in obj:
        raise SpecParseError("frobenius: needs 'p' or 'q'")
    field = parse_field(obj)
    gens = []
    for i, item in enumerate(_need(obj, "word", "frobenius")):
        where = f"word[{i}]"
        if isinstance(item, str) and item == "swap":
            gens.append(fb.Swap())
            continue
        if not isinstance(item, dict) or len(item) != 1:
            raise SpecParseError(f"{where}: expected a single-key generator object")
        (tag, body), = item.items()
        if tag == "diag":
            u, v = (field.parse(c) for c in _pair(body, where))
            if u.is_zero() or v.is_zero():
                raise InvariantViolation(f"{where}: diagonal entries must be nonzero")
            gens.append(fb.Diagonal(u, v))
        elif tag == "transvection":
            side = body.get("side", "upper")
            if side not in ("upper", "lower"):
                raise SpecParseError(f"{where}.side: expected 'upper' or 'lower'")
            coeffs = [field.parse(c) for c in _need(body, "additive", where)]
            gens.append(fb.Transvection(side, fb.AdditivePoly(field, coeffs)))
        elif tag == "swap":
            gens.append(fb.Swap())
        else:
            raise SpecParseError(f"{where}: unknown generator {tag!r}")
    trans = [field.parse(c) for c in _pair(obj.get("translation", ["0", "0"]), "translation")]
    return fb.FrobGeneratorWord(field, tuple(gens), tuple(trans))


def _field_keys(field) -> dict:
    if isinstance(field, RationalField):
        return {}
    return {"p": field.characteristic, "q": field.q}


def serialize_map(f) -> dict:
    if isinstance(f, tr.PseudoMonomialMap):
        fld = f.field
        return {"type": "torus", **_field_keys(fld), "matrix": f.matrix.rows(),
                "translation": [fld.format(c) for c in f.translation]}
    if isinstance(f, hn.PlaneAutomorphism):
        word = []
        for x in f.word:
            if isinstance(x, hn.HenonFactor):
                word.append({"henon": {"poly": [QQ.format(c) for c in x.poly],
                                       "delta": QQ.format(x.delta)}})
            else:
                word.append({"affine": {"matrix": [[QQ.format(c) for c in r] for r in x.matrix],
                                        "translation": [QQ.format(c) for c in x.translation]}})
        return {"type": "plane", "word": word}
    if isinstance(f, fb.FrobGeneratorWord):
        fld = f.field
        word = []
        for g in f.generators:
            if isinstance(g, fb.Diagonal):
                word.append({"diag": [fld.format(g.u), fld.format(g.v)]})
            elif isinstance(g, fb.Transvection):
                word.append({"transvection": {"side": g.side, "additive": g.a.to_json()}})
            else:
                word.append({"swap": {}})
        return {"type": "frobenius", **_field_keys(fld), "word": word,
                "translation": [fld.format(c) for c in f.translation]}
    raise TypeError(f"cannot serialize {f!r}")


def dumps_map(f) -> str:
    return json.dumps(serialize_map(f), sort_keys=True)


def load_map(path: str):
    with open(path, encoding="utf-8") as fh:
        return parse_map_spec(fh.read())
