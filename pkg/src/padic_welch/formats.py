"""JSON interchange format for configurations, search specs and reports.

A configuration document looks like::

    {"p": 2, "d": 2, "vectors": [["1", "0"], ["1/2", "-3"]]}

Rationals are strings ``[+-]?digits(/digits)?`` with a positive denominator;
they are rendered reduced with the sign on the numerator. Absolute values are
rendered ``"p^e"`` and the zero absolute value as ``"0"``. Symmetric-tensor
coordinates follow the colexicographic multi-index order, e.g. for d = 2,
m = 2 the basis is (2,0), (1,1), (0,2).
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any, Optional

from .core import AbsValue, PrimeContext
from .linalg import FrameConfig, TightnessReport, Vector

_RATIONAL = re.compile(r"^[+-]?\d+(?:/\d+)?$")


class ConfigError(ValueError):
    """Malformed input document; ``where`` names the offending field or line."""

    def __init__(self, message: str, where: Optional[str] = None):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where


def parse_rational(text: Any, where: Optional[str] = None) -> Fraction:
    if not isinstance(text, str):
        raise ConfigError(f"expected a rational string, got {text!r}", where)
    s = text.strip()
    if not _RATIONAL.match(s):
        raise ConfigError(f"malformed rational {text!r}", where)
    num, _, den = s.partition("/")
    if den and int(den) == 0:
        raise ConfigError(f"zero denominator in {text!r}", where)
    return Fraction(int(num), int(den) if den else 1)


def render_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def render_abs(a: AbsValue) -> str:
    return str(a)


def _load(document) -> dict:
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as e:
            raise ConfigError(e.msg, f"line {e.lineno} column {e.colno}") from None
    if not isinstance(document, dict):
        raise ConfigError("top level must be a JSON object")
    return document


def _int_field(doc: dict, key: str, minimum: int = 1) -> int:
    if key not in doc:
        raise ConfigError("missing field", key)
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"expected an integer, got {v!r}", key)
    if v < minimum:
        raise ConfigError(f"must be at least {minimum}, got {v}", key)
    return v


def _prime(doc: dict) -> PrimeContext:
    p = _int_field(doc, "p", 2)
    try:
        return PrimeContext(p)
    except ValueError:
        raise ConfigError(f"{p} is not prime", "p") from None


def parse_config(document) -> FrameConfig:
    doc = _load(document)
    ctx = _prime(doc)
    d = _int_field(doc, "d")
    vectors = doc.get("vectors")
    if not isinstance(vectors, list):
        raise ConfigError("expected a list of vectors", "vectors")
    if not vectors:
        raise ConfigError("n = 0: at least one vector is required", "vectors")
    out = []
    for j, v in enumerate(vectors):
        if not isinstance(v, list):
            raise ConfigError("expected a list of rational strings", f"vectors[{j}]")
        if len(v) != d:
            raise ConfigError(f"has {len(v)} coordinates, expected d={d}", f"vectors[{j}]")
        out.append(Vector(ctx, tuple(parse_rational(x, f"vectors[{j}][{i}]") for i, x in enumerate(v))))
    return FrameConfig(ctx, d, tuple(out))


def config_to_dict(config: FrameConfig) -> dict:
    return {"p": config.p, "d": config.d,
            "vectors": [[render_rational(x) for x in v.coords] for v in config.vectors]}


def render_config(config: FrameConfig) -> str:
    return json.dumps(config_to_dict(config))


def parse_abs(text: Any, p: int, where: Optional[str] = None) -> AbsValue:
    if not isinstance(text, str):
        raise ConfigError(f"expected an absolute value string, got {text!r}", where)
    try:
        return AbsValue.parse(text, p)
    except ValueError as e:
        raise ConfigError(str(e), where) from None


def parse_search_spec(document, overrides: Optional[dict] = None):
    from .search import Mode, SearchSpec

    doc = dict(_load(document))
    for k, v in (overrides or {}).items():
        if v is not None:
            doc[k] = v
    ctx = _prime(doc)
    d = _int_field(doc, "d")
    mode_name = str(doc.get("mode", "Q1")).upper()
    try:
        mode = Mode(mode_name)
    except ValueError:
        raise ConfigError(f"unknown mode {mode_name!r}", "mode") from None
    n = _int_field(doc, "n") if "n" in doc else None
    kw = {}
    if "height" in doc:
        kw["height"] = _int_field(doc, "height")
    if "entries" in doc and doc["entries"] != "auto":
        ents = doc["entries"]
        if not isinstance(ents, list) or not ents:
            raise ConfigError("expected a nonempty list of rational strings or 'auto'", "entries")
        kw["entries"] = tuple(parse_rational(x, f"entries[{i}]") for i, x in enumerate(ents))
    if "symmetry_pruning" in doc:
        if not isinstance(doc["symmetry_pruning"], bool):
            raise ConfigError("expected true or false", "symmetry_pruning")
        kw["symmetry_pruning"] = doc["symmetry_pruning"]
    if doc.get("limit") is not None:
        kw["limit"] = _int_field(doc, "limit")
    if doc.get("budget") is not None:
        kw["budget"] = _int_field(doc, "budget")
    if doc.get("n_override") is not None:
        kw["n_override"] = _int_field(doc, "n_override")
    if mode is Mode.EQUIANGULAR:
        if "a" not in doc or "gamma" not in doc:
            raise ConfigError("EQUIANGULAR mode needs fields 'a' and 'gamma'", "mode")
        kw["a"] = parse_rational(doc["a"], "a")
        kw["gamma"] = parse_abs(doc["gamma"], ctx.p, "gamma")
    try:
        return SearchSpec(p=ctx.p, d=d, n=n, mode=mode, **kw)
    except ValueError as e:
        raise ConfigError(str(e)) from None


def search_spec_to_dict(spec) -> dict:
    out = {"p": spec.p, "d": spec.d, "n": spec.n, "mode": spec.mode.value, "height": spec.height,
           "entries": spec.entries if isinstance(spec.entries, str)
           else [render_rational(e) for e in spec.entries],
           "symmetry_pruning": spec.symmetry_pruning, "limit": spec.limit, "budget": spec.budget}
    if spec.a is not None:
        out["a"] = render_rational(spec.a)
    if spec.gamma is not None:
        out["gamma"] = render_abs(spec.gamma)
    if spec.n_override is not None:
        out["n_override"] = spec.n_override
    return out


def tightness_to_dict(t: TightnessReport) -> dict:
    out = {"is_tight": t.is_tight, "b": None if t.b is None else render_rational(t.b), "witness": None}
    if t.witness is not None:
        i, j, expected, found = t.witness
        out["witness"] = {"row": i, "col": j, "expected": render_rational(expected),
                          "found": render_rational(found)}
    return out


def welch_to_dict(r) -> dict:
    return {
        "m": r.m,
        "precondition": tightness_to_dict(r.precondition),
        "lhs": render_abs(r.lhs),
        "rhs": render_abs(r.rhs),
        "holds": r.holds,
        "equality": r.equality,
        "diag_term": render_abs(r.diag_term),
        "max_offdiag": render_abs(r.max_offdiag),
        "offdiag_pair": None if r.offdiag_pair is None else list(r.offdiag_pair),
        "unit_inner": r.unit_inner,
        "b_zero": r.b_zero,
    }


def verdict_to_dict(v) -> dict:
    return {
        "ok": v.ok,
        "flags": dict(v.flags),
        "witness": v.witness,
        "b": None if v.b is None else render_rational(v.b),
        "notes": list(v.notes),
        "welch": None if v.report is None else welch_to_dict(v.report),
    }


def zauner_to_dict(z) -> dict:
    return {
        "strong": z.strong,
        "flags": dict(z.flags),
        "verdict": z.verdict,
        "b": None if z.b is None else render_rational(z.b),
        "target": render_abs(z.target),
        "vacuous_iii": z.vacuous_iii,
        "failures": dict(z.failures),
        "witness": z.witness,
        "notes": list(z.notes),
    }
