"""Command-line entry point.

Exit codes (frozen):
    0  verdict positive / bound holds
    1  verdict negative, or a bound reported violated (an implementation bug)
    2  precondition not met (not tight, wrong shape, budget exceeded, n <= d)
    3  input error
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .formats import (ConfigError, config_to_dict, parse_abs, parse_config, parse_rational, parse_search_spec,
                      render_abs, render_rational, search_spec_to_dict, tightness_to_dict, verdict_to_dict,
                      welch_to_dict, zauner_to_dict)
from .linalg import check_tight
from .search import BudgetExceeded, run_search
from .symtensor import DEFAULT_MAX_SYM_DIM, check_sym_tight, enumerate_multi_indices, sym_dim
from .welch import (NonUnitError, NotTightError, PreconditionError, ShapeError, classical_secondary_bounds,
                    welch_general, welch_unit, zauner_check, equiangular_check)

EXIT_OK, EXIT_NEGATIVE, EXIT_PRECONDITION, EXIT_INPUT = 0, 1, 2, 3

COMMANDS = ("verify", "bound", "tensor", "zauner", "equiangular", "search", "classical")


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors, which would collide with EXIT_PRECONDITION
    def error(self, message):
        raise InputError(message)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="padic-welch", description="Exact p-adic Welch bound checks and searches.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--input", metavar="PATH", help="configuration or search-spec JSON ('-' for stdin)")
    ap.add_argument("--m", type=int, default=1, metavar="ORDER", help="tensor order (default 1)")
    ap.add_argument("--strong", action="store_true", help="strong Zauner form (adds max-norm one)")
    ap.add_argument("--unit", action="store_true", help="bound: use the unit inner product form")
    ap.add_argument("--format", choices=("text", "machine"), default="text")
    ap.add_argument("--height", type=int, metavar="H")
    ap.add_argument("--mode", metavar="MODE", help="Q1, Q2, ZAUNER, ZAUNER_STRONG or EQUIANGULAR")
    ap.add_argument("--limit", type=int, metavar="N")
    ap.add_argument("--workers", type=int, default=1, metavar="W")
    ap.add_argument("--budget", type=int, metavar="B")
    ap.add_argument("--a", metavar="RATIONAL", help="equiangular: required <tau_j, tau_j>")
    ap.add_argument("--gamma", metavar="ABS", help="equiangular: required |<tau_j, tau_k>|^2, as 'p^e' or '0'")
    ap.add_argument("--n-override", type=int, metavar="N", help="zauner: use |N| as the (iii) target")
    ap.add_argument("--d", type=int, help="classical: dimension")
    ap.add_argument("--n", type=int, help="classical: number of vectors")
    ap.add_argument("--field", choices=("R", "C"), default="C", help="classical: real or complex")
    ap.add_argument("--max-sym-dim", type=int, default=DEFAULT_MAX_SYM_DIM)
    return ap


def _read_input(path):
    if path is None:
        raise InputError("--input is required for this command")
    try:
        return sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def _load_config(args):
    return parse_config(_read_input(args.input))


def _cmd_verify(args):
    config = _load_config(args)
    t = check_tight(config)
    body = {"tightness": tightness_to_dict(t), "config": config_to_dict(config)}
    return (EXIT_OK if t.is_tight else EXIT_NEGATIVE), t.is_tight, body


def _cmd_bound(args):
    config = _load_config(args)
    if args.m < 1:
        raise InputError("--m must be positive")
    fn = welch_unit if args.unit else welch_general
    try:
        r = fn(config, args.m)
    except NonUnitError as e:
        return EXIT_PRECONDITION, False, {"error": "non-unit", "message": str(e), "index": e.index}
    except NotTightError as e:
        return EXIT_PRECONDITION, False, {"error": "not-tight", "message": str(e),
                                          "tightness": tightness_to_dict(e.tightness)}
    body = {"welch": welch_to_dict(r), "form": "unit" if args.unit else "general"}
    return (EXIT_OK if r.holds else EXIT_NEGATIVE), r.holds, body


def _cmd_tensor(args):
    config = _load_config(args)
    if args.m < 1:
        raise InputError("--m must be positive")
    dim = sym_dim(config.d, args.m)
    if dim > args.max_sym_dim:
        raise InputError(f"Sym^{args.m} dimension {dim} exceeds --max-sym-dim {args.max_sym_dim}")
    t = check_sym_tight(config, args.m, args.max_sym_dim)
    body = {"sym_dim": dim, "m": args.m,
            "basis": [list(a) for a in enumerate_multi_indices(config.d, args.m)],
            "tightness": tightness_to_dict(t)}
    return (EXIT_OK if t.is_tight else EXIT_NEGATIVE), t.is_tight, body


def _cmd_zauner(args):
    config = _load_config(args)
    try:
        z = zauner_check(config, strong=args.strong, n_override=args.n_override)
    except ShapeError as e:
        return EXIT_PRECONDITION, False, {"error": "shape", "message": str(e)}
    return (EXIT_OK if z.verdict else EXIT_NEGATIVE), z.verdict, {"zauner": zauner_to_dict(z)}


def _cmd_equiangular(args):
    config = _load_config(args)
    if args.a is None or args.gamma is None:
        raise InputError("equiangular needs --a and --gamma")
    a = parse_rational(args.a, "--a")
    gamma = parse_abs(args.gamma, config.p, "--gamma")
    v = equiangular_check(config, a, gamma)
    body = {"a": render_rational(a), "gamma": render_abs(gamma), "equiangular": verdict_to_dict(v)}
    return (EXIT_OK if v.ok else EXIT_NEGATIVE), v.ok, body


def _hit_report(report):
    if hasattr(report, "verdict"):
        return {"zauner": zauner_to_dict(report)}
    return verdict_to_dict(report)


def _cmd_search(args):
    overrides = {"height": args.height, "mode": args.mode, "limit": args.limit, "budget": args.budget}
    spec = parse_search_spec(_read_input(args.input), overrides)
    if args.workers < 1:
        raise InputError("--workers must be positive")
    try:
        res = run_search(spec, workers=args.workers)
    except BudgetExceeded as e:
        return EXIT_PRECONDITION, False, {"error": "budget", "message": str(e),
                                          "estimate": e.estimate, "budget": e.budget,
                                          "search": search_spec_to_dict(spec)}
    body = {
        "search": search_spec_to_dict(spec),
        "entries": [render_rational(e) for e in res.entries],
        "estimate": res.estimate,
        "configs_scanned": res.configs_scanned,
        "wall_time_s": round(res.wall_time, 6),
        "hits": [{"config": config_to_dict(h.config), "report": _hit_report(h.report)} for h in res.hits],
        "notes": res.notes,
    }
    return (EXIT_OK if res.hits else EXIT_NEGATIVE), bool(res.hits), body


def _cmd_classical(args):
    if args.d is None or args.n is None:
        raise InputError("classical needs --d and --n")
    if args.m < 1:
        raise InputError("--m must be positive")
    if args.d < 1 or args.n < 2:
        raise InputError("classical needs d >= 1 and n >= 2")
    cb = classical_secondary_bounds(args.d, args.n, args.field, orders=(args.m,))
    body = {
        "approximate": True,
        "field": cb.field, "d": cb.d, "n": cb.n, "m": args.m,
        "welch_sum": cb.welch_sum[args.m], "welch_max": cb.welch_max[args.m],
        "bukh_cox": cb.bukh_cox, "orthoplex": cb.orthoplex,
        "levenstein": cb.levenstein, "exponential": cb.exponential,
        "gerzon": cb.gerzon, "applicable": cb.applicable,
    }
    if not cb.applicable["welch"]:
        body["message"] = f"Welch bounds need n > d (n={args.n}, d={args.d})"
        return EXIT_PRECONDITION, False, body
    return EXIT_OK, True, body


HANDLERS = {
    "verify": _cmd_verify, "bound": _cmd_bound, "tensor": _cmd_tensor, "zauner": _cmd_zauner,
    "equiangular": _cmd_equiangular, "search": _cmd_search, "classical": _cmd_classical,
}


def run(argv=None):
    """Parse ``argv`` and execute one command; returns (exit code, report dict)."""
    try:
        args = build_parser().parse_args(argv)
    except InputError as e:
        return EXIT_INPUT, _usage_report(str(e))
    return execute(args)


def _usage_report(message: str) -> dict:
    return {"tool": "padic-welch", "version": __version__, "command": None, "verdict": False,
            "exit_code": EXIT_INPUT, "error": "usage", "message": message}


def execute(args):
    try:
        code, verdict, body = HANDLERS[args.command](args)
    except (ConfigError, InputError) as e:
        code, verdict, body = EXIT_INPUT, False, {"error": "input", "message": str(e),
                                                  "where": getattr(e, "where", None)}
    except PreconditionError as e:
        code, verdict, body = EXIT_PRECONDITION, False, {"error": "precondition", "message": str(e)}
    report = {"tool": "padic-welch", "version": __version__, "command": args.command,
              "verdict": verdict, "exit_code": code}
    report.update(body)
    return code, report


_HEADER_KEYS = ("tool", "version", "command", "verdict", "exit_code")


def render_text(report: dict) -> str:
    lines = [f"{report['command']}: verdict={'yes' if report['verdict'] else 'no'} (exit {report['exit_code']})"]

    def walk(prefix, obj):
        items = obj.items() if isinstance(obj, dict) else enumerate(obj)
        for k, v in items:
            key = f"{prefix}{k}"
            if isinstance(v, (dict, list)) and v:
                walk(key + ".", v)
            else:
                lines.append(f"  {key}: {_fmt(v)}")

    walk("", {k: v for k, v in report.items() if k not in _HEADER_KEYS})
    return "\n".join(lines)


def _fmt(v):
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if v == [] or v == {}:
        return "(none)"
    return str(v)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except InputError as e:
        print(f"padic-welch: error: {e}", file=sys.stderr)
        return EXIT_INPUT
    code, report = execute(args)
    print(json.dumps(report, indent=2) if args.format == "machine" else render_text(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
