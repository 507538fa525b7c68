"""Exact checks of the p-adic Welch bounds and related configuration conditions.

Everything p-adic is compared on exponents of :class:`AbsValue`, so there is
no tolerance anywhere in this module except in the classical (real/complex)
comparator bounds at the bottom, which are plain floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .core import AbsValue, abs_p, binomial
from .linalg import FrameConfig, TightnessReport, check_tight, inner, max_norm
from .symtensor import check_sym_tight

ZAUNER_TARGET_NOTE = ("condition (iii) target |n| read as |d^2|_p, since the configuration "
                      "has d^2 vectors; pass n_override for a different n")


class PreconditionError(ValueError):
    """Raised when a theorem's hypothesis fails; the bound is then not asserted."""

    def __init__(self, message: str, tightness: Optional[TightnessReport] = None, index: Optional[int] = None):
        super().__init__(message)
        self.tightness = tightness
        self.index = index


class NotTightError(PreconditionError):
    pass


class NonUnitError(PreconditionError):
    pass


class ShapeError(PreconditionError):
    pass


@dataclass(frozen=True)
class WelchReport:
    m: int
    precondition: TightnessReport
    lhs: AbsValue
    rhs: AbsValue
    holds: bool
    equality: bool
    diag_term: AbsValue
    max_offdiag: AbsValue  # zero AbsValue when n = 1 (empty maximum)
    offdiag_pair: Optional[tuple]
    unit_inner: bool
    b_zero: bool = False


def _gram_rows(config: FrameConfig):
    vs = config.vectors
    n = len(vs)
    g = [[None] * n for _ in range(n)]
    for j in range(n):
        for k in range(j, n):
            g[j][k] = g[k][j] = inner(vs[j], vs[k])
    return g


def _offdiag_max(config: FrameConfig, g, power: int):
    ctx = config.ctx
    best, pair = AbsValue.zero(ctx.p), None
    n = config.n
    for j in range(n):
        for k in range(j + 1, n):
            a = abs_p(ctx, g[j][k]) ** power
            if pair is None or a > best:
                best, pair = a, (j, k)
    return best, pair


def _require_tight(config: FrameConfig, m: int) -> TightnessReport:
    report = check_tight(config) if m == 1 else check_sym_tight(config, m)
    if not report.is_tight:
        i, j, expected, found = report.witness
        raise NotTightError(
            f"order-{m} frame operator is not b*I: entry ({i},{j}) is {found}, expected {expected}",
            tightness=report)
    return report


def _finish(config, m, tight, diag_term, rhs, g, unit_inner) -> WelchReport:
    offdiag, pair = _offdiag_max(config, g, 2 * m)
    lhs = max(diag_term, offdiag)
    return WelchReport(m=m, precondition=tight, lhs=lhs, rhs=rhs, holds=lhs >= rhs, equality=lhs == rhs,
                       diag_term=diag_term, max_offdiag=offdiag, offdiag_pair=pair,
                       unit_inner=unit_inner, b_zero=tight.b == 0)


def welch_general(config: FrameConfig, m: int = 1) -> WelchReport:
    """Order-m bound with arbitrary self inner products.

    max{|sum_l <t_l,t_l>^(2m)|, max_{j!=k} |<t_j,t_k>|^(2m)}
        >= |sum_j <t_j,t_j>^m|^2 / |C(d+m-1, m)|
    """
    if m < 1:
        raise ValueError("order m must be positive")
    tight = _require_tight(config, m)
    ctx = config.ctx
    g = _gram_rows(config)
    diag = [g[j][j] for j in range(config.n)]
    diag_term = abs_p(ctx, sum((x ** (2 * m) for x in diag), Fraction(0)))
    rhs = abs_p(ctx, sum((x ** m for x in diag), Fraction(0))) ** 2 / abs_p(ctx, binomial(config.d + m - 1, m))
    return _finish(config, m, tight, diag_term, rhs, g, all(x == 1 for x in diag))


def welch_unit(config: FrameConfig, m: int = 1) -> WelchReport:
    """Order-m bound for unit inner products: max{|n|, |<t_j,t_k>|^(2m)} >= |n|^2/|C(d+m-1,m)|."""
    if m < 1:
        raise ValueError("order m must be positive")
    g = _gram_rows(config)
    for j in range(config.n):
        if g[j][j] != 1:
            raise NonUnitError(f"<tau_{j}, tau_{j}> = {g[j][j]}, expected 1", index=j)
    tight = _require_tight(config, m)
    ctx = config.ctx
    abs_n = abs_p(ctx, config.n)
    rhs = abs_n ** 2 / abs_p(ctx, binomial(config.d + m - 1, m))
    return _finish(config, m, tight, abs_n, rhs, g, True)


def welch_first_order(config: FrameConfig) -> WelchReport:
    """First-order bound computed straight from the Gram and frame matrices.

    Independent of the symmetric-tensor machinery; ``welch_general(c, 1)``
    must agree with it on every configuration.
    """
    tight = check_tight(config)
    if not tight.is_tight:
        raise NotTightError("frame operator is not b*I", tightness=tight)
    ctx = config.ctx
    g = _gram_rows(config)
    diag = [g[j][j] for j in range(config.n)]
    diag_term = abs_p(ctx, sum((x * x for x in diag), Fraction(0)))
    rhs = abs_p(ctx, sum(diag, Fraction(0))) ** 2 / abs_p(ctx, config.d)
    return _finish(config, 1, tight, diag_term, rhs, g, all(x == 1 for x in diag))


@dataclass
class Verdict:
    """Outcome of a multi-condition check; ``flags`` maps condition name to pass/fail."""

    ok: bool
    flags: dict
    witness: Optional[str] = None
    b: Optional[Fraction] = None
    notes: list = field(default_factory=list)
    report: Optional[WelchReport] = None


def _unit_failure(g, n):
    for j in range(n):
        if g[j][j] != 1:
            return f"<tau_{j}, tau_{j}> = {g[j][j]} != 1"
    return None


def _norm_failure(config):
    for j, v in enumerate(config.vectors):
        nv = max_norm(v)
        if nv != AbsValue.one(config.p):
            return f"||tau_{j}|| = {nv} != 1"
    return None


def q1_check(config: FrameConfig) -> Verdict:
    """Unit inner products, tightness, and equality in the first-order unit bound."""
    g = _gram_rows(config)
    flags, witness, notes = {}, None, []
    unit_fail = _unit_failure(g, config.n)
    flags["unit_inner"] = unit_fail is None
    witness = unit_fail
    tight = check_tight(config)
    flags["tight"] = tight.is_tight
    if not tight.is_tight and witness is None:
        i, j, expected, found = tight.witness
        witness = f"frame operator entry ({i},{j}) is {found}, expected {expected}"
    if tight.is_tight and tight.b == 0:
        notes.append("tight with b = 0")
    report = None
    if flags["unit_inner"] and flags["tight"]:
        report = welch_unit(config, 1)
        flags["equality"] = report.equality
        if not report.equality and witness is None:
            witness = f"lhs {report.lhs} != rhs {report.rhs}"
    else:
        flags["equality"] = False
    ok = all(flags.values())
    return Verdict(ok, flags, None if ok else witness, tight.b, notes, report)


def q2_check(config: FrameConfig) -> Verdict:
    """:func:`q1_check` plus max-norm one on every vector."""
    v = q1_check(config)
    norm_fail = _norm_failure(config)
    v.flags["unit_norm"] = norm_fail is None
    if norm_fail and v.witness is None:
        v.witness = norm_fail
    v.ok = all(v.flags.values())
    if v.ok:
        v.witness = None
    return v


@dataclass
class ZaunerReport:
    strong: bool
    flags: dict  # "i", "ii", "iii" and, when strong, "iv"
    verdict: bool
    b: Optional[Fraction]
    target: AbsValue
    vacuous_iii: bool
    failures: dict  # condition -> first failure message
    witness: Optional[str]
    notes: list = field(default_factory=list)


def zauner_check(config: FrameConfig, strong: bool = False, n_override: Optional[int] = None) -> ZaunerReport:
    d, n, ctx = config.d, config.n, config.ctx
    if n != d * d:
        raise ShapeError(f"a Zauner configuration in dimension {d} has {d * d} vectors, got {n}")
    notes = [ZAUNER_TARGET_NOTE] if n_override is None else [f"condition (iii) target |n| with n = {n_override}"]
    target = abs_p(ctx, d * d if n_override is None else n_override)
    g = _gram_rows(config)
    failures = {}

    unit_fail = _unit_failure(g, n)
    if unit_fail:
        failures["i"] = unit_fail

    tight = check_tight(config)
    if not tight.is_tight:
        i, j, expected, found = tight.witness
        failures["ii"] = f"frame operator entry ({i},{j}) is {found}, expected {expected}"
    elif tight.b == 0:
        notes.append("tight with b = 0")

    for j in range(n):
        for k in range(j + 1, n):
            a = abs_p(ctx, g[j][k]) ** 2
            if a != target:
                failures["iii"] = f"|<tau_{j}, tau_{k}>|^2 = {a} != {target}"
                break
        if "iii" in failures:
            break

    conditions = ["i", "ii", "iii"]
    if strong:
        conditions.append("iv")
        norm_fail = _norm_failure(config)
        if norm_fail:
            failures["iv"] = norm_fail

    flags = {c: c not in failures for c in conditions}
    verdict = all(flags.values())
    witness = None
    for c in conditions:
        if c in failures:
            witness = f"({c}) {failures[c]}"
            break
    if n == 1:
        notes.append("(iii) vacuous")
    return ZaunerReport(strong=strong, flags=flags, verdict=verdict, b=tight.b, target=target,
                        vacuous_iii=n == 1, failures=failures, witness=witness, notes=notes)


def equiangular_check(config: FrameConfig, a, gamma: AbsValue) -> Verdict:
    """All <t_j,t_j> equal ``a`` and all off-diagonal |<t_j,t_k>|^2 equal ``gamma``."""
    a = Fraction(a)
    g = _gram_rows(config)
    ctx = config.ctx
    witness = None
    diag_ok = True
    for j in range(config.n):
        if g[j][j] != a:
            diag_ok = False
            witness = f"<tau_{j}, tau_{j}> = {g[j][j]} != {a}"
            break
    angle_ok = True
    for j in range(config.n):
        for k in range(j + 1, config.n):
            val = abs_p(ctx, g[j][k]) ** 2
            if val != gamma:
                angle_ok = False
                if witness is None:
                    witness = f"|<tau_{j}, tau_{k}>|^2 = {val} != {gamma}"
                break
        if not angle_ok:
            break
    flags = {"diagonal": diag_ok, "angle": angle_ok}
    ok = diag_ok and angle_ok
    return Verdict(ok, flags, None if ok else witness)


# Classical comparators over R and C. Floats only.

def gerzon(d: int, field: str) -> int:
    if d < 1:
        raise ValueError("d must be positive")
    f = _field(field)
    return d * d if f == "C" else d * (d + 1) // 2


def _field(field: str) -> str:
    f = field.upper()
    if f not in ("R", "C"):
        raise ValueError(f"field must be 'R' or 'C', got {field!r}")
    return f


def classical_welch(d: int, n: int, m: int = 1) -> dict:
    if m < 1:
        raise ValueError("order m must be positive")
    if n <= d:
        raise ValueError(f"classical Welch bounds need n > d, got n={n}, d={d}")
    c = binomial(d + m - 1, m)
    return {"sum_bound": n * n / c, "max_bound": (n / c - 1) / (n - 1)}


@dataclass(frozen=True)
class ClassicalBounds:
    field: str
    d: int
    n: int
    welch_sum: dict  # order -> float or None
    welch_max: dict
    bukh_cox: Optional[float]
    orthoplex: Optional[float]
    levenstein: Optional[float]
    exponential: Optional[float]
    gerzon: int
    applicable: dict


def classical_secondary_bounds(d: int, n: int, field: str = "C", orders=(1,)) -> ClassicalBounds:
    """Bukh-Cox, orthoplex, Levenstein and exponential coherence lower bounds.

    ``k`` below is dim_R(K)/2, i.e. 1/2 for R and 1 for C, not a tensor order.
    Bounds whose side condition fails are reported as ``None``.
    """
    if d < 1 or n < 2:
        raise ValueError("need d >= 1 and n >= 2")
    f = _field(field)
    k = 1.0 if f == "C" else 0.5
    z = gerzon(d, f)
    app = {
        "bukh_cox": n > d,
        "orthoplex": n > z,
        "levenstein": n > z,
        "exponential": d > 1,
        "welch": n > d,
    }
    bukh_cox = orthoplex = levenstein = exponential = None
    if app["bukh_cox"]:
        zz = gerzon(n - d, f)
        bukh_cox = zz / (n * (1 + k * (n - d - 1) * math.sqrt(1 / k + n - d)) - zz)
    if app["orthoplex"]:
        orthoplex = 1 / math.sqrt(d)
    if app["levenstein"]:
        levenstein = math.sqrt((n * (k + 1) - d * (k * d + 1)) / ((n - d) * (k * d + 1)))
    if app["exponential"]:
        exponential = 1 - 2 * n ** (-1 / (d - 1))
    welch_sum, welch_max = {}, {}
    for m in orders:
        if app["welch"]:
            w = classical_welch(d, n, m)
            welch_sum[m], welch_max[m] = w["sum_bound"], w["max_bound"]
        else:
            welch_sum[m] = welch_max[m] = None
    return ClassicalBounds(f, d, n, welch_sum, welch_max, bukh_cox, orthoplex, levenstein, exponential, z, app)
