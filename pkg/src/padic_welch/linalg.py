"""Rational vectors and matrices inside Q_p^d.

The form is the plain bilinear one, sum of a_j * b_j with no conjugation.
It is not positive in Q_p, so nothing here assumes <x, x> != 0 for x != 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .core import AbsValue, PrimeContext, PrimeMismatchError, abs_p, to_rational


class DimensionError(ValueError):
    pass


@dataclass(frozen=True)
class Vector:
    ctx: PrimeContext
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(to_rational(c) for c in self.coords))

    @classmethod
    def of(cls, p, coords: Iterable) -> "Vector":
        ctx = p if isinstance(p, PrimeContext) else PrimeContext(p)
        return cls(ctx, tuple(coords))

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __add__(self, other: "Vector") -> "Vector":
        _check_pair(self, other)
        return Vector(self.ctx, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def scale(self, c) -> "Vector":
        c = to_rational(c)
        return Vector(self.ctx, tuple(c * a for a in self.coords))


def standard_basis(ctx: PrimeContext, d: int, i: int) -> Vector:
    return Vector(ctx, tuple(Fraction(1) if j == i else Fraction(0) for j in range(d)))


def _check_pair(x: Vector, y: Vector):
    if x.ctx.p != y.ctx.p:
        raise PrimeMismatchError(f"vectors over p={x.ctx.p} and p={y.ctx.p}")
    if len(x) != len(y):
        raise DimensionError(f"vectors of length {len(x)} and {len(y)}")


@dataclass(frozen=True)
class FrameConfig:
    ctx: PrimeContext
    d: int
    vectors: tuple

    def __post_init__(self):
        vecs = tuple(v if isinstance(v, Vector) else Vector(self.ctx, tuple(v)) for v in self.vectors)
        object.__setattr__(self, "vectors", vecs)
        if self.d < 1:
            raise DimensionError("dimension d must be positive")
        if not vecs:
            raise DimensionError("a configuration needs at least one vector")
        for j, v in enumerate(vecs):
            if v.ctx.p != self.ctx.p:
                raise PrimeMismatchError(f"vector {j} is over p={v.ctx.p}, config over p={self.ctx.p}")
            if len(v) != self.d:
                raise DimensionError(f"vector {j} has {len(v)} coordinates, expected d={self.d}")

    @classmethod
    def of(cls, p: int, d: int, vectors: Iterable[Iterable]) -> "FrameConfig":
        ctx = PrimeContext(p)
        return cls(ctx, d, tuple(Vector(ctx, tuple(v)) for v in vectors))

    @classmethod
    def onb(cls, p: int, d: int, copies: int = 1) -> "FrameConfig":
        ctx = PrimeContext(p)
        return cls(ctx, d, tuple(standard_basis(ctx, d, i) for _ in range(copies) for i in range(d)))

    @property
    def n(self) -> int:
        return len(self.vectors)

    @property
    def p(self) -> int:
        return self.ctx.p


@dataclass(frozen=True)
class Matrix:
    rows: int
    cols: int
    entries: tuple  # tuple of row tuples

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "Matrix":
        rows = tuple(tuple(to_rational(a) for a in r) for r in rows)
        if not rows or not rows[0]:
            raise DimensionError("matrices must be nonempty")
        cols = len(rows[0])
        if any(len(r) != cols for r in rows):
            raise DimensionError("ragged matrix rows")
        return cls(len(rows), cols, rows)

    @classmethod
    def identity(cls, n: int, scale=1) -> "Matrix":
        s = to_rational(scale)
        zero = Fraction(0)
        return cls(n, n, tuple(tuple(s if i == j else zero for j in range(n)) for i in range(n)))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        cols = list(zip(*other.entries))
        return Matrix(self.rows, other.cols,
                      tuple(tuple(sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols)
                            for r in self.entries))

    def apply(self, x: Sequence) -> tuple:
        if len(x) != self.cols:
            raise DimensionError(f"vector of length {len(x)} for a matrix with {self.cols} columns")
        return tuple(sum((a * b for a, b in zip(r, x)), Fraction(0)) for r in self.entries)

    def is_square(self) -> bool:
        return self.rows == self.cols


@dataclass(frozen=True)
class TightnessReport:
    """``witness`` is (row, col, expected, found) for the first mismatch."""

    is_tight: bool
    b: Optional[Fraction] = None
    witness: Optional[tuple] = None

    def __post_init__(self):
        if self.is_tight and (self.witness is not None or self.b is None):
            raise ValueError("a tight report carries b and no witness")
        if not self.is_tight and self.witness is None:
            raise ValueError("a non-tight report needs a witness")


def inner(x: Vector, y: Vector) -> Fraction:
    _check_pair(x, y)
    return sum((a * b for a, b in zip(x.coords, y.coords)), Fraction(0))


def gram(config: FrameConfig) -> Matrix:
    vs = config.vectors
    n = len(vs)
    g = [[Fraction(0)] * n for _ in range(n)]
    for j in range(n):
        for k in range(j, n):
            g[j][k] = g[k][j] = inner(vs[j], vs[k])
    return Matrix(n, n, tuple(tuple(r) for r in g))


def frame_operator(config: FrameConfig) -> Matrix:
    """Matrix of x -> sum_j <x, tau_j> tau_j, i.e. sum_j tau_j tau_j^T."""
    d = config.d
    s = [[Fraction(0)] * d for _ in range(d)]
    for v in config.vectors:
        c = v.coords
        for a in range(d):
            if c[a]:
                row = s[a]
                for b in range(d):
                    row[b] += c[a] * c[b]
    return Matrix(d, d, tuple(tuple(r) for r in s))


def trace(m: Matrix) -> Fraction:
    if not m.is_square():
        raise DimensionError(f"trace of a non-square {m.rows}x{m.cols} matrix")
    return sum((m.entries[i][i] for i in range(m.rows)), Fraction(0))


def scalar_report(m: Matrix) -> TightnessReport:
    """Decide whether the square matrix ``m`` equals b*I with b = m[0][0]."""
    if not m.is_square():
        raise DimensionError("tightness is only defined for square matrices")
    b = m.entries[0][0]
    for i, row in enumerate(m.entries):
        for j, found in enumerate(row):
            expected = b if i == j else Fraction(0)
            if found != expected:
                return TightnessReport(False, None, (i, j, expected, found))
    return TightnessReport(True, b, None)


def check_tight(config: FrameConfig) -> TightnessReport:
    return scalar_report(frame_operator(config))


def max_norm(x: Vector) -> AbsValue:
    best = AbsValue.zero(x.ctx.p)
    for c in x.coords:
        a = abs_p(x.ctx, c)
        if a > best:
            best = a
    return best
