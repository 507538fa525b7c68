"""Symmetric m-tensors over Q_p^d in monomial coordinates.

A symmetric tensor is stored by one coefficient per degree-m multi-index
rather than as a dense d**m array. The lift of tau has coefficient
prod_i tau_i**alpha_i at alpha, and the inner product weights each
coordinate by the multinomial coefficient m!/prod(alpha_i!), which is what
makes <lift(x), lift(y)> = <x, y>**m hold exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .core import PrimeContext, binomial
from .linalg import DimensionError, FrameConfig, Matrix, TightnessReport, Vector, scalar_report

DEFAULT_MAX_SYM_DIM = 10_000


def sym_dim(d: int, m: int) -> int:
    if d < 1 or m < 1:
        raise ValueError("d and m must be positive")
    return binomial(d + m - 1, m)


@lru_cache(maxsize=256)
def _multi_indices(d: int, m: int) -> tuple:
    out = []

    # Colex: compare from the last coordinate, so (m,0,...) first and (...,0,m) last.
    def rec(i, remaining, suffix):
        if i == 0:
            out.append((remaining,) + suffix)
            return
        for a in range(remaining + 1):
            rec(i - 1, remaining - a, (a,) + suffix)

    rec(d - 1, m, ())
    return tuple(out)


def enumerate_multi_indices(d: int, m: int) -> list:
    """All alpha in N^d with |alpha| = m, in colexicographic order."""
    if d < 1 or m < 1:
        raise ValueError("d and m must be positive")
    return list(_multi_indices(d, m))


def multinomial(m: int, alpha) -> int:
    if sum(alpha) != m or any(a < 0 for a in alpha):
        raise ValueError(f"multi-index {tuple(alpha)} does not have degree {m}")
    out = math.factorial(m)
    for a in alpha:
        out //= math.factorial(a)
    return out


@lru_cache(maxsize=256)
def _weights(d: int, m: int) -> tuple:
    return tuple(multinomial(m, a) for a in _multi_indices(d, m))


@dataclass(frozen=True)
class SymVector:
    ctx: PrimeContext
    d: int
    m: int
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != sym_dim(self.d, self.m):
            raise DimensionError(
                f"{len(self.coeffs)} coefficients for Sym^{self.m} of dimension {self.d}")


def lift(tau: Vector, m: int) -> SymVector:
    if m < 1:
        raise ValueError("tensor order must be positive")
    d = len(tau)
    powers = [[Fraction(1)] for _ in range(d)]
    for i, t in enumerate(tau.coords):
        for _ in range(m):
            powers[i].append(powers[i][-1] * t)
    coeffs = []
    for alpha in _multi_indices(d, m):
        c = Fraction(1)
        for i, a in enumerate(alpha):
            if a:
                c *= powers[i][a]
        coeffs.append(c)
    return SymVector(tau.ctx, d, m, tuple(coeffs))


def sym_inner(u: SymVector, v: SymVector) -> Fraction:
    if (u.ctx.p, u.d, u.m) != (v.ctx.p, v.d, v.m):
        raise DimensionError("symmetric tensors of different shape or prime")
    w = _weights(u.d, u.m)
    return sum((wa * a * b for wa, a, b in zip(w, u.coeffs, v.coeffs)), Fraction(0))


def sym_frame_operator(config: FrameConfig, m: int, max_dim: int = DEFAULT_MAX_SYM_DIM) -> Matrix:
    """Matrix of x -> sum_j <x, lift_j> lift_j in monomial coordinates.

    Entry [alpha][beta] = sum_j L_j[alpha] * w[beta] * L_j[beta]; the weight
    sits on the input slot so the matrix is not symmetric in general.
    """
    dim = sym_dim(config.d, m)
    if dim > max_dim:
        raise ValueError(f"Sym^{m} of Q_p^{config.d} has dimension {dim} > cap {max_dim}")
    w = _weights(config.d, m)
    s = [[Fraction(0)] * dim for _ in range(dim)]
    for tau in config.vectors:
        L = lift(tau, m).coeffs
        wl = [wb * lb for wb, lb in zip(w, L)]
        for a in range(dim):
            la = L[a]
            if la:
                row = s[a]
                for b in range(dim):
                    row[b] += la * wl[b]
    return Matrix(dim, dim, tuple(tuple(r) for r in s))


def check_sym_tight(config: FrameConfig, m: int, max_dim: int = DEFAULT_MAX_SYM_DIM) -> TightnessReport:
    return scalar_report(sym_frame_operator(config, m, max_dim))
