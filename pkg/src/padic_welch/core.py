"""Exact p-adic valuations and absolute values over the rationals.

Elements of Q_p are represented by :class:`fractions.Fraction`. Since Q is
dense in Q_p and every quantity handled by this package is built from
rational inputs with ring operations, no truncated p-adic expansion is ever
needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from numbers import Rational
from typing import Union

from sympy import isprime

INF = math.inf


class PrimeMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class PrimeContext:
    p: int

    def __post_init__(self):
        if isinstance(self.p, bool) or not isinstance(self.p, int):
            raise TypeError(f"prime must be an int, got {self.p!r}")
        if not isprime(self.p):
            raise ValueError(f"{self.p} is not prime")


def to_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def _int_valuation(n: int, p: int) -> int:
    # n != 0
    n = abs(n)
    v = 0
    # Square the divisor to strip high powers quickly.
    powers = [p]
    while n % (powers[-1] ** 2) == 0:
        powers.append(powers[-1] ** 2)
    for i in range(len(powers) - 1, -1, -1):
        if n % powers[i] == 0:
            n //= powers[i]
            v += 1 << i
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuation(ctx: PrimeContext, q) -> Union[int, float]:
    """Return v_p(q), or ``INF`` for q = 0."""
    q = to_rational(q)
    if q == 0:
        return INF
    return _int_valuation(q.numerator, ctx.p) - _int_valuation(q.denominator, ctx.p)


@total_ordering
@dataclass(frozen=True)
class AbsValue:
    """A p-adic absolute value p**exponent; ``exponent is None`` means zero."""

    p: int
    exponent: int | None

    @classmethod
    def zero(cls, p: int) -> "AbsValue":
        return cls(p, None)

    @classmethod
    def one(cls, p: int) -> "AbsValue":
        return cls(p, 0)

    @property
    def is_zero(self) -> bool:
        return self.exponent is None

    def _check(self, other) -> "AbsValue":
        if not isinstance(other, AbsValue):
            return NotImplemented
        if other.p != self.p:
            raise PrimeMismatchError(f"absolute values over p={self.p} and p={other.p}")
        return other

    def __mul__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        if self.is_zero or other.is_zero:
            return AbsValue.zero(self.p)
        return AbsValue(self.p, self.exponent + other.exponent)

    def __truediv__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        if other.is_zero:
            raise ZeroDivisionError("division by the zero absolute value")
        if self.is_zero:
            return self
        return AbsValue(self.p, self.exponent - other.exponent)

    def __pow__(self, k: int):
        if k < 0:
            if self.is_zero:
                raise ZeroDivisionError("negative power of the zero absolute value")
            return AbsValue(self.p, self.exponent * k)
        if k == 0:
            return AbsValue.one(self.p)
        if self.is_zero:
            return self
        return AbsValue(self.p, self.exponent * k)

    def __eq__(self, other):
        if not isinstance(other, AbsValue):
            return NotImplemented
        return self.p == other.p and self.exponent == other.exponent

    def __hash__(self):
        return hash((self.p, self.exponent))

    def __lt__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        if self.is_zero:
            return not other.is_zero
        if other.is_zero:
            return False
        return self.exponent < other.exponent

    def to_fraction(self) -> Fraction:
        if self.is_zero:
            return Fraction(0)
        return Fraction(self.p) ** self.exponent

    def __str__(self):
        return "0" if self.is_zero else f"{self.p}^{self.exponent}"

    @classmethod
    def parse(cls, text: str, p: int | None = None) -> "AbsValue":
        """Inverse of ``str``; ``p`` is required to parse the literal ``"0"``."""
        text = text.strip()
        if text == "0":
            if p is None:
                raise ValueError("the zero absolute value needs an explicit prime")
            return cls.zero(p)
        base, sep, exp = text.partition("^")
        if not sep:
            raise ValueError(f"malformed absolute value {text!r}, expected 'p^e' or '0'")
        try:
            base_i, exp_i = int(base), int(exp)
        except ValueError:
            raise ValueError(f"malformed absolute value {text!r}") from None
        if p is not None and base_i != p:
            raise PrimeMismatchError(f"absolute value {text!r} is not over p={p}")
        return cls(base_i, exp_i)


def abs_p(ctx: PrimeContext, q) -> AbsValue:
    v = valuation(ctx, q)
    if v == INF:
        return AbsValue.zero(ctx.p)
    return AbsValue(ctx.p, -v)


def legendre_factorial_valuation(ctx: PrimeContext, n: int) -> int:
    """v_p(n!) by Legendre's formula, sum of floor(n / p^i)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    total, q = 0, n
    while q:
        q //= ctx.p
        total += q
    return total


def binomial(n: int, k: int) -> int:
    if n < 0 or k < 0:
        raise ValueError("binomial arguments must be nonnegative")
    if k > n:
        raise ValueError(f"k={k} exceeds n={n}")
    return math.comb(n, k)


def kummer_carries(p: int, a: int, b: int) -> int:
    """Number of carries when adding a and b in base p."""
    carries = carry = 0
    while a or b or carry:
        s = a % p + b % p + carry
        carry = 1 if s >= p else 0
        carries += carry
        a //= p
        b //= p
    return carries


def binomial_valuation(ctx: PrimeContext, n: int, k: int) -> int:
    """v_p(C(n, k)) via Kummer's theorem; asserts agreement with Legendre."""
    if n < 0 or k < 0:
        raise ValueError("binomial arguments must be nonnegative")
    if k > n:
        raise ValueError(f"k={k} exceeds n={n}")
    v = kummer_carries(ctx.p, k, n - k)
    leg = (legendre_factorial_valuation(ctx, n)
           - legendre_factorial_valuation(ctx, k)
           - legendre_factorial_valuation(ctx, n - k))
    if v != leg:
        raise ArithmeticError(f"Kummer ({v}) and Legendre ({leg}) disagree for C({n},{k}) at p={ctx.p}")
    return v
