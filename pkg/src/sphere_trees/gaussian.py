"""Exact Gaussian-rational scalars.

All sphere coordinates in this package live in Q(i), so every equality test
is decidable and every algorithm downstream is tolerance-free.  Values are
stored as a single reduced integer triple (a + b i) / c with c > 0 and
gcd(a, b, c) = 1, which keeps the field operations to one gcd each; the
`re`/`im` components are exposed as reduced fractions.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Union

Rationalish = Union[int, Fraction, str]


def _frac(x: Rationalish) -> Fraction:
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


class GaussianRational:
    """A complex number with rational real and imaginary parts."""

    __slots__ = ("a", "b", "c")

    def __init__(self, re: Rationalish = 0, im: Rationalish = 0):
        re, im = _frac(re), _frac(im)
        c = re.denominator * im.denominator // gcd(re.denominator, im.denominator)
        a = re.numerator * (c // re.denominator)
        b = im.numerator * (c // im.denominator)
        g = gcd(gcd(a, b), c)
        object.__setattr__(self, "a", a // g)
        object.__setattr__(self, "b", b // g)
        object.__setattr__(self, "c", c // g)

    @classmethod
    def make(cls, re: Rationalish = 0, im: Rationalish = 0) -> "GaussianRational":
        return cls(re, im)

    @classmethod
    def _raw(cls, a: int, b: int, c: int) -> "GaussianRational":
        if c < 0:
            a, b, c = -a, -b, -c
        g = gcd(gcd(a, b), c)
        if g > 1:
            a, b, c = a // g, b // g, c // g
        out = object.__new__(cls)
        object.__setattr__(out, "a", a)
        object.__setattr__(out, "b", b)
        object.__setattr__(out, "c", c)
        return out

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @property
    def re(self) -> Fraction:
        return Fraction(self.a, self.c)

    @property
    def im(self) -> Fraction:
        return Fraction(self.b, self.c)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, GaussianRational):
            return NotImplemented
        return self.a == other.a and self.b == other.b and self.c == other.c

    def __hash__(self):
        return hash((self.a, self.b, self.c))

    def __add__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational._raw(
            self.a * other.c + other.a * self.c,
            self.b * other.c + other.b * self.c,
            self.c * other.c,
        )

    def __sub__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational._raw(
            self.a * other.c - other.a * self.c,
            self.b * other.c - other.b * self.c,
            self.c * other.c,
        )

    def __neg__(self) -> "GaussianRational":
        return GaussianRational._raw(-self.a, -self.b, self.c)

    def __mul__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational._raw(
            self.a * other.a - self.b * other.b,
            self.a * other.b + self.b * other.a,
            self.c * other.c,
        )

    def inverse(self) -> "GaussianRational":
        n = self.a * self.a + self.b * self.b
        if n == 0:
            raise ZeroDivisionError("inverse of zero Gaussian rational")
        return GaussianRational._raw(self.a * self.c, -self.b * self.c, n)

    def __truediv__(self, other: "GaussianRational") -> "GaussianRational":
        n = other.a * other.a + other.b * other.b
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational._raw(
            (self.a * other.a + self.b * other.b) * other.c,
            (self.b * other.a - self.a * other.b) * other.c,
            self.c * n,
        )

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._raw(self.a, -self.b, self.c)

    def to_complex(self) -> complex:
        return complex(self.a / self.c, self.b / self.c)

    def sort_key(self) -> tuple:
        return (self.re, self.im)

    def __repr__(self) -> str:
        return f"GaussianRational({self.re!r}, {self.im!r})"

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.re)
        if self.a == 0:
            return f"{self.im}i"
        return f"{self.re}{'+' if self.b > 0 else ''}{self.im}i"


GR_ZERO = GaussianRational(0, 0)
GR_ONE = GaussianRational(1, 0)
GR_I = GaussianRational(0, 1)


def gr(re: Rationalish = 0, im: Rationalish = 0) -> GaussianRational:
    """Shorthand constructor used pervasively in tests and fixtures."""
    return GaussianRational(re, im)
