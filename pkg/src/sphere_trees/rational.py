"""Exact univariate polynomials over Q(i) and rational self-maps of the sphere.

Rational maps are stored reduced (numerator and denominator coprime via the
exact Euclidean gcd) and scaled so the denominator is monic, which makes
equality structural.  Local degrees are computed by exact root
multiplicities, never by root isolation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .gaussian import GR_ONE, GR_ZERO, GaussianRational
from .projective import Moebius, ProjPoint


@dataclass(frozen=True, slots=True)
class Polynomial:
    """Coefficients ascending by exponent; trailing zeros stripped."""

    coeffs: tuple[GaussianRational, ...]

    @classmethod
    def make(cls, coeffs: Sequence[GaussianRational]) -> "Polynomial":
        cs = list(coeffs)
        while cs and cs[-1].is_zero():
            cs.pop()
        return cls(tuple(cs))

    @classmethod
    def constant(cls, c: GaussianRational) -> "Polynomial":
        return cls.make([c])

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls(())

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree, with the convention that the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    def leading(self) -> GaussianRational:
        if self.is_zero():
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        out = []
        for i in range(n):
            a = self.coeffs[i] if i < len(self.coeffs) else GR_ZERO
            b = other.coeffs[i] if i < len(other.coeffs) else GR_ZERO
            out.append(a + b)
        return Polynomial.make(out)

    def __neg__(self) -> "Polynomial":
        return Polynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if self.is_zero() or other.is_zero():
            return Polynomial.zero()
        out = [GR_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Polynomial.make(out)

    def scale(self, c: GaussianRational) -> "Polynomial":
        return Polynomial.make([x * c for x in self.coeffs])

    def divmod(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        quo = [GR_ZERO] * max(0, len(rem) - len(other.coeffs) + 1)
        dlead = other.leading()
        while len(rem) >= len(other.coeffs) and rem:
            factor = rem[-1] / dlead
            shift = len(rem) - len(other.coeffs)
            quo[shift] = factor
            for i, c in enumerate(other.coeffs):
                rem[shift + i] = rem[shift + i] - factor * c
            while rem and rem[-1].is_zero():
                rem.pop()
        return Polynomial.make(quo), Polynomial.make(rem)

    def gcd(self, other: "Polynomial") -> "Polynomial":
        """Monic greatest common divisor."""
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        if a.is_zero():
            return a
        return a.scale(a.leading().inverse())

    def evaluate(self, x: GaussianRational) -> GaussianRational:
        acc = GR_ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def root_multiplicity(self, r: GaussianRational) -> int:
        """Exact multiplicity of r as a root (0 when not a root)."""
        linear = Polynomial.make([-r, GR_ONE])
        p, mult = self, 0
        while not p.is_zero():
            quo, rem = p.divmod(linear)
            if not rem.is_zero():
                break
            mult += 1
            p = quo
        return mult


def _homogeneous_eval(coeffs: Sequence[GaussianRational], degree: int,
                      u: GaussianRational, v: GaussianRational) -> GaussianRational:
    """Evaluate sum c_i u^i v^(degree - i) without forming powers twice."""
    acc = GR_ZERO
    upow = GR_ONE
    upowers = []
    for _ in range(degree + 1):
        upowers.append(upow)
        upow = upow * u
    vpow = GR_ONE
    for i in range(degree, -1, -1):
        if i < len(coeffs) and not coeffs[i].is_zero():
            acc = acc + coeffs[i] * upowers[i] * vpow
        vpow = vpow * v
    return acc


@dataclass(frozen=True, slots=True)
class RationalMap:
    num: Polynomial
    den: Polynomial

    @classmethod
    def make(cls, num: Polynomial, den: Polynomial) -> "RationalMap":
        if den.is_zero():
            raise ValueError("rational map with zero denominator")
        g = num.gcd(den)
        if not g.is_zero() and g.degree > 0:
            num = num.divmod(g)[0]
            den = den.divmod(g)[0]
        lead = den.leading().inverse()
        return cls(num.scale(lead), den.scale(lead))

    @classmethod
    def from_coeffs(cls, num: Sequence[GaussianRational], den: Sequence[GaussianRational]) -> "RationalMap":
        return cls.make(Polynomial.make(num), Polynomial.make(den))

    @property
    def degree(self) -> int:
        return max(self.num.degree, self.den.degree, 0)

    def is_constant(self) -> bool:
        return self.degree == 0

    def apply(self, p: ProjPoint) -> ProjPoint:
        d = self.degree
        nu = _homogeneous_eval(self.num.coeffs, d, p.u, p.v)
        de = _homogeneous_eval(self.den.coeffs, d, p.u, p.v)
        return ProjPoint.make(nu, de)

    def __call__(self, p: ProjPoint) -> ProjPoint:
        return self.apply(p)

    def postcompose(self, m: Moebius) -> "RationalMap":
        """m after self."""
        return RationalMap.make(
            self.num.scale(m.a) + self.den.scale(m.b),
            self.num.scale(m.c) + self.den.scale(m.d),
        )

    def precompose(self, m: Moebius) -> "RationalMap":
        """self after m, by homogeneous substitution."""
        d = self.degree
        top = Polynomial.make([m.b, m.a])
        bot = Polynomial.make([m.d, m.c])
        tops = [Polynomial.constant(GR_ONE)]
        bots = [Polynomial.constant(GR_ONE)]
        for _ in range(d):
            tops.append(tops[-1] * top)
            bots.append(bots[-1] * bot)
        new_num = Polynomial.zero()
        new_den = Polynomial.zero()
        for i in range(d + 1):
            piece = tops[i] * bots[d - i]
            if i < len(self.num.coeffs) and not self.num.coeffs[i].is_zero():
                new_num = new_num + piece.scale(self.num.coeffs[i])
            if i < len(self.den.coeffs) and not self.den.coeffs[i].is_zero():
                new_den = new_den + piece.scale(self.den.coeffs[i])
        return RationalMap.make(new_num, new_den)

    def to_moebius(self) -> Moebius:
        if self.degree != 1:
            raise ValueError("only degree-1 maps are Moebius transformations")
        n, d = self.num.coeffs, self.den.coeffs
        a = n[1] if len(n) > 1 else GR_ZERO
        b = n[0] if len(n) > 0 else GR_ZERO
        c = d[1] if len(d) > 1 else GR_ZERO
        e = d[0] if len(d) > 0 else GR_ZERO
        return Moebius.make(a, b, c, e)


def identity_map() -> RationalMap:
    return RationalMap.from_coeffs([GR_ZERO, GR_ONE], [GR_ONE])


def moebius_as_map(m: Moebius) -> RationalMap:
    return RationalMap.from_coeffs([m.b, m.a], [m.d, m.c])


def local_degree(f: RationalMap, p: ProjPoint) -> int:
    """Multiplicity of p in the fiber of f over f(p).

    With q = f(p), the polynomial g = q.v * num - q.u * den carries the fiber:
    a finite p contributes its root multiplicity in g; the point at infinity
    contributes deg(f) - deg(g).
    """
    if f.is_constant():
        raise ValueError("local degree of a constant map is undefined")
    q = f.apply(p)
    g = f.num.scale(q.v) - f.den.scale(q.u)
    if g.is_zero():  # pragma: no cover - impossible for reduced nonconstant maps
        raise ValueError("degenerate fiber polynomial")
    if p.is_infinity():
        return f.degree - g.degree
    return g.root_multiplicity(p.to_affine())
