"""Exact Laurent polynomials in a degeneration parameter.

One-parameter families are written as finite Laurent polynomials in eps over
Q(i); taking a limit as eps -> 0 becomes valuation arithmetic and stays
exact.  Points of a family are homogeneous pairs of Laurent polynomials,
rational maps of a family carry Laurent-polynomial coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import ConstantLimit, DegenerateTriple, ZeroFamily
from .gaussian import GR_ONE, GR_ZERO, GaussianRational
from .projective import Moebius, ProjPoint
from .rational import Polynomial, RationalMap


@dataclass(frozen=True, slots=True)
class LaurentPoly:
    """Sparse terms (exponent, coefficient), ascending, no zero coefficients."""

    terms: tuple[tuple[int, GaussianRational], ...]

    @classmethod
    def make(cls, terms: Mapping[int, GaussianRational] | Iterable[tuple[int, GaussianRational]]) -> "LaurentPoly":
        acc: dict[int, GaussianRational] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for e, c in items:
            cur = acc.get(e, GR_ZERO) + c
            if cur.is_zero():
                acc.pop(e, None)
            else:
                acc[e] = cur
        return cls(tuple(sorted(acc.items())))

    @classmethod
    def constant(cls, c: GaussianRational) -> "LaurentPoly":
        return cls(()) if c.is_zero() else cls(((0, c),))

    @classmethod
    def eps(cls, k: int = 1) -> "LaurentPoly":
        return cls(((k, GR_ONE),))

    def is_zero(self) -> bool:
        return not self.terms

    def valuation(self) -> int:
        if self.is_zero():
            raise ZeroFamily("valuation of the zero Laurent element is undefined")
        return self.terms[0][0]

    def leading(self) -> GaussianRational:
        if self.is_zero():
            raise ZeroFamily("zero Laurent element has no leading coefficient")
        return self.terms[0][1]

    def coefficient(self, e: int) -> GaussianRational:
        for exp, c in self.terms:
            if exp == e:
                return c
        return GR_ZERO

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        return LaurentPoly.make(list(self.terms) + list(other.terms))

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        acc: dict[int, GaussianRational] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = e1 + e2
                cur = acc.get(e, GR_ZERO) + c1 * c2
                if cur.is_zero():
                    acc.pop(e, None)
                else:
                    acc[e] = cur
        return LaurentPoly(tuple(sorted(acc.items())))

    def scale(self, c: GaussianRational) -> "LaurentPoly":
        if c.is_zero():
            return LaurentPoly(())
        return LaurentPoly(tuple((e, x * c) for e, x in self.terms))

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by eps^k."""
        return LaurentPoly(tuple((e + k, c) for e, c in self.terms))

    def substitute_power(self, k: int) -> "LaurentPoly":
        """Reparameterize eps -> eps^k (k >= 1)."""
        if k < 1:
            raise ValueError("power substitution requires k >= 1")
        return LaurentPoly(tuple((e * k, c) for e, c in self.terms))

    def evaluate(self, eps: Fraction) -> GaussianRational:
        if eps <= 0:
            raise ValueError("families are evaluated at eps > 0")
        acc = GR_ZERO
        for e, c in self.terms:
            scale = GaussianRational.make(eps ** e)
            acc = acc + c * scale
        return acc


LP_ZERO = LaurentPoly(())
LP_ONE = LaurentPoly.constant(GR_ONE)


@dataclass(frozen=True, slots=True)
class LaurentPoint:
    """Homogeneous pair (u : v) of Laurent polynomials, canonicalized.

    Canonical form: the common power of eps is divided out so the minimal
    valuation is 0, and both components are divided by the leading unit of
    the preferred component (v when it achieves valuation 0, else u).
    """

    u: LaurentPoly
    v: LaurentPoly

    @classmethod
    def make(cls, u: LaurentPoly, v: LaurentPoly) -> "LaurentPoint":
        if u.is_zero() and v.is_zero():
            raise ZeroFamily("(0 : 0) is not a point of the family")
        vals = [p.valuation() for p in (u, v) if not p.is_zero()]
        k = min(vals)
        u, v = u.shift(-k), v.shift(-k)
        if not v.is_zero() and v.valuation() == 0:
            unit = v.leading()
        else:
            unit = u.leading()
        inv = unit.inverse()
        return cls(u.scale(inv), v.scale(inv))

    @classmethod
    def from_point(cls, p: ProjPoint) -> "LaurentPoint":
        return cls.make(LaurentPoly.constant(p.u), LaurentPoly.constant(p.v))

    @classmethod
    def from_poly(cls, u: LaurentPoly) -> "LaurentPoint":
        return cls.make(u, LP_ONE)

    def substitute_power(self, k: int) -> "LaurentPoint":
        return LaurentPoint.make(self.u.substitute_power(k), self.v.substitute_power(k))

    def evaluate(self, eps: Fraction) -> ProjPoint:
        return ProjPoint.make(self.u.evaluate(eps), self.v.evaluate(eps))


def laurent_bracket(p: LaurentPoint, q: LaurentPoint) -> LaurentPoly:
    return p.u * q.v - q.u * p.v


def laurent_points_equal(p: LaurentPoint, q: LaurentPoint) -> bool:
    return laurent_bracket(p, q).is_zero()


def laurent_leading_value(q: LaurentPoint) -> ProjPoint:
    """Limit of the path as eps -> 0, by valuation comparison."""
    if q.u.is_zero():
        return ProjPoint.of(0)
    if q.v.is_zero():
        return ProjPoint.infinity()
    vu, vv = q.u.valuation(), q.v.valuation()
    if vu > vv:
        return ProjPoint.of(0)
    if vu < vv:
        return ProjPoint.infinity()
    return ProjPoint.make(q.u.leading(), q.v.leading())


def laurent_cross_ratio(p0: LaurentPoint, p1: LaurentPoint, pinf: LaurentPoint,
                        p: LaurentPoint) -> LaurentPoint:
    """Homogeneous cross-ratio ((p-p0)(p1-pinf) : (p-pinf)(p1-p0))."""
    return LaurentPoint.make(
        laurent_bracket(p, p0) * laurent_bracket(p1, pinf),
        laurent_bracket(p, pinf) * laurent_bracket(p1, p0),
    )


@dataclass(frozen=True, slots=True)
class LaurentMoebius:
    """A Moebius family: 2x2 matrix of Laurent polynomials, det != 0."""

    a: LaurentPoly
    b: LaurentPoly
    c: LaurentPoly
    d: LaurentPoly

    @classmethod
    def make(cls, a, b, c, d) -> "LaurentMoebius":
        if (a * d - b * c).is_zero():
            raise ValueError("singular Moebius family")
        return cls(a, b, c, d)

    @classmethod
    def from_constant(cls, m: Moebius) -> "LaurentMoebius":
        k = LaurentPoly.constant
        return cls(k(m.a), k(m.b), k(m.c), k(m.d))

    @classmethod
    def from_three(cls, p0: LaurentPoint, p1: LaurentPoint, pinf: LaurentPoint) -> "LaurentMoebius":
        """Family of charts sending (p0, p1, pinf) to (0, 1, inf) for each eps."""
        if (laurent_bracket(p0, p1).is_zero() or laurent_bracket(p0, pinf).is_zero()
                or laurent_bracket(p1, pinf).is_zero()):
            raise DegenerateTriple("chart family requires pairwise distinct paths")
        k_num = laurent_bracket(p1, pinf)
        k_den = laurent_bracket(p1, p0)
        return cls.make(
            p0.v * k_num,
            -(p0.u * k_num),
            pinf.v * k_den,
            -(pinf.u * k_den),
        )

    def apply(self, p: LaurentPoint) -> LaurentPoint:
        return LaurentPoint.make(self.a * p.u + self.b * p.v, self.c * p.u + self.d * p.v)

    def inverse(self) -> "LaurentMoebius":
        return LaurentMoebius.make(self.d, -self.b, -self.c, self.a)

    def compose(self, other: "LaurentMoebius") -> "LaurentMoebius":
        return LaurentMoebius.make(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )


def _trim(coeffs: Sequence[LaurentPoly]) -> tuple[LaurentPoly, ...]:
    cs = list(coeffs)
    while cs and cs[-1].is_zero():
        cs.pop()
    return tuple(cs)


@dataclass(frozen=True, slots=True)
class LaurentMap:
    """A rational map whose polynomial coefficients are Laurent polynomials."""

    num: tuple[LaurentPoly, ...]
    den: tuple[LaurentPoly, ...]

    @classmethod
    def make(cls, num: Sequence[LaurentPoly], den: Sequence[LaurentPoly]) -> "LaurentMap":
        num_t, den_t = _trim(num), _trim(den)
        if not num_t and not den_t:
            raise ValueError("zero Laurent map")
        return cls(num_t, den_t)

    @classmethod
    def from_exact(cls, f: RationalMap) -> "LaurentMap":
        k = LaurentPoly.constant
        return cls.make([k(c) for c in f.num.coeffs], [k(c) for c in f.den.coeffs])

    @property
    def degree(self) -> int:
        return max(len(self.num) - 1, len(self.den) - 1, 0)

    def coeff_valuation(self) -> int:
        vals = [c.valuation() for c in self.num + self.den if not c.is_zero()]
        return min(vals)

    def evaluate(self, p: LaurentPoint) -> LaurentPoint:
        d = self.degree
        upow = [LP_ONE]
        vpow = [LP_ONE]
        for _ in range(d):
            upow.append(upow[-1] * p.u)
            vpow.append(vpow[-1] * p.v)
        nu = LP_ZERO
        de = LP_ZERO
        for i in range(d + 1):
            mono = upow[i] * vpow[d - i]
            if i < len(self.num) and not self.num[i].is_zero():
                nu = nu + mono * self.num[i]
            if i < len(self.den) and not self.den[i].is_zero():
                de = de + mono * self.den[i]
        return LaurentPoint.make(nu, de)

    def postcompose(self, m: LaurentMoebius) -> "LaurentMap":
        d = self.degree
        num = [self.num[i] if i < len(self.num) else LP_ZERO for i in range(d + 1)]
        den = [self.den[i] if i < len(self.den) else LP_ZERO for i in range(d + 1)]
        new_num = [m.a * num[i] + m.b * den[i] for i in range(d + 1)]
        new_den = [m.c * num[i] + m.d * den[i] for i in range(d + 1)]
        return LaurentMap.make(new_num, new_den)

    def precompose(self, m: LaurentMoebius) -> "LaurentMap":
        d = self.degree
        top = (m.b, m.a)   # b + a*w as a degree-1 poly in w
        bot = (m.d, m.c)
        tops: list[list[LaurentPoly]] = [[LP_ONE]]
        bots: list[list[LaurentPoly]] = [[LP_ONE]]
        for _ in range(d):
            tops.append(_poly_mul_lin(tops[-1], top))
            bots.append(_poly_mul_lin(bots[-1], bot))
        new_num = [LP_ZERO] * (d + 1)
        new_den = [LP_ZERO] * (d + 1)
        for i in range(d + 1):
            piece = _poly_mul(tops[i], bots[d - i])
            ci_num = self.num[i] if i < len(self.num) else LP_ZERO
            ci_den = self.den[i] if i < len(self.den) else LP_ZERO
            for j, pc in enumerate(piece):
                if not ci_num.is_zero():
                    new_num[j] = new_num[j] + pc * ci_num
                if not ci_den.is_zero():
                    new_den[j] = new_den[j] + pc * ci_den
        return LaurentMap.make(new_num, new_den)

    def leading_limit(self) -> RationalMap:
        """Divide by eps^(minimal valuation), set eps = 0, reduce over Q(i).

        Raises ConstantLimit when the resulting map is constant.
        """
        v = self.coeff_valuation()
        num0 = Polynomial.make([c.shift(-v).coefficient(0) for c in self.num])
        den0 = Polynomial.make([c.shift(-v).coefficient(0) for c in self.den])
        if den0.is_zero():
            raise ConstantLimit("limit map is identically infinity")
        f = RationalMap.make(num0, den0)
        if f.is_constant():
            raise ConstantLimit("limit map is constant")
        return f

    def specialize(self, eps: Fraction) -> RationalMap:
        num = Polynomial.make([c.evaluate(eps) for c in self.num])
        den = Polynomial.make([c.evaluate(eps) for c in self.den])
        return RationalMap.make(num, den)


def _poly_mul_lin(p: list[LaurentPoly], lin: tuple[LaurentPoly, LaurentPoly]) -> list[LaurentPoly]:
    b0, b1 = lin
    out = [LP_ZERO] * (len(p) + 1)
    for i, c in enumerate(p):
        if c.is_zero():
            continue
        out[i] = out[i] + c * b0
        out[i + 1] = out[i + 1] + c * b1
    return out


def _poly_mul(p: list[LaurentPoly], q: list[LaurentPoly]) -> list[LaurentPoly]:
    out = [LP_ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a.is_zero():
            continue
        for j, b in enumerate(q):
            if b.is_zero():
                continue
            out[i + j] = out[i + j] + a * b
    return out
