"""Synthesize a degenerating Laurent family whose limit is a given tree.

Working from a root vertex outward, each vertex chart is normalized so the
parent direction sits at infinity; a child sphere is then embedded into its
parent chart by the affine map c -> p + eps^k * c at the edge's attaching
point p.  Composing these embeddings along the path from each leaf's carrier
vertex to the root yields polynomial paths in eps, and the limit tree of the
resulting family recovers the input up to isomorphism.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

from .errors import CollisionAtEpsilon
from .gaussian import GR_ONE, GR_ZERO, gr
from .laurent import LaurentPoint, LaurentPoly
from .limits import LaurentFamily
from .moduli import MarkedSphere, TreeOfSpheres
from .projective import Moebius, ProjPoint
from .trees import neighbors


@dataclass(frozen=True, slots=True)
class PlumbingPlan:
    root: int
    normalizers: tuple  # sorted (vertex id, Moebius)
    exponents: tuple    # sorted ((parent, child), k) for tree edges away from root

    def normalizer(self, v: int) -> Moebius:
        return dict(self.normalizers)[v]


def _root_normalizer(points: list[ProjPoint]) -> Moebius:
    """Move infinity (when marked) to the smallest free positive integer."""
    if not any(p.is_infinity() for p in points):
        return Moebius.identity()
    taken = {p.to_affine() for p in points if not p.is_infinity()}
    k = 1
    while gr(k) in taken:
        k += 1
    c = gr(k)
    # w -> c + 1/(w - c): sends infinity to c and only c (unmarked) to infinity
    return Moebius.make(c, GR_ONE - c * c, GR_ONE, -c)


def _child_normalizer(parent_point: ProjPoint) -> Moebius:
    """Send the parent-edge attaching point to infinity."""
    if parent_point.is_infinity():
        return Moebius.identity()
    p = parent_point.to_affine()
    return Moebius.make(GR_ZERO, GR_ONE, GR_ONE, -p)


def build_plan(t: TreeOfSpheres, exponent: int = 1,
               exponents: Optional[Mapping[tuple, int]] = None) -> PlumbingPlan:
    if exponent < 1:
        raise ValueError("scale exponents must be positive")
    root = min(t.shape.internal)
    normalizers = {root: _root_normalizer(list(t.edge_points(root).values()))}
    edge_exponents = {}
    stack = [root]
    seen = {root}
    while stack:
        v = stack.pop()
        for n in neighbors(t.shape, v):
            if isinstance(n, int) and n not in seen:
                seen.add(n)
                parent_point = t.edge_points(n)[v]
                normalizers[n] = _child_normalizer(parent_point)
                k = exponent if exponents is None else exponents.get((v, n), exponent)
                if k < 1:
                    raise ValueError("scale exponents must be positive")
                edge_exponents[(v, n)] = k
                stack.append(n)
    return PlumbingPlan(root, tuple(sorted(normalizers.items())),
                        tuple(sorted(edge_exponents.items())))


def plumb_family(t: TreeOfSpheres, plan: Optional[PlumbingPlan] = None,
                 exponent: int = 1) -> LaurentFamily:
    """A Laurent family of marked spheres degenerating to the given tree."""
    if plan is None:
        plan = build_plan(t, exponent)
    exps = dict(plan.exponents)
    # frames map a child chart affinely into the root chart
    offset: dict[int, LaurentPoly] = {plan.root: LaurentPoly.constant(GR_ZERO)}
    scale: dict[int, LaurentPoly] = {plan.root: LaurentPoly.constant(GR_ONE)}
    order = [plan.root]
    seen = {plan.root}
    while order:
        v = order.pop()
        nv = plan.normalizer(v)
        for n in neighbors(t.shape, v):
            if isinstance(n, int) and n not in seen:
                seen.add(n)
                p_edge = nv.apply(t.edge_points(v)[n]).to_affine()
                k = exps[(v, n)]
                offset[n] = offset[v] + scale[v] * LaurentPoly.constant(p_edge)
                scale[n] = scale[v] * LaurentPoly.eps(k)
                order.append(n)

    paths = {}
    for x in sorted(t.labels):
        u = neighbors(t.shape, x)[0]
        q = plan.normalizer(u).apply(t.edge_points(u)[x]).to_affine()
        value = offset[u] + scale[u] * LaurentPoly.constant(q)
        paths[x] = LaurentPoint.from_poly(value)
    return LaurentFamily.make(paths)


def sample_family(fam: LaurentFamily, eps: Fraction) -> MarkedSphere:
    """Evaluate the family at a positive rational eps; must stay injective."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    return fam.evaluate(eps)


def sample_with_retry(fam: LaurentFamily, eps: Fraction,
                      attempts: int = 32) -> tuple[Fraction, MarkedSphere]:
    """Halve eps past the finitely many collision values."""
    for _ in range(attempts):
        try:
            return eps, sample_family(fam, eps)
        except CollisionAtEpsilon:
            eps = eps / 2
    raise CollisionAtEpsilon(f"no collision-free sample found down to eps = {eps}")
