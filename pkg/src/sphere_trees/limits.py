"""Limit stable trees of degenerating families, exactly and numerically.

A degenerating one-parameter configuration is a Laurent family: one Laurent
point per label.  Its limit tree is computed triple by triple: the chart
values of every quadruple are Laurent cross-ratios, their leading values
cluster the labels into one partition per triple, and the distinct
partitions assemble into the stable limit tree with the chart markings as
vertex markings.  A degenerating marked rational map is handled the same
way, with a rescaling normalization on the target picking out one fiber map
per source vertex.

The numeric mode runs the same pipeline on sampled snapshots, accepting a
quadruple once its rational extrapolant to the limit has settled within
tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .covers import Portrait, TreeCover, validate_cover
from .errors import (
    AdmissibilityFailure,
    CollisionAtEpsilon,
    ConstantLimit,
    InconsistentClustering,
    InvalidFamily,
    InvariantBreach,
    MarkedSetTooSmall,
    NotStabilized,
)
from .laurent import (
    LaurentMap,
    LaurentMoebius,
    LaurentPoint,
    laurent_points_equal,
)
from .moduli import MarkedSphere, TreeOfSpheres, marking_dict
from .projective import Moebius, ProjPoint, moebius_from_three
from .rational import RationalMap
from .trees import (
    MarkedTree,
    Partition,
    Vertex,
    branch,
    is_admissible,
    neighbors,
    partition_sort_key,
    representative_triple,
    separating_vertex,
    tree_from_partitions,
)


# ---------------------------------------------------------------------------
# exact families


@dataclass(frozen=True, slots=True)
class LaurentFamily:
    labels: frozenset
    paths: tuple  # sorted (label, LaurentPoint) pairs

    @classmethod
    def make(cls, paths: Mapping[str, LaurentPoint]) -> "LaurentFamily":
        if len(paths) < 3:
            raise MarkedSetTooSmall("a family needs at least three labels")
        items = sorted(paths.items())
        for (x1, p1), (x2, p2) in combinations(items, 2):
            if laurent_points_equal(p1, p2):
                raise InvalidFamily(f"paths of {x1!r} and {x2!r} coincide")
        return cls(frozenset(paths), tuple(items))

    def path(self, x: str) -> LaurentPoint:
        return dict(self.paths)[x]

    def reparametrize(self, k: int) -> "LaurentFamily":
        """Substitute eps -> eps^k in every path."""
        return LaurentFamily.make({x: p.substitute_power(k) for x, p in self.paths})

    def twist(self, m: Moebius) -> "LaurentFamily":
        """Apply a constant Moebius map to every path."""
        lm = LaurentMoebius.from_constant(m)
        return LaurentFamily.make({x: lm.apply(p) for x, p in self.paths})

    def evaluate(self, eps: Fraction) -> MarkedSphere:
        try:
            points = {x: p.evaluate(eps) for x, p in self.paths}
        except ValueError as exc:
            raise CollisionAtEpsilon(str(exc)) from exc
        values = list(points.values())
        if len(set(values)) != len(values):
            raise CollisionAtEpsilon(f"family members collide at eps = {eps}")
        return MarkedSphere.make(points)


def _leading_ratio(u, v) -> ProjPoint:
    if u.is_zero():
        return ProjPoint.of(0)
    if v.is_zero():
        return ProjPoint.infinity()
    vu, vv = u.valuation(), v.valuation()
    if vu > vv:
        return ProjPoint.of(0)
    if vu < vv:
        return ProjPoint.infinity()
    return ProjPoint.make(u.leading(), v.leading())


def _limit_chart(fam: LaurentFamily, triple: tuple[str, str, str]) -> dict:
    from .laurent import laurent_bracket

    paths = dict(fam.paths)
    p0, p1, pinf = (paths[x] for x in triple)
    k_num = laurent_bracket(p1, pinf)
    k_den = laurent_bracket(p1, p0)
    out = {triple[0]: ProjPoint.of(0), triple[1]: ProjPoint.of(1),
           triple[2]: ProjPoint.infinity()}
    for x in paths:
        if x in out:
            continue
        p = paths[x]
        out[x] = _leading_ratio(laurent_bracket(p, p0) * k_num,
                                laurent_bracket(p, pinf) * k_den)
    return out


def limit_tree(fam: LaurentFamily) -> TreeOfSpheres:
    """The exact limit stable tree of a degenerating Laurent family.

    Every triple contributes the fiber partition of its limit chart values;
    the distinct partitions are admissible and classify the limit tree, and
    each vertex is marked by the chart of its representative triple.
    """
    labels = sorted(fam.labels)
    partitions: dict[Partition, tuple[str, str, str]] = {}
    charts: dict[tuple[str, str, str], dict] = {}
    for triple in combinations(labels, 3):
        alpha = _limit_chart(fam, triple)
        fibers: dict[ProjPoint, set] = {}
        for x, q in alpha.items():
            fibers.setdefault(q, set()).add(x)
        part = frozenset(frozenset(b) for b in fibers.values())
        charts[triple] = alpha
        partitions.setdefault(part, triple)
    violation = is_admissible(partitions.keys(), frozenset(labels))
    if violation is not None:
        raise AdmissibilityFailure("collected partitions are not admissible",
                                   witness=violation)
    shape = tree_from_partitions(partitions.keys())
    parts = sorted(partitions.keys(), key=partition_sort_key)
    marking = {}
    for i, part in enumerate(parts):
        rep = representative_triple(part)
        alpha = charts.get(rep) or _limit_chart(fam, rep)
        row = {}
        for n in neighbors(shape, i):
            b = branch(shape, i, n)
            row[n] = alpha[next(iter(b))]
        marking[i] = row
    return TreeOfSpheres.make(shape, marking)


# ---------------------------------------------------------------------------
# numeric families


NumericPoint = tuple[complex, complex]  # homogeneous, scaled to unit norm


def _numeric_point(value) -> NumericPoint:
    """Accepts complex, (re, im) pairs, or None / "inf" for infinity."""
    if value is None or value == "inf":
        return (1.0 + 0j, 0j)
    if isinstance(value, (tuple, list)):
        value = complex(value[0], value[1])
    z = complex(value)
    n = max(abs(z), 1.0)
    return (z / n, 1.0 / n)


def chordal(p: NumericPoint, q: NumericPoint) -> float:
    np_ = (abs(p[0]) ** 2 + abs(p[1]) ** 2) ** 0.5
    nq = (abs(q[0]) ** 2 + abs(q[1]) ** 2) ** 0.5
    return 2.0 * abs(p[0] * q[1] - q[0] * p[1]) / (np_ * nq)


def _numeric_cross_ratio(p0, p1, pinf, p) -> NumericPoint:
    def br(a, b):
        return a[0] * b[1] - b[0] * a[1]

    u = br(p, p0) * br(p1, pinf)
    v = br(p, pinf) * br(p1, p0)
    n = max(abs(u), abs(v))
    if n == 0.0:
        return (0j, 0j)
    return (u / n, v / n)


def _bs_extrapolate(eps: Sequence[float], values: Sequence[complex]) -> complex:
    """Rational (Bulirsch-Stoer) extrapolation of the values to eps = 0.

    Rational extrapolation stays accurate when the sampled function has
    poles near the sampled range, which polynomial extrapolation does not.
    """
    n = len(eps)
    tableau = [[0j] * n for _ in range(n)]
    for i in range(n):
        tableau[i][0] = values[i]
        for k in range(1, i + 1):
            num = tableau[i][k - 1] - tableau[i - 1][k - 1]
            den2 = (tableau[i][k - 1] - tableau[i - 1][k - 2]) if k >= 2 \
                else tableau[i][k - 1]
            if den2 == 0:
                tableau[i][k] = tableau[i][k - 1]
                continue
            d = (eps[i - k] / eps[i]) * (1 - num / den2) - 1
            tableau[i][k] = tableau[i][k - 1] + (num / d if d != 0 else 0)
    return tableau[n - 1][n - 1]


def _extrapolate(eps: Sequence[float], pts: Sequence[NumericPoint]) -> NumericPoint:
    # extrapolate in the affine chart suggested by the sample nearest the limit
    u, v = pts[0]
    if abs(u) <= abs(v):
        vals = [p[0] / p[1] for p in pts]
        return _numeric_point(_bs_extrapolate(eps, vals))
    vals = [p[1] / p[0] for p in pts]
    w = _bs_extrapolate(eps, vals)
    if w == 0:
        return (1.0 + 0j, 0j)
    return _numeric_point(1.0 / w)


@dataclass(frozen=True)
class NumericConfigSequence:
    """Snapshots of a degenerating configuration at known parameter values."""

    labels: tuple
    snapshots: tuple   # per snapshot: tuple of NumericPoint aligned with labels
    eps: tuple         # per-snapshot degeneration parameter, decreasing
    tolerance: float = 1e-6
    stability_window: int = 5

    @classmethod
    def make(cls, snapshots: Sequence[Mapping[str, object]], eps: Sequence[float],
             tolerance: float = 1e-6, stability_window: int = 5) -> "NumericConfigSequence":
        if not snapshots:
            raise InvalidFamily("no snapshots supplied")
        labels = tuple(sorted(snapshots[0]))
        if len(labels) < 3:
            raise MarkedSetTooSmall("snapshots need at least three labels")
        if len(eps) != len(snapshots):
            raise InvalidFamily("one eps value per snapshot is required")
        if len(set(eps)) != len(eps):
            raise InvalidFamily("eps values must be distinct")
        if any(e <= 0 for e in eps):
            raise InvalidFamily("eps values must be positive")
        if tolerance <= 0 or stability_window < 2:
            raise InvalidFamily("tolerance must be positive and window at least 2")
        rows = []
        for snap in snapshots:
            if tuple(sorted(snap)) != labels:
                raise InvalidFamily("snapshots do not share a label set")
            rows.append(tuple(_numeric_point(snap[x]) for x in labels))
        return cls(labels, tuple(rows), tuple(float(e) for e in eps),
                   float(tolerance), int(stability_window))


@dataclass(frozen=True)
class NumericTreeOfSpheres:
    """Limit tree with floating markings; shape and clustering are exact sets."""

    shape: MarkedTree
    marking: tuple  # sorted (vertex, ((label, affine complex or None), ...))

    def partitions(self) -> frozenset:
        from .trees import tree_partitions
        return tree_partitions(self.shape)


_SUPPORT_POINTS = 9
_LADDER_SPAN = 12.0


def _ladder_nodes(eps: Sequence[float], skip: int) -> list[int]:
    """Geometric support ladder anchored at the (skip+1)-th smallest parameter.

    Tightly clustered support points amplify the cancellation noise of
    nearly-degenerate snapshots, so the ladder spreads geometrically across
    the sampled range (up to a capped span), smallest parameter first.
    """
    order = sorted(range(len(eps)), key=lambda i: eps[i])[skip:]
    count = min(_SUPPORT_POINTS, len(order))
    lo, hi = eps[order[0]], eps[order[-1]]
    span = min(_LADDER_SPAN, hi / lo)
    ratio = max(span ** (1.0 / max(count - 1, 1)), 1.0001)
    nodes = [order[0]]
    target = lo * ratio
    for i in order[1:]:
        if len(nodes) == count:
            break
        if eps[i] >= target * 0.999:
            nodes.append(i)
            target = eps[i] * ratio
    return nodes


def numeric_limit_tree(seq: NumericConfigSequence) -> NumericTreeOfSpheres:
    """Numeric counterpart of limit_tree on sampled snapshots.

    Each quadruple is extrapolated to the limit along a geometric support
    ladder; the last stability_window anchor choices give one estimate each,
    and the quadruple is settled when those values agree within tolerance in
    the chordal metric.  Label clustering at the tolerance must then be an
    equivalence relation.
    """
    w = seq.stability_window
    labels = seq.labels
    index = {x: i for i, x in enumerate(labels)}
    if len(seq.snapshots) < w + 1:
        raise NotStabilized("not enough snapshots for the stability window",
                            witness={"snapshots": len(seq.snapshots), "window": w})
    ladders = []
    for skip in range(w):
        node_idx = _ladder_nodes(seq.eps, skip)
        ladders.append(([seq.eps[i] for i in node_idx],
                        [seq.snapshots[i] for i in node_idx]))

    unsettled = []
    limits: dict[tuple, NumericPoint] = {}
    for triple in combinations(labels, 3):
        i0, i1, i2 = (index[x] for x in triple)
        for x in labels:
            ix = index[x]
            estimates = []
            for node_eps, node_snaps in ladders:
                series = [
                    _numeric_cross_ratio(snap[i0], snap[i1], snap[i2], snap[ix])
                    for snap in node_snaps
                ]
                estimates.append(_extrapolate(node_eps, series))
            if any(chordal(estimates[0], e) > seq.tolerance for e in estimates[1:]):
                unsettled.append((triple, x))
            limits[(triple, x)] = estimates[0]
    if unsettled:
        raise NotStabilized("quadruples did not settle within tolerance",
                            witness=[list(t) + [x] for t, x in unsettled])

    partitions: dict[Partition, tuple] = {}
    for triple in combinations(labels, 3):
        values = {x: limits[(triple, x)] for x in labels}
        part = _cluster(values, seq.tolerance)
        partitions.setdefault(part, triple)
    violation = is_admissible(partitions.keys(), frozenset(labels))
    if violation is not None:
        raise AdmissibilityFailure("numeric partitions are not admissible",
                                   witness=violation)
    shape = tree_from_partitions(partitions.keys())
    parts = sorted(partitions.keys(), key=partition_sort_key)
    marking = []
    for i, part in enumerate(parts):
        rep = representative_triple(part)
        row = []
        for x in labels:
            u, v = limits[(rep, x)]
            affine = None if abs(v) <= seq.tolerance * abs(u) else u / v
            row.append((x, affine))
        marking.append((i, tuple(row)))
    return NumericTreeOfSpheres(shape, tuple(marking))


def _cluster(values: Mapping[str, NumericPoint], tolerance: float) -> Partition:
    labels = sorted(values)
    parent = {x: x for x in labels}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x, y in combinations(labels, 2):
        if chordal(values[x], values[y]) <= tolerance:
            parent[find(x)] = find(y)
    blocks: dict[str, set] = {}
    for x in labels:
        blocks.setdefault(find(x), set()).add(x)
    for block in blocks.values():
        for x, y in combinations(sorted(block), 2):
            if chordal(values[x], values[y]) > tolerance:
                raise InconsistentClustering(
                    "tolerance closeness is not transitive",
                    witness=[x, y])
    return frozenset(frozenset(b) for b in blocks.values())


# ---------------------------------------------------------------------------
# rescaling limits of map families


def rescale_limit(f_eps: LaurentMap, base: tuple[LaurentPoint, LaurentPoint, LaurentPoint]
                  ) -> tuple[LaurentMoebius, RationalMap]:
    """Normalize a degenerating map family and take its exact leading limit.

    The Moebius family sends the images of the three base points to
    (0, 1, inf); the limit divides out the minimal coefficient valuation,
    sets eps to zero, and reduces over Q(i).  A constant limit signals an
    unsuitable base choice.
    """
    if f_eps.degree < 1:
        raise ValueError("map family must be nonconstant")
    images = tuple(f_eps.evaluate(p) for p in base)
    m = LaurentMoebius.from_three(*images)
    return m, f_eps.postcompose(m).leading_limit()


# ---------------------------------------------------------------------------
# cover families and their limits


@dataclass(frozen=True, slots=True)
class CoverFamily:
    portrait: Portrait
    y_family: LaurentFamily
    z_family: LaurentFamily
    map_family: LaurentMap

    @classmethod
    def make(cls, portrait: Portrait, y_family: LaurentFamily,
             z_family: LaurentFamily, map_family: LaurentMap) -> "CoverFamily":
        if y_family.labels != portrait.y_labels or z_family.labels != portrait.z_labels:
            raise InvalidFamily("family label sets do not match the portrait")
        for a in sorted(portrait.y_labels):
            image = map_family.evaluate(y_family.path(a))
            if not laurent_points_equal(image, z_family.path(portrait.f(a))):
                raise InvalidFamily(
                    f"map family does not send the path of {a!r} to the path of F({a!r})")
        if map_family.degree != portrait.d:
            raise InvalidFamily(
                f"map family degree {map_family.degree} != portrait degree {portrait.d}")
        for eps in (Fraction(1, 7), Fraction(1, 11), Fraction(1, 13)):
            try:
                if map_family.specialize(eps).degree != portrait.d:
                    raise InvalidFamily(
                        f"map family degenerates at generic eps = {eps}")
                break
            except ZeroDivisionError:  # pragma: no cover - unlucky sample point
                continue
        return cls(portrait, y_family, z_family, map_family)


def limit_cover(fam: CoverFamily) -> TreeCover:
    """Limit of a degenerating cover family as a cover between limit trees.

    Every internal source vertex is normalized by its chart family; target
    normalizations are searched through the chart families of label triples
    of the target family in lexicographic order, retrying on ConstantLimit;
    the successful triple selects the image vertex and the chart comparison
    lands the limit map in the chart of the limit target tree.
    """
    source = limit_tree(fam.y_family)
    target = limit_tree(fam.z_family)
    zlabels = sorted(fam.z_family.labels)

    vmap: dict[Vertex, Vertex] = dict(fam.portrait.fmap)
    maps: dict[int, RationalMap] = {}
    for v in sorted(source.shape.internal):
        triple = _vertex_triple(source, v)
        phi = LaurentMoebius.from_three(*(fam.y_family.path(x) for x in triple))
        conjugated = fam.map_family.precompose(phi.inverse())
        found = None
        for ztriple in combinations(zlabels, 3):
            m = LaurentMoebius.from_three(*(fam.z_family.path(c) for c in ztriple))
            try:
                limit = conjugated.postcompose(m).leading_limit()
            except ConstantLimit:
                continue
            found = (ztriple, limit)
            break
        if found is None:
            raise ConstantLimit(
                "no target normalization yields a nonconstant limit",
                witness={"vertex": v})
        ztriple, limit = found
        w = separating_vertex(target.shape, ztriple)
        a_w = marking_dict(target, w)
        comparison = moebius_from_three(
            a_w[ztriple[0]], a_w[ztriple[1]], a_w[ztriple[2]]).inverse()
        maps[v] = limit.postcompose(comparison)
        vmap[v] = w
    cover = TreeCover.make(source, target, vmap, maps)
    violations = validate_cover(cover, expected_portrait=fam.portrait)
    if violations:
        raise InvariantBreach("assembled limit is not a valid cover",
                              witness=violations)
    return cover


def _vertex_triple(t: TreeOfSpheres, v: int) -> tuple[str, str, str]:
    from .trees import partition_at
    return representative_triple(partition_at(t.shape, v))
