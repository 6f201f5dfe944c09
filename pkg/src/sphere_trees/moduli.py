"""Marked spheres, trees of spheres, and the cross-ratio embedding.

A tree of spheres is a stable tree together with, at each internal vertex,
an injective assignment of its edges to exact points of a sphere.  The
derived vertex markings, the normalized charts of separating triples, the
embedding by all quadruple cross-ratios, isomorphism testing, canonical
representatives, and restriction of the marking to a sub-label-set all live
here.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Optional

from .errors import (
    InvalidFamily,
    InvariantBreach,
    LeafSetMismatch,
    MarkedSetTooSmall,
    NotASubset,
)
from .projective import Moebius, ProjPoint, moebius_from_three
from .trees import (
    MarkedTree,
    Partition,
    branch,
    neighbors,
    partition_at,
    partition_sort_key,
    representative_triple,
    separating_vertex,
    tree_partitions,
    vertex_key,
)


@dataclass(frozen=True, slots=True)
class MarkedSphere:
    labels: frozenset
    points: tuple  # sorted (label, ProjPoint) pairs

    @classmethod
    def make(cls, points: Mapping[str, ProjPoint]) -> "MarkedSphere":
        if len(points) < 3:
            raise MarkedSetTooSmall("a marked sphere needs at least three labels")
        values = list(points.values())
        if len(set(values)) != len(values):
            raise InvalidFamily("marking is not injective")
        return cls(frozenset(points), tuple(sorted(points.items())))

    def point(self, x: str) -> ProjPoint:
        return self.mapping[x]

    @property
    def mapping(self) -> dict:
        return dict(self.points)


@dataclass(frozen=True, slots=True)
class TreeOfSpheres:
    shape: MarkedTree
    marking: tuple  # sorted (vertex id, ((neighbor, ProjPoint), ...)) pairs

    @classmethod
    def make(cls, shape: MarkedTree, marking: Mapping[int, Mapping] ) -> "TreeOfSpheres":
        if set(marking) != set(shape.internal):
            raise InvalidFamily("marking must cover exactly the internal vertices")
        rows = []
        for v in sorted(shape.internal):
            row = dict(marking[v])
            expected = set(neighbors(shape, v))
            if set(row) != expected:
                raise InvalidFamily(
                    f"marking at vertex {v} must assign exactly its edges",
                    witness=sorted(map(str, expected)))
            pts = list(row.values())
            if len(set(pts)) != len(pts):
                raise InvalidFamily(f"edge marking at vertex {v} is not injective")
            rows.append((v, tuple(sorted(row.items(), key=lambda kv: vertex_key(kv[0])))))
        return cls(shape, tuple(rows))

    @property
    def labels(self) -> frozenset:
        return self.shape.leaves

    def edge_points(self, v: int) -> dict:
        for w, row in self.marking:
            if w == v:
                return dict(row)
        raise KeyError(v)


@functools.lru_cache(maxsize=None)
def marking_map(t: TreeOfSpheres, v: int) -> tuple:
    """The derived marking a_v: every label gets the point of its branch."""
    pts = t.edge_points(v)
    out = {}
    for n, p in pts.items():
        for x in branch(t.shape, v, n):
            out[x] = p
    return tuple(sorted(out.items()))


def marking_dict(t: TreeOfSpheres, v: int) -> dict:
    return dict(marking_map(t, v))


def sphere_as_tree(s: MarkedSphere) -> TreeOfSpheres:
    """The single-vertex tree of spheres identified with a marked sphere."""
    labels = sorted(s.labels)
    shape = MarkedTree.make(labels, [0], [(x, 0) for x in labels])
    return TreeOfSpheres.make(shape, {0: {x: s.point(x) for x in labels}})


def t_chart(t: TreeOfSpheres, triple: tuple[str, str, str]
            ) -> tuple[int, Moebius, dict]:
    """Separating vertex, normalizing chart, and the chart marking.

    The chart is the Moebius map sending the marked images of the triple to
    (0, 1, inf); the returned mapping is its composition with the vertex
    marking on every label.
    """
    v = separating_vertex(t.shape, triple)
    a_v = marking_dict(t, v)
    sigma = moebius_from_three(a_v[triple[0]], a_v[triple[1]], a_v[triple[2]])
    return v, sigma, {x: sigma.apply(p) for x, p in a_v.items()}


@dataclass(frozen=True, slots=True)
class Embedding:
    """All chart values (alpha_t(x)) indexed by (triple, label).

    Values where the label lies in the triple are the forced 0/1/inf, so the
    table is total and embeds three-label trees as well.
    """

    values: tuple  # sorted (((x0, x1, xinf), x), ProjPoint)

    def value(self, triple: tuple[str, str, str], x: str) -> ProjPoint:
        return self.mapping[(triple, x)]

    @property
    def mapping(self) -> dict:
        return dict(self.values)


# chart changes induced by permuting a normalized triple, on (u : v)
_ANHARMONIC = {
    (0, 1, 2): lambda u, v: (u, v),          # identity
    (0, 2, 1): lambda u, v: (u, u - v),      # z / (z - 1)
    (1, 0, 2): lambda u, v: (v - u, v),      # 1 - z
    (1, 2, 0): lambda u, v: (u - v, u),      # (z - 1) / z
    (2, 0, 1): lambda u, v: (v, v - u),      # 1 / (1 - z)
    (2, 1, 0): lambda u, v: (v, u),          # 1 / z
}


@functools.lru_cache(maxsize=8192)
def embed(t: TreeOfSpheres) -> Embedding:
    labels = sorted(t.labels)
    out = {}
    for combo in combinations(labels, 3):
        _, _, base = t_chart(t, combo)
        for perm, transform in _ANHARMONIC.items():
            triple = (combo[perm[0]], combo[perm[1]], combo[perm[2]])
            for x in labels:
                p = base[x]
                out[(triple, x)] = ProjPoint.make(*transform(p.u, p.v))
    return Embedding(tuple(sorted(out.items())))


def spheres_iso(t1: TreeOfSpheres, t2: TreeOfSpheres) -> bool:
    """Isomorphism of trees of spheres, decided by embedding equality."""
    if t1.labels != t2.labels:
        raise LeafSetMismatch("trees of spheres are marked by different label sets")
    if tree_partitions(t1.shape) != tree_partitions(t2.shape):
        return False
    return embed(t1) == embed(t2)


def canonical_form(t: TreeOfSpheres) -> TreeOfSpheres:
    """Canonical representative of the isomorphism class.

    Internal ids become the canonical ranks of their partitions and every
    vertex is re-charted by the chart of the lexicographically smallest
    triple it separates, so two trees are isomorphic iff their canonical
    forms are equal.
    """
    parts = {v: partition_at(t.shape, v) for v in t.shape.internal}
    order = sorted(t.shape.internal, key=lambda v: partition_sort_key(parts[v]))
    rename = {v: i for i, v in enumerate(order)}

    def rn(v):
        return rename[v] if isinstance(v, int) else v

    shape = MarkedTree.make(
        t.shape.leaves,
        range(len(order)),
        [tuple(rn(x) for x in e) for e in t.shape.edges],
    )
    marking = {}
    for v in order:
        triple = representative_triple(parts[v])
        a_v = marking_dict(t, v)
        sigma = moebius_from_three(a_v[triple[0]], a_v[triple[1]], a_v[triple[2]])
        marking[rename[v]] = {
            rn(n): sigma.apply(p) for n, p in t.edge_points(v).items()
        }
    return TreeOfSpheres.make(shape, marking)


def induced_partition(t: TreeOfSpheres, v: int, sub: frozenset) -> Optional[Partition]:
    """Partition of the sub-label-set at v, or None when fewer than 3 blocks."""
    blocks = [b & sub for b in partition_at(t.shape, v)]
    blocks = [b for b in blocks if b]
    if len(blocks) < 3:
        return None
    return frozenset(blocks)


def project(t: TreeOfSpheres, sub: Iterable[str]) -> TreeOfSpheres:
    """Restrict the marked set, keeping vertices that separate triples of it.

    Each kept vertex contributes its induced partition and its derived
    marking restricted to the sub-label-set; the shape is rebuilt from the
    induced partitions.
    """
    sub_set = frozenset(sub)
    if not sub_set <= t.labels:
        raise NotASubset("projection target is not a subset of the marked set")
    if len(sub_set) < 3:
        raise MarkedSetTooSmall("projection target needs at least three labels")
    from .trees import tree_from_partitions

    found: dict[Partition, int] = {}
    for v in sorted(t.shape.internal):
        p = induced_partition(t, v, sub_set)
        if p is None:
            continue
        if p in found:
            raise InvariantBreach(
                "two vertices induce the same partition of the sub-label-set")
        found[p] = v
    if not found:
        raise InvariantBreach(
            "no vertex separates a triple of the sub-label-set")
    shape = tree_from_partitions(found.keys())
    parts = sorted(found.keys(), key=partition_sort_key)
    marking = {}
    for i, p in enumerate(parts):
        v = found[p]
        a_v = marking_dict(t, v)
        row = {}
        for n in neighbors(shape, i):
            b = branch(shape, i, n)
            row[n] = a_v[next(iter(b))]
        marking[i] = row
    return TreeOfSpheres.make(shape, marking)


def twist(t: TreeOfSpheres, maps: Mapping[int, Moebius]) -> TreeOfSpheres:
    """Post-compose each vertex marking with a Moebius map (same class)."""
    marking = {}
    for v in t.shape.internal:
        m = maps.get(v, Moebius.identity())
        marking[v] = {n: m.apply(p) for n, p in t.edge_points(v).items()}
    return TreeOfSpheres.make(t.shape, marking)


def iso_of_spheres(t1: TreeOfSpheres, t2: TreeOfSpheres
                   ) -> Optional[tuple[dict, dict]]:
    """Explicit isomorphism (vertex map, per-vertex Moebius) or None.

    The vertex map matches internal vertices through their partitions and is
    the identity on labels; each Moebius is pinned by three branch points and
    verified on the full edge marking.
    """
    if t1.labels != t2.labels:
        raise LeafSetMismatch("trees of spheres are marked by different label sets")
    parts1 = {v: partition_at(t1.shape, v) for v in t1.shape.internal}
    parts2 = {partition_at(t2.shape, v): v for v in t2.shape.internal}
    if frozenset(parts1.values()) != frozenset(parts2):
        return None
    vmap: dict = {x: x for x in t1.labels}
    mmap: dict = {}
    for v1, p in parts1.items():
        v2 = parts2[p]
        vmap[v1] = v2
        triple = representative_triple(p)
        a1 = marking_dict(t1, v1)
        a2 = marking_dict(t2, v2)
        m = moebius_from_three(a1[triple[0]], a1[triple[1]], a1[triple[2]])
        m2 = moebius_from_three(a2[triple[0]], a2[triple[1]], a2[triple[2]])
        iso = m2.inverse().compose(m)
        if any(iso.apply(a1[x]) != a2[x] for x in t1.labels):
            return None
        mmap[v1] = iso
    return vmap, mmap
