"""Dynamical systems of trees of spheres.

A cover together with a tree over a shared sub-label-set is a dynamical
system when that tree is compatible with both the source and the target,
i.e. equals their projections on the nose.  Whether some compatible tree
exists at all is decided on isomorphism classes: the two projections must be
isomorphic, and the source projection then serves as a witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .covers import TreeCover, cover_iso, extract_portrait
from .errors import NotASubset, PortraitMismatch
from .moduli import TreeOfSpheres, marking_dict, project, spheres_iso
from .trees import partition_at


@dataclass(frozen=True, slots=True)
class DynSystem:
    cover: TreeCover
    dyn_tree: TreeOfSpheres

    @property
    def labels(self) -> frozenset:
        return self.dyn_tree.labels


def compatible(t_x: TreeOfSpheres, t_y: TreeOfSpheres) -> bool:
    """Does t_x equal the projection of t_y on the nose?

    Vertices are matched through their partitions of the sub-label-set and
    the markings must agree pointwise, not merely up to Moebius changes.
    """
    if not t_x.labels <= t_y.labels:
        raise NotASubset("the first tree is not marked by a subset")
    projected = project(t_y, t_x.labels)
    parts_x = {partition_at(t_x.shape, v): v for v in t_x.shape.internal}
    parts_p = {partition_at(projected.shape, v): v for v in projected.shape.internal}
    if set(parts_x) != set(parts_p):
        return False
    for p, v in parts_x.items():
        if marking_dict(t_x, v) != marking_dict(projected, parts_p[p]):
            return False
    return spheres_iso(t_x, projected)


def validate_dyn(d: DynSystem) -> list[str]:
    """Diagnostics for the compatibility of the dynamical tree."""
    problems = []
    x = d.labels
    y = d.cover.source.labels
    z = d.cover.target.labels
    if not x <= y & z:
        problems.append("dynamical labels are not contained in both marked sets")
        return problems
    if not compatible(d.dyn_tree, d.cover.source):
        problems.append("dynamical tree is not compatible with the source")
    if not compatible(d.dyn_tree, d.cover.target):
        problems.append("dynamical tree is not compatible with the target")
    return problems


def dyn_membership(c: TreeCover, labels) -> tuple[bool, Optional[TreeOfSpheres]]:
    """Does the cover underlie a dynamical system over the given labels?

    True iff the source and target projections are isomorphic; the source
    projection is returned as the witness dynamical tree.
    """
    sub = frozenset(labels)
    if not sub <= c.source.labels & c.target.labels:
        raise NotASubset("labels must be marked in both the source and the target")
    p_source = project(c.source, sub)
    p_target = project(c.target, sub)
    if spheres_iso(p_source, p_target):
        return True, p_source
    return False, None


def synthesize_dyn(c: TreeCover, labels) -> Optional[DynSystem]:
    """A dynamical system underlain by the cover, or None.

    Membership is decided on isomorphism classes; compatibility, however, is
    an identity between representatives, so the target (and its fiber maps)
    are re-marked by the per-vertex comparison maps that carry its projection
    onto the witness.
    """
    from .covers import TreeCover as _TC
    from .moduli import induced_partition, iso_of_spheres, twist

    ok, witness = dyn_membership(c, labels)
    if not ok:
        return None
    sub = frozenset(labels)
    p_target = project(c.target, sub)
    iso = iso_of_spheres(p_target, witness)
    if iso is None:  # pragma: no cover - contradicts the membership verdict
        raise NotASubset("isomorphic projections without an explicit isomorphism")
    vmap_iso, moeb_iso = iso
    parts = {v: induced_partition(p_target, v, sub)
             for v in p_target.shape.internal}
    twists = {}
    for w in c.target.shape.internal:
        p = induced_partition(c.target, w, sub)
        if p is None:
            continue
        proj_vertex = next(v for v, q in parts.items() if q == p)
        twists[w] = moeb_iso[proj_vertex]
    target = twist(c.target, twists)
    maps = {}
    for v in c.source.shape.internal:
        w = c.vm[v]
        f = c.map_at(v)
        maps[v] = f.postcompose(twists[w]) if w in twists else f
    remarked = _TC.make(c.source, target, c.vm, maps)
    return DynSystem(remarked, witness)


def dyn_conjugate(d1: DynSystem, d2: DynSystem) -> bool:
    """Conjugacy of dynamical systems; cover isomorphism already decides it."""
    if d1.labels != d2.labels:
        raise PortraitMismatch("dynamical systems are marked by different label sets")
    if extract_portrait(d1.cover) != extract_portrait(d2.cover):
        raise PortraitMismatch("dynamical systems carry different portraits")
    return cover_iso(d1.cover, d2.cover)
