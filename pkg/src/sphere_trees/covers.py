"""Portraits and covers between trees of spheres.

A cover carries a tree map (leaves to leaves, internal to internal, edges to
edges) and one exact rational map per internal source vertex, equivariant on
the edge markings, with full fibers over every attaching point and coherent
local degrees across internal edges.  Validation certifies through the
degree ledger sum(local_degree - 1) = 2 deg - 2 that every critical point is
a marked point, so no root isolation is ever needed.

Reconstruction builds the unique cover with a given source tree and leaf
portrait by peeling a peripheral source vertex, pinning the corresponding
target sphere chart from the discovered attaching points, deriving the fiber
maps from their zero/pole divisors, and recursing on the completed
complement components.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

from .errors import (
    EmptySelection,
    InconsistentDegree,
    InvalidFamily,
    InvariantBreach,
    LeafSetMismatch,
    NotConnected,
    NotRealizable,
    OverlappingDivisors,
    PortraitMismatch,
    SphereTreesError,
    UnitOnDivisor,
)
from .gaussian import GR_ONE
from .moduli import (
    MarkedSphere,
    TreeOfSpheres,
    iso_of_spheres,
    sphere_as_tree,
    spheres_iso,
)
from .projective import P_INF, P_ONE, P_ZERO, ProjPoint
from .rational import Polynomial, RationalMap, local_degree
from .trees import (
    MarkedTree,
    Vertex,
    edge_of,
    neighbors,
    peripheral_internal,
    validate_tree,
    vertex_key,
)


# ---------------------------------------------------------------------------
# portraits


@dataclass(frozen=True, slots=True)
class Portrait:
    y_labels: frozenset
    z_labels: frozenset
    fmap: tuple    # sorted (y, z) pairs
    degmap: tuple  # sorted (y, k) pairs
    d: int

    @classmethod
    def make(cls, fmap: Mapping[str, str], degmap: Mapping[str, int], d: int) -> "Portrait":
        y = frozenset(fmap)
        if set(degmap) != set(y):
            raise InvalidFamily("degree map must be defined exactly on the source labels")
        if any(k < 1 for k in degmap.values()):
            raise InvalidFamily("local degrees must be positive")
        if d < 1:
            raise InvalidFamily("portrait degree must be positive")
        z = frozenset(fmap.values())
        return cls(y, z, tuple(sorted(fmap.items())), tuple(sorted(degmap.items())), d)

    def f(self, a: str) -> str:
        return dict(self.fmap)[a]

    def deg(self, a: str) -> int:
        return dict(self.degmap)[a]

    @property
    def f_dict(self) -> dict:
        return dict(self.fmap)

    @property
    def deg_dict(self) -> dict:
        return dict(self.degmap)


def validate_portrait(p: Portrait, allow_degree_one: bool = False) -> list[str]:
    """Diagnostics for the two degree-sum identities and d >= 2."""
    problems = []
    if p.d < 2 and not allow_degree_one:
        problems.append(f"portrait degree d = {p.d} < 2")
    total = sum(k - 1 for k in p.deg_dict.values())
    if total != 2 * p.d - 2:
        problems.append(f"sum of (deg - 1) is {total}, expected {2 * p.d - 2}")
    fibers: dict[str, int] = {z: 0 for z in p.z_labels}
    for a, z in p.fmap:
        fibers[z] += p.deg(a)
    for z in sorted(fibers):
        if fibers[z] != p.d:
            problems.append(f"fiber of {z!r} sums to {fibers[z]}, expected {p.d}")
    return problems


# ---------------------------------------------------------------------------
# covers


@dataclass(frozen=True, slots=True)
class TreeCover:
    source: TreeOfSpheres
    target: TreeOfSpheres
    vertex_map: tuple  # sorted (vertex, vertex) pairs
    maps: tuple        # sorted (internal id, RationalMap) pairs

    @classmethod
    def make(cls, source: TreeOfSpheres, target: TreeOfSpheres,
             vertex_map: Mapping[Vertex, Vertex],
             maps: Mapping[int, RationalMap]) -> "TreeCover":
        if set(vertex_map) != set(source.shape.vertices):
            raise InvalidFamily("vertex map must be defined on every source vertex")
        if set(maps) != set(source.shape.internal):
            raise InvalidFamily("one rational map per internal source vertex required")
        vm = tuple(sorted(vertex_map.items(), key=lambda kv: vertex_key(kv[0])))
        mp = tuple(sorted(maps.items()))
        return cls(source, target, vm, mp)

    @property
    def vm(self) -> dict:
        return dict(self.vertex_map)

    def map_at(self, v: int) -> RationalMap:
        return dict(self.maps)[v]


def carrier(shape: MarkedTree, leaf: str) -> int:
    """The unique internal vertex adjacent to a leaf."""
    return neighbors(shape, leaf)[0]


def leaf_degree(c: TreeCover, y: str) -> int:
    v = carrier(c.source.shape, y)
    return local_degree(c.map_at(v), c.source.edge_points(v)[y])


def _fiber_degree_sums(c: TreeCover) -> dict:
    sums: dict[int, int] = {w: 0 for w in c.target.shape.internal}
    for v in c.source.shape.internal:
        w = c.vm[v]
        if w in sums:
            sums[w] += c.map_at(v).degree
    return sums


def global_degree(c: TreeCover) -> int:
    """Common fiber degree sum over target vertices; errors when they differ."""
    sums = _fiber_degree_sums(c)
    values = sorted(set(sums.values()))
    if len(values) != 1:
        raise InconsistentDegree("fiber degree sums differ across target vertices",
                                 witness={str(k): v for k, v in sums.items()})
    return values[0]


def extract_portrait(c: TreeCover) -> Portrait:
    fmap = {y: c.vm[y] for y in c.source.labels}
    degmap = {y: leaf_degree(c, y) for y in c.source.labels}
    return Portrait.make(fmap, degmap, global_degree(c))


def validate_cover(c: TreeCover, expected_portrait: Optional[Portrait] = None) -> list[str]:
    """All cover invariants as diagnostics; empty list means valid."""
    problems = []
    problems += [f"source: {p}" for p in validate_tree(c.source.shape)]
    problems += [f"target: {p}" for p in validate_tree(c.target.shape)]
    if problems:
        return problems
    vm = c.vm
    for y in sorted(c.source.labels):
        if not isinstance(vm[y], str) or vm[y] not in c.target.labels:
            problems.append(f"leaf {y!r} does not map to a target leaf")
    for v in sorted(c.source.shape.internal):
        if not isinstance(vm[v], int) or vm[v] not in c.target.shape.internal:
            problems.append(f"internal vertex {v} does not map to a target internal vertex")
    if problems:
        return problems
    for e in sorted(c.source.shape.edges, key=lambda e: tuple(sorted(map(vertex_key, e)))):
        a, b = tuple(e)
        if vm[a] == vm[b] or edge_of(vm[a], vm[b]) not in c.target.shape.edges:
            problems.append(f"edge {sorted(map(str, e))} does not map to a target edge")
    if problems:
        return problems

    for v in sorted(c.source.shape.internal):
        w = vm[v]
        f = c.map_at(v)
        if f.degree < 1:
            problems.append(f"map at vertex {v} is constant")
            continue
        src_pts = c.source.edge_points(v)
        tgt_pts = c.target.edge_points(w)
        # equivariance on edge markings
        for n, p in src_pts.items():
            expected = tgt_pts[vm[n]]
            if f.apply(p) != expected:
                problems.append(
                    f"vertex {v}: image of the edge point toward {n!r} is not the "
                    f"marked point toward {vm[n]!r}")
        # full fibers over every attaching point of the target vertex
        degs = {n: local_degree(f, p) for n, p in src_pts.items()}
        for q_neighbor, q in sorted(tgt_pts.items(), key=lambda kv: vertex_key(kv[0])):
            total = sum(degs[n] for n, p in src_pts.items() if f.apply(p) == q)
            if total != f.degree:
                problems.append(
                    f"vertex {v}: fiber over the point toward {q_neighbor!r} sums to "
                    f"{total}, expected {f.degree}")
        # critical-point ledger: every critical point is a marked point
        ledger = sum(k - 1 for k in degs.values())
        if ledger != 2 * f.degree - 2:
            problems.append(
                f"vertex {v}: degree ledger {ledger} != {2 * f.degree - 2}")
    if problems:
        return problems

    for e in sorted(c.source.shape.edges, key=lambda e: tuple(sorted(map(vertex_key, e)))):
        a, b = tuple(e)
        if isinstance(a, int) and isinstance(b, int):
            da = local_degree(c.map_at(a), c.source.edge_points(a)[b])
            db = local_degree(c.map_at(b), c.source.edge_points(b)[a])
            if da != db:
                problems.append(
                    f"edge {sorted(map(str, e))}: local degrees {da} != {db} disagree")

    try:
        d = global_degree(c)
    except InconsistentDegree as exc:
        problems.append(str(exc))
        return problems
    portrait = extract_portrait(c)
    problems += validate_portrait(portrait, allow_degree_one=(d == 1))
    if expected_portrait is not None and portrait != expected_portrait:
        problems.append("leaf data does not reproduce the expected portrait")
    return problems


# ---------------------------------------------------------------------------
# divisor construction


def rational_from_divisors(zeros: Iterable[ProjPoint], poles: Iterable[ProjPoint],
                           unit_point: ProjPoint) -> RationalMap:
    """The unique map with the given zero/pole multisets and value 1 at unit_point.

    Points at infinity contribute through degree balancing instead of a
    linear factor.
    """
    zeros = list(zeros)
    poles = list(poles)
    if not zeros or len(zeros) != len(poles):
        raise InvalidFamily("zeros and poles must have equal positive total multiplicity")
    if set(zeros) & set(poles):
        raise OverlappingDivisors("zero and pole supports intersect",
                                  witness=[str(p) for p in set(zeros) & set(poles)])
    if unit_point in zeros or unit_point in poles:
        raise UnitOnDivisor("normalization point lies on the divisor")
    num = Polynomial.constant(GR_ONE)
    den = Polynomial.constant(GR_ONE)
    for p in zeros:
        if not p.is_infinity():
            num = num * Polynomial.make([-p.to_affine(), GR_ONE])
    for p in poles:
        if not p.is_infinity():
            den = den * Polynomial.make([-p.to_affine(), GR_ONE])
    f = RationalMap.make(num, den)
    value = f.apply(unit_point)
    scale = value.to_affine()  # finite and nonzero: unit avoids both divisors
    return RationalMap.make(f.num, f.den.scale(scale))


# ---------------------------------------------------------------------------
# restriction


def restrict_cover(c: TreeCover, selection: Iterable[Vertex],
                   component_root: Vertex) -> TreeCover:
    """Restrict to a connected open target vertex set and one preimage component.

    Cut edges become fresh leaves labeled "@<n>" on the source side and "@t:<n>"
    on the target side; the rational maps are unchanged.
    """
    selected = set(selection)
    if not selected:
        raise EmptySelection("empty target selection")
    if not selected <= c.target.shape.vertices:
        raise EmptySelection("selection contains vertices outside the target tree")
    if not any(isinstance(v, int) for v in selected):
        raise EmptySelection("selection contains no internal target vertex")
    # connectivity of the induced subgraph
    start = next(iter(selected))
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for n in neighbors(c.target.shape, v):
            if n in selected and n not in seen:
                seen.add(n)
                stack.append(n)
    if seen != selected:
        raise NotConnected("target selection is not connected")

    vm = c.vm
    preimage = {v for v in c.source.shape.vertices if vm[v] in selected}
    if component_root not in preimage:
        raise EmptySelection("component root does not map into the selection")
    comp = {component_root}
    stack = [component_root]
    while stack:
        v = stack.pop()
        for n in neighbors(c.source.shape, v):
            if n in preimage and n not in comp:
                comp.add(n)
                stack.append(n)

    tgt_tree, tgt_cuts = _complete(c.target, selected, "@t:")
    src_tree, src_cuts = _complete(c.source, comp, "@")

    new_vm: dict[Vertex, Vertex] = {}
    for v in comp:
        new_vm[v] = vm[v]
    for (u, outside), label in src_cuts.items():
        target_outside = vm[outside]
        key = (vm[u], target_outside)
        if key not in tgt_cuts:
            raise InvariantBreach("cut edge does not map to a target cut edge")
        new_vm[label] = tgt_cuts[key]
    new_maps = {v: c.map_at(v) for v in comp if isinstance(v, int)}
    return TreeCover.make(src_tree, tgt_tree, new_vm, new_maps)


def _complete(t: TreeOfSpheres, kept: set, prefix: str
              ) -> tuple[TreeOfSpheres, dict]:
    """Completion of a connected vertex subset: cut edges become fresh leaves."""
    boundary = []
    for v in sorted(kept, key=vertex_key):
        for n in neighbors(t.shape, v):
            if n not in kept:
                boundary.append((v, n))
    taken = {x for x in kept if isinstance(x, str)}
    cuts = {}
    counter = 0
    for pair in boundary:
        while f"{prefix}{counter}" in taken:
            counter += 1
        cuts[pair] = f"{prefix}{counter}"
        counter += 1
    leaves = {x for x in kept if isinstance(x, str)} | set(cuts.values())
    internal = {v for v in kept if isinstance(v, int)}
    edges = {e for e in t.shape.edges if set(e) <= kept}
    edges |= {edge_of(v, label) for (v, _), label in
              zip(cuts.keys(), cuts.values())}
    shape = MarkedTree.make(leaves, internal, edges)
    marking = {}
    for v in internal:
        row = {}
        for n, p in t.edge_points(v).items():
            row[cuts.get((v, n), n)] = p
        marking[v] = row
    return TreeOfSpheres.make(shape, marking), cuts


# ---------------------------------------------------------------------------
# reconstruction from the source tree and the portrait


def reconstruct_cover(source: TreeOfSpheres, portrait: Portrait) -> TreeCover:
    """The unique cover with the given source tree and leaf portrait.

    Raises NotRealizable with the first forced condition that fails.
    """
    problems = validate_portrait(portrait)
    if problems:
        raise NotRealizable("portrait is invalid", witness=problems)
    if source.labels != portrait.y_labels:
        raise LeafSetMismatch("source tree is not marked by the portrait's source labels")
    try:
        target, vmap, maps = _reconstruct(
            source, portrait.f_dict, portrait.deg_dict, portrait.z_labels)
        cover = TreeCover.make(source, target, vmap, maps)
    except NotRealizable:
        raise
    except SphereTreesError as exc:
        raise NotRealizable(f"forced construction failed: {exc}",
                            witness=getattr(exc, "witness", None)) from exc
    violations = validate_cover(cover, expected_portrait=portrait)
    if violations:
        raise NotRealizable("reconstructed object is not a valid cover",
                            witness=violations)
    return cover


def _fiber_sums(fmap: dict, degmap: dict, zlabels: frozenset) -> int:
    sums = {z: 0 for z in zlabels}
    for y, z in fmap.items():
        if z not in sums:
            raise NotRealizable(f"leaf {y!r} maps outside the target labels")
        sums[z] += degmap[y]
    values = sorted(set(sums.values()))
    if len(values) != 1 or values[0] < 1:
        raise NotRealizable("fiber degree sums are inconsistent",
                            witness={z: s for z, s in sorted(sums.items())})
    return values[0]


def _fiber_maps(source: TreeOfSpheres, fmap: dict, degmap: dict,
                fiber: list, z0: frozenset):
    """Maps f_w for every vertex in the fiber of the newly pinned target vertex.

    The chart is pinned with leaf edges at 0 and infinity (their multiplicities
    are portrait data); the unit slot takes the third leaf edge when one exists
    and the internal edge otherwise.  Returns the maps, the attaching points of
    the new target vertex, and the local degrees at internal edges.
    """
    zs = sorted(z0)
    zero_z, pole_z = zs[0], zs[-1] if len(zs) == 2 else zs[2]
    unit_leaf = zs[1] if len(zs) >= 3 else None

    maps: dict[int, RationalMap] = {}
    edge_mult: dict[tuple[int, int], int] = {}
    attach: dict[str, ProjPoint] = {zero_z: P_ZERO, pole_z: P_INF}
    if unit_leaf is not None:
        attach[unit_leaf] = P_ONE
    internal_value: Optional[ProjPoint] = None

    for w in fiber:
        pts = source.edge_points(w)
        leaf_pts = {n: p for n, p in pts.items() if isinstance(n, str)}
        internal_pts = {n: p for n, p in pts.items() if isinstance(n, int)}
        bad = sorted(y for y in leaf_pts if fmap[y] not in z0)
        if bad:
            raise NotRealizable(
                f"vertex {w}: leaves {bad} map outside the forced fiber labels")
        zeros = [p for y, p in leaf_pts.items() for _ in range(degmap[y])
                 if fmap[y] == zero_z]
        poles = [p for y, p in leaf_pts.items() for _ in range(degmap[y])
                 if fmap[y] == pole_z]
        if not zeros or len(zeros) != len(poles):
            raise NotRealizable(
                f"vertex {w}: zero/pole fibers have multiplicities "
                f"{len(zeros)} and {len(poles)}")
        if unit_leaf is not None:
            units = sorted((p for y, p in leaf_pts.items() if fmap[y] == unit_leaf),
                           key=ProjPoint.sort_key)
        else:
            units = sorted(internal_pts.values(), key=ProjPoint.sort_key)
        if not units:
            raise NotRealizable(f"vertex {w}: no candidate point for the unit slot")
        f = rational_from_divisors(zeros, poles, units[0])
        maps[w] = f

        values: dict[str, ProjPoint] = {}
        for y, p in sorted(leaf_pts.items()):
            q = f.apply(p)
            prior = values.setdefault(fmap[y], q)
            if q != prior:
                raise NotRealizable(
                    f"vertex {w}: fiber of {fmap[y]!r} maps to several points")
            if local_degree(f, p) != degmap[y]:
                raise NotRealizable(
                    f"vertex {w}: local degree at leaf {y!r} is not {degmap[y]}")
        for z, q in values.items():
            prior = attach.setdefault(z, q)
            if q != prior:
                raise NotRealizable(
                    f"attaching point of {z!r} differs between fiber vertices")
        ivalues = set()
        for n, p in sorted(internal_pts.items()):
            ivalues.add(f.apply(p))
            edge_mult[(w, n)] = local_degree(f, p)
        if len(ivalues) > 1:
            raise NotRealizable(
                f"vertex {w}: internal edges map to several points")
        if ivalues:
            q = ivalues.pop()
            if internal_value is None:
                internal_value = q
            elif internal_value != q:
                raise NotRealizable(
                    "internal-edge attaching point differs between fiber vertices")
        # full fibers over every attaching value seen at this vertex
        fiber_totals: dict[ProjPoint, int] = {}
        for n, p in pts.items():
            fiber_totals[f.apply(p)] = fiber_totals.get(f.apply(p), 0) + local_degree(f, p)
        for q, total in fiber_totals.items():
            if total != f.degree:
                raise NotRealizable(
                    f"vertex {w}: fiber over {q} sums to {total}, expected {f.degree}")
    points = list(attach.values()) + ([internal_value] if internal_value is not None else [])
    if len(set(points)) != len(points):
        raise NotRealizable("attaching points of the new target vertex collide")
    return maps, attach, internal_value, edge_mult


def _reconstruct(source: TreeOfSpheres, fmap: dict, degmap: dict,
                 zlabels: frozenset):
    """Recursive reconstruction; returns (target tree, vertex map, maps)."""
    _fiber_sums(fmap, degmap, zlabels)
    shape = source.shape

    if len(shape.internal) == 1:
        v = next(iter(shape.internal))
        if frozenset(fmap.values()) != zlabels:
            raise NotRealizable("single-vertex source does not cover every target label")
        maps, attach, _, _ = _fiber_maps(source, fmap, degmap, [v], zlabels)
        star = MarkedTree.make(zlabels, [0], [(z, 0) for z in zlabels])
        target = TreeOfSpheres.make(star, {0: dict(attach)})
        vmap: dict[Vertex, Vertex] = {v: 0}
        vmap.update(fmap)
        return target, vmap, maps

    v0 = peripheral_internal(shape)
    v0_leaves = [n for n in neighbors(shape, v0) if isinstance(n, str)]
    z0 = frozenset(fmap[y] for y in v0_leaves)
    if len(z0) < 2:
        raise NotRealizable(
            f"peripheral vertex {v0}: its leaves map to fewer than two target labels")
    fiber = sorted({carrier(shape, y) for y in fmap if fmap[y] in z0})
    for w in fiber:
        if any(isinstance(n, int) and n in fiber for n in neighbors(shape, w)):
            raise NotRealizable("two fiber vertices of the peeled target vertex are adjacent")
    maps, attach, internal_value, edge_mult = _fiber_maps(
        source, fmap, degmap, fiber, z0)
    if internal_value is None:
        raise NotRealizable("fiber vertices have no internal edge to continue along")
    if len(z0) == 2 and internal_value != P_ONE:  # pragma: no cover - forced by pinning
        raise InvariantBreach("unit-slot internal edge did not land at 1")

    removed = set(fiber) | {y for y in fmap if fmap[y] in z0}
    remaining = shape.vertices - removed
    components: list[set] = []
    unseen = set(remaining)
    while unseen:
        root = min(unseen, key=vertex_key)
        comp = {root}
        stack = [root]
        while stack:
            x = stack.pop()
            for n in neighbors(shape, x):
                if n in remaining and n not in comp:
                    comp.add(n)
                    stack.append(n)
        unseen -= comp
        components.append(comp)
    components.sort(key=lambda c: vertex_key(min(c, key=vertex_key)))

    sub_z = (zlabels - z0) | {"@t"}
    results = []
    for comp in components:
        comp_tree, cuts = _complete_for_reconstruction(source, comp, fiber)
        sub_fmap = {y: fmap[y] for y in comp if isinstance(y, str)}
        sub_deg = {y: degmap[y] for y in comp if isinstance(y, str)}
        for (u, w), label in cuts.items():
            sub_fmap[label] = "@t"
            sub_deg[label] = edge_mult[(w, u)]
        results.append(_reconstruct(comp_tree, sub_fmap, sub_deg, sub_z) + (cuts,))

    ref_target, ref_vmap, ref_maps, ref_cuts = results[0]
    all_vmap: dict[Vertex, Vertex] = {}
    all_maps: dict[int, RationalMap] = dict(ref_maps)
    for v, w in ref_vmap.items():
        if not (isinstance(v, str) and v.startswith("@")):
            all_vmap[v] = w
    for tgt, vmp, mps, cuts in results[1:]:
        iso = iso_of_spheres(tgt, ref_target)
        if iso is None:
            raise NotRealizable("component reconstructions disagree on the target tree")
        ivmap, imoeb = iso
        for v, w in vmp.items():
            if isinstance(v, str) and v.startswith("@"):
                continue
            all_vmap[v] = ivmap[w]
        for v, f in mps.items():
            all_maps[v] = f.postcompose(imoeb[vmp[v]])

    # graft the peeled vertex back onto the merged target
    new_id = max(ref_target.shape.internal) + 1
    anchor = carrier(ref_target.shape, "@t")
    attach_anchor = ref_target.edge_points(anchor)["@t"]
    leaves = (ref_target.labels - {"@t"}) | z0
    internal = set(ref_target.shape.internal) | {new_id}
    edges = {e for e in ref_target.shape.edges if "@t" not in e}
    edges.add(edge_of(anchor, new_id))
    edges |= {edge_of(new_id, z) for z in z0}
    tshape = MarkedTree.make(leaves, internal, edges)
    marking = {}
    for w in ref_target.shape.internal:
        row = dict(ref_target.edge_points(w))
        if w == anchor:
            row.pop("@t")
            row[new_id] = attach_anchor
        marking[w] = row
    new_row: dict[Vertex, ProjPoint] = dict(attach)
    new_row[anchor] = internal_value
    marking[new_id] = new_row
    target = TreeOfSpheres.make(tshape, marking)

    for w in fiber:
        all_vmap[w] = new_id
    for y in fmap:
        if fmap[y] in z0:
            all_vmap[y] = fmap[y]
    all_maps.update(maps)
    return target, all_vmap, all_maps


def _complete_for_reconstruction(source: TreeOfSpheres, comp: set, fiber: list
                                 ) -> tuple[TreeOfSpheres, dict]:
    """Completion of a component: edges into the fiber become cut leaves."""
    boundary = []
    for v in sorted(comp, key=vertex_key):
        for n in neighbors(source.shape, v):
            if n in fiber:
                boundary.append((v, n))
    taken = {x for x in comp if isinstance(x, str)}
    cuts = {}
    counter = 0
    for pair in boundary:
        while f"@{counter}" in taken:
            counter += 1
        cuts[pair] = f"@{counter}"
        counter += 1
    leaves = {x for x in comp if isinstance(x, str)} | set(cuts.values())
    internal = {v for v in comp if isinstance(v, int)}
    edges = {e for e in source.shape.edges if set(e) <= comp}
    edges |= {edge_of(u, label) for (u, _), label in cuts.items()}
    shape = MarkedTree.make(leaves, internal, edges)
    marking = {}
    for v in internal:
        row = {}
        for n, p in source.edge_points(v).items():
            row[cuts.get((v, n), n)] = p
        marking[v] = row
    return TreeOfSpheres.make(shape, marking), cuts


# ---------------------------------------------------------------------------
# isomorphism of covers


def cover_iso(c1: TreeCover, c2: TreeCover) -> bool:
    """Covers are isomorphic iff their marked source trees are.

    The source class determines the cover, so the verdict only compares the
    sources; the induced target isomorphism and the per-vertex conjugacy
    squares are verified defensively and any discrepancy raises
    InvariantBreach.
    """
    p1, p2 = extract_portrait(c1), extract_portrait(c2)
    if p1 != p2:
        raise PortraitMismatch("covers carry different portraits")
    if not spheres_iso(c1.source, c2.source):
        return False
    iso = iso_of_spheres(c1.source, c2.source)
    if iso is None:
        raise InvariantBreach("equal embeddings without an explicit isomorphism")
    yvmap, ymoeb = iso

    wmap: dict = {z: z for z in c1.target.labels}
    for v1 in c1.source.shape.internal:
        w1, w2 = c1.vm[v1], c2.vm[yvmap[v1]]
        if wmap.setdefault(w1, w2) != w2:
            raise InvariantBreach("induced target vertex map is inconsistent")
    if set(wmap) != set(c1.target.shape.vertices):
        raise InvariantBreach("induced target vertex map misses vertices")

    zmoeb: dict = {}
    for w1 in sorted(c1.target.shape.internal):
        pts1 = c1.target.edge_points(w1)
        pts2 = c2.target.edge_points(wmap[w1])
        pairs = sorted(((n, p) for n, p in pts1.items()), key=lambda kv: vertex_key(kv[0]))
        from .projective import moebius_from_three
        src = [p for _, p in pairs[:3]]
        dst = [pts2[wmap[n]] for n, _ in pairs[:3]]
        m = moebius_from_three(*dst).inverse().compose(moebius_from_three(*src))
        for n, p in pairs:
            if m.apply(p) != pts2[wmap[n]]:
                raise InvariantBreach("induced target isomorphism breaks the marking")
        zmoeb[w1] = m

    for v1 in sorted(c1.source.shape.internal):
        f1, f2 = c1.map_at(v1), c2.map_at(yvmap[v1])
        left = f1.postcompose(zmoeb[c1.vm[v1]])
        right = f2.precompose(ymoeb[v1])
        if left != right:
            raise InvariantBreach("conjugacy square of the fiber maps does not commute")
    return True


# ---------------------------------------------------------------------------
# covers between marked spheres


@dataclass(frozen=True, slots=True)
class MarkedSphereCover:
    f: RationalMap
    y: MarkedSphere
    z: MarkedSphere


def validate_marked_cover(msc: MarkedSphereCover, portrait: Portrait) -> list[str]:
    problems = []
    if msc.y.labels != portrait.y_labels or msc.z.labels != portrait.z_labels:
        problems.append("marked spheres do not match the portrait label sets")
        return problems
    for a in sorted(portrait.y_labels):
        if msc.f.apply(msc.y.point(a)) != msc.z.point(portrait.f(a)):
            problems.append(f"f(y({a!r})) is not z(F({a!r}))")
        elif local_degree(msc.f, msc.y.point(a)) != portrait.deg(a):
            problems.append(f"local degree at y({a!r}) is not deg({a!r})")
    if msc.f.degree != portrait.d:
        problems.append(f"map degree {msc.f.degree} != portrait degree {portrait.d}")
    return problems


def cover_from_marked(msc: MarkedSphereCover, portrait: Portrait) -> TreeCover:
    """Lift a cover between marked spheres to single-vertex trees of spheres."""
    problems = validate_marked_cover(msc, portrait)
    if problems:
        raise InvalidFamily("not a marked-sphere cover for this portrait",
                            witness=problems)
    src = sphere_as_tree(msc.y)
    tgt = sphere_as_tree(msc.z)
    vmap: dict[Vertex, Vertex] = {0: 0}
    vmap.update(portrait.f_dict)
    return TreeCover.make(src, tgt, vmap, {0: msc.f})
