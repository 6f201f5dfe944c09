"""Stable combinatorial trees marked by a finite label set.

A marked tree has the labels as its leaves and internal vertices of valence
at least three.  Up to isomorphism fixing the labels, such a tree is the
same data as an admissible set of partitions of the label set; both
directions of that correspondence are implemented here, together with the
small tree-walking utilities the rest of the package relies on.

Vertices are heterogeneous: leaves are label strings, internal vertices are
opaque integers that never participate in equality of the classified data.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Optional, Union

from .errors import (
    EmptySet,
    InvalidIncidence,
    InvalidFamily,
    LeafSetMismatch,
    NotAdmissible,
    SingleVertexTree,
)

Vertex = Union[str, int]
Edge = frozenset  # of two vertices
Block = frozenset  # of labels
Partition = frozenset  # of Blocks
PartitionSet = frozenset  # of Partitions


def vertex_key(v: Vertex) -> tuple:
    """Total order over mixed leaf/internal vertices (leaves first)."""
    return (0, v) if isinstance(v, str) else (1, v)


def edge_of(a: Vertex, b: Vertex) -> Edge:
    if a == b:
        raise ValueError("self-loop is not an edge")
    return frozenset((a, b))


def partition_sort_key(p: Partition) -> tuple:
    return tuple(sorted(tuple(sorted(b)) for b in p))


@dataclass(frozen=True, slots=True)
class MarkedTree:
    leaves: frozenset
    internal: frozenset
    edges: frozenset

    @classmethod
    def make(cls, leaves: Iterable[str], internal: Iterable[int],
             edges: Iterable[Iterable[Vertex]]) -> "MarkedTree":
        t = cls(
            frozenset(leaves),
            frozenset(internal),
            frozenset(frozenset(e) for e in edges),
        )
        problems = validate_tree(t)
        if problems:
            raise InvalidFamily("invalid marked tree", witness=problems)
        return t

    @property
    def vertices(self) -> frozenset:
        return self.leaves | self.internal


@functools.lru_cache(maxsize=None)
def adjacency(t: MarkedTree) -> dict:
    adj: dict[Vertex, tuple] = {v: () for v in t.vertices}
    for e in t.edges:
        a, b = tuple(e)
        adj[a] = adj[a] + (b,)
        adj[b] = adj[b] + (a,)
    return {v: tuple(sorted(ns, key=vertex_key)) for v, ns in adj.items()}


def neighbors(t: MarkedTree, v: Vertex) -> tuple:
    return adjacency(t)[v]


def validate_tree(t: MarkedTree) -> list[str]:
    """Diagnostics for the stability invariants; empty list means valid."""
    problems: list[str] = []
    if len(t.leaves) < 3:
        problems.append(f"marked set has {len(t.leaves)} < 3 labels")
    if t.leaves & t.internal:
        problems.append("leaf labels and internal ids overlap")
    verts = t.leaves | t.internal
    adj: dict[Vertex, list] = {v: [] for v in verts}
    for e in t.edges:
        ends = tuple(e)
        if len(ends) != 2:
            problems.append(f"edge {sorted(map(str, ends))} does not have two endpoints")
            continue
        a, b = ends
        if a not in verts or b not in verts:
            problems.append(f"edge endpoint outside the vertex set: {sorted(map(str, ends))}")
            continue
        adj[a].append(b)
        adj[b].append(a)
    if problems:
        return problems
    if len(t.edges) != len(verts) - 1:
        problems.append("edge count does not match a tree")
    # connectivity
    if verts:
        seen = set()
        stack = [next(iter(verts))]
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            stack.extend(adj[v])
        if seen != verts:
            problems.append("graph is disconnected")
    for x in sorted(t.leaves):
        if len(adj[x]) != 1:
            problems.append(f"leaf {x!r} has valence {len(adj[x])} != 1")
    for v in sorted(t.internal):
        if len(adj[v]) < 3:
            problems.append(f"internal vertex {v} has valence {len(adj[v])} < 3 (not stable)")
    return problems


def branch(t: MarkedTree, v: Vertex, toward: Vertex) -> Block:
    """Labels whose path to v starts with the edge {v, toward}."""
    if toward not in neighbors(t, v):
        raise InvalidIncidence(f"{toward!r} is not adjacent to {v!r}")
    seen = {v, toward}
    stack = [toward]
    leaves = set()
    while stack:
        w = stack.pop()
        if isinstance(w, str):
            leaves.add(w)
        for n in neighbors(t, w):
            if n not in seen:
                seen.add(n)
                stack.append(n)
    return frozenset(leaves)


@functools.lru_cache(maxsize=None)
def partition_at(t: MarkedTree, v: int) -> Partition:
    """The partition of the labels induced by the branches at v."""
    return frozenset(branch(t, v, n) for n in neighbors(t, v))


def tree_partitions(t: MarkedTree) -> PartitionSet:
    """The classifying set of partitions, one per internal vertex."""
    return frozenset(partition_at(t, v) for v in t.internal)


@dataclass(frozen=True, slots=True)
class AdmissibilityViolation:
    condition: int
    detail: str
    partition: Optional[Partition] = None
    block: Optional[Block] = None


def is_admissible(ps: Iterable[Partition], labels: Optional[frozenset] = None
                  ) -> Optional[AdmissibilityViolation]:
    """Check the three admissibility conditions; None means admissible.

    Returns the first violated condition (by index 1, 2, 3) with a witness.
    """
    parts = sorted(set(ps), key=partition_sort_key)
    if labels is None:
        if not parts:
            return None
        labels = frozenset().union(*parts[0])
    for p in parts:
        blocks = list(p)
        union = frozenset().union(*blocks) if blocks else frozenset()
        if union != labels or any(not b for b in blocks):
            return AdmissibilityViolation(0, "not a partition of the label set", p)
        total = sum(len(b) for b in blocks)
        if total != len(labels):
            return AdmissibilityViolation(0, "blocks are not pairwise disjoint", p)
    for p in parts:
        if len(p) < 3:
            return AdmissibilityViolation(1, f"partition has {len(p)} < 3 blocks", p)
    for p in parts:
        for b in sorted(p, key=lambda b: tuple(sorted(b))):
            if len(b) == 1:
                continue
            complement = labels - b
            if not any(complement in q for q in parts):
                return AdmissibilityViolation(
                    2, "non-singleton block has no partner partition containing its complement",
                    p, b)
    for p1, p2 in combinations(parts, 2):
        shared = p1 & p2
        if shared:
            return AdmissibilityViolation(
                3, "distinct partitions share a block", p1, next(iter(shared)))
    return None


def tree_from_partitions(ps: Iterable[Partition]) -> MarkedTree:
    """Build the stable tree classified by an admissible partition set.

    Internal ids are the ranks of the partitions in canonical sort order, so
    the construction is deterministic.
    """
    parts = sorted(set(ps), key=partition_sort_key)
    if not parts:
        raise NotAdmissible("empty partition set does not describe a tree")
    violation = is_admissible(parts)
    if violation is not None:
        raise NotAdmissible("partition set is not admissible", witness=violation)
    labels = frozenset().union(*parts[0])
    edges: set[Edge] = set()
    for (i, p1), (j, p2) in combinations(list(enumerate(parts)), 2):
        if any((labels - b) in p2 for b in p1):
            edges.add(edge_of(i, j))
    for i, p in enumerate(parts):
        for b in p:
            if len(b) == 1:
                edges.add(edge_of(i, next(iter(b))))
    t = MarkedTree(
        frozenset(labels),
        frozenset(range(len(parts))),
        frozenset(edges),
    )
    problems = validate_tree(t)
    if problems:
        raise NotAdmissible("partition set does not assemble into a stable tree",
                            witness=problems)
    if tree_partitions(t) != frozenset(parts):
        raise NotAdmissible("assembled tree does not reproduce the partition set")
    return t


def trees_isomorphic(t1: MarkedTree, t2: MarkedTree) -> bool:
    """Isomorphism fixing the labels, decided through the partition sets."""
    if t1.leaves != t2.leaves:
        raise LeafSetMismatch("trees are marked by different label sets")
    return tree_partitions(t1) == tree_partitions(t2)


def block_of(p: Partition, x: str) -> Block:
    for b in p:
        if x in b:
            return b
    raise KeyError(x)


def separating_vertex(t: MarkedTree, triple: tuple[str, str, str]) -> int:
    """The unique internal vertex with the three labels in distinct branches."""
    x0, x1, x2 = triple
    if len({x0, x1, x2}) != 3:
        raise ValueError("separating vertex requires three distinct labels")
    hits = []
    for v in sorted(t.internal):
        p = partition_at(t, v)
        if len({block_of(p, x0), block_of(p, x1), block_of(p, x2)}) == 3:
            hits.append(v)
    if len(hits) != 1:
        raise InvalidFamily(
            f"triple {triple} separated by {len(hits)} vertices in an invalid tree")
    return hits[0]


def peripheral_internal(t: MarkedTree) -> int:
    """An internal vertex adjacent to exactly one internal vertex (smallest id)."""
    if len(t.internal) < 2:
        raise SingleVertexTree("tree has a single internal vertex")
    for v in sorted(t.internal):
        internal_neighbors = [n for n in neighbors(t, v) if isinstance(n, int)]
        if len(internal_neighbors) == 1:
            return v
    raise InvalidFamily("no peripheral internal vertex found")  # pragma: no cover


def convex_hull(t: MarkedTree, vs: Iterable[Vertex]) -> tuple[frozenset, frozenset]:
    """Smallest connected subtree containing vs, as (vertices, edges)."""
    wanted = set(vs)
    if not wanted:
        raise EmptySet("convex hull of the empty set")
    missing = wanted - t.vertices
    if missing:
        raise EmptySet(f"vertices {sorted(map(str, missing))} are not in the tree")
    verts = set(t.vertices)
    edges = {tuple(sorted(e, key=vertex_key)) for e in t.edges}
    degree: dict[Vertex, int] = {v: 0 for v in verts}
    incident: dict[Vertex, set] = {v: set() for v in verts}
    for e in edges:
        a, b = e
        degree[a] += 1
        degree[b] += 1
        incident[a].add(e)
        incident[b].add(e)
    # repeatedly prune unwanted leaves of the current subgraph
    queue = [v for v in verts if degree[v] <= 1 and v not in wanted]
    while queue:
        v = queue.pop()
        if v not in verts or v in wanted or degree[v] > 1:
            continue
        verts.remove(v)
        for e in list(incident[v]):
            a, b = e
            other = b if a == v else a
            edges.discard(e)
            incident[a].discard(e)
            incident[b].discard(e)
            degree[other] -= 1
            degree[v] -= 1
            if degree[other] <= 1 and other not in wanted:
                queue.append(other)
    return frozenset(verts), frozenset(frozenset(e) for e in edges)


def representative_triple(p: Partition) -> tuple[str, str, str]:
    """Lexicographically smallest triple hitting three distinct blocks."""
    labels = sorted(frozenset().union(*p))
    x0 = labels[0]
    b0 = block_of(p, x0)
    x1 = next(x for x in labels if x not in b0)
    b1 = block_of(p, x1)
    x2 = next(x for x in labels if x not in b0 and x not in b1)
    return (x0, x1, x2)


def enumerate_stable_trees(labels: Iterable[str]) -> Iterator[MarkedTree]:
    """Exhaustively enumerate stable trees on the given labels, each once.

    Attaching label n to every tree on the first n-1 labels, either at an
    internal vertex or along an edge (subdividing it), produces every stable
    shape exactly once: removing the last leaf and smoothing inverts it.
    """
    labs = sorted(set(labels))
    if len(labs) < 3:
        raise EmptySet("stable trees need at least three labels")
    base = MarkedTree.make(labs[:3], [0], [(labs[0], 0), (labs[1], 0), (labs[2], 0)])
    current = [base]
    for x in labs[3:]:
        nxt: list[MarkedTree] = []
        for t in current:
            fresh = max(t.internal) + 1
            for v in sorted(t.internal):
                nxt.append(MarkedTree.make(
                    t.leaves | {x}, t.internal,
                    set(t.edges) | {edge_of(x, v)}))
            for e in sorted(t.edges, key=lambda e: tuple(sorted(map(vertex_key, e)))):
                a, b = tuple(e)
                rest = set(t.edges) - {e}
                rest |= {edge_of(a, fresh), edge_of(fresh, b), edge_of(x, fresh)}
                nxt.append(MarkedTree.make(
                    t.leaves | {x}, t.internal | {fresh}, rest))
        current = nxt
    return iter(current)
