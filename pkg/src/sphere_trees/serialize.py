"""Canonical JSON encodings for every value the CLI reads or writes.

Scalars are reduced fraction strings "p/q" with positive q; complex scalars
are {"re", "im"} objects; points are homogeneous {"u", "v"} pairs with the
canonical representative (v = 1, or u = 1 for infinity).  Leaves appear as
label strings and internal vertices as integers; where JSON forces string
keys, an internal vertex id n is written "#n".  Labels must not start with
"#" or "@" (those prefixes are reserved for internal ids and cut leaves).

Output is canonicalized by sorted keys and a fixed layout, so identical
values serialize to identical bytes.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .covers import Portrait, TreeCover
from .dynamics import DynSystem
from .errors import SchemaError
from .gaussian import GaussianRational
from .laurent import LaurentMap, LaurentPoint, LaurentPoly
from .limits import CoverFamily, LaurentFamily, NumericConfigSequence, NumericTreeOfSpheres
from .moduli import Embedding, MarkedSphere, TreeOfSpheres
from .rational import Polynomial, RationalMap
from .trees import MarkedTree, Vertex, vertex_key


def canonical_dumps(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# scalars and points


def fraction_to_json(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def fraction_from_json(s: Any) -> Fraction:
    try:
        return Fraction(str(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"not a rational number: {s!r}") from exc


def complex_to_json(c: GaussianRational) -> dict:
    return {"re": fraction_to_json(c.re), "im": fraction_to_json(c.im)}


def complex_from_json(obj: Any) -> GaussianRational:
    if not isinstance(obj, dict) or set(obj) != {"re", "im"}:
        raise SchemaError(f"complex scalars are {{'re', 'im'}} objects, got {obj!r}")
    return GaussianRational(fraction_from_json(obj["re"]), fraction_from_json(obj["im"]))


def point_to_json(p) -> dict:
    return {"u": complex_to_json(p.u), "v": complex_to_json(p.v)}


def point_from_json(obj: Any):
    from .projective import ProjPoint
    if not isinstance(obj, dict) or set(obj) != {"u", "v"}:
        raise SchemaError(f"points are {{'u', 'v'}} objects, got {obj!r}")
    return ProjPoint.make(complex_from_json(obj["u"]), complex_from_json(obj["v"]))


# ---------------------------------------------------------------------------
# vertices


def check_label(x: Any) -> str:
    if not isinstance(x, str) or not x or x[0] in "#@":
        raise SchemaError(f"labels are nonempty strings not starting with '#' or '@': {x!r}")
    return x


def vertex_to_json(v: Vertex):
    return v


def vertex_from_json(obj: Any) -> Vertex:
    if isinstance(obj, bool) or not isinstance(obj, (str, int)):
        raise SchemaError(f"vertices are label strings or internal integers: {obj!r}")
    return check_label(obj) if isinstance(obj, str) else obj


def vertex_to_key(v: Vertex) -> str:
    return v if isinstance(v, str) else f"#{v}"


def vertex_from_key(s: Any) -> Vertex:
    if not isinstance(s, str) or not s:
        raise SchemaError(f"vertex keys are strings: {s!r}")
    if s.startswith("#"):
        try:
            return int(s[1:])
        except ValueError as exc:
            raise SchemaError(f"bad internal vertex key: {s!r}") from exc
    return check_label(s)


# ---------------------------------------------------------------------------
# trees


def tree_to_json(t: MarkedTree) -> dict:
    edges = sorted(
        (sorted(e, key=vertex_key) for e in t.edges),
        key=lambda e: (vertex_key(e[0]), vertex_key(e[1])),
    )
    return {
        "leaves": sorted(t.leaves),
        "internal": sorted(t.internal),
        "edges": [list(e) for e in edges],
    }


def tree_from_json(obj: Any, check: bool = True) -> MarkedTree:
    try:
        leaves = [check_label(x) for x in obj["leaves"]]
        internal = [int(v) for v in obj["internal"]]
        edges = [tuple(vertex_from_json(x) for x in e) for e in obj["edges"]]
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed tree object: {exc}") from exc
    if check:
        return MarkedTree.make(leaves, internal, edges)
    return MarkedTree(frozenset(leaves), frozenset(internal),
                      frozenset(frozenset(e) for e in edges))


def tree_of_spheres_to_json(t: TreeOfSpheres) -> dict:
    out = tree_to_json(t.shape)
    out["marking"] = {
        vertex_to_key(v): {vertex_to_key(n): point_to_json(p) for n, p in row}
        for v, row in t.marking
    }
    return out


def tree_of_spheres_from_json(obj: Any) -> TreeOfSpheres:
    shape = tree_from_json(obj)
    if "marking" not in obj or not isinstance(obj["marking"], dict):
        raise SchemaError("tree of spheres requires a 'marking' object")
    marking = {}
    for vkey, row in obj["marking"].items():
        v = vertex_from_key(vkey)
        if not isinstance(v, int):
            raise SchemaError(f"marking keys are internal vertex keys: {vkey!r}")
        marking[v] = {vertex_from_key(n): point_from_json(p) for n, p in row.items()}
    return TreeOfSpheres.make(shape, marking)


def marked_sphere_to_json(s: MarkedSphere) -> dict:
    return {"labels": sorted(s.labels),
            "points": {x: point_to_json(p) for x, p in s.points}}


def marked_sphere_from_json(obj: Any) -> MarkedSphere:
    try:
        points = {check_label(x): point_from_json(p) for x, p in obj["points"].items()}
    except (KeyError, TypeError, AttributeError) as exc:
        raise SchemaError(f"malformed marked sphere: {exc}") from exc
    return MarkedSphere.make(points)


def embedding_to_json(e: Embedding) -> list:
    return [
        {"quad": [t[0], t[1], t[2], x], "value": point_to_json(p)}
        for (t, x), p in e.values
    ]


# ---------------------------------------------------------------------------
# Laurent data


def laurent_poly_to_json(p: LaurentPoly) -> list:
    return [[e, complex_to_json(c)] for e, c in p.terms]


def laurent_poly_from_json(obj: Any) -> LaurentPoly:
    if not isinstance(obj, list):
        raise SchemaError(f"Laurent polynomials are [[exp, coeff], ...] lists: {obj!r}")
    terms = []
    for item in obj:
        if not isinstance(item, list) or len(item) != 2:
            raise SchemaError(f"bad Laurent term: {item!r}")
        terms.append((int(item[0]), complex_from_json(item[1])))
    return LaurentPoly.make(terms)


def laurent_point_to_json(p: LaurentPoint) -> dict:
    return {"u": laurent_poly_to_json(p.u), "v": laurent_poly_to_json(p.v)}


def laurent_point_from_json(obj: Any) -> LaurentPoint:
    if not isinstance(obj, dict) or set(obj) != {"u", "v"}:
        raise SchemaError(f"Laurent points are {{'u', 'v'}} objects: {obj!r}")
    return LaurentPoint.make(laurent_poly_from_json(obj["u"]),
                             laurent_poly_from_json(obj["v"]))


def family_to_json(fam: LaurentFamily) -> dict:
    return {"labels": sorted(fam.labels),
            "paths": {x: laurent_point_to_json(p) for x, p in fam.paths}}


def family_from_json(obj: Any) -> LaurentFamily:
    try:
        paths = {check_label(x): laurent_point_from_json(p)
                 for x, p in obj["paths"].items()}
    except (KeyError, TypeError, AttributeError) as exc:
        raise SchemaError(f"malformed Laurent family: {exc}") from exc
    return LaurentFamily.make(paths)


def laurent_map_to_json(m: LaurentMap) -> dict:
    return {
        "num": [[i, laurent_poly_to_json(c)] for i, c in enumerate(m.num)],
        "den": [[i, laurent_poly_to_json(c)] for i, c in enumerate(m.den)],
    }


def laurent_map_from_json(obj: Any) -> LaurentMap:
    def side(rows):
        if not isinstance(rows, list):
            raise SchemaError("Laurent map sides are [[degree, poly], ...] lists")
        coeffs = {}
        for item in rows:
            if not isinstance(item, list) or len(item) != 2:
                raise SchemaError(f"bad Laurent map coefficient: {item!r}")
            coeffs[int(item[0])] = laurent_poly_from_json(item[1])
        top = max(coeffs, default=-1)
        from .laurent import LP_ZERO
        return [coeffs.get(i, LP_ZERO) for i in range(top + 1)]

    try:
        return LaurentMap.make(side(obj["num"]), side(obj["den"]))
    except KeyError as exc:
        raise SchemaError(f"malformed Laurent map: missing {exc}") from exc


# ---------------------------------------------------------------------------
# portraits, covers, dynamics


def portrait_to_json(p: Portrait) -> dict:
    return {
        "Y": sorted(p.y_labels),
        "Z": sorted(p.z_labels),
        "F": dict(p.fmap),
        "deg": dict(p.degmap),
        "d": p.d,
    }


def portrait_from_json(obj: Any) -> Portrait:
    try:
        fmap = {check_label(a): check_label(b) for a, b in obj["F"].items()}
        degmap = {check_label(a): int(k) for a, k in obj["deg"].items()}
        d = int(obj["d"])
    except (KeyError, TypeError, AttributeError) as exc:
        raise SchemaError(f"malformed portrait: {exc}") from exc
    return Portrait.make(fmap, degmap, d)


def rational_map_to_json(f: RationalMap) -> dict:
    return {"num": [complex_to_json(c) for c in f.num.coeffs],
            "den": [complex_to_json(c) for c in f.den.coeffs]}


def rational_map_from_json(obj: Any) -> RationalMap:
    try:
        num = [complex_from_json(c) for c in obj["num"]]
        den = [complex_from_json(c) for c in obj["den"]]
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed rational map: {exc}") from exc
    return RationalMap.make(Polynomial.make(num), Polynomial.make(den))


def cover_to_json(c: TreeCover) -> dict:
    return {
        "source": tree_of_spheres_to_json(c.source),
        "target": tree_of_spheres_to_json(c.target),
        "vertex_map": {vertex_to_key(a): vertex_to_key(b) for a, b in c.vertex_map},
        "maps": {vertex_to_key(v): rational_map_to_json(f) for v, f in c.maps},
    }


def cover_from_json(obj: Any) -> TreeCover:
    try:
        source = tree_of_spheres_from_json(obj["source"])
        target = tree_of_spheres_from_json(obj["target"])
        vertex_map = {vertex_from_key(a): vertex_from_key(b)
                      for a, b in obj["vertex_map"].items()}
        maps = {}
        for vkey, f in obj["maps"].items():
            v = vertex_from_key(vkey)
            if not isinstance(v, int):
                raise SchemaError(f"map keys are internal vertex keys: {vkey!r}")
            maps[v] = rational_map_from_json(f)
    except (KeyError, TypeError, AttributeError) as exc:
        raise SchemaError(f"malformed cover: {exc}") from exc
    return TreeCover.make(source, target, vertex_map, maps)


def cover_family_to_json(fam: CoverFamily) -> dict:
    return {
        "portrait": portrait_to_json(fam.portrait),
        "y_family": family_to_json(fam.y_family),
        "z_family": family_to_json(fam.z_family),
        "map": laurent_map_to_json(fam.map_family),
    }


def cover_family_from_json(obj: Any) -> CoverFamily:
    try:
        portrait = portrait_from_json(obj["portrait"])
        y_family = family_from_json(obj["y_family"])
        z_family = family_from_json(obj["z_family"])
        map_family = laurent_map_from_json(obj["map"])
    except KeyError as exc:
        raise SchemaError(f"malformed cover family: missing {exc}") from exc
    return CoverFamily.make(portrait, y_family, z_family, map_family)


def dyn_to_json(d: DynSystem) -> dict:
    return {
        "cover": cover_to_json(d.cover),
        "X": sorted(d.labels),
        "dyn_tree": tree_of_spheres_to_json(d.dyn_tree),
    }


def dyn_from_json(obj: Any) -> DynSystem:
    try:
        cover = cover_from_json(obj["cover"])
        dyn_tree = tree_of_spheres_from_json(obj["dyn_tree"])
        labels = frozenset(check_label(x) for x in obj["X"])
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed dynamical system: {exc}") from exc
    if labels != dyn_tree.labels:
        raise SchemaError("'X' must list exactly the labels of the dynamical tree")
    return DynSystem(cover, dyn_tree)


# ---------------------------------------------------------------------------
# numeric mode


def numeric_sequence_from_json(obj: Any, tolerance: float, window: int
                               ) -> NumericConfigSequence:
    try:
        raw = obj["snapshots"]
        eps = [float(e) for e in obj["eps"]]
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed numeric sequence: {exc}") from exc
    snapshots = []
    for snap in raw:
        if not isinstance(snap, dict):
            raise SchemaError("snapshots are objects mapping labels to points")
        row = {}
        for x, value in snap.items():
            check_label(x)
            if value == "inf":
                row[x] = None
            elif isinstance(value, list) and len(value) == 2:
                row[x] = complex(float(value[0]), float(value[1]))
            else:
                raise SchemaError(f"numeric points are [re, im] or \"inf\": {value!r}")
        snapshots.append(row)
    return NumericConfigSequence.make(snapshots, eps, tolerance, window)


def numeric_tree_to_json(t: NumericTreeOfSpheres) -> dict:
    out = tree_to_json(t.shape)
    out["marking"] = {
        vertex_to_key(v): {
            x: "inf" if z is None else [z.real, z.imag] for x, z in row
        }
        for v, row in t.marking
    }
    return out


# ---------------------------------------------------------------------------
# payload kind detection (for `validate` and `iso`)


def detect_kind(obj: Any) -> str:
    if not isinstance(obj, dict):
        raise SchemaError("top-level JSON payloads are objects")
    keys = set(obj)
    if {"cover", "dyn_tree"} <= keys:
        return "dyn"
    if "vertex_map" in keys:
        return "cover"
    if {"portrait", "map"} <= keys:
        return "cover_family"
    if "snapshots" in keys:
        return "numeric"
    if "paths" in keys:
        return "family"
    if {"F", "deg"} <= keys:
        return "portrait"
    if "marking" in keys:
        return "tree_of_spheres"
    if "points" in keys:
        return "marked_sphere"
    if "leaves" in keys:
        return "tree"
    raise SchemaError(f"unrecognized payload with keys {sorted(keys)}")
