"""Exact calculus of marked spheres, their degeneration trees, and covers."""

from .gaussian import GaussianRational, gr
from .projective import Moebius, ProjPoint, cross_ratio, moebius_from_three
from .rational import Polynomial, RationalMap, local_degree
from .laurent import (
    LaurentMap,
    LaurentMoebius,
    LaurentPoint,
    LaurentPoly,
    laurent_cross_ratio,
    laurent_leading_value,
)
from .trees import (
    MarkedTree,
    branch,
    convex_hull,
    enumerate_stable_trees,
    is_admissible,
    partition_at,
    peripheral_internal,
    separating_vertex,
    tree_from_partitions,
    tree_partitions,
    trees_isomorphic,
    validate_tree,
)
from .moduli import (
    Embedding,
    MarkedSphere,
    TreeOfSpheres,
    canonical_form,
    embed,
    project,
    sphere_as_tree,
    spheres_iso,
    t_chart,
)
from .covers import (
    MarkedSphereCover,
    Portrait,
    TreeCover,
    cover_from_marked,
    cover_iso,
    extract_portrait,
    global_degree,
    rational_from_divisors,
    reconstruct_cover,
    restrict_cover,
    validate_cover,
    validate_portrait,
)
from .limits import (
    CoverFamily,
    LaurentFamily,
    NumericConfigSequence,
    limit_cover,
    limit_tree,
    numeric_limit_tree,
    rescale_limit,
)
from .plumbing import PlumbingPlan, plumb_family, sample_family
from .dynamics import DynSystem, compatible, dyn_conjugate, dyn_membership, validate_dyn

__version__ = "0.1.0"
