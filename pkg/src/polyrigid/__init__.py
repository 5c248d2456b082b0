"""Infinitesimal rigidity of bar-joint frameworks under polyhedral norms."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .polytope import (
    FacetClass,
    Membership,
    Polytope,
    attaining_classes,
    cone_membership,
    facet_classes,
    gauge_norm,
    polytope_from_polar,
    support_classes,
    validate_polytope,
    with_backend,
)
from .gallery import (
    SubmodularFn,
    additive_norm,
    crosspolytope,
    example_submodular,
    hypercube,
    lovasz_norm,
    ngon,
    parse_gallery_name,
)
from .framework import (
    EdgeColouring,
    Framework,
    Graph,
    colour_edges,
    complete_graph,
    is_well_positioned,
    perturb_well_positioned,
)
from .rigidity import (
    RigidityMatrix,
    build_rigidity_matrix,
    is_infinitesimally_rigid,
    is_minimally_rigid,
    is_relatively_rigid,
    path_certificate,
    rank_and_kernel,
    rank_of,
)
from .combinatorics import (
    MinimalVerdict,
    SparsityVerdict,
    TreeVerdict,
    cut_screen,
    maxwell_count,
    minimal_tree_criterion,
    monochrome_decomposition,
    tree_criterion,
    vertex_colour_screen,
)
from .constructions import henneberg1, henneberg2, k4_gadget, vertex_split, vertex_to_k4
from .reduction import Move, MoveSequence, reduce_to_k1, replay, synthesize_rigid_placement
from .towers import (
    FrameworkFamily,
    sequential_rigidity_probe,
    tower_certificate,
    zigzag_family,
)
