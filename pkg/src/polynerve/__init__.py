"""Finite posets as intuitionistic frames, their nerves and starlike logics,
and the exact rational simplicial geometry they realize."""

from .signatures import EPSILON, SCOTT, DIFORK, Signature, signature_leq
from .posets import (
    FinitePoset,
    validate_poset,
    up_set,
    down_set,
    strict_up,
    strict_down,
    height,
    height_of,
    depth_of,
    width,
    connected_components,
    con_type,
    is_graded,
    diamond,
    strict_diamond,
    check_completion,
    is_tree,
    tree_unravelling,
    chain_element_at,
)
from .morphisms import (
    PMorphism,
    is_p_morphism,
    is_up_reduction,
    find_up_reduction,
    validates_jankov,
    signature_reduction,
    are_isomorphic,
    exists_monotone_surjection,
    compose,
)
from .nerves import NervePoset, nerve, iterated_nerve, max_map, nerve_is_alpha_connected
from .starlike import (
    starlike_tree,
    has_alpha_partition,
    alpha_partition,
    is_alpha_connected,
    is_alpha_diamond_connected,
    is_alpha_nerve_connected,
    nerve_validates_starlike,
)
from .formulas import Formula, parse_formula, print_formula, named_formula
from .semantics import (
    UpsetAlgebra,
    frame_validates,
    counter_valuation,
    validates_bd,
    validates_sfl,
    scott_frame_conditions,
)
from .constructions import (
    ConstructionResult,
    gradify_with_scott,
    gradify_without_scott,
    nervify,
    starlike_witness,
)
from .geometry import (
    Simplex,
    RationalComplex,
    rational_point,
    validate_complex,
    face_poset,
    carrier,
    relint_contains,
    open_star,
    barycentre,
    elementary_stellar,
    elementary_barycentric,
    barycentric_subdivision,
    derived,
    denominator,
    homogeneous,
    is_unimodular,
    is_unimodular_complex,
    farey_mediant,
    elementary_farey,
    is_refinement,
    geometric_realization,
    upset_to_open,
    OpenPolyhedralSet,
)
from .randposets import random_poset, random_rooted_poset
from . import errors

__version__ = "0.1.0"
