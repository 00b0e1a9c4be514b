"""flagstar: flag-no-square surgery calculus on simplicial manifolds."""

from .complexes import (
    SimplicialComplex,
    antistar,
    disjoint_union,
    euler_characteristic,
    f_vector,
    from_facets,
    induced,
    link,
    relabel,
    validate_closed_pseudomanifold,
)
from .flagcheck import (
    LargenessReport,
    has_induced_square,
    is_flag,
    is_fns,
    k_largeness,
)
from .graphs import SkeletonGraph, diameter

__version__ = "0.1.0"

__all__ = [
    "SimplicialComplex",
    "SkeletonGraph",
    "LargenessReport",
    "antistar",
    "diameter",
    "disjoint_union",
    "euler_characteristic",
    "f_vector",
    "from_facets",
    "has_induced_square",
    "induced",
    "is_flag",
    "is_fns",
    "k_largeness",
    "link",
    "relabel",
    "validate_closed_pseudomanifold",
]
