"""Exact computations with toric vector bundles given by Klyachko filtrations."""

from .bundle import (
    Filtration,
    ToricVectorBundle,
    direct_sum,
    frobenius_pullback,
    h0_component,
    h0_dim,
    line_bundle,
    local_characters,
    make_bundle,
    split_bundle,
    sym_power,
    tangent_bundle,
    tensor,
    twist,
    validate_bundle,
)
from .cox import frak_M, mds_status, presentation
from .fan import Fan, cartier_data, divisor_positivity, make_fan, polytope, validate_fan, walls
from .matroid import build_matroid, cayley_data, h0_dim_via_parliament, intersection_lattice, matroid, parliament
from .positivity import (
    branched_cover,
    concavity_check,
    curve_splittings,
    is_ample,
    is_big,
    is_globally_generated,
    is_nef,
    is_very_ample,
)

__version__ = "0.1.0"

__all__ = [
    "Fan", "Filtration", "ToricVectorBundle", "branched_cover", "build_matroid", "cartier_data",
    "cayley_data", "concavity_check", "curve_splittings", "direct_sum", "divisor_positivity",
    "frak_M", "frobenius_pullback", "h0_component", "h0_dim", "h0_dim_via_parliament",
    "intersection_lattice", "is_ample", "is_big", "is_globally_generated", "is_nef",
    "is_very_ample", "line_bundle", "local_characters", "make_bundle", "make_fan", "matroid",
    "mds_status", "parliament", "polytope", "presentation", "split_bundle", "sym_power",
    "tangent_bundle", "tensor", "twist", "validate_bundle", "validate_fan", "walls",
]
