"""Lines and free lines on complete intersections over finite fields."""

__version__ = "0.1.0"

from .gf import FieldElement, FieldSpec, field_make, gf_enumerate, gf_inv, parse_field
from .mpoly import BiComponent, MPoly, poly_bihom, poly_eval, poly_parse, poly_partial, poly_restrict_line
from .numerology import (
    CIProfile,
    bad_primes_index1,
    catalan,
    classify_special,
    classify_tuple,
    conic_degree,
    fano_index,
    hypothesis_check,
    line_degree_D,
    p_adic_valuation,
)
from .witness import (
    cyclic_identities_check,
    cyclic_witness,
    fermat,
    jacobian_singular_scan,
    lucas_binomial,
    random_ci,
    vanishing_components,
)
from .linespace import (
    Line,
    SplittingType,
    enumerate_lines,
    freeness_census,
    is_free,
    line_canonical,
    line_on_variety,
    lines_on_variety,
    point_fiber_census,
    splitting_type,
)
