"""Exact computations in generalized cluster algebras.

Seeds mutate symbolically over the tropical or universal semifield; c- and
g-vectors and F-polynomials come from their recursions or from
principal-coefficient X/Y-functions; companion algebras are checked against
the generalized pattern prefix by prefix.
"""

from .companion import (
    CompanionPair,
    CompanionReport,
    ZSpecialization,
    left_companion,
    right_companion,
    specialize_z,
    verify_left,
    verify_right,
)
from .errors import GCAError
from .invariants import (
    PatternState,
    XYState,
    c_from_tropical,
    c_matrix_rec,
    f_polys_rec,
    g_from_grading,
    g_matrix_rec,
    pattern_states,
    x_via_separation,
    xy_functions,
    y_via_separation,
)
from .poly import Frac, LaurentPoly, format_poly, lp_exact_div, lp_multidegree, lp_mul, lp_substitute, parse_poly
from .seed import (
    ClusterPattern,
    ExchangePoly,
    GenSeed,
    PSeed,
    apply_word,
    from_p_seed,
    hat_y,
    matrix_mutate,
    mutate,
    p_mutate,
    reverse_poly,
    to_p_seed,
    validate_seed,
)
from .semifield import TROPICAL, UNIVERSAL, TropElement, UsfElement, sf_specialize, trop_eval, usf_equal, usf_normalize

__version__ = "0.1.0"
