"""hlsums: hyperbolic orbit counts, Salie-type exponential sums, class
numbers of pairs of binary quadratic forms, and cancellation scans."""

from .arith import factorize, hilbert_p, jacobi, sqrt_mod, square_part
from .conjecture import ConjectureParams, StatementParams, conjecture_sum, dyadic_scan, statement_sum
from .expsums import gauss_quadratic, kloosterman, ramanujan, salie_direct, salie_fast
from .hyperbolic import count_orbit, count_orbit_naive, local_l2, m_sum, smoothed_count, u_dist
from .quadpairs import QuadForm, alpha_g, class_number, codiscriminant, kappa, local_profile, locality_ratio

__version__ = "0.1.0"

__all__ = [
    "ConjectureParams",
    "QuadForm",
    "StatementParams",
    "alpha_g",
    "class_number",
    "codiscriminant",
    "conjecture_sum",
    "count_orbit",
    "count_orbit_naive",
    "dyadic_scan",
    "factorize",
    "gauss_quadratic",
    "hilbert_p",
    "jacobi",
    "kappa",
    "kloosterman",
    "local_l2",
    "local_profile",
    "locality_ratio",
    "m_sum",
    "ramanujan",
    "salie_direct",
    "salie_fast",
    "smoothed_count",
    "sqrt_mod",
    "square_part",
    "statement_sum",
    "u_dist",
]
