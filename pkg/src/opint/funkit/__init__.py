"""Scalar functions, divided differences, Littlewood-Paley analysis and moduli."""

from .scalar import LIBRARY_NAMES, ScalarFn, get_function, library, phi, phi_prime
from .divdiff import (
    DEFAULT_TOL,
    Kernel,
    Kernel2,
    Kernel3,
    dd_kernel,
    dd_kernel2,
    dd_kernel2_partial,
    dd_kernel3_order2,
    dd_kernel3_partial,
    divided_difference,
    divided_differences,
    grid_of,
)
from .besov import (
    LPDecomp,
    Sampled,
    besov_estimate,
    besov_norm,
    holder_seminorm,
    lp_decompose,
    sample_function,
    smooth_step,
    w,
)
from .moduli import Modulus, omega_star
