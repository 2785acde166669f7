"""Coefficients of discrete and fractional iterates of invertible power series."""
from .bell import (
    BPP,
    MultiIndex,
    bpp_product,
    enumerate_partitions,
    homogeneous_sym,
    partial_bell_as_bpp,
    partial_bell_exp,
    partial_bell_ord,
)
from .errors import *  # noqa: F401,F403
from .iterate import (
    METHODS,
    basic_sequence,
    generator_exp,
    iterate,
    iterate_bpp,
    iterate_discrete_matrix,
    iterate_jabotinsky,
    iterate_monkam,
    iterate_qschroder,
    iterate_schroder,
    iterate_series,
    iterate_tambs,
    umbral_apply,
)
from .itlog import ItlogResult, itlog, itlog_fd_check
from .qcalc import QContext, alt_sum_identity, gauss_expand, hockey_stick, q_binomial, q_derivative, q_factorial
from .scalar import EXACT, ExactField, NumericField, parse_exponent, q_number, scalar_pow
from .series import Series, comp_inverse, compose, exp_ord_convert, preset, shift_fixed_point
from .triangle import CoeffTriangle, phi_triangle, triangle_product

__version__ = "0.1.0"
