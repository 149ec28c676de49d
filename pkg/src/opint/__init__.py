"""Operator integrals and perturbation of operator functions on matrices."""

from .errors import *  # noqa: F401,F403
from .matcore import SpectralDecomp, hermitian_eig, mat_fun, op_norm, schatten_norm, singular_values
from .funkit import ScalarFn, get_function, library
from .doi import DoiTransformer, doi_apply, op_difference, quasicommutator
from .moi import MoiSpec, higher_derivative, higher_difference_moi, moi_apply
from .shift import krein_trace_check, spectral_shift, taylor_remainder
from .noncomm import OpPair, noncomm_calc, pair_difference_repr
from .counterex import build_counterexample, counterexample_norms

__version__ = "0.1.0"
