"""Subelliptic heat kernel on SU(2)."""

from ._core import (
    KernelEval,
    Su2hkError,
    __version__,
    a_const,
    c_const,
    cc_distance,
    dilation_limit_error,
    gaveau_kernel,
    green_function,
    loglimit_distance,
    pt,
    pt_cutlocus,
    pt_diagonal,
    pt_grid,
    pt_integral,
    pt_jet,
    pt_spectral,
    simulate,
    small_time_asymptotic,
)

__all__ = [
    "KernelEval",
    "Su2hkError",
    "__version__",
    "a_const",
    "c_const",
    "cc_distance",
    "dilation_limit_error",
    "gaveau_kernel",
    "green_function",
    "loglimit_distance",
    "pt",
    "pt_cutlocus",
    "pt_diagonal",
    "pt_grid",
    "pt_integral",
    "pt_jet",
    "pt_spectral",
    "simulate",
    "small_time_asymptotic",
]
