"""Probabilistic metric spaces, generalized contractions and fixed points on finite instances."""

from .ddf import DDF, EPS0, compare_ddf, eval_ddf, make_ddf, pointwise_extrema, scale_arg, sibley_distance
from .tnorm import TNorm, tau_conv, tnorm_eval

__all__ = [
    "DDF",
    "EPS0",
    "TNorm",
    "compare_ddf",
    "eval_ddf",
    "make_ddf",
    "pointwise_extrema",
    "scale_arg",
    "sibley_distance",
    "tau_conv",
    "tnorm_eval",
]
