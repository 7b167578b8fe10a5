"""Fundamental solutions of the multi-dimensional space-time fractional
diffusion-wave equation, their Mellin-Barnes representations and their
subordination kernels."""

from ._core import BACKEND
from .errors import (DomainError, DoublePoleError, EmptyFamily, EmptyStrip, FdwaveError,
                     IncompatiblePair, NonConvergence, PoleError, SingularAtOrigin, SlowDecay)
from .greens import (FDWParams, RadialPoint, g_2d_alpha, g_eval, g_gaussian, g_hankel_oracle,
                     g_origin, g_quadrature, g_series, g_space_frac, radial_mass)
from .mbquad import ContourConfig, auto_contour, inverse_mellin, log_gamma, mellin_barnes
from .mellin import (AnalyticStrip, GammaQuotientSymbol, GammaTerm, SeriesRep, builtin,
                     cm_dual, cm_dual_inverse, convolve, factor_divide, residue_series,
                     rule_power_arg, rule_power_mul, rule_scale, strip)
from .result import EvalResult
from .specfun import (FourParamOrder, GenWrightParams, MittagLefflerOrder, WrightOrder,
                      bessel_j, cm_difference_test, four_param_wright_eval, gen_wright_eval,
                      ml_eval, wright_eval)
from .subord import (ExampleOnePdf, GeneralPhi, TheoremPhi, WrightRatio, density_at,
                     kernel_example1, kernel_general, kernel_phi, kernel_wright, laplace_verify,
                     pdf_verify, subordinate)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "DomainError", "DoublePoleError", "EmptyFamily", "EmptyStrip", "FdwaveError",
    "IncompatiblePair", "NonConvergence", "PoleError", "SingularAtOrigin", "SlowDecay",
    "FDWParams", "RadialPoint", "g_2d_alpha", "g_eval", "g_gaussian", "g_hankel_oracle",
    "g_origin", "g_quadrature", "g_series", "g_space_frac", "radial_mass",
    "ContourConfig", "auto_contour", "inverse_mellin", "log_gamma", "mellin_barnes",
    "AnalyticStrip", "GammaQuotientSymbol", "GammaTerm", "SeriesRep", "builtin", "cm_dual",
    "cm_dual_inverse", "convolve", "factor_divide", "residue_series", "rule_power_arg",
    "rule_power_mul", "rule_scale", "strip", "EvalResult",
    "FourParamOrder", "GenWrightParams", "MittagLefflerOrder", "WrightOrder", "bessel_j",
    "cm_difference_test", "four_param_wright_eval", "gen_wright_eval", "ml_eval", "wright_eval",
    "ExampleOnePdf", "GeneralPhi", "TheoremPhi", "WrightRatio", "density_at", "kernel_example1",
    "kernel_general", "kernel_phi", "kernel_wright", "laplace_verify", "pdf_verify", "subordinate",
]
