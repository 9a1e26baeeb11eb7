"""Arbitrary-precision evaluation of the Levy integral

    F_alpha(z) = int_0^inf exp(-t**alpha) cos(z t) dt

and of the quantities built from it: stable densities in d dimensions,
generalised Euler-Jacobi sums, moments, zeros and a few applications.
"""

from .apps import bh_kernel, pearcey_relation_check, phi_hat, psi_series, real_zeros
from .asympt import algebraic_series, asym_breakdown, exp_series, levy_asym, nk_table
from .errors import (
    BudgetExceeded,
    CancellationError,
    DivergenceError,
    DivergentMoment,
    DomainError,
    LevyIntError,
    MaxTermsExceeded,
    OutsideAsymptoticRegime,
    PoleError,
    PrefactorCalibrationError,
    ToleranceNotMet,
)
from .eulerjacobi import EJParams, ej_direct, ej_inversion, waring_count, waring_genfun_check
from .hyper import PfqSpec, levy_hyper, pfq, taylor_levy
from .numkernel import AlphaParam, PrecisionCtx, bessel_j, gamma
from .policy import MethodPolicy, evaluate
from .quadrature import (
    EvalResult,
    Method,
    levy_density_d,
    levy_deriv_quad,
    levy_quad,
    moment_quad,
    pearcey_direct,
)

__version__ = "0.1.0"
