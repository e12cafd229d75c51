"""affapprox: a desk-scale lab for affine approximability of Lipschitz maps.

Quantities: dyadic energy functionals on intervals, multiscale deviations
and multilinear (Walsh) decompositions on cubes, two-scale face-averaged
line energies, certified sup-norm affine fits, explicit hard instances
with midpoint certificates, and log-domain evaluation of the closed-form
bounds tying them together.
"""

from ._kernels import BACKEND, get_backend, warmup
from .affinefit import (AffineMap, ApproximabilityReport, FitResult, best_affine_fit,
                        empirical_modulus, sample_certificate)
from .bounds import (NetResult, calibrate_constant, delta_net, discretization_from_modulus,
                     discretization_scale, extension_radius, modulus_lower_bound,
                     modulus_upper_bound)
from .counterexamples import (BumpPath, CertReport, CounterexampleSpec, PaddedBumpLine,
                              ProductBumpField, build_bump_path, build_padded_line,
                              build_product_field, certify_ball, certify_interval,
                              certify_window)
from .cube import (DeviationWitness, WalshCheckReport, WalshCoefficients, affine_from_walsh,
                   deviation_argmax, multilinear_eval, multilinear_grid_errors,
                   multiscale_deviation, walsh_bounds_check, walsh_coefficients)
from .energy1d import (EnergyReport, chord_deviations, energy, energy_profile, linear_interp,
                       midpoint_certificate, refinement_gain_check, refinement_monotone)
from .faceenergy import HQuery, h_report, h_value, recursion_residual
from .grids import (CallableSampler, GridFunction1D, GridFunctionCube, GridSampler,
                    OffGridError)
from .logscalar import LogScalar
from .spaces import (NormedSpace, lipschitz_estimate, norm_eval, norm_eval_many, uc_params,
                     uc_residual, uc_residual_many)

__version__ = "0.1.0"

__all__ = [
    "AffineMap", "ApproximabilityReport", "BACKEND", "BumpPath", "CallableSampler",
    "CertReport", "CounterexampleSpec", "DeviationWitness", "EnergyReport", "FitResult",
    "GridFunction1D", "GridFunctionCube", "GridSampler", "HQuery", "LogScalar", "NetResult",
    "NormedSpace", "OffGridError", "PaddedBumpLine", "ProductBumpField", "WalshCheckReport",
    "WalshCoefficients", "affine_from_walsh", "best_affine_fit", "build_bump_path",
    "build_padded_line", "build_product_field", "calibrate_constant", "certify_ball",
    "certify_interval", "certify_window", "chord_deviations", "delta_net",
    "deviation_argmax", "discretization_from_modulus", "discretization_scale",
    "empirical_modulus", "energy", "energy_profile", "extension_radius", "get_backend",
    "h_report", "h_value", "linear_interp", "lipschitz_estimate", "midpoint_certificate",
    "modulus_lower_bound", "modulus_upper_bound", "multilinear_eval",
    "multilinear_grid_errors", "multiscale_deviation", "norm_eval", "norm_eval_many",
    "recursion_residual", "refinement_gain_check", "refinement_monotone",
    "sample_certificate", "uc_params", "uc_residual", "uc_residual_many", "walsh_bounds_check",
    "walsh_coefficients", "warmup",
]
