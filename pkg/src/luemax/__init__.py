"""Largest-eigenvalue distribution of the beta=2 Laguerre ensemble.

Exact finite-n gap probabilities through orthogonal-polynomial projection,
large-n expansions up to the soft edge, Painleve V / sigma-form residual
verification, the Airy-kernel Fredholm determinant in high precision, and
Monte Carlo cross-validation via the tridiagonal beta-ensemble model.
"""

from .airyfred import (AiryDetResult, airy_fredholm_logdet, airy_kernel,
                       extract_tw_constant)
from .asymptotics import (ExpansionReport, FnExpansion, airy_tail,
                          cubic_root_f_tilde, dlnp_dalpha, fn_series,
                          level_density, lnp_small_alpha,
                          lnp_small_alpha_expanded, lnp_theorem,
                          soft_edge_alpha)
from .errors import (CapabilityError, ConditioningError, ConvergenceError,
                     DomainError, LuemaxError, PrecisionError)
from .exactprob import (EnsembleParams, LogProb, SigmaValue, dn_infinity_log,
                        p_scaled, phat_hankel_oracle, phat_projection,
                        saturation_threshold, sigma_exact)
from .mcsample import (EmpiricalCDF, SamplerConfig, Scaling, dump_samples,
                       ks_distance, sample_largest)
from .orthopoly import (MonicOPSystem, build_monic_system, cd_kernel,
                        lanczos_coefficients)
from .painleve import (PainleveState, SigmaPath, fn_equation_residual,
                       integrate_sigma_form, pv_residual,
                       s_state_by_differencing, sigma_form_residual,
                       sigma_from_s)
from .specfun import (airy, barnes_ln_g, log_gamma, lower_incomplete_gamma,
                      zeta_prime_minus_one)

__version__ = "0.1.0"

__all__ = [
    "AiryDetResult", "airy_fredholm_logdet", "airy_kernel",
    "extract_tw_constant",
    "ExpansionReport", "FnExpansion", "airy_tail", "cubic_root_f_tilde",
    "dlnp_dalpha", "fn_series", "level_density", "lnp_small_alpha",
    "lnp_small_alpha_expanded", "lnp_theorem", "soft_edge_alpha",
    "CapabilityError", "ConditioningError", "ConvergenceError",
    "DomainError", "LuemaxError", "PrecisionError",
    "EnsembleParams", "LogProb", "SigmaValue", "dn_infinity_log",
    "p_scaled", "phat_hankel_oracle", "phat_projection",
    "saturation_threshold", "sigma_exact",
    "EmpiricalCDF", "SamplerConfig", "Scaling", "dump_samples",
    "ks_distance", "sample_largest",
    "MonicOPSystem", "build_monic_system", "cd_kernel",
    "lanczos_coefficients",
    "PainleveState", "SigmaPath", "fn_equation_residual",
    "integrate_sigma_form", "pv_residual", "s_state_by_differencing",
    "sigma_form_residual", "sigma_from_s",
    "airy", "barnes_ln_g", "log_gamma", "lower_incomplete_gamma",
    "zeta_prime_minus_one",
    "__version__",
]
