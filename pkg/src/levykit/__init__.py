"""Levy measures, their lambda-mixtures and the random integral maps they induce."""
from ._version import __version__
from .exceptions import *  # noqa: F401,F403
from .levy_core import (Atoms, Dilated, Exp, LevyMeasure, LevyTriplet, Power, PowerExp,
                        RadialParametric, Scaled, Sum, UserDensity, convolution_power, dilate,
                        eval_levy_exponent, is_symmetric, jump_intensity, levy_exponent,
                        radial_moment, validate_levy_measure, zero_measure)
from .mixing import (Exponential, GeneralDensity, MixingMeasure, MixingSum, Mixture,
                     PointMasses, PowerExpDensity, RhoAlpha, SpectralFunctionQuery,
                     banach_sufficient_check, check_mixture_integrability, g_exponential,
                     h_alpha, levy_spectral_function, mix, verify_laplace_identity)
from .integral_map import (CharFn, ExistenceReport, MappedTriplet, check_existence,
                           exponential_shift_closed_form, free_cf, free_log_cf,
                           inverse_map_exponential, inverse_map_tempered, map_cf, map_triplet,
                           scaling_identity_check, shift_correction, tempered_stable_map)
from .free_bridge import (HalfPlanePoint, RealMeasure, bridge_check, cauchy_transform,
                          compound_poisson_f, f_transform, free_levy_khintchine, inverse_f,
                          voiculescu_scaled, voiculescu_transform)
from .laplace import gaver_stehfest, stehfest_coefficients
from .sampler import (SampleBatch, SimulationScheme, declared_bias, empirical_cf,
                      sample_random_integral, sample_tempered_stable, simulate_levy_increments,
                      stable_constant, stable_constant_oracle, stable_limit_experiment,
                      stable_limit_log_cf)
