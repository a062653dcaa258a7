"""Zonal harmonic analysis of activation functions on spheres.

The package decomposes activation functions in the sphere-normalized
Gegenbauer basis, derives the correlation profile g and its derivative
bound T that govern one-layer denoising, certifies lower bounds on T,
verifies the tight-frame structure of kernels at spherical designs, and
runs recovery experiments for both the exact zonal objective and finite
unit-row discretizations.
"""

from .activations import (Activation, CATALOG, bi_laplacian, get_activation,
                          spherical_laplacian)
from .analysis import (CertifiedBound, GThetaProfile, MinGPrime, PlotData,
                       TableRow, certified_T_lower, g_theta, g_theta_prime,
                       gtheta_profile, layer_norm_by_quadrature,
                       layer_norm_constant, min_gprime, plot_data, table_report,
                       tail_bound)
from .denoise import (CriticalPoint, ExperimentRow, FiniteLayer, SyntheticConfig,
                      TheoremReport, ZonalObjective, epsilon_bound, epsilon_exact,
                      find_critical_points, finite_layer_apply,
                      make_theorem_instance, objective_gradient, objective_value,
                      random_layer, synthetic_experiment, verify_theorem)
from .errors import ConfigError, NumericalError, SmoothnessError
from .frames import (DesignSet, FrameCheck, NoiseAtom, NoiseSpec, design_check,
                     design_circle, design_from_text, design_registry,
                     design_to_text, gram_matrix, noise_component_norms,
                     noise_total_norm, synthesize_noise, tight_frame_residual)
from .gegenbauer import (GegenbauerBasis, basis, build_basis, derivative_scale,
                         derivative_sup, second_derivative_sup, sup_norm)
from .geometry import harmonic_dimension, monomial_sphere_moment, sphere_volume
from .quadrature import (Decomposition, QuadratureRule, decompose, gauss_jacobi,
                         integrate, phi_norm_sq, split_rule)

__version__ = "0.1.0"
