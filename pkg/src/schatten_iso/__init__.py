"""Numerical toolkit for perturbations of Schatten quasi-norms."""
from .branches import (BranchFamily, MultiplicityEstimate, SeriesConditionReport, binomial_alpha,
                       estimate_zero_multiplicity, series_condition_check, track_branches,
                       vanishing_branches)
from .derivatives import (DerivativeReport, commutative_second_derivative, differentiability_probe,
                          finite_difference, schatten_first_derivative, schatten_second_derivative,
                          trace_derivative)
from .divdiff import (ScalarSymbol, abs_power, confluent_table, divided_difference, exponential,
                      power, signed_abs_power, sine)
from .errors import *  # noqa: F401,F403
from .falsifier import (EmbeddingInstance, ResidualReport, SearchConfig, falsify,
                        falsify_commutative, iqp_residual, positivity_obstruction_check,
                        reduce_to_selfadjoint)
from .linalg import (SpectralDecomposition, load_matrix, matrix_function, save_matrix,
                     schatten_norm, schatten_power, singular_values, spectral_decompose)
from .moi import MultiSymbol, divided_difference_symbol, moi_apply, projection_family

__version__ = "0.1.0"
