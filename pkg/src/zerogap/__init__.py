"""zerogap: critical-line evaluation, zero-gap statistics, and
pair-correlation gap bounds for GL(2) L-functions (with a zeta control)."""

from .afe import (EvaluationContext, afe_residual, convexity_diagnostic,
                  derivative, evaluate, evaluate_many,
                  value_and_derivative_many)
from .coefficients import (CoefficientTable, gen_delta, gen_zeta,
                           hypothesis_s_ratio, log_coefficients,
                           rankin_selberg_table, rankin_selberg_value,
                           residue_estimate, satake)
from .gapbounds import (GapBoundResult, LargeGapResult, bracket, kappa,
                        large_gap_bound, small_gap_root, table)
from .lfunc import (FunctionalEquationData, LFunctionSpec, analytic_conductor,
                    completed_lambda, delta_spec, hardy_z, phi_factor,
                    zero_count_main_term, zeta_spec)
from .moments import (MomentReport, f_series, moment_main_coefficient,
                      mv_meanvalue_check, numeric_moment, predicted_moment,
                      shifted_moment_prediction, truncated_sum_check,
                      weighted_sum_check)
from .paircorr import (FormFactorCurve, KernelPair, convolution_sum, dilate,
                       fejer_pair, form_factor, form_factor_model,
                       i_xi_bound, selberg_minorant_checks,
                       selberg_minorant_pair)
from .zeros import (GapStatistics, ZeroList, count_vs_main_term,
                    gap_statistics, scan_zeros, wirtinger_check)

__version__ = "0.1.0"
