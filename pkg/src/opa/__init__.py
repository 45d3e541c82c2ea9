"""Optimal polynomial approximants in Hardy spaces H^p on the unit circle.

Computes the degree-n polynomial q minimizing ||q f - 1||_p for 1 < p < inf,
verifies the orthogonality structure of the residual, runs fixed-point
iterations for low degrees, and certifies the optimal error with dual
lower bounds and projection upper bounds.
"""

__version__ = "0.1.0"

from .bounds import (BoundEntry, BoundReport, DualWitness, PythagoreanParams,
                     PythagoreanSlacks, anti_analytic_completion, certify,
                     coefficient_inequality_slack, dual_feasible_value,
                     improved_lower_bound, lower_bound_blaschke_zeros,
                     lower_bound_h2_inner, lower_bound_inner,
                     lower_bound_reciprocal, psi_toeplitz_system,
                     pythagorean_check, pythagorean_params, upper_bound_p_lt_2)
from .circle import (BoundaryGrid, BoundarySamples, FourierCoeffs,
                     bj_residual, default_grid, fourier_coefficients,
                     grid_mean, holder_conjugate, lp_norm, pairing,
                     riesz_project, signed_power, trig_upsample, uniform_grid)
from .errors import (ConvergenceWarning, DegenerateSystemError,
                     IllConditionedError, InconsistencyError,
                     InvalidArgumentError, OpaError, ParseError,
                     QuadratureAccuracyWarning, SingularSystemError,
                     UnsupportedInputError)
from .experiments import (CollapseReport, SweepRow, degree_collapse_check,
                          format_complex_csv, opa_roots, roots_of_coeffs,
                          rotation_symmetry_check, rows_to_csv, sweep_degree,
                          sweep_function_sequence, sweep_p)
from .functions import (FiniteBlaschke, HardyFunction, Polynomial, Rational,
                        TaylorSeries, evaluate_on_grid, format_function,
                        inner_part_of_polynomial, parse_function,
                        polynomial_roots, reciprocal_series,
                        taylor_coefficients)
from .solvers import (FixedPointTrace, OpaProblem, OpaResult, SolverOptions,
                      SpanSolveInfo, fixed_point_degree0, fixed_point_degree1,
                      gram_solve_p2, minimize_in_span, objective_and_gradient,
                      orthogonality_residuals, solve, solve_general)

__all__ = [
    "__version__",
    # circle
    "BoundaryGrid", "BoundarySamples", "FourierCoeffs", "uniform_grid",
    "default_grid", "grid_mean", "lp_norm", "pairing", "signed_power",
    "bj_residual", "fourier_coefficients", "riesz_project", "trig_upsample",
    "holder_conjugate",
    # functions
    "HardyFunction", "Polynomial", "Rational", "FiniteBlaschke",
    "TaylorSeries", "parse_function", "format_function", "evaluate_on_grid",
    "taylor_coefficients", "reciprocal_series", "polynomial_roots",
    "inner_part_of_polynomial",
    # solvers
    "SolverOptions", "OpaProblem", "OpaResult", "SpanSolveInfo",
    "FixedPointTrace", "solve", "solve_general", "gram_solve_p2",
    "minimize_in_span", "objective_and_gradient", "orthogonality_residuals",
    "fixed_point_degree0", "fixed_point_degree1",
    # bounds
    "PythagoreanParams", "PythagoreanSlacks", "DualWitness", "BoundEntry",
    "BoundReport", "pythagorean_params", "pythagorean_check",
    "coefficient_inequality_slack", "dual_feasible_value",
    "psi_toeplitz_system", "lower_bound_reciprocal",
    "lower_bound_blaschke_zeros", "anti_analytic_completion",
    "improved_lower_bound", "lower_bound_inner", "lower_bound_h2_inner",
    "upper_bound_p_lt_2", "certify",
    # experiments
    "SweepRow", "CollapseReport", "sweep_p", "sweep_degree",
    "sweep_function_sequence", "opa_roots", "roots_of_coeffs",
    "rotation_symmetry_check", "degree_collapse_check", "rows_to_csv",
    "format_complex_csv",
    # errors
    "OpaError", "InvalidArgumentError", "ParseError", "UnsupportedInputError",
    "IllConditionedError", "SingularSystemError", "DegenerateSystemError",
    "InconsistencyError", "QuadratureAccuracyWarning", "ConvergenceWarning",
]
