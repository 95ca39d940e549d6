"""Linear regression with exact linear equality restrictions.

Estimators for the model y = X beta + e where beta is known to satisfy
R beta = r: ordinary and restricted least squares, an L1-penalized
estimator solved by iterated local quadratic approximation, and its
restricted variant that keeps every iterate exactly feasible.  Utilities
cover lambda selection by k-fold cross-validation, a small text format
for restriction equations, CSV input/output, and a Monte-Carlo benchmark
harness.
"""

from .datasets import PRIOR_BETA, rd_expenditure, rd_restrictions
from .errors import (
    DegenerateResponseError,
    InfeasibleDropWarning,
    RestrictionSyntaxError,
    SingularMatrixError,
)
from .estimators import (
    fit_lasso_lqa,
    fit_ols,
    fit_restricted_lasso,
    fit_restricted_ols,
    objective_value,
    solve_spd,
)
from .io import INTERCEPT_NAME, add_intercept, emit_table, load_csv
from .model import (
    Dataset,
    FitConfig,
    FitResult,
    RestrictionSet,
    validate_dataset,
    validate_restrictions,
)
from .parsing import parse_restriction, parse_restriction_file, render_restrictions
from .selection import CvReport, cross_validate, kfold_split, lambda_grid
from .simulation import (
    BETA_TRUE,
    METHODS,
    MethodOutcome,
    MetricsRow,
    ReplicationResult,
    SimScenario,
    aggregate_metrics,
    default_restrictions,
    run_experiment,
    run_replication,
    run_replications,
)

__version__ = "0.1.0"

__all__ = [
    "BETA_TRUE",
    "CvReport",
    "Dataset",
    "DegenerateResponseError",
    "FitConfig",
    "FitResult",
    "INTERCEPT_NAME",
    "InfeasibleDropWarning",
    "METHODS",
    "MethodOutcome",
    "MetricsRow",
    "PRIOR_BETA",
    "ReplicationResult",
    "RestrictionSet",
    "RestrictionSyntaxError",
    "SimScenario",
    "SingularMatrixError",
    "add_intercept",
    "aggregate_metrics",
    "cross_validate",
    "default_restrictions",
    "emit_table",
    "fit_lasso_lqa",
    "fit_ols",
    "fit_restricted_lasso",
    "fit_restricted_ols",
    "kfold_split",
    "lambda_grid",
    "load_csv",
    "objective_value",
    "parse_restriction",
    "parse_restriction_file",
    "render_restrictions",
    "rd_expenditure",
    "rd_restrictions",
    "run_experiment",
    "run_replication",
    "run_replications",
    "solve_spd",
    "validate_dataset",
    "validate_restrictions",
    "__version__",
]
