"""Monte-Carlo benchmark of the four estimators.

The benchmark model is y = X beta + eps with beta = (0, 1, 3, 1, 5, 0),
standard-normal design, and two true restrictions

    b2 = b4
    b3 + 2 b4 + b5 = 10

Scenarios vary the error law (standard normal, or Student-t with 3 degrees
of freedom) and contamination (none, y-direction, x-direction at a 10%
rate, magnitudes from N(100, 1)).  Each replication regenerates the data,
selects lambda for the penalized methods by cross-validation, fits all four
estimators, classifies the estimated zero set against the truth, and
records the per-replication coefficient error ||b - beta||^2 / p.

Replications are embarrassingly parallel: each derives its own random
streams from SeedSequence(seed, spawn_key=(rep_index,)), so serial and
process-pool execution produce bit-identical results.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateResponseError, SingularMatrixError
from .estimators import fit_lasso_lqa, fit_ols, fit_restricted_lasso, fit_restricted_ols
from .model import Dataset, FitConfig, RestrictionSet, validate_restrictions
from .selection import cross_validate, lambda_grid

__all__ = [
    "BETA_TRUE",
    "METHODS",
    "SimScenario",
    "MethodOutcome",
    "ReplicationResult",
    "MetricsRow",
    "default_restrictions",
    "gen_design",
    "gen_errors",
    "inject_outliers",
    "classify_selection",
    "replication_mse",
    "run_replication",
    "run_replications",
    "run_experiment",
]

BETA_TRUE = (0.0, 1.0, 3.0, 1.0, 5.0, 0.0)
METHODS = ("ols", "rols", "lasso", "rlasso")

_ERROR_DISTS = ("normal", "t3")
_CONTAMINATIONS = ("none", "y_direction", "x_direction")
_CV_RULES = ("min", "1se")


def default_restrictions():
    """The benchmark restriction set (satisfied exactly by BETA_TRUE)."""
    return RestrictionSet(
        rmat=np.array(
            [[0.0, 1.0, 0.0, -1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 2.0, 1.0, 0.0]]
        ),
        rvec=np.array([0.0, 10.0]),
    )


@dataclass(frozen=True)
class SimScenario:
    """One cell of the benchmark design.

    ``cv_rule`` picks how the cross-validation curve is turned into a
    lambda: ``"1se"`` (default; one-standard-error rule) or ``"min"``.
    ``tau`` is the magnitude below which an estimated coefficient counts as
    zero when classifying selections.  ``noise_scale`` multiplies the error
    draws (a test hook; 1.0 for the benchmark).
    """

    n: int
    error_dist: str = "normal"
    contamination: str = "none"
    contamination_fraction: float = 0.1
    beta_true: tuple = BETA_TRUE
    restrictions: RestrictionSet = None
    n_reps: int = 200
    seed: int = 0
    cv_folds: int = 5
    grid_points: int = 50
    tau: float = 0.1
    cv_rule: str = "1se"
    noise_scale: float = 1.0

    def __post_init__(self):
        if self.error_dist not in _ERROR_DISTS:
            raise ValueError(
                "error_dist must be one of %s, got %r" % (_ERROR_DISTS, self.error_dist)
            )
        if self.contamination not in _CONTAMINATIONS:
            raise ValueError(
                "contamination must be one of %s, got %r"
                % (_CONTAMINATIONS, self.contamination)
            )
        if self.cv_rule not in _CV_RULES:
            raise ValueError("cv_rule must be one of %s, got %r" % (_CV_RULES, self.cv_rule))
        if not 0.0 <= float(self.contamination_fraction) < 1.0:
            raise ValueError("contamination_fraction must lie in [0, 1)")
        if int(self.n_reps) < 1:
            raise ValueError("n_reps must be >= 1")
        if float(self.tau) <= 0.0:
            raise ValueError("tau must be > 0")
        if float(self.noise_scale) < 0.0:
            raise ValueError("noise_scale must be >= 0")
        beta = tuple(float(b) for b in self.beta_true)
        object.__setattr__(self, "beta_true", beta)
        rs = self.restrictions if self.restrictions is not None else default_restrictions()
        object.__setattr__(self, "restrictions", rs)
        validate_restrictions(rs, len(beta))
        if int(self.n) < len(beta) + rs.m:
            raise ValueError(
                "n=%d too small: need n >= p + m = %d" % (self.n, len(beta) + rs.m)
            )
        gap = float(np.max(np.abs(rs.rmat @ np.array(beta) - rs.rvec)))
        if gap > 1e-10:
            raise ValueError(
                "restrictions are inconsistent with beta_true "
                "(max|R beta_true - r| = %g); the benchmark assumes true "
                "restrictions" % gap
            )

    @property
    def p(self):
        return len(self.beta_true)


@dataclass(frozen=True)
class MethodOutcome:
    """Per-method record of one replication (or its failure)."""

    coefficients: tuple = None
    lam: float = None
    correct_zeros: int = None
    incorrect_zeros: int = None
    exactly_fitted: bool = None
    mse: float = None
    error: str = None


@dataclass(frozen=True)
class ReplicationResult:
    rep_index: int
    outcomes: dict  # method name -> MethodOutcome


@dataclass(frozen=True)
class MetricsRow:
    """One summary row (one method at one sample size)."""

    method: str
    n: int
    correctly_fitted_rate: float
    avg_correct_zeros: float
    avg_incorrect_zeros: float
    mean_mse: float
    median_mse: float


def gen_design(n, p, seed):
    """n x p matrix of independent standard-normal draws."""
    return np.random.default_rng(seed).standard_normal((int(n), int(p)))


def gen_errors(n, dist, seed):
    """Error vector: 'normal' -> N(0,1); 't3' -> Z / sqrt(V/3), V ~ chi2_3.

    The t3 stream draws Z first, then V, from the same generator, so a seed
    pins the exact vector.
    """
    if dist not in _ERROR_DISTS:
        raise ValueError("dist must be one of %s, got %r" % (_ERROR_DISTS, dist))
    rng = np.random.default_rng(seed)
    if dist == "normal":
        return rng.standard_normal(int(n))
    z = rng.standard_normal(int(n))
    v = rng.chisquare(3.0, int(n))
    return z / np.sqrt(v / 3.0)


def inject_outliers(dataset, direction, fraction, seed):
    """Contaminate ceil(fraction*n) rows, chosen uniformly without replacement.

    y_direction replaces the selected rows' responses with N(100, 1) draws.
    x_direction replaces one predictor cell per selected row with an
    N(100, 1) draw, spreading the affected columns as evenly as possible
    across predictors (per-column counts differ by at most one, assignment
    randomized); y is not regenerated, so the new rows are leverage points
    inconsistent with the model.

    Returns a new Dataset; the input is untouched.
    """
    if direction not in ("y_direction", "x_direction"):
        raise ValueError(
            "direction must be 'y_direction' or 'x_direction', got %r" % direction
        )
    fraction = float(fraction)
    if not 0.0 < fraction < 1.0:
        raise ValueError("fraction must lie in (0, 1), got %g" % fraction)
    n, p = dataset.n, dataset.p
    k = int(math.ceil(fraction * n))
    rng = np.random.default_rng(seed)
    rows = rng.choice(n, size=k, replace=False)
    x = np.array(dataset.x)
    y = np.array(dataset.y)
    if direction == "y_direction":
        y[rows] = rng.normal(100.0, 1.0, k)
    else:
        cols = np.resize(rng.permutation(p), k)
        cols = rng.permutation(cols)
        x[rows, cols] = rng.normal(100.0, 1.0, k)
    return Dataset(x=x, y=y, names=dataset.names)


def classify_selection(beta_hat, beta_true, tau):
    """Compare the tau-thresholded zero set against the true zero set.

    Coefficient j is "estimated zero" iff |beta_hat_j| < tau.  Returns
    (correct_zeros, incorrect_zeros, exactly_fitted): the count of true
    zeros estimated zero, the count of true nonzeros estimated zero, and
    whether the two zero sets coincide exactly.
    """
    beta_hat = np.asarray(beta_hat, dtype=float)
    beta_true = np.asarray(beta_true, dtype=float)
    if beta_hat.shape != beta_true.shape:
        raise ValueError("dimension-mismatch: %s vs %s" % (beta_hat.shape, beta_true.shape))
    if not float(tau) > 0.0:
        raise ValueError("tau must be > 0")
    est_zero = np.abs(beta_hat) < float(tau)
    true_zero = beta_true == 0.0
    correct = int(np.sum(est_zero & true_zero))
    incorrect = int(np.sum(est_zero & ~true_zero))
    exact = bool(np.array_equal(est_zero, true_zero))
    return correct, incorrect, exact


def replication_mse(beta_hat, beta_true):
    """Per-replication coefficient error, ||beta_hat - beta_true||^2 / p."""
    beta_hat = np.asarray(beta_hat, dtype=float)
    beta_true = np.asarray(beta_true, dtype=float)
    if beta_hat.shape != beta_true.shape:
        raise ValueError("dimension-mismatch: %s vs %s" % (beta_hat.shape, beta_true.shape))
    d = beta_hat - beta_true
    return float(d @ d) / beta_hat.shape[0]


def _seed_int(seed_seq):
    return int(seed_seq.generate_state(1, dtype=np.uint64)[0])


def run_replication(scenario, rep_index):
    """Generate one dataset and run all four estimators on it.

    The replication owns five random streams spawned from
    SeedSequence(scenario.seed, spawn_key=(rep_index,)): design, errors,
    contamination, lasso-CV folds, rlasso-CV folds.  Estimator failures are
    recorded per method in the result rather than raised.
    """
    scenario_beta = np.array(scenario.beta_true)
    p = scenario.p
    ss = np.random.SeedSequence(scenario.seed, spawn_key=(int(rep_index),))
    s_design, s_errors, s_contam, s_cv_lasso, s_cv_rlasso = ss.spawn(5)

    x = gen_design(scenario.n, p, s_design)
    eps = gen_errors(scenario.n, scenario.error_dist, s_errors) * scenario.noise_scale
    data = Dataset(x=x, y=x @ scenario_beta + eps)
    if scenario.contamination != "none":
        data = inject_outliers(
            data, scenario.contamination, scenario.contamination_fraction, s_contam
        )

    rs = scenario.restrictions
    outcomes = {}

    def record(name, fitter):
        try:
            beta, lam = fitter()
        except (SingularMatrixError, DegenerateResponseError, ValueError) as err:
            outcomes[name] = MethodOutcome(error="%s: %s" % (type(err).__name__, err))
            return
        cz, iz, exact = classify_selection(beta, scenario_beta, scenario.tau)
        outcomes[name] = MethodOutcome(
            coefficients=tuple(float(b) for b in beta),
            lam=lam,
            correct_zeros=cz,
            incorrect_zeros=iz,
            exactly_fitted=exact,
            mse=replication_mse(beta, scenario_beta),
        )

    def pick_lambda(report):
        return report.best_lambda if scenario.cv_rule == "min" else report.lambda_1se

    record("ols", lambda: (fit_ols(data).coefficients, None))
    record("rols", lambda: (fit_restricted_ols(data, rs).coefficients, None))

    def lasso():
        grid = lambda_grid(data, scenario.grid_points)
        report = cross_validate(
            data, "lasso", grid=grid, k=scenario.cv_folds, seed=_seed_int(s_cv_lasso)
        )
        lam = pick_lambda(report)
        return fit_lasso_lqa(data, FitConfig(lam=lam)).coefficients, lam

    def rlasso():
        grid = lambda_grid(data, scenario.grid_points)
        report = cross_validate(
            data,
            "rlasso",
            restrictions=rs,
            grid=grid,
            k=scenario.cv_folds,
            seed=_seed_int(s_cv_rlasso),
        )
        lam = pick_lambda(report)
        return fit_restricted_lasso(data, rs, FitConfig(lam=lam)).coefficients, lam

    record("lasso", lasso)
    record("rlasso", rlasso)
    return ReplicationResult(rep_index=int(rep_index), outcomes=outcomes)


def _replication_task(args):
    scenario, rep_index = args
    return run_replication(scenario, rep_index)


def run_replications(scenario, jobs=1):
    """All replications of a scenario, in rep_index order.

    jobs > 1 fans the replications out to a process pool; because every
    replication derives its streams from its own spawn key and the results
    are re-assembled in index order, the output is identical to a serial
    run.
    """
    indices = range(int(scenario.n_reps))
    if jobs is None or int(jobs) <= 1:
        return [run_replication(scenario, i) for i in indices]
    jobs = int(jobs)
    tasks = [(scenario, i) for i in indices]
    chunk = max(1, scenario.n_reps // (4 * jobs))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_replication_task, tasks, chunksize=chunk))


def run_experiment(scenario, jobs=1):
    """Run the scenario and aggregate one MetricsRow per method."""
    return aggregate_metrics(scenario, run_replications(scenario, jobs=jobs))


def aggregate_metrics(scenario, replications):
    """Reduce ReplicationResults to per-method summary rows.

    Failed method runs (recorded errors) are excluded from that method's
    aggregates.  The reduction is ordered by rep_index, so it is
    deterministic for any execution schedule.
    """
    ordered = sorted(replications, key=lambda r: r.rep_index)
    rows = []
    for method in METHODS:
        oks = [r.outcomes[method] for r in ordered if r.outcomes[method].error is None]
        if not oks:
            rows.append(
                MetricsRow(
                    method=method,
                    n=scenario.n,
                    correctly_fitted_rate=float("nan"),
                    avg_correct_zeros=float("nan"),
                    avg_incorrect_zeros=float("nan"),
                    mean_mse=float("nan"),
                    median_mse=float("nan"),
                )
            )
            continue
        mses = np.array([o.mse for o in oks])
        rows.append(
            MetricsRow(
                method=method,
                n=scenario.n,
                correctly_fitted_rate=float(np.mean([o.exactly_fitted for o in oks])),
                avg_correct_zeros=float(np.mean([o.correct_zeros for o in oks])),
                avg_incorrect_zeros=float(np.mean([o.incorrect_zeros for o in oks])),
                mean_mse=float(mses.mean()),
                median_mse=float(np.median(mses)),
            )
        )
    return rows
