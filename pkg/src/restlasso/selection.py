"""Regularization-grid construction and k-fold cross-validation.

The grid top is the smallest penalty that zeroes every (penalized)
coefficient: at beta = 0 the subgradient condition for the objective
``||y - X b||^2 + lam * sum|b_j|`` reads ``|2 X'y|_inf <= lam``, so
``lam_max = 2 * max|X'y|``.  The grid descends log-uniformly to
``1e-4 * lam_max``.

``cross_validate`` reports the whole error curve plus two canonical
choices: ``best_lambda`` (minimum mean prediction error, ties resolved to
the largest lambda) and ``lambda_1se`` (the largest lambda whose mean error
stays within one standard error of the minimum — the parsimonious variant
used by the Monte-Carlo harness).
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateResponseError, InfeasibleDropWarning, SingularMatrixError
from .estimators import _lqa_iterate, _ols_beta, _rols_beta
from .model import FitConfig, validate_dataset, validate_restrictions

__all__ = ["CvReport", "lambda_grid", "kfold_split", "cross_validate"]

_METHODS = ("lasso", "rlasso")


@dataclass(frozen=True)
class CvReport:
    """Cross-validation outcome.

    ``curve`` is a tuple of ``(lam, mean_error, std_error)`` triples in grid
    order (lambda descending); ``best_lambda`` attains the minimal mean
    error (largest lambda on ties); ``lambda_1se`` is the one-standard-error
    choice.  ``folds`` and ``seed`` record the split protocol.
    """

    best_lambda: float
    lambda_1se: float
    curve: tuple
    folds: int
    seed: int


def lambda_grid(dataset, n_points=50):
    """Log-spaced descending penalty grid from lam_max to 1e-4*lam_max.

    lam_max = 2*max|X'y| is the boundary above which the all-zero vector
    minimizes the penalized objective.  Raises DegenerateResponseError when
    max|X'y| = 0 (y orthogonal to every column; the grid is undefined) and
    ValueError for n_points < 2.
    """
    validate_dataset(dataset)
    n_points = int(n_points)
    if n_points < 2:
        raise ValueError("n_points must be >= 2, got %d" % n_points)
    lam_max = 2.0 * float(np.max(np.abs(dataset.x.T @ dataset.y)))
    if lam_max == 0.0:
        raise DegenerateResponseError(
            "degenerate-response: max|X'y| = 0, regularization grid undefined"
        )
    values = np.geomspace(lam_max, 1e-4 * lam_max, n_points)
    values.flags.writeable = False
    return values


def kfold_split(n, k, seed):
    """Shuffle 0..n-1 deterministically under ``seed`` and cut into k folds.

    Fold sizes differ by at most one; the folds are pairwise disjoint and
    their union is the full index range.  Raises ValueError when k is
    outside [2, n].
    """
    n, k = int(n), int(k)
    if not 2 <= k <= n:
        raise ValueError("k-out-of-range: need 2 <= k <= n, got k=%d, n=%d" % (k, n))
    rng = np.random.default_rng(seed)
    return np.array_split(rng.permutation(n), k)


def _check_grid(grid):
    values = np.asarray(grid, dtype=float)
    if values.ndim != 1 or values.size < 1:
        raise ValueError("grid must be a non-empty 1-d sequence of lambdas")
    if not np.isfinite(values).all() or (values <= 0.0).any():
        raise ValueError("grid values must be finite and > 0")
    if (np.diff(values) > 0).any():
        raise ValueError("grid must be non-increasing (lambda_grid is descending)")
    return values


def cross_validate(dataset, method, restrictions=None, grid=None, k=5, seed=0, config=None):
    """k-fold cross-validation of the prediction error along a lambda grid.

    Parameters
    ----------
    dataset : Dataset
    method : {'lasso', 'rlasso'}
        'rlasso' requires ``restrictions`` and applies them to every
        training fit (they are population-level prior information, not
        data-derived, so they hold on every fold).
    restrictions : RestrictionSet, optional
    grid : sequence of float, optional
        Descending positive lambdas; defaults to ``lambda_grid(dataset)``.
    k : int
        Number of folds (default 5).
    seed : int
        Shuffle seed for the fold split.
    config : FitConfig, optional
        Source of zero_eps/tol/max_iter/penalize_mask for the fold fits;
        its ``lam`` is ignored (the grid supplies lambda).

    Returns
    -------
    CvReport

    Raises
    ------
    ValueError
        Unknown method, missing restrictions, bad grid, k out of range, or
        a training set smaller than two rows ("fold-too-small").
    SingularMatrixError
        Propagated from a fold fit, annotated with (lambda, fold).
    """
    validate_dataset(dataset)
    if method not in _METHODS:
        raise ValueError("method must be one of %s, got %r" % (_METHODS, method))
    restricted = method == "rlasso"
    if restricted:
        if restrictions is None:
            raise ValueError("method 'rlasso' requires restrictions")
        validate_restrictions(restrictions, dataset.p)
    if config is None:
        config = FitConfig()
    values = _check_grid(lambda_grid(dataset) if grid is None else grid)
    penalize = config.mask_for(dataset.p)

    folds = kfold_split(dataset.n, k, seed)
    for fold in folds:
        if dataset.n - fold.size < 2:
            raise ValueError(
                "fold-too-small: a training set has %d < 2 rows"
                % (dataset.n - fold.size)
            )

    x, y = dataset.x, dataset.y
    # Per-fold training Grams and initializers are lambda-independent;
    # build them once and sweep the grid on each.
    prepared = []
    for fold in folds:
        train = np.setdiff1d(np.arange(dataset.n), fold)
        xt, yt = x[train], y[train]
        xtx, xty = xt.T @ xt, xt.T @ yt
        if restricted:
            init, _ = _rols_beta(xtx, xty, restrictions.rmat, restrictions.rvec)
        else:
            init = _ols_beta(xtx, xty)
        prepared.append((xtx, xty, init, x[fold], y[fold]))

    errors = np.empty((values.size, len(folds)))
    # The grid deliberately visits extreme penalties, where the
    # infeasible-drop clamp is routine rather than noteworthy.
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", InfeasibleDropWarning)
        for i, lam in enumerate(values):
            cfg = FitConfig(
                lam=float(lam),
                zero_eps=config.zero_eps,
                tol=config.tol,
                max_iter=config.max_iter,
                penalize_mask=config.penalize_mask,
            )
            for f, (xtx, xty, init, x_test, y_test) in enumerate(prepared):
                try:
                    if restricted:
                        beta, _, _, _, _ = _lqa_iterate(
                            xtx, xty, cfg, penalize, init,
                            restrictions.rmat, restrictions.rvec,
                        )
                    else:
                        beta, _, _, _, _ = _lqa_iterate(xtx, xty, cfg, penalize, init)
                except SingularMatrixError as err:
                    raise SingularMatrixError(
                        "cross-validation fit failed at lambda=%g, fold %d: %s"
                        % (lam, f, err)
                    ) from err
                resid = y_test - x_test @ beta
                errors[i, f] = float(resid @ resid) / resid.shape[0]
    means = errors.mean(axis=1)
    ses = errors.std(axis=1, ddof=1) / np.sqrt(len(folds))

    best_i = 0
    for i in range(1, values.size):
        if means[i] < means[best_i]:  # strict: ties keep the larger lambda
            best_i = i
    threshold = means[best_i] + ses[best_i]
    one_se_i = int(np.flatnonzero(means <= threshold)[0])  # grid descends

    curve = tuple(
        (float(values[i]), float(means[i]), float(ses[i])) for i in range(values.size)
    )
    try:
        seed_out = int(seed)
    except (TypeError, ValueError):
        seed_out = seed
    return CvReport(
        best_lambda=float(values[best_i]),
        lambda_1se=float(values[one_se_i]),
        curve=curve,
        folds=len(folds),
        seed=seed_out,
    )
