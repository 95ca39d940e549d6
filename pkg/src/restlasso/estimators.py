"""The four estimators and their shared linear-algebra plumbing.

Implemented here:

* ordinary least squares,
* restricted least squares under exact equalities R beta = r (Lagrange
  correction of the unrestricted solution),
* LASSO through an iterated local quadratic approximation (LQA) of the
  absolute-value penalty, with one-way active-set drops,
* restricted LASSO: the LQA iteration with every step followed by the
  Lagrange correction, so R beta = r holds exactly at every iterate.

The LQA surrogate replaces ``lam * |beta_j|`` near an expansion point
``b0_j != 0`` by ``(lam/2) * beta_j^2 / |b0_j|`` plus a constant, which
majorizes the absolute value (arithmetic-geometric mean inequality) and
turns each step into a ridge-like symmetric positive-definite solve.  The
``lam/2`` curvature is the convention under which the orthonormal-design
fixed point coincides with componentwise soft-thresholding at ``lam/2``,
i.e. with the exact penalized minimizer.
"""

import warnings

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from .errors import InfeasibleDropWarning, SingularMatrixError
from .model import FitConfig, FitResult, validate_dataset, validate_restrictions

__all__ = [
    "solve_spd",
    "objective_value",
    "lqa_penalty_matrix",
    "fit_ols",
    "fit_restricted_ols",
    "fit_lasso_lqa",
    "fit_restricted_lasso",
]

# Jitter ladder for barely-(or not-)positive-definite systems: delta runs
# from 1e-10 to 1e-4 times the mean diagonal, escalating tenfold.
_JITTER_START = 1e-10
_JITTER_STOP = 1e-4


def solve_spd(a, b):
    """Solve the symmetric positive-definite system a z = b.

    Parameters
    ----------
    a : (p, p) array_like
        Symmetric matrix; only the lower triangle is referenced.
    b : (p,) or (p, k) array_like
        Right-hand side(s).

    Returns
    -------
    ndarray
        Solution with the shape of ``b``.

    Raises
    ------
    SingularMatrixError
        If the Cholesky factorization fails at every jitter level
        ``a + delta*I``, ``delta = 1e-10..1e-4 * trace(a)/p`` — the system
        is numerically unidentifiable (e.g. p > n at lam = 0).

    Notes
    -----
    A failed factorization is retried on ``a + delta*I`` with ``delta``
    escalating tenfold per attempt.  The jitter is relative to the mean
    diagonal ``trace(a)/p``, so the ladder is scale-invariant.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    try:
        c = cho_factor(a, lower=True, check_finite=False)
        return cho_solve(c, b, check_finite=False)
    except LinAlgError:
        pass
    scale = np.trace(a) / a.shape[0]
    if not np.isfinite(scale) or scale <= 0.0:
        raise SingularMatrixError(
            "matrix has non-positive or non-finite trace; cannot regularize"
        )
    eye = np.eye(a.shape[0])
    delta = _JITTER_START * scale
    stop = _JITTER_STOP * scale
    while delta <= stop * (1.0 + 1e-12):
        try:
            c = cho_factor(a + delta * eye, lower=True, check_finite=False)
            return cho_solve(c, b, check_finite=False)
        except LinAlgError:
            delta *= 10.0
    raise SingularMatrixError(
        "symmetric solve failed at every jitter level up to %.1e (unidentifiable "
        "model, e.g. p > n with lam = 0)" % stop
    )


def objective_value(dataset, beta, lam, penalize_mask=None):
    """Penalized least-squares objective at ``beta``.

    ``(y - X beta)'(y - X beta) + lam * sum_j |beta_j|``, the sum running
    over penalized coordinates only (all of them when ``penalize_mask`` is
    None).
    """
    beta = np.asarray(beta, dtype=float)
    if beta.shape[0] != dataset.p:
        raise ValueError(
            "dimension-mismatch: beta has length %d for p=%d" % (beta.shape[0], dataset.p)
        )
    resid = dataset.y - dataset.x @ beta
    rss = float(resid @ resid)
    if penalize_mask is None:
        pen = float(np.sum(np.abs(beta)))
    else:
        mask = np.asarray(penalize_mask, dtype=bool)
        pen = float(np.sum(np.abs(beta[mask])))
    return rss + float(lam) * pen


def lqa_penalty_matrix(beta, active, config):
    """Diagonal of the LQA surrogate's penalty Hessian.

    Entry j is ``(lam/2) / |beta_j|`` for active penalized coordinates and 0
    for inactive or unpenalized ones.  Magnitudes below ``config.zero_eps``
    are clamped to ``zero_eps`` — a no-op for ordinary active coordinates
    (which are dropped before falling that low) but required for restricted
    coordinates that the penalty has shrunk without the right to drop them.

    Returns the diagonal as a length-p vector.
    """
    beta = np.asarray(beta, dtype=float)
    active = np.asarray(active, dtype=bool)
    penalize = config.mask_for(beta.shape[0])
    mag = np.maximum(np.abs(beta), config.zero_eps)
    diag = np.where(active & penalize, 0.5 * config.lam / mag, 0.0)
    return diag


def _gram(dataset):
    x = dataset.x
    return x.T @ x, x.T @ dataset.y


def _restricted_correction(a_solve, ra, rvec, bu):
    """Lagrange correction of an unrestricted solve on the active system.

    Given ``a_solve(b)`` solving the current SPD system, the active columns
    ``ra`` of R, and the unrestricted solution ``bu``, returns the corrected
    coefficients and multipliers:

        mu   = (R M R')^{-1} (r - R bu),      M = a^{-1}
        b_r  = bu + M R' mu

    One iterative-refinement pass tightens R b_r = r toward machine
    precision, which keeps the advertised 1e-8 residual bound honest on
    ill-conditioned instances.
    """
    minv_rt = a_solve(ra.T)
    s = ra @ minv_rt
    s = 0.5 * (s + s.T)
    mu = solve_spd(s, rvec - ra @ bu)
    br = bu + minv_rt @ mu
    dmu = solve_spd(s, rvec - ra @ br)
    br = br + minv_rt @ dmu
    return br, mu + dmu


def _ols_beta(xtx, xty):
    return solve_spd(xtx, xty)


def _rols_beta(xtx, xty, rmat, rvec):
    bu = solve_spd(xtx, xty)
    br, mu = _restricted_correction(lambda b: solve_spd(xtx, b), rmat, rvec, bu)
    return br, mu


def _lqa_iterate(xtx, xty, config, penalize, init, rmat=None, rvec=None):
    """Run the LQA loop on precomputed Gram matrices.

    Returns ``(beta, active, mu, iterations, converged)``.  ``mu`` is None
    for unrestricted runs.  Drops are one-way: a penalized coordinate whose
    magnitude falls below ``zero_eps`` is pinned to exact zero and removed
    from the working system — unless a restriction row touches it (nonzero
    column of R), in which case it stays, clamped, so that R beta = r
    remains enforceable.
    """
    p = xty.shape[0]
    beta = np.array(init, dtype=float)
    active = np.ones(p, dtype=bool)
    if rmat is not None:
        restricted_col = ~np.all(rmat == 0.0, axis=0)
    else:
        restricted_col = np.zeros(p, dtype=bool)
    droppable = penalize & ~restricted_col
    lam = config.lam
    zero_eps = config.zero_eps
    mu = None
    warned = False
    converged = False
    iterations = 0
    for iterations in range(1, config.max_iter + 1):
        drop = active & droppable & (np.abs(beta) < zero_eps)
        if drop.any():
            active = active & ~drop
            beta[drop] = 0.0
        if not warned and lam > 0.0:
            stuck = penalize & restricted_col & (np.abs(beta) < zero_eps)
            if stuck.any():
                warnings.warn(
                    "penalty drove restricted coefficient(s) %s below zero_eps; "
                    "kept in the system (clamped) so the restrictions stay "
                    "feasible" % (np.flatnonzero(stuck) + 1).tolist(),
                    InfeasibleDropWarning,
                    stacklevel=3,
                )
                warned = True
        idx = np.flatnonzero(active)
        if idx.size == 0:
            beta = np.zeros(p)
            converged = True
            break
        a = xtx[np.ix_(idx, idx)].copy()
        if lam > 0.0:
            diag = lqa_penalty_matrix(beta, active, config)
            a[np.diag_indices_from(a)] += diag[idx]
        bu = solve_spd(a, xty[idx])
        if rmat is not None:
            ra = rmat[:, idx]
            bu, mu = _restricted_correction(lambda b: solve_spd(a, b), ra, rvec, bu)
        new_beta = np.zeros(p)
        new_beta[idx] = bu
        delta = float(np.max(np.abs(new_beta - beta)))
        beta = new_beta
        if delta < config.tol:
            converged = True
            break
    # Final sweep: a droppable coordinate can land below zero_eps on the
    # very iteration that satisfies the convergence test, leaving it tiny
    # but not pinned.  Apply the drop rule once more so the coefficients
    # agree with the selection semantics (|beta_j| < zero_eps => exactly 0).
    drop = active & droppable & (np.abs(beta) < zero_eps)
    if drop.any():
        active = active & ~drop
        beta[drop] = 0.0
    return beta, active, mu, iterations, converged


def _selected_set(beta, active, penalize, zero_eps):
    # Active unpenalized columns always count; active penalized columns
    # count unless shrunk below the drop threshold (possible only for
    # restricted columns, which cannot be dropped outright).
    keep = active & (~penalize | (np.abs(beta) >= zero_eps))
    return frozenset(int(j) + 1 for j in np.flatnonzero(keep))


def fit_ols(dataset):
    """Ordinary least squares, beta = (X'X)^{-1} X'y.

    Returns a FitResult with lam = 0, no multipliers, and ``selected``
    containing every column whose coefficient is not exactly zero.

    Raises SingularMatrixError when X'X is numerically singular beyond the
    jitter ladder's reach.
    """
    validate_dataset(dataset)
    xtx, xty = _gram(dataset)
    beta = _ols_beta(xtx, xty)
    selected = frozenset(int(j) + 1 for j in np.flatnonzero(beta != 0.0))
    obj = objective_value(dataset, beta, 0.0)
    return FitResult(
        coefficients=beta,
        selected=selected,
        multipliers=None,
        lam=0.0,
        iterations=1,
        converged=True,
        objective=obj,
    )


def fit_restricted_ols(dataset, restrictions):
    """Least squares subject to R beta = r.

    The unrestricted solution is corrected along the restriction normal:

        beta_r = beta_ols - (X'X)^{-1} R' [R (X'X)^{-1} R']^{-1} (R beta_ols - r)

    The returned multipliers are the Lagrange multipliers of the equality
    constraints; the restriction residual satisfies
    ``max|R beta_r - r| <= 1e-8``.
    """
    validate_dataset(dataset)
    validate_restrictions(restrictions, dataset.p)
    xtx, xty = _gram(dataset)
    beta, mu = _rols_beta(xtx, xty, restrictions.rmat, restrictions.rvec)
    selected = frozenset(int(j) + 1 for j in np.flatnonzero(beta != 0.0))
    obj = objective_value(dataset, beta, 0.0)
    return FitResult(
        coefficients=beta,
        selected=selected,
        multipliers=mu,
        lam=0.0,
        iterations=1,
        converged=True,
        objective=obj,
    )


def fit_lasso_lqa(dataset, config):
    """LASSO by iterated local quadratic approximation.

    Starting from the least-squares solution (jitter-regularized when X'X
    is singular), each iteration drops penalized coordinates whose magnitude
    fell below ``config.zero_eps`` (pinned to exact zero, never revived) and
    re-solves the ridge-like system

        (X_A' X_A + D_A) beta_A = X_A' y

    on the surviving columns, D from :func:`lqa_penalty_matrix`.  Iteration
    stops when the max-norm change drops below ``config.tol`` or
    ``config.max_iter`` is reached.  All coordinates dropping is not an
    error: the result is the zero vector with an empty selection (unless
    unpenalized columns exist, which are never dropped).

    Parameters
    ----------
    dataset : Dataset
    config : FitConfig
        ``config.lam`` is the penalty weight; ``config.penalize_mask``
        exempts columns (e.g. an intercept) from penalty and dropping.

    Returns
    -------
    FitResult
    """
    validate_dataset(dataset)
    if not isinstance(config, FitConfig):
        raise TypeError("config must be a FitConfig")
    penalize = config.mask_for(dataset.p)
    xtx, xty = _gram(dataset)
    init = _ols_beta(xtx, xty)
    beta, active, _, iterations, converged = _lqa_iterate(
        xtx, xty, config, penalize, init
    )
    obj = objective_value(dataset, beta, config.lam, penalize)
    return FitResult(
        coefficients=beta,
        selected=_selected_set(beta, active, penalize, config.zero_eps),
        multipliers=None,
        lam=config.lam,
        iterations=iterations,
        converged=converged,
        objective=obj,
    )


def fit_restricted_lasso(dataset, restrictions, config):
    """LASSO under exact equality restrictions R beta = r.

    Identical to :func:`fit_lasso_lqa` except that every iteration's
    unrestricted ridge-form solve ``beta_u`` is followed by the equality
    correction

        beta_r = beta_u - M R' [R M R']^{-1} (R beta_u - r),   M = (X'X + D)^{-1}

    with multipliers ``mu = [R M R']^{-1} (r - R beta_u)`` retained from the
    final iteration, and that initialization is the restricted least-squares
    fit.  Coordinates touched by any restriction row are never dropped from
    the working system, whatever the penalty does to them: dropping one
    could make R beta = r unsatisfiable.  Such coordinates are excluded from
    ``selected`` when they end below ``config.zero_eps``, and an
    InfeasibleDropWarning is emitted.  The returned coefficients satisfy
    ``max|R beta - r| <= 1e-8`` at every lam.
    """
    validate_dataset(dataset)
    validate_restrictions(restrictions, dataset.p)
    if not isinstance(config, FitConfig):
        raise TypeError("config must be a FitConfig")
    penalize = config.mask_for(dataset.p)
    xtx, xty = _gram(dataset)
    init, _ = _rols_beta(xtx, xty, restrictions.rmat, restrictions.rvec)
    beta, active, mu, iterations, converged = _lqa_iterate(
        xtx, xty, config, penalize, init, restrictions.rmat, restrictions.rvec
    )
    obj = objective_value(dataset, beta, config.lam, penalize)
    return FitResult(
        coefficients=beta,
        selected=_selected_set(beta, active, penalize, config.zero_eps),
        multipliers=mu,
        lam=config.lam,
        iterations=iterations,
        converged=converged,
        objective=obj,
    )
