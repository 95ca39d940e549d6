"""Core value types: datasets, restriction sets, fit configuration/results.

Everything here is an immutable value object.  Construction does cheap
normalization only (dtype coercion, array freezing); the full invariant
checks live in :func:`validate_dataset` and :func:`validate_restrictions`
so that malformed objects can still be built and then rejected with a
useful message.
"""

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Dataset",
    "RestrictionSet",
    "FitConfig",
    "FitResult",
    "validate_dataset",
    "validate_restrictions",
]


def _frozen_array(a, dtype=float, ndim=None):
    """Coerce to a C-contiguous read-only ndarray copy."""
    out = np.array(a, dtype=dtype, order="C", copy=True)
    if ndim is not None and out.ndim != ndim:
        raise ValueError(
            "expected a %d-dimensional array, got ndim=%d" % (ndim, out.ndim)
        )
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class Dataset:
    """A design matrix with response and column labels.

    Parameters
    ----------
    x : (n, p) array_like
        Design matrix.  No intercept is implied; callers that want one
        prepend an explicit all-ones column (see ``restlasso.io.load_csv``).
    y : (n,) array_like
        Response vector.
    names : sequence of str, optional
        Column labels, length p, all distinct.  Defaults to ``b1..bp``,
        matching the restriction-equation variable syntax.
    """

    x: np.ndarray
    y: np.ndarray
    names: tuple = None

    def __post_init__(self):
        object.__setattr__(self, "x", _frozen_array(self.x, ndim=2))
        object.__setattr__(self, "y", _frozen_array(self.y, ndim=1))
        if self.names is None:
            names = tuple("b%d" % (j + 1) for j in range(self.x.shape[1]))
        else:
            names = tuple(str(s) for s in self.names)
        object.__setattr__(self, "names", names)

    @property
    def n(self):
        return self.x.shape[0]

    @property
    def p(self):
        return self.x.shape[1]


@dataclass(frozen=True)
class RestrictionSet:
    """Exact linear equality restrictions R beta = r.

    ``rmat`` is m x p, ``rvec`` has length m; validity (shapes, full row
    rank) is established by :func:`validate_restrictions`.
    """

    rmat: np.ndarray
    rvec: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "rmat", _frozen_array(self.rmat, ndim=2))
        object.__setattr__(self, "rvec", _frozen_array(self.rvec, ndim=1))

    @property
    def m(self):
        return self.rmat.shape[0]

    @property
    def p(self):
        return self.rmat.shape[1]


@dataclass(frozen=True)
class FitConfig:
    """Penalized-fit settings.

    Parameters
    ----------
    lam : float
        Regularization weight of the absolute-value penalty, >= 0.  (Named
        ``lam`` because ``lambda`` is reserved in Python; the CLI flag is
        still ``--lambda``.)
    zero_eps : float
        Active-set drop threshold: once a penalized coefficient's magnitude
        falls below ``zero_eps`` it is pinned to exact zero and removed from
        the working system (drops are one-way).
    tol : float
        Convergence tolerance on the max-norm coefficient change.
    max_iter : int
        Iteration cap.  ``max_iter=1`` gives the single-step approximation
        at the initializer instead of the fixed point.
    penalize_mask : sequence of bool, optional
        Per-coefficient penalty switch; entries set to ``False`` (e.g. an
        intercept) are never penalized and never dropped.  ``None`` means
        penalize everything.
    """

    lam: float = 0.0
    zero_eps: float = 1e-8
    tol: float = 1e-8
    max_iter: int = 100
    penalize_mask: tuple = None

    def __post_init__(self):
        lam = float(self.lam)
        if not np.isfinite(lam) or lam < 0.0:
            raise ValueError("lam must be finite and >= 0, got %r" % self.lam)
        object.__setattr__(self, "lam", lam)
        for name in ("zero_eps", "tol"):
            v = float(getattr(self, name))
            if not np.isfinite(v) or v <= 0.0:
                raise ValueError("%s must be finite and > 0, got %r" % (name, v))
            object.__setattr__(self, name, v)
        mi = int(self.max_iter)
        if mi < 1:
            raise ValueError("max_iter must be >= 1, got %r" % self.max_iter)
        object.__setattr__(self, "max_iter", mi)
        if self.penalize_mask is not None:
            object.__setattr__(
                self, "penalize_mask", tuple(bool(b) for b in self.penalize_mask)
            )

    def mask_for(self, p):
        """Return the penalize mask as a boolean array of length p."""
        if self.penalize_mask is None:
            return np.ones(p, dtype=bool)
        if len(self.penalize_mask) != p:
            raise ValueError(
                "penalize_mask has %d entries for p=%d columns"
                % (len(self.penalize_mask), p)
            )
        return np.array(self.penalize_mask, dtype=bool)


@dataclass(frozen=True)
class FitResult:
    """Outcome of one estimator run.

    Attributes
    ----------
    coefficients : (p,) ndarray
        Pre-threshold coefficient values.  For restricted fits these satisfy
        max|R beta - r| <= 1e-8.
    selected : frozenset of int
        1-based indices of the columns counted as in the model.  For plain
        least-squares fits this is every nonzero coefficient; for penalized
        fits it is the surviving active set (unpenalized columns always
        included, restricted-but-shrunk-to-zero columns excluded).
    multipliers : (m,) ndarray or None
        Lagrange multipliers of the final iteration's equality correction;
        ``None`` for unrestricted fits.
    lam : float
        Regularization weight the fit was run at.
    iterations : int
        Number of working-system solves performed.
    converged : bool
        Whether the max-norm coefficient change fell below ``tol`` before
        ``max_iter`` was reached.
    objective : float
        Penalized least-squares objective
        ``(y - X beta)'(y - X beta) + lam * sum_j |beta_j|`` (penalized
        coordinates only) at the returned coefficients.
    """

    coefficients: np.ndarray
    selected: frozenset
    multipliers: np.ndarray = None
    lam: float = 0.0
    iterations: int = 1
    converged: bool = True
    objective: float = field(default=float("nan"))

    def __post_init__(self):
        object.__setattr__(
            self, "coefficients", _frozen_array(self.coefficients, ndim=1)
        )
        object.__setattr__(self, "selected", frozenset(int(j) for j in self.selected))
        if self.multipliers is not None:
            object.__setattr__(
                self, "multipliers", _frozen_array(self.multipliers, ndim=1)
            )
        p = self.coefficients.shape[0]
        if any(j < 1 or j > p for j in self.selected):
            raise ValueError("selected indices must lie in 1..%d" % p)


def validate_dataset(dataset):
    """Check every Dataset invariant, raising ``ValueError`` on the first hit.

    Checked: n >= 1 and p >= 1; y length equals the number of rows of x; all
    entries finite; column names distinct and exactly p of them.  The error
    message names the offending row/column.
    """
    x, y = dataset.x, dataset.y
    n, p = x.shape
    if n < 1 or p < 1:
        raise ValueError("dimension-mismatch: need n >= 1 and p >= 1, got %dx%d" % (n, p))
    if y.shape[0] != n:
        raise ValueError(
            "dimension-mismatch: y has length %d but x has %d rows" % (y.shape[0], n)
        )
    if not np.isfinite(x).all():
        i, j = np.argwhere(~np.isfinite(x))[0]
        raise ValueError(
            "non-finite-entry: x[%d, %d] (column %r) is %r"
            % (i, j, dataset.names[j], x[i, j])
        )
    if not np.isfinite(y).all():
        i = int(np.flatnonzero(~np.isfinite(y))[0])
        raise ValueError("non-finite-entry: y[%d] is %r" % (i, y[i]))
    if len(dataset.names) != p:
        raise ValueError(
            "dimension-mismatch: %d names for %d columns" % (len(dataset.names), p)
        )
    seen = {}
    for j, name in enumerate(dataset.names):
        if name in seen:
            raise ValueError(
                "duplicate-name: column %d repeats name %r of column %d"
                % (j, name, seen[name])
            )
        seen[name] = j
    return dataset


def numerical_rank(a):
    """Rank of a 2-d array as the count of singular values above
    max(m, p) * sigma_max * 1e-12 (zero for an all-zero matrix)."""
    s = np.linalg.svd(a, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > max(a.shape) * s[0] * 1e-12))


def validate_restrictions(restrictions, p):
    """Check a RestrictionSet against a design with p columns.

    Raises ``ValueError`` describing the failure: shape-mismatch (column
    count or rvec length), too-many-rows (m > p), or rank-deficient
    (numerical rank of rmat below m).
    """
    rmat, rvec = restrictions.rmat, restrictions.rvec
    m = rmat.shape[0]
    if m < 1:
        raise ValueError("shape-mismatch: need at least one restriction row")
    if rmat.shape[1] != p:
        raise ValueError(
            "shape-mismatch: rmat has %d columns for p=%d coefficients"
            % (rmat.shape[1], p)
        )
    if rvec.shape[0] != m:
        raise ValueError(
            "shape-mismatch: rvec has length %d for %d restriction rows"
            % (rvec.shape[0], m)
        )
    if m > p:
        raise ValueError("too-many-rows: m=%d restrictions exceed p=%d" % (m, p))
    if not (np.isfinite(rmat).all() and np.isfinite(rvec).all()):
        raise ValueError("non-finite-entry: restriction matrix or vector")
    rank = numerical_rank(rmat)
    if rank < m:
        raise ValueError(
            "rank-deficient: restriction matrix has numerical rank %d < m=%d "
            "(a row is a linear combination of the others)" % (rank, m)
        )
    return restrictions
