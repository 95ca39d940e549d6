"""Embedded example data: national R&D expenditure shares.

Ten annual observations (1972-1986, the years with published figures) of
total national research-and-development expenditure as a percentage of
gross national product.  The response Y is the United States percentage;
X1..X4 are France, West Germany, Japan, and the Soviet Union.

The accompanying restriction set (used with an intercept as the first
coefficient, p = 5) encodes prior information from an earlier restricted
ridge analysis of the same data:

    b1 + b2 + b3 + b4 + b5 = 1.2170
    b2 + 3 b3 + b4 + 2 b5 = 1.0904

``PRIOR_BETA`` is the prior coefficient vector those equations were derived
from; the estimators consume only (R, r), so it is reported for reference
and never used in fitting.
"""

import numpy as np

from .io import add_intercept
from .model import Dataset, RestrictionSet

__all__ = [
    "RD_YEARS",
    "RD_TABLE",
    "PRIOR_BETA",
    "rd_expenditure",
    "rd_restrictions",
]

RD_YEARS = (1972, 1975, 1979, 1980, 1981, 1982, 1983, 1984, 1985, 1986)

# Columns: Y, X1 (France), X2 (West Germany), X3 (Japan), X4 (Soviet Union)
RD_TABLE = (
    (2.3, 1.9, 2.2, 1.9, 3.7),
    (2.2, 1.8, 2.2, 2.0, 3.8),
    (2.2, 1.8, 2.4, 2.1, 3.6),
    (2.3, 1.8, 2.4, 2.2, 3.8),
    (2.4, 2.0, 2.5, 2.3, 3.8),
    (2.5, 2.1, 2.6, 2.4, 3.7),
    (2.6, 2.1, 2.6, 2.6, 3.8),
    (2.6, 2.2, 2.6, 2.6, 4.0),
    (2.7, 2.3, 2.8, 2.8, 3.7),
    (2.7, 2.3, 2.7, 2.8, 3.8),
)

PRIOR_BETA = (0.6, 0.7, 0.0, 0.6, -0.5)


def rd_expenditure(intercept=True):
    """The R&D expenditure Dataset.

    With ``intercept=True`` (default) an all-ones first column is prepended
    (names: b1_intercept, X1..X4; p = 5), matching the restriction set's
    five coefficients.
    """
    table = np.array(RD_TABLE)
    data = Dataset(x=table[:, 1:], y=table[:, 0], names=("X1", "X2", "X3", "X4"))
    return add_intercept(data) if intercept else data


def rd_restrictions():
    """The two-equation restriction set for the intercept-augmented design."""
    return RestrictionSet(
        rmat=np.array(
            [[1.0, 1.0, 1.0, 1.0, 1.0], [0.0, 1.0, 3.0, 1.0, 2.0]]
        ),
        rvec=np.array([1.2170, 1.0904]),
    )
