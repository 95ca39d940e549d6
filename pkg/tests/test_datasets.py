import numpy as np

from restlasso import INTERCEPT_NAME, PRIOR_BETA, rd_expenditure, rd_restrictions
from restlasso.datasets import RD_TABLE, RD_YEARS
from restlasso.model import validate_dataset, validate_restrictions


def test_expenditure_table_values():
    t = np.array(RD_TABLE)
    assert t.shape == (10, 5)
    assert RD_YEARS == (1972, 1975, 1979, 1980, 1981, 1982, 1983, 1984, 1985, 1986)
    # spot checks against the published table (columns: Y, X1..X4)
    assert RD_TABLE[0] == (2.3, 1.9, 2.2, 1.9, 3.7)
    assert RD_TABLE[4] == (2.4, 2.0, 2.5, 2.3, 3.8)
    assert RD_TABLE[7] == (2.6, 2.2, 2.6, 2.6, 4.0)
    assert RD_TABLE[9] == (2.7, 2.3, 2.7, 2.8, 3.8)
    # column checksums pin every remaining cell
    assert np.allclose(t.sum(axis=0), [24.5, 20.3, 25.0, 23.7, 37.7], atol=1e-12)


def test_expenditure_dataset_shape():
    data = rd_expenditure()
    validate_dataset(data)
    assert data.n == 10 and data.p == 5
    assert data.names == (INTERCEPT_NAME, "X1", "X2", "X3", "X4")
    assert (data.x[:, 0] == 1.0).all()
    assert np.array_equal(data.y, np.array(RD_TABLE)[:, 0])
    assert np.array_equal(data.x[:, 1:], np.array(RD_TABLE)[:, 1:])
    bare = rd_expenditure(intercept=False)
    assert bare.p == 4 and bare.names == ("X1", "X2", "X3", "X4")


def test_expenditure_restrictions():
    rs = rd_restrictions()
    validate_restrictions(rs, 5)
    assert rs.rmat.tolist() == [
        [1.0, 1.0, 1.0, 1.0, 1.0],
        [0.0, 1.0, 3.0, 1.0, 2.0],
    ]
    assert rs.rvec.tolist() == [1.2170, 1.0904]


def test_prior_coefficients_literal():
    assert PRIOR_BETA == (0.6, 0.7, 0.0, 0.6, -0.5)
