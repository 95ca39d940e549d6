import dataclasses

import numpy as np
import pytest

from restlasso import Dataset, FitConfig, FitResult, RestrictionSet
from restlasso.model import numerical_rank, validate_dataset, validate_restrictions


def test_dataset_defaults_and_properties():
    data = Dataset(x=[[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]], y=[1.0, 2.0, 3.0])
    assert data.n == 3 and data.p == 2
    assert data.names == ("b1", "b2")
    assert data.x.dtype == float and data.y.dtype == float


def test_dataset_is_immutable():
    data = Dataset(x=np.ones((2, 2)), y=np.ones(2))
    with pytest.raises(dataclasses.FrozenInstanceError):
        data.x = np.zeros((2, 2))
    with pytest.raises(ValueError):
        data.x[0, 0] = 7.0
    # construction copies: mutating the source array must not leak in
    src = np.ones((2, 2))
    data = Dataset(x=src, y=np.ones(2))
    src[0, 0] = 99.0
    assert data.x[0, 0] == 1.0


def test_dataset_rejects_wrong_ndim():
    with pytest.raises(ValueError):
        Dataset(x=np.ones(4), y=np.ones(4))
    with pytest.raises(ValueError):
        Dataset(x=np.ones((2, 2)), y=np.ones((2, 2)))


def test_validate_dataset_messages():
    with pytest.raises(ValueError, match="dimension-mismatch"):
        validate_dataset(Dataset(x=np.ones((3, 2)), y=np.ones(2)))
    bad = np.ones((3, 2))
    bad[1, 1] = np.nan
    with pytest.raises(ValueError, match=r"non-finite-entry: x\[1, 1\]"):
        validate_dataset(Dataset(x=bad, y=np.ones(3)))
    yb = np.ones(3)
    yb[2] = np.inf
    with pytest.raises(ValueError, match=r"non-finite-entry: y\[2\]"):
        validate_dataset(Dataset(x=np.ones((3, 2)), y=yb))
    with pytest.raises(ValueError, match="duplicate-name"):
        validate_dataset(Dataset(x=np.ones((3, 2)), y=np.ones(3), names=["a", "a"]))
    with pytest.raises(ValueError, match="dimension-mismatch"):
        validate_dataset(Dataset(x=np.ones((3, 2)), y=np.ones(3), names=["a"]))


def test_numerical_rank():
    assert numerical_rank(np.zeros((3, 4))) == 0
    assert numerical_rank(np.eye(3)) == 3
    a = np.array([[1.0, 2.0, 3.0], [2.0, 4.0, 6.0]])  # second row = 2 * first
    assert numerical_rank(a) == 1


def test_validate_restrictions():
    ok = RestrictionSet(rmat=[[1.0, 0.0, 1.0], [0.0, 1.0, 0.0]], rvec=[1.0, 2.0])
    assert validate_restrictions(ok, 3) is ok
    with pytest.raises(ValueError, match="shape-mismatch"):
        validate_restrictions(ok, 4)
    with pytest.raises(ValueError, match="shape-mismatch"):
        validate_restrictions(RestrictionSet(rmat=[[1.0, 0.0]], rvec=[1.0, 2.0]), 2)
    with pytest.raises(ValueError, match="too-many-rows"):
        validate_restrictions(
            RestrictionSet(rmat=[[1.0], [0.0]], rvec=[1.0, 2.0]), 1
        )
    with pytest.raises(ValueError, match="rank-deficient"):
        validate_restrictions(
            RestrictionSet(rmat=[[1.0, 2.0, 0.0], [2.0, 4.0, 0.0]], rvec=[1.0, 2.0]), 3
        )
    with pytest.raises(ValueError, match="non-finite-entry"):
        validate_restrictions(
            RestrictionSet(rmat=[[np.nan, 1.0]], rvec=[0.0]), 2
        )


def test_fit_config_validation():
    cfg = FitConfig()
    assert cfg.lam == 0.0 and cfg.max_iter == 100
    assert cfg.mask_for(3).tolist() == [True, True, True]
    cfg = FitConfig(penalize_mask=[False, True, True])
    assert cfg.mask_for(3).tolist() == [False, True, True]
    with pytest.raises(ValueError):
        cfg.mask_for(4)
    with pytest.raises(ValueError):
        FitConfig(lam=-1.0)
    with pytest.raises(ValueError):
        FitConfig(lam=np.inf)
    with pytest.raises(ValueError):
        FitConfig(zero_eps=0.0)
    with pytest.raises(ValueError):
        FitConfig(tol=-1e-9)
    with pytest.raises(ValueError):
        FitConfig(max_iter=0)


def test_fit_result_normalization():
    res = FitResult(coefficients=[1.0, 0.0, 2.0], selected=[1, 3])
    assert res.selected == frozenset({1, 3})
    assert res.multipliers is None
    with pytest.raises(ValueError):
        FitResult(coefficients=[1.0, 2.0], selected=[3])
    with pytest.raises(ValueError):
        FitResult(coefficients=[1.0, 2.0], selected=[0])
