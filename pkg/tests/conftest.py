import numpy as np
import pytest

from restlasso import Dataset, RestrictionSet


@pytest.fixture
def toy_data():
    """Well-conditioned n=40, p=6 instance with two true zeros."""
    rng = np.random.default_rng(20240501)
    x = rng.normal(size=(40, 6))
    beta = np.array([0.0, 1.0, 3.0, 1.0, 5.0, 0.0])
    y = x @ beta + rng.normal(size=40)
    return Dataset(x=x, y=y), beta


@pytest.fixture
def toy_restrictions():
    return RestrictionSet(
        rmat=[[0.0, 1.0, 0.0, -1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 2.0, 1.0, 0.0]],
        rvec=[0.0, 10.0],
    )
