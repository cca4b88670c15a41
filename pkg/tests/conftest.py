import numpy as np
import pytest

from slrlab.experiments import default_beta, default_mvn, default_univariate


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def univariate_model():
    return default_univariate()


@pytest.fixture
def mvn_model():
    return default_mvn()


@pytest.fixture
def beta_model():
    return default_beta()
