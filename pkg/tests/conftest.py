import numpy as np
import pytest

import saradc as sa


@pytest.fixture(scope="session")
def ref_cfg():
    return sa.reference_defaults()


@pytest.fixture(scope="session")
def ideal_cfg(ref_cfg):
    return sa.ideal_config(ref_cfg)


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def ideal_array(ideal_cfg):
    return sa.build_cap_array(ideal_cfg, np.random.default_rng(0))
