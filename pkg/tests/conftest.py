import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from prdsu import InterferometerConfig

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

phases = st.floats(-np.pi, np.pi)
gains = st.floats(0.0, 2.0)


@st.composite
def configs(draw, balanced=False, T=None):
    g = draw(gains)
    kw = dict(r=draw(st.floats(0, 2)), gamma_mag=draw(st.floats(0, 3)),
              T=draw(st.floats(0, 1)) if T is None else T, theta=draw(phases))
    if balanced:
        return InterferometerConfig.balanced(g=g, **kw)
    return InterferometerConfig(g1=g, g2=draw(gains), eta1=draw(phases), eta2=draw(phases),
                                delta_xi=draw(phases), delta_gamma=draw(phases), **kw)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
