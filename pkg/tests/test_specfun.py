import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.special import lambertw

from lossyphase.specfun import BRANCH_POINT, constants, lambert_w0


@pytest.mark.parametrize("x", [-1 / math.e + 1e-12, -0.3, -2 / math.e**2, -1e-9, 0.0, 1e-6, 0.5, 1.0, math.e, 10.0, 1e6, 1e300])
def test_lambert_matches_scipy(x):
    assert lambert_w0(x) == pytest.approx(lambertw(x, 0).real, rel=1e-12, abs=1e-12)


@given(st.floats(min_value=BRANCH_POINT + 1e-12, max_value=1e100))
def test_lambert_inverts(x):
    w = lambert_w0(x)
    assert w >= -1.0
    assert w * math.exp(w) == pytest.approx(x, rel=1e-9, abs=1e-12)


def test_branch_point_and_domain():
    assert lambert_w0(BRANCH_POINT) == pytest.approx(-1.0, abs=1e-6)
    with pytest.raises(ValueError):
        lambert_w0(-0.4)
    with pytest.raises(ValueError):
        lambert_w0(float("nan"))


def test_constants_consistent():
    c = constants()
    w = lambertw(-2 / math.e**2).real
    assert c.w == pytest.approx(w, rel=1e-13)
    assert c.k_coeff == pytest.approx(2 + w, rel=1e-13)
    assert c.gamma_opt == pytest.approx(math.exp(-(2 + w)), rel=1e-13)
    assert c.cl_const == pytest.approx(-w * (2 + w), rel=1e-13)
    assert c.advantage_ratio == pytest.approx(math.sqrt(c.cl_const), rel=1e-13)


def test_gamma_opt_maximizes_reparameterized_objective():
    # f(gamma) = gamma ln^2 gamma / (1 - gamma)
    g = np.linspace(0.01, 0.99, 200001)
    f = g * np.log(g) ** 2 / (1 - g)
    assert g[np.argmax(f)] == pytest.approx(constants().gamma_opt, abs=1e-5)
    assert f.max() == pytest.approx(constants().cl_const, rel=1e-9)
