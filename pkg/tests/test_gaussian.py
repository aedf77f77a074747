import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad
from scipy.optimize import minimize_scalar

from lossyphase import gaussian as g
from lossyphase.analytic import classical_fpl_opt
from lossyphase.channels import DomainError, LossyPhase

etas = st.floats(0.02, 0.98)


def aligned(alpha, r, theta):
    return g.GaussianSchemeParams(alpha, r, varphi=math.pi / 2 - theta)


def test_vacuum_covariance():
    state = g.prepare(g.GaussianSchemeParams(0.0, 0.0))
    np.testing.assert_allclose(state.gamma, np.eye(2) / 4)
    assert state.det == pytest.approx(1 / 16)


@given(st.floats(0, 3), st.floats(0, 2), st.floats(0, 2 * math.pi), etas, st.floats(-3, 3))
def test_loss_keeps_state_physical(alpha, r, varphi, eta, theta):
    out = g.apply_loss_phase(g.prepare(g.GaussianSchemeParams(alpha, r, varphi)), LossyPhase(eta, theta))
    assert out.det >= 1 / 16 * (1 - 1e-9)
    assert np.linalg.norm(out.d) == pytest.approx(math.sqrt(eta) * alpha, rel=1e-12, abs=1e-14)


@given(st.floats(0.1, 5), st.floats(0, 2.5), etas, st.floats(-3, 3))
def test_closed_form_matches_pipeline(alpha, r, eta, theta):
    pipe = g.moment_pipeline_fisher(aligned(alpha, r, theta), LossyPhase(eta, theta))
    assert pipe == pytest.approx(g.scheme_fisher(alpha, r, eta), rel=1e-10)


def test_known_value():
    assert g.scheme_fisher(1.3, 0.7, 0.6) == pytest.approx(7.402024753244086, rel=1e-14)


def _outcome_density(params, eta, theta, x):
    out = g.apply_loss_phase(g.prepare(params), LossyPhase(eta, theta))
    mu, v = out.d[0], out.gamma[0, 0]
    return math.exp(-((x - mu) ** 2) / (2 * v)) / math.sqrt(2 * math.pi * v)


@pytest.mark.parametrize("seed", range(5))
def test_pipeline_against_quadrature(seed):
    rng = np.random.default_rng(seed)
    alpha, r, eta, theta, varphi = rng.uniform(0.3, 3), rng.uniform(0, 1.5), rng.uniform(0.1, 0.9), rng.uniform(-1, 1), rng.uniform(0, math.pi)
    params = g.GaussianSchemeParams(alpha, r, varphi)
    h = 1e-5

    def integrand(x):
        p = _outcome_density(params, eta, theta, x)
        dp = (_outcome_density(params, eta, theta + h, x) - _outcome_density(params, eta, theta - h, x)) / (2 * h)
        return dp * dp / p if p > 0 else 0.0

    out = g.apply_loss_phase(g.prepare(params), LossyPhase(eta, theta))
    sd = math.sqrt(out.gamma[0, 0])
    num, _ = quad(integrand, out.d[0] - 12 * sd, out.d[0] + 12 * sd, epsabs=0, epsrel=1e-11, limit=200)
    assert g.moment_pipeline_fisher(params, LossyPhase(eta, theta)) == pytest.approx(num, rel=1e-6)


def test_homodyne_fisher_rejects_bad_variance():
    with pytest.raises(DomainError):
        g.homodyne_fisher(0.0, 0.0, 1.0, 1.0)


@given(etas)
def test_limit_endpoints(eta):
    assert g.scheme_fpl_limit(0.0, eta) == pytest.approx(4 * eta / (1 - eta), rel=1e-14)
    assert g.scheme_fpl_limit(1e8, eta) == pytest.approx(4 * eta / (1 - eta) ** 2, rel=1e-3)


@given(etas, st.floats(0, 1e3), st.floats(0, 1e3))
def test_limit_monotone_in_squeezing(eta, a, b):
    lo, hi = sorted((a, b))
    assert g.scheme_fpl_limit(lo, eta) <= g.scheme_fpl_limit(hi, eta) * (1 + 1e-14)


@given(etas, st.floats(1e-6, 1e4))
def test_limit_matches_large_alpha_ratio(eta, n_sq):
    # the large-alpha ratio of Fisher information to lost photons
    r = math.asinh(math.sqrt(n_sq))
    alpha = 1e7
    direct = g.scheme_fisher(alpha, r, eta) / ((alpha**2 + n_sq) * (1 - eta))
    assert g.scheme_fpl_limit(n_sq, eta) == pytest.approx(direct, rel=1e-6)


@given(st.floats(0.1, 0.98))
def test_required_squeezing_round_trip(eta):
    req = g.required_squeezing_db(eta)
    assert req is not None
    n_back = math.sinh(req.squeezing_db * math.log(10) / 20) ** 2
    target = classical_fpl_opt(eta, "sm").fisher_per_lost
    if n_back > 0:
        assert g.scheme_fpl_limit(n_back, eta) == pytest.approx(target, rel=1e-9)
    else:
        assert g.scheme_fpl_limit(0.0, eta) >= target


def test_required_squeezing_closed_form():
    # n_sq = c^2 / (1 - 2c) with c = (1 - D) / (2 eta) and D = 4 eta / ((1 - eta) T)
    for eta in (0.3, 0.5, 0.7, 0.9):
        target = classical_fpl_opt(eta, "sm").fisher_per_lost
        c = (1 - 4 * eta / ((1 - eta) * target)) / (2 * eta)
        assert g.required_squeezing_db(eta).n_sq == pytest.approx(c * c / (1 - 2 * c), rel=1e-9)


def test_required_squeezing_absent_at_low_eta():
    assert g.required_squeezing_db(0.05) is None


@pytest.mark.parametrize("eta,n", [(0.2, 1.0), (0.5, 10.0), (0.8, 1e3), (0.95, 1e5), (0.5, 1e-4)])
def test_optimal_nsq_fixed_n(eta, n):
    res = minimize_scalar(lambda s: -g.fisher_at_fixed_n(s, n, eta), bounds=(0, n), method="bounded",
                          options={"xatol": 1e-12 * max(n, 1)})
    opt = g.optimal_nsq_fixed_n(eta, n)
    assert opt.fisher == pytest.approx(-res.fun, rel=1e-9)
    assert opt.fisher == pytest.approx(g.fisher_at_fixed_n(opt.n_sq, n, eta), rel=1e-9)
    assert 0 <= opt.n_sq <= n


def test_squeezing_db():
    assert g.squeezing_db(math.log(10) / 2) == pytest.approx(10.0)
