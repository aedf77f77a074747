import math

import pytest
from hypothesis import given, strategies as st

from lossyphase.channels import (
    DomainError,
    LossyPhase,
    PassCount,
    classical_incident_photons,
    compose,
    incident_photons,
    lost_photons,
    noon_comparison,
)

etas = st.floats(0.01, 0.99)


@given(etas, st.integers(1, 60), st.floats(0.1, 1e4))
def test_lost_photons_explicit_sum(eta, k, n):
    lp = LossyPhase(eta)
    explicit = sum(n * eta**j * (1 - eta) for j in range(k))
    assert lost_photons(lp, PassCount(k, True), n) == pytest.approx(explicit, rel=1e-12)
    assert lost_photons(lp, k, n) == pytest.approx(n * (1 - eta**k), rel=1e-12)


@given(etas, st.floats(-3, 3), st.floats(0.1, 20))
def test_compose(eta, theta, k):
    out = compose(LossyPhase(eta, theta), k)
    assert out.eta == pytest.approx(eta**k, rel=1e-12)
    assert out.theta == pytest.approx(k * theta, rel=1e-12, abs=1e-15)


@given(etas, st.integers(1, 40))
def test_incident_photons(eta, k):
    lp = LossyPhase(eta)
    assert incident_photons(lp, k, 1.0) == pytest.approx(sum(eta**j for j in range(k)), rel=1e-12)
    assert classical_incident_photons(eta, k) == pytest.approx(incident_photons(lp, k, 1.0), rel=1e-12)


@pytest.mark.parametrize("eta", [0.0, 1.0, -0.1, 1.5, float("nan")])
def test_eta_domain(eta):
    with pytest.raises(DomainError):
        LossyPhase(eta)


def test_pass_count_domain():
    with pytest.raises(DomainError):
        PassCount(2.5, discrete=True)
    with pytest.raises(DomainError):
        PassCount(0)
    assert PassCount(2.5).k == 2.5


@given(etas, st.integers(1, 30))
def test_noon_comparison(eta, n):
    cmp = noon_comparison(eta, n)
    assert cmp.noon_incident == n
    assert cmp.classical_incident == pytest.approx(sum(eta**p for p in range(n)), rel=1e-12)
    assert cmp.classical_fewer == (n > 1)


def test_noon_single_photon_ties():
    cmp = noon_comparison(0.5, 1)
    assert cmp.classical_incident == 1.0 and not cmp.classical_fewer
