"""Single-mode Gaussian probes read out by homodyne detection.

Quadratures are ``x1 = (a + a^dag)/2`` and ``x2 = i(a^dag - a)/2``, so the
vacuum covariance matrix is ``I/4``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .channels import DomainError, LossyPhase, check_eta
from .specfun import constants

PHASE_SQUEEZED = math.pi


def rotation(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


def _drotation(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[-s, -c], [c, -s]])


@dataclass(frozen=True)
class GaussianState:
    d: np.ndarray
    gamma: np.ndarray

    def __post_init__(self) -> None:
        d = np.asarray(self.d, dtype=float).reshape(2)
        g = np.asarray(self.gamma, dtype=float).reshape(2, 2)
        if not np.allclose(g, g.T, rtol=0, atol=1e-12):
            raise DomainError("covariance matrix must be symmetric")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "gamma", g)

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.gamma))


@dataclass(frozen=True)
class GaussianSchemeParams:
    """Displaced squeezed state ``R(varphi) D(alpha) S(r, pi) |0>``."""

    alpha: float
    r: float
    varphi: float = 0.0
    phi_sq: float = PHASE_SQUEEZED

    def __post_init__(self) -> None:
        if self.alpha < 0 or self.r < 0:
            raise DomainError("alpha and r must be non-negative")

    @property
    def n_sq(self) -> float:
        return math.sinh(self.r) ** 2

    @property
    def n_total(self) -> float:
        return self.alpha**2 + self.n_sq


def prepare(params: GaussianSchemeParams) -> GaussianState:
    rot = rotation(params.varphi)
    d = rot @ np.array([params.alpha, 0.0])
    core = 0.25 * np.diag([math.exp(2 * params.r), math.exp(-2 * params.r)])
    gamma = rot @ core @ rot.T
    return GaussianState(d, 0.5 * (gamma + gamma.T))


def apply_loss_phase(state: GaussianState, lp: LossyPhase) -> GaussianState:
    """Attenuate by ``lp.eta`` (mixing in vacuum) and rotate by ``lp.theta``."""
    rot = rotation(lp.theta)
    d = math.sqrt(lp.eta) * (rot @ state.d)
    gamma = lp.eta * (rot @ state.gamma @ rot.T) + 0.25 * (1.0 - lp.eta) * np.eye(2)
    return GaussianState(d, 0.5 * (gamma + gamma.T))


def homodyne_fisher(mu: float, v: float, dmu: float, dv: float) -> float:
    """Fisher information of a normal outcome with mean ``mu`` and variance ``v``.

    ``mu`` does not enter the result; it is accepted so callers can pass the
    full moment set.
    """
    if not v > 0:
        raise DomainError(f"variance must be positive, got {v!r}")
    return dmu * dmu / v + dv * dv / (2.0 * v * v)


def moment_pipeline_fisher(params: GaussianSchemeParams, lp: LossyPhase) -> float:
    """Homodyne (``x1``) Fisher information about ``lp.theta`` via the moments.

    Prepares the state, pushes it through the channel and differentiates the
    ``x1`` mean and variance analytically with respect to the phase.
    """
    state = prepare(params)
    out = apply_loss_phase(state, lp)
    rot, drot = rotation(lp.theta), _drotation(lp.theta)
    dd = math.sqrt(lp.eta) * (drot @ state.d)
    dgamma = lp.eta * (drot @ state.gamma @ rot.T + rot @ state.gamma @ drot.T)
    return homodyne_fisher(out.d[0], out.gamma[0, 0], dd[0], dgamma[0, 0])


def scheme_fisher(alpha: float, r: float, eta: float) -> float:
    """Homodyne Fisher information with the phase-sensitive quadrature aligned.

    Closed form valid at the homodyne angle ``varphi = pi/2 - theta``.
    """
    eta = check_eta(eta)
    return 4.0 * alpha**2 * eta / (1.0 + math.expm1(-2.0 * r) * eta)


def _excess_denominator(n_sq: float, eta: float) -> float:
    # 1 + (e^{-2r} - 1) eta written in n_sq = sinh^2 r; the difference is
    # evaluated as -n_sq / (n_sq + sqrt(n_sq(n_sq+1))) to avoid cancellation.
    diff = -n_sq / (n_sq + math.sqrt(n_sq * (n_sq + 1.0))) if n_sq > 0 else 0.0
    return 1.0 + 2.0 * eta * diff


def scheme_fpl_limit(n_sq: float, eta: float) -> float:
    """Large-photon-number Fisher information per lost photon at fixed ``n_sq``."""
    eta = check_eta(eta)
    if n_sq < 0:
        raise DomainError(f"n_sq must be non-negative, got {n_sq!r}")
    return (1.0 - eta) / _excess_denominator(n_sq, eta) * 4.0 * eta / (1.0 - eta) ** 2


def squeezing_db(r: float) -> float:
    return 20.0 * r / math.log(10.0)


@dataclass(frozen=True)
class SqueezingRequirement:
    eta: float
    n_sq: float
    r: float
    squeezing_db: float


def required_squeezing_db(
    eta: float, tol: float = 1e-12, upper: float = 1e8
) -> Optional[SqueezingRequirement]:
    """Squeezing that lets the Gaussian scheme match the best classical SM scheme.

    Bisection on ``n_sq`` (``scheme_fpl_limit`` increases with ``n_sq``).
    Returns ``None`` if the target exceeds what any squeezing can reach.
    """
    eta = check_eta(eta)
    target = 4.0 * constants().cl_const / math.log(eta) ** 2

    def excess(n: float) -> float:
        return scheme_fpl_limit(n, eta) - target

    if excess(0.0) >= 0.0:
        lo = hi = 0.0
    elif excess(upper) < 0.0:
        return None
    else:
        lo, hi = 0.0, upper
        while hi - lo > tol * max(hi, 1e-300):
            mid = 0.5 * (lo + hi)
            if mid in (lo, hi):
                break
            if excess(mid) < 0.0:
                lo = mid
            else:
                hi = mid
    n_sq = hi
    r = math.asinh(math.sqrt(n_sq))
    return SqueezingRequirement(eta, n_sq, r, squeezing_db(r))


def fisher_at_fixed_n(n_sq: float, n: float, eta: float) -> float:
    """Fisher information with ``n`` photons in total, ``n_sq`` of them squeezing."""
    return 4.0 * eta * (n - n_sq) / _excess_denominator(n_sq, eta)


@dataclass(frozen=True)
class FixedNOptimum:
    n_sq: float
    fisher: float


def optimal_nsq_fixed_n(eta: float, n: float) -> FixedNOptimum:
    """Squeezing share maximizing homodyne Fisher information at fixed ``n``."""
    eta = check_eta(eta)
    if not n > 0:
        raise DomainError(f"n must be positive, got {n!r}")
    s = math.sqrt(1.0 - 4.0 * (eta - 1.0) * eta * n)
    # (s - 1)^2 rewritten as (s^2 - 1)^2 / (s + 1)^2 to keep precision at small n
    s2m1 = -4.0 * (eta - 1.0) * eta * n
    n_sq = -((s2m1 / (s + 1.0)) ** 2) / (4.0 * (eta - 1.0) * (s - eta))
    fisher = 2.0 * eta * (2.0 * n * (1.0 - eta) - s2m1 / (1.0 + s)) / (eta - 1.0) ** 2
    return FixedNOptimum(n_sq, fisher)
