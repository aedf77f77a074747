"""Multi-pass strategies with preparation, round-trip and measurement loss.

Light is attenuated by ``eta_p`` before the first pass, by ``eta_r`` on every
return trip between passes and by ``eta_m`` before detection.  The resource
is still the number of photons absorbed by the sample.

The quantum figure is the SM bound evaluated at the overall transmissivity
``eta_tot`` with the phase magnified ``k`` times; the classical figure is the
coherent-state QFI for the same channel.  Both scale as ``1/eta_p`` at fixed
``eta_p * eta_m``, so their ratio depends on ``eta``, ``eta_r`` and the
product only.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional

import numpy as np

from .analytic import classical_kopt
from .channels import DomainError, check_eta

ADVANTAGE_THRESHOLD = 0.20
DEFAULT_PRECISION = 8e-5
SCAN_STEP = 0.01


class ImperfectStrategy(str, Enum):
    CLASSICAL = "classical"
    QUANTUM_BOUND = "quantum_bound"


@dataclass(frozen=True)
class ImperfectionBudget:
    eta_p: float = 1.0
    eta_r: float = 1.0
    eta_m: float = 1.0

    def __post_init__(self) -> None:
        for name in ("eta_p", "eta_r", "eta_m"):
            v = getattr(self, name)
            if not (0.0 < v <= 1.0):
                raise DomainError(f"{name} must lie in (0, 1], got {v!r}")

    @property
    def eta_pm(self) -> float:
        return self.eta_p * self.eta_m


def _ks(k) -> np.ndarray:
    ks = np.asarray(k, dtype=float)
    if np.any(ks < 1) or np.any(ks != np.round(ks)):
        raise DomainError("pass counts must be integers >= 1")
    return ks


def total_transmissivity(eta: float, b: ImperfectionBudget, k):
    ks = _ks(k)
    out = eta**ks * b.eta_p * b.eta_m * b.eta_r ** (ks - 1)
    return out if out.ndim else float(out)


def phase_lost_photons(eta: float, b: ImperfectionBudget, k, n_in: float = 1.0):
    """Photons absorbed by the sample over ``k`` passes (geometric-series closed form)."""
    eta = check_eta(eta)
    ks = _ks(k)
    x = eta * b.eta_r
    series = -np.expm1(ks * math.log(x)) / (1.0 - x)
    out = n_in * b.eta_p * (1.0 - eta) * series
    return out if out.ndim else float(out)


def imperfect_fpl(eta: float, b: ImperfectionBudget, k, strategy: ImperfectStrategy | str):
    """SM QFI per photon lost at the sample, for one or many pass counts."""
    strategy = ImperfectStrategy(strategy)
    eta = check_eta(eta)
    ks = _ks(k)
    tot = total_transmissivity(eta, b, ks)
    fpl = 4.0 * ks * ks * tot / phase_lost_photons(eta, b, ks)
    if strategy is ImperfectStrategy.QUANTUM_BOUND:
        if np.any(np.asarray(tot) >= 1.0):
            raise DomainError("overall transmissivity must be below one")
        fpl = fpl / (1.0 - tot)
    return fpl if np.ndim(fpl) else float(fpl)


def default_k_max(eta: float) -> int:
    return 10 * math.ceil(classical_kopt(eta)) + 10


@dataclass(frozen=True)
class KOptimum:
    k: int
    fpl: float


def optimize_k(
    eta: float,
    b: ImperfectionBudget,
    strategy: ImperfectStrategy | str,
    k_max: Optional[int] = None,
) -> KOptimum:
    """Best integer pass count in ``1..k_max``; ties go to the smaller ``k``.

    Raises :class:`DomainError` if the maximizer sits at ``k_max``, since the
    scan could then have missed the optimum.
    """
    k_max = default_k_max(eta) if k_max is None else int(k_max)
    ks = np.arange(1, k_max + 1)
    vals = imperfect_fpl(eta, b, ks, strategy)
    i = int(np.argmax(vals))
    if i == k_max - 1 and k_max > 1:
        raise DomainError(f"optimal k reached the scan limit k_max={k_max}")
    return KOptimum(int(ks[i]), float(vals[i]))


@dataclass(frozen=True)
class AdvantageResult:
    k_cl: int
    k_q: int
    fpl_cl: float
    fpl_q: float
    rmse_reduction: float


def advantage(eta: float, b: ImperfectionBudget, k_max: Optional[int] = None) -> AdvantageResult:
    cl = optimize_k(eta, b, ImperfectStrategy.CLASSICAL, k_max)
    q = optimize_k(eta, b, ImperfectStrategy.QUANTUM_BOUND, k_max)
    return AdvantageResult(cl.k, q.k, cl.fpl, q.fpl, 1.0 - math.sqrt(cl.fpl / q.fpl))


def _reduction(eta: float, eta_r: float, eta_pm: float, k_max: int) -> float:
    # eta_p enters only through eta_pm, so place all of it in eta_m
    return advantage(eta, ImperfectionBudget(1.0, eta_r, eta_pm), k_max).rmse_reduction


def threshold_eta_r(
    eta: float,
    eta_pm: float,
    precision: float = DEFAULT_PRECISION,
    threshold: float = ADVANTAGE_THRESHOLD,
) -> Optional[float]:
    """Highest round-trip transmissivity at which the RMSE reduction exceeds ``threshold``.

    Scans ``eta_r`` downward from 1 in steps of 0.01 and bisects the first
    bracketing interval to within ``precision``.  Returns ``None`` when no
    scanned ``eta_r`` gives the required advantage.
    """
    eta = check_eta(eta)
    if not (0.0 < eta_pm <= 1.0):
        raise DomainError(f"eta_pm must lie in (0, 1], got {eta_pm!r}")
    k_max = default_k_max(eta)
    n_steps = int(round(1.0 / SCAN_STEP))
    above = None
    for i in range(n_steps):
        eta_r = 1.0 - i * SCAN_STEP
        if _reduction(eta, eta_r, eta_pm, k_max) > threshold:
            if above is None:
                return eta_r
            lo, hi = eta_r, above
            while hi - lo > precision:
                mid = 0.5 * (lo + hi)
                if _reduction(eta, mid, eta_pm, k_max) > threshold:
                    lo = mid
                else:
                    hi = mid
            return lo
        above = eta_r
    return None


@dataclass(frozen=True)
class SurfaceCell:
    eta: float
    eta_pm: float
    threshold_eta_r: Optional[float]


def default_surface_axis(n: int) -> list[float]:
    return [float(x) for x in np.linspace(0.01, 0.99, n)]


def surface_grid(
    eta_grid: Iterable[float],
    eta_pm_grid: Iterable[float],
    precision: float = DEFAULT_PRECISION,
) -> list[SurfaceCell]:
    """Threshold per cell, row-major by ``eta`` then ``eta_pm``."""
    eta_pm_grid = sorted(float(x) for x in eta_pm_grid)
    return [
        SurfaceCell(eta, pm, threshold_eta_r(eta, pm, precision))
        for eta in sorted(float(x) for x in eta_grid)
        for pm in eta_pm_grid
    ]
