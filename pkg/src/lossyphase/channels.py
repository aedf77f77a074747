"""The lossy phase channel, its multi-pass composition and photon accounting."""
from __future__ import annotations

import math
from dataclasses import dataclass

ETA_MIN = 1e-9
ETA_MAX = 1.0 - 1e-9


class DomainError(ValueError):
    """A numerical input lies outside the domain where a formula is defined."""


def check_eta(eta: float, name: str = "eta") -> float:
    eta = float(eta)
    if not (ETA_MIN <= eta <= ETA_MAX):
        raise DomainError(f"{name} must lie in [{ETA_MIN:g}, 1 - {ETA_MIN:g}], got {eta!r}")
    return eta


def check_k(k: float, discrete: bool = False) -> float:
    k = float(k)
    if not k > 0 or math.isinf(k):
        raise DomainError(f"pass count must be positive and finite, got {k!r}")
    if discrete and k != int(k):
        raise DomainError(f"discrete pass count must be an integer, got {k!r}")
    return k


@dataclass(frozen=True)
class LossyPhase:
    """One application of the channel: transmit ``eta``, then rotate by ``theta``."""

    eta: float
    theta: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "eta", check_eta(self.eta))
        object.__setattr__(self, "theta", float(self.theta))


@dataclass(frozen=True)
class PassCount:
    k: float
    discrete: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "k", check_k(self.k, self.discrete))


def _k(k: PassCount | float) -> float:
    return k.k if isinstance(k, PassCount) else check_k(k)


def compose(lp: LossyPhase, k: PassCount | float) -> LossyPhase:
    """``k`` passes through ``lp`` act as a single channel ``(eta**k, k*theta)``.

    Phase and loss commute, so this holds for non-integer ``k`` too.  The
    composite transmissivity may fall below the single-channel floor, so it
    is built without re-validation.
    """
    kk = _k(k)
    out = object.__new__(LossyPhase)
    object.__setattr__(out, "eta", lp.eta**kk)
    object.__setattr__(out, "theta", lp.theta * kk)
    return out


def lost_photons(lp: LossyPhase, k: PassCount | float, n_in: float) -> float:
    """Mean photons absorbed over ``k`` passes for ``n_in`` input photons."""
    return n_in * (1.0 - lp.eta ** _k(k))


def incident_photons(lp: LossyPhase, k: PassCount | float, n_in: float) -> float:
    """Mean photons incident on the phase element; lost = incident * (1 - eta)."""
    return lost_photons(lp, k, n_in) / (1.0 - lp.eta)


def classical_incident_photons(eta: float, n_passes: int, n_in: float = 1.0) -> float:
    """Incident photons when a coherent state makes ``n_passes`` passes.

    Explicit sum of ``eta**(p - 1)`` for ``p = 1..n_passes``; the beam
    weakens by ``eta`` after every pass.
    """
    if int(n_passes) != n_passes or n_passes < 1:
        raise DomainError(f"n_passes must be a positive integer, got {n_passes!r}")
    return n_in * math.fsum(eta ** (p - 1) for p in range(1, int(n_passes) + 1))


@dataclass(frozen=True)
class NoonComparison:
    noon_incident: float
    classical_incident: float
    classical_fewer: bool


def noon_comparison(eta: float, n: int) -> NoonComparison:
    """Incident photons for one N00N pass vs. ``n`` coherent-state passes.

    Both strategies reach the same QFI, so whichever puts fewer photons on
    the sample wins per incident photon.
    """
    classical = classical_incident_photons(eta, n, 1.0)
    return NoonComparison(
        noon_incident=float(n),
        classical_incident=classical,
        classical_fewer=classical < n,
    )
