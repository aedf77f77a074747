"""Coherent light in a two-mode interferometer that revisits a lossy phase.

Each of ``h`` modules mixes the two modes on a beam splitter of angle ``xi``
and then sends mode 2 through ``k`` passes of the lossy phase plus a control
phase.  With ``|alpha>|0>`` at the input the output stays coherent, so the
QFI per lost photon follows from the first column of the transfer matrix
and its phase derivative.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .channels import DomainError, check_eta, check_k
from .search import golden_section_max

XI_MAX = 6.0
# Lower edge of the h*xi bracket; discrete-k optima in the small-mixing regime
# sit on it.
XI_MIN_TABLE = 0.01
DEGENERATE_LOSS = 1e-15


class DegenerateNetworkError(DomainError):
    """No light reaches the lossy arm, so QFI per lost photon is undefined."""


@dataclass(frozen=True)
class NetworkConfig:
    h: int
    k: float
    xi: float
    phi_control: float
    eta: float

    def __post_init__(self) -> None:
        if int(self.h) != self.h or self.h < 1:
            raise DomainError(f"h must be a positive integer, got {self.h!r}")
        object.__setattr__(self, "h", int(self.h))
        object.__setattr__(self, "eta", check_eta(self.eta))
        if self.k != 0:
            object.__setattr__(self, "k", check_k(self.k))
        if not (0.0 <= self.xi < 2 * math.pi):
            raise DomainError(f"xi must lie in [0, 2pi), got {self.xi!r}")


def beam_splitter(xi: float) -> np.ndarray:
    c, s = math.cos(xi / 2), math.sin(xi / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _module(cfg: NetworkConfig, theta: float) -> tuple[np.ndarray, np.ndarray]:
    """One module and its theta-derivative: ``diag(1, e^{i(k theta + phi)} eta^{k/2}) BS``."""
    lossy = cmath.exp(1j * (cfg.k * theta + cfg.phi_control)) * cfg.eta ** (cfg.k / 2)
    bs = beam_splitter(cfg.xi)
    m = np.diag([1.0, lossy]) @ bs
    dm = np.diag([0.0, 1j * cfg.k * lossy]) @ bs
    return m, dm


def transfer_matrix(cfg: NetworkConfig, theta: float = 0.0) -> np.ndarray:
    m, _ = _module(cfg, theta)
    return np.linalg.matrix_power(m, cfg.h)


def transfer_matrix_dtheta(cfg: NetworkConfig, theta: float = 0.0) -> np.ndarray:
    """Exact ``dT/dtheta`` by the product rule over the ``h`` identical factors."""
    m, dm = _module(cfg, theta)
    t = np.eye(2, dtype=complex)
    dt = np.zeros((2, 2), dtype=complex)
    for _ in range(cfg.h):
        dt = dm @ t + m @ dt
        t = m @ t
    return dt


def network_fpl_direct(cfg: NetworkConfig, theta: float = 0.0) -> float:
    """QFI per lost photon from ``T`` and ``dT/dtheta`` as written.

    The denominator ``1 - |T11|^2 - |T21|^2`` cancels badly for tiny ``xi``;
    :func:`network_fpl` is the production path.
    """
    t = transfer_matrix(cfg, theta)
    dt = transfer_matrix_dtheta(cfg, theta)
    lost = 1.0 - abs(t[0, 0]) ** 2 - abs(t[1, 0]) ** 2
    if lost <= DEGENERATE_LOSS:
        raise DegenerateNetworkError(f"lost fraction {lost:.3g} is not positive")
    return 4.0 * (abs(dt[0, 0]) ** 2 + abs(dt[1, 0]) ** 2) / lost


# -- fast evaluation --------------------------------------------------------
# 2x2 complex matrices as 4-tuples (a, b, c, d) = [[a, b], [c, d]].  A segment
# of n modules is summarized by (M^n, d(M^n)/dtheta, S_n) with
# S_n = sum_{j<n} (M^j)^H Q M^j, where Q projects onto the lossy arm after the
# beam splitter.  Light lost in the segment is (1 - eta^k) e1^H S_n e1.


def _mul(x, y):
    a, b, c, d = x
    e, f, g, h = y
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def _add(x, y):
    return (x[0] + y[0], x[1] + y[1], x[2] + y[2], x[3] + y[3])


def _sandwich(s, a):
    # a^H s a
    sa = _mul(s, a)
    ah = (a[0].conjugate(), a[2].conjugate(), a[1].conjugate(), a[3].conjugate())
    return _mul(ah, sa)


def _combine(first, second):
    a1, d1, s1 = first
    a2, d2, s2 = second
    return (
        _mul(a2, a1),
        _add(_mul(d2, a1), _mul(a2, d1)),
        _add(s1, _sandwich(s2, a1)),
    )


def _segment(h: int, k: float, xi: float, phi: float, eta: float):
    c, s = math.cos(xi / 2), math.sin(xi / 2)
    lossy = cmath.exp(1j * phi) * eta ** (k / 2)
    m = (complex(c), complex(-s), lossy * s, lossy * c)
    dm = (0j, 0j, 1j * k * lossy * s, 1j * k * lossy * c)
    q = (complex(s * s), complex(s * c), complex(s * c), complex(c * c))
    result = None
    power = (m, dm, q)
    n = h
    while n:
        if n & 1:
            result = power if result is None else _combine(result, power)
        n >>= 1
        if n:
            power = _combine(power, power)
    return result


def fpl_parts(h: int, k: float, xi: float, phi: float, eta: float) -> tuple[float, float]:
    """Return ``(QFI per unit input intensity, lost fraction)``."""
    t, dt, s = _segment(h, k, xi, phi, eta)
    qfi = 4.0 * (abs(dt[0]) ** 2 + abs(dt[2]) ** 2)
    lost = -math.expm1(k * math.log(eta)) * s[0].real
    return qfi, lost


def _fpl(h: int, k: float, xi: float, phi: float, eta: float) -> float:
    qfi, lost = fpl_parts(h, k, xi, phi, eta)
    if lost <= DEGENERATE_LOSS:
        raise DegenerateNetworkError(f"lost fraction {lost:.3g} is not positive")
    return qfi / lost


def network_fpl(cfg: NetworkConfig, theta: float = 0.0) -> float:
    """QFI per lost photon for a ``|alpha>|0>`` input; ``alpha`` cancels."""
    return _fpl(cfg.h, cfg.k, cfg.xi, cfg.k * theta + cfg.phi_control, cfg.eta)


def network_qfi(cfg: NetworkConfig, alpha: float, theta: float = 0.0) -> tuple[float, float]:
    """Full QFI and mean lost photons for input amplitude ``alpha``."""
    qfi, lost = fpl_parts(cfg.h, cfg.k, cfg.xi, cfg.k * theta + cfg.phi_control, cfg.eta)
    return alpha * alpha * qfi, alpha * alpha * lost


def q_sm_single_pass(eta: float) -> float:
    return 4.0 * eta / (1.0 - eta) ** 2


# -- discrete campaign ------------------------------------------------------


@dataclass(frozen=True)
class NetworkOptimum:
    cfg: NetworkConfig
    fpl: float
    ratio_to_qsm: float

    @property
    def h_xi(self) -> float:
        return self.cfg.h * self.cfg.xi


def _best_phi(h, k, xi, eta, phi0=0.0):
    phi, val = golden_section_max(
        lambda p: _safe_fpl(h, k, xi, p, eta), -math.pi, math.pi, tol=1e-10
    )
    base = _safe_fpl(h, k, xi, phi0, eta)
    return (phi, val) if val > base else (phi0, base)


def _safe_fpl(h, k, xi, phi, eta) -> float:
    try:
        return _fpl(h, k, xi, phi, eta)
    except DegenerateNetworkError:
        return -math.inf


SEARCH_MODES = ("small-mixing", "global")
SMALL_MIXING_SPAN = 10.0


def optimize_xi(
    eta: float,
    h: int,
    k: float = 1.0,
    phi: float = 0.0,
    xi_min: float = XI_MIN_TABLE,
    xi_max: float = XI_MAX,
    search: str = "small-mixing",
    tol: float = 1e-10,
) -> tuple[float, float]:
    """Best beam-splitter angle for fixed ``h``; returns ``(xi, F')``.

    ``search="small-mixing"`` confines ``h*xi`` to ``[xi_min, 10*xi_min]``,
    the weak-coupling regime where the discrete-k optima sit.
    ``"global"`` covers ``[xi_min/h, xi_max/h]`` with a 256-point grid and a
    golden-section refinement; it also finds the strong-mixing basin
    (``h*xi`` near 5), which beats the small-mixing optimum at most ``eta``.
    """
    lo = xi_min / h
    if search == "small-mixing":
        hi = min(SMALL_MIXING_SPAN * xi_min, xi_max) / h
    elif search == "global":
        hi = xi_max / h
    else:
        raise ValueError(f"unknown search mode {search!r}; expected one of {SEARCH_MODES}")

    def f(x: float) -> float:
        return _safe_fpl(h, k, x, phi, eta)

    if search == "small-mixing":
        x, v = golden_section_max(f, lo, hi, tol=tol * lo)
        f_lo = f(lo)
        return (lo, f_lo) if f_lo >= v * (1 - 1e-12) else (x, v)
    grid = np.linspace(lo, hi, 256)
    vals = [f(x) for x in grid]
    i = int(np.argmax(vals))
    a, b = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    x, v = golden_section_max(f, a, b, tol=tol)
    return (x, v) if v >= vals[i] else (float(grid[i]), vals[i])


def optimize_network(
    eta: float,
    h_max: int = 64,
    k: float = 1.0,
    xi_min: float = XI_MIN_TABLE,
    search: str = "small-mixing",
    free_phi: bool = False,
) -> NetworkOptimum:
    """Maximize QFI per lost photon over ``h in 1..h_max`` and ``xi``.

    The control phase is fixed to zero unless ``free_phi``; in that case
    ``xi`` and the phase are refined alternately.  Ties go to the smaller
    ``h`` and then the smaller ``xi``.
    """
    eta = check_eta(eta)
    k = check_k(k)
    best: Optional[tuple[float, int, float, float]] = None
    for h in range(1, h_max + 1):
        phi = 0.0
        xi, val = optimize_xi(eta, h, k, phi, xi_min=xi_min, search=search)
        if free_phi:
            for _ in range(20):
                phi_new, v_phi = _best_phi(h, k, xi, eta, phi)
                xi_new, v_xi = optimize_xi(eta, h, k, phi_new, xi_min=xi_min, search=search)
                improved = max(v_phi, v_xi) - val
                phi, xi, val = phi_new, xi_new, max(v_phi, v_xi, val)
                if improved <= 1e-14 * abs(val):
                    break
        if best is None or val > best[0] * (1 + 1e-12):
            best = (val, h, xi, phi)
    val, h, xi, phi = best
    cfg = NetworkConfig(h=h, k=k, xi=xi, phi_control=phi, eta=eta)
    return NetworkOptimum(cfg, val, val / q_sm_single_pass(eta))


# -- continuous-k campaign --------------------------------------------------


def scaled_objective(gamma: float, h: int, xi: float, phi: float = 0.0) -> float:
    """``ln^2(gamma) * f`` with one pass of transmissivity ``gamma`` per module.

    For any ``eta`` and ``k`` with ``eta**k == gamma`` this equals
    ``ln^2(eta) * F'``; dividing by 4 normalizes to the SM quantum limit.
    """
    return math.log(gamma) ** 2 * _safe_fpl(h, 1.0, xi, phi, gamma)


@dataclass(frozen=True)
class ContinuousOptimum:
    gamma: float
    h: int
    h_xi: float
    ratio_to_qsm_limit: float

    @property
    def rmse_reduction(self) -> float:
        return 1.0 - math.sqrt(self.ratio_to_qsm_limit)


DEFAULT_SEEDS = tuple((a, b) for a in (0.5, 2.0, 4.0, 5.5) for b in (2.0, 6.0))


def default_h_grid(h_max: int = 2048, n: int = 48) -> list[int]:
    """Integers from 1 to ``h_max`` spaced roughly geometrically, ``h_max`` included."""
    pts = np.unique(np.round(np.geomspace(1, h_max, n)).astype(int))
    return [int(p) for p in pts]


def _coordinate_descent(h: int, a: float, b: float, xi_min: float, tol: float, max_sweeps: int):
    # a = h*xi (total mixing angle), b = -h*ln(gamma) (total loss exponent);
    # both are nearly h-independent at the optimum.
    def obj(aa: float, bb: float) -> float:
        return scaled_objective(math.exp(-bb / h), h, aa / h) / 4.0

    val = obj(a, b)
    for _ in range(max_sweeps):
        a_new, va = golden_section_max(lambda x: obj(x, b), xi_min, XI_MAX, tol=tol)
        if va > val:
            a, val = a_new, va
        b_lo, b_hi = max(b / 4, 1e-6 * h), b * 4
        b_new, vb = golden_section_max(lambda y: obj(a, y), b_lo, b_hi, tol=tol)
        prev = val
        if vb > val:
            b, val = b_new, vb
        if val - prev <= 1e-15 and va <= prev:
            break
    return a, b, val


def optimize_network_continuous(
    h_grid: Optional[Iterable[int]] = None,
    seeds: Iterable[tuple[float, float]] = DEFAULT_SEEDS,
    xi_min: float = XI_MIN_TABLE,
    tol: float = 1e-10,
    max_sweeps: int = 60,
) -> ContinuousOptimum:
    """Maximize ``ln^2(gamma) f / 4`` over ``gamma``, ``h`` and ``xi`` (phase zero).

    Each ``h`` is searched by coordinate descent from every seed and from the
    previous ``h``'s optimum.  The result is independent of ``eta``.
    """
    h_grid = default_h_grid() if h_grid is None else sorted(set(int(h) for h in h_grid))
    seeds = list(seeds)
    best: Optional[tuple[float, int, float, float]] = None
    warm: Optional[tuple[float, float]] = None
    for h in h_grid:
        starts = seeds + ([warm] if warm else [])
        h_best = None
        for a0, b0 in starts:
            a, b, val = _coordinate_descent(h, a0, b0, xi_min, tol, max_sweeps)
            if h_best is None or val > h_best[0]:
                h_best = (val, a, b)
        val, a, b = h_best
        warm = (a, b)
        if best is None or val > best[0] * (1 + 1e-12):
            best = (val, h, a, b)
    val, h, a, b = best
    return ContinuousOptimum(gamma=math.exp(-b / h), h=h, h_xi=a, ratio_to_qsm_limit=val)
