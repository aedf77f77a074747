"""Lambert W (principal branch) and the universal constants it generates.

The classical multi-pass optimum is governed by ``W = W0(-2/e^2)``.  Every
other constant in :class:`MetrologyConstants` is a closed-form function of
that single number.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import lru_cache

BRANCH_POINT = -1.0 / math.e
_BRANCH_SLACK = 1e-15
_STEP_TOL = 1e-14
_MAX_ITER = 64


def lambert_w0(x: float) -> float:
    """Principal branch of the Lambert W function for real ``x >= -1/e``.

    Halley iteration, seeded by the branch-point series close to ``-1/e``,
    by ``log1p`` for moderate arguments and by the log asymptote for large
    ones.

    Raises
    ------
    ValueError
        If ``x`` lies below the branch point (beyond a 1e-15 slack) or is NaN.
    """
    x = float(x)
    if math.isnan(x) or x < BRANCH_POINT - _BRANCH_SLACK:
        raise ValueError(f"lambert_w0 is real only for x >= -1/e, got {x!r}")
    if math.isinf(x):
        return math.inf
    if x == 0.0:
        return 0.0

    p2 = 2.0 * (math.e * x + 1.0)
    if p2 <= 0.0:
        return -1.0
    if x < -0.32:
        p = math.sqrt(p2)
        w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p**3
    elif x < 3.0:
        w = math.log1p(x)
        if x < 0.0:
            w *= 0.9
    else:
        l1 = math.log(x)
        l2 = math.log(l1)
        w = l1 - l2 + l2 / l1

    for _ in range(_MAX_ITER):
        ew = math.exp(w)
        f = w * ew - x
        wp1 = w + 1.0
        if wp1 == 0.0:
            break
        denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1)
        if denom == 0.0:
            break
        step = f / denom
        w -= step
        if abs(step) <= _STEP_TOL * (1.0 + abs(w)):
            break
    return max(w, -1.0)


@dataclass(frozen=True)
class MetrologyConstants:
    """Constants of the ideal classical multi-pass optimum.

    Attributes
    ----------
    w : W0(-2/e^2).
    k_coeff : ``2 + w``; the optimal pass count is ``-k_coeff / ln(eta)``.
    gamma_opt : optimal overall transmissivity ``exp(-(2 + w))``.
    cl_const : ``-w (2 + w)``; optimal QFI per lost photon times ``ln^2(eta)``.
    advantage_ratio : ``sqrt(cl_const)``; classical over quantum RMSE ratio.
    """

    w: float
    k_coeff: float
    gamma_opt: float
    cl_const: float
    advantage_ratio: float

    def as_dict(self) -> dict[str, float]:
        return asdict(self)


@lru_cache(maxsize=None)
def constants() -> MetrologyConstants:
    w = lambert_w0(-2.0 / math.e**2)
    k_coeff = 2.0 + w
    cl_const = -w * (2.0 + w)
    return MetrologyConstants(
        w=w,
        k_coeff=k_coeff,
        gamma_opt=math.exp(-k_coeff),
        cl_const=cl_const,
        advantage_ratio=math.sqrt(cl_const),
    )
