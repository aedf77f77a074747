"""Derivative-free scalar maximizers used by the optimization campaigns."""
from __future__ import annotations

import math
from typing import Callable

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0


def golden_section_max(
    f: Callable[[float], float], a: float, b: float, tol: float = 1e-10, max_iter: int = 500
) -> tuple[float, float]:
    """Maximize a unimodal ``f`` on ``[a, b]``.

    Returns ``(x, f(x))`` for the best point seen, endpoints included, so a
    maximum sitting on the bracket edge is reported exactly.
    """
    a, b = min(a, b), max(a, b)
    fa, fb = f(a), f(b)
    best_x, best_f = (a, fa) if fa >= fb else (b, fb)
    h = b - a
    if h <= tol:
        return best_x, best_f

    c = a + INV_PHI2 * h
    d = a + INV_PHI * h
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if h <= tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            h = INV_PHI * h
            c = a + INV_PHI2 * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            h = INV_PHI * h
            d = a + INV_PHI * h
            fd = f(d)

    for x, fx in ((c, fc), (d, fd)):
        if fx > best_f:
            best_x, best_f = x, fx
    return best_x, best_f
