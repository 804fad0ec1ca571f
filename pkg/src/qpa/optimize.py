"""Scalar maximization by golden-section search."""

from __future__ import annotations

import math

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_max(f, lo: float, hi: float, tol: float = 1e-10) -> tuple[float, float]:
    """Maximize a unimodal ``f`` on ``[lo, hi]`` to width ``tol``.

    Endpoints are always candidates, so weakly monotone objectives resolve
    to an exact boundary argument instead of a point just inside it.
    """
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    mid = (a + b) / 2
    f_lo, f_hi, f_mid = f(lo), f(hi), f(mid)
    best_f = max(f_lo, f_hi, f_mid)
    # prefer an exact endpoint on near-ties within the search width
    if f_hi >= best_f - 1e-15 and f_hi >= f_lo:
        return hi, f_hi
    if f_lo >= best_f - 1e-15:
        return lo, f_lo
    return mid, f_mid
