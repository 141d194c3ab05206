"""Shared numerical helpers: compensated sums, panel quadrature, smooth windows."""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "compensated_sum",
    "gauss_legendre_panels",
    "smoothstep_window",
]


def compensated_sum(values) -> float:
    """Exactly-rounded sum of a 1D collection of floats.

    Wraps math.fsum so that lattice reductions are independent of chunking
    and thread count. Input order should already be deterministic (callers
    sort by shell index / |p|).
    """
    arr = np.asarray(values, dtype=float).ravel()
    return math.fsum(arr.tolist())


def gauss_legendre_panels(a: float, b: float, n_panels: int, order: int = 16):
    """Gauss-Legendre nodes/weights on ``n_panels`` equal panels of [a, b].

    Returns (nodes, weights) as flat arrays. Exact for polynomials of degree
    2*order-1 on each panel; with panel width below a quarter oscillation
    period the rule resolves trigonometric integrands to near machine
    precision.
    """
    if b <= a:
        return np.empty(0), np.empty(0)
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, n_panels + 1)
    lo = edges[:-1, None]
    hi = edges[1:, None]
    half = 0.5 * (hi - lo)
    nodes = (lo + half) + half * x[None, :]
    weights = half * w[None, :]
    return nodes.ravel(), weights.ravel()


def smoothstep_window(k, lo: float, hi: float):
    """C^2 radial window: 1 below ``lo``, 0 above ``hi``, quintic in between.

    Used to split lattice sums into an enumerated head and an integral tail
    without a sharp truncation sphere (a sharp cut leaves an O(1/(P*ell))
    surface artefact in the sum-integral comparison; the smooth window
    suppresses it to the window's smoothness order).
    """
    k = np.asarray(k, dtype=float)
    t = np.clip((k - lo) / (hi - lo), 0.0, 1.0)
    return 1.0 - t ** 3 * (10.0 - 15.0 * t + 6.0 * t ** 2)
