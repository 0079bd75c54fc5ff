"""Worst-case SPEB over a circle's link intervals.

With ``y = xi_lo * x`` (the SPEB is decreasing in every coefficient) the
worst case reduces to

    P = 4 a / (a^2 - S^2),   a = 1^T y,
    S = max_theta sum_j y_j f_j(theta),

where ``f_j(theta)`` is the largest value of ``cos(2 phi - theta)`` when
``phi`` ranges over ``phi_hat_j +- phi_tilde_j``.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.optimize import minimize_scalar

from ..fisher import EPS_SING
from .cover import CircleUncertainty, UncertaintyCover

TWO_PI = 2.0 * math.pi


def arc_support(theta, centers, half_widths) -> np.ndarray:
    """``max_{|e| <= w} cos(c + e - theta)`` for every (theta, link) pair.

    Equals 1 when ``theta`` lies within ``w`` of ``c`` (mod 2 pi), and the
    cosine of the distance to the nearer arc end otherwise. Output shape is
    ``theta.shape + centers.shape``.
    """
    theta = np.asarray(theta, dtype=float)[..., None]
    d = np.abs(np.remainder(theta - centers + math.pi, TWO_PI) - math.pi)
    return np.cos(np.maximum(d - half_widths, 0.0))


def support_sum(theta, y, centers, half_widths):
    return arc_support(theta, centers, half_widths) @ y


def max_projection(y, centers, half_widths, grid_size: int = 100_000, n_refine: int = 3) -> float:
    """``S(y)``: dense grid over ``[0, 2 pi)`` then bounded refinement of the best peaks."""
    y = np.asarray(y, dtype=float)
    centers = np.asarray(centers, dtype=float)
    half_widths = np.asarray(half_widths, dtype=float)
    keep = y > 0
    if not np.any(keep):
        return 0.0
    y, centers, half_widths = y[keep], centers[keep], half_widths[keep]
    theta = np.arange(grid_size) * (TWO_PI / grid_size)
    vals = np.empty(grid_size)
    chunk = max(1, 2_000_000 // y.size)
    for lo in range(0, grid_size, chunk):
        vals[lo:lo + chunk] = support_sum(theta[lo:lo + chunk], y, centers, half_widths)
    best = float(vals.max())
    # local maxima on the circular grid
    peaks = np.flatnonzero((vals >= np.roll(vals, 1)) & (vals >= np.roll(vals, -1)))
    peaks = peaks[np.argsort(vals[peaks])[::-1][:n_refine]]
    step = TWO_PI / grid_size
    f = lambda t: -float(support_sum(t, y, centers, half_widths))
    for p in peaks:
        res = minimize_scalar(f, bounds=(theta[p] - step, theta[p] + step), method="bounded",
                              options={"xatol": 1e-13})
        best = max(best, -float(res.fun))
    return best


def speb_from_projection(total: float, proj: float) -> float:
    den = total * total - proj * proj
    if total <= 0 or den <= EPS_SING * total * total:
        return math.inf
    return 4.0 * total / den


def worst_case_speb_oracle(circle: CircleUncertainty, x, theta_grid_size: int = 100_000) -> float:
    """Largest SPEB over the circle's angle and coefficient intervals."""
    y = circle.stacked(x)
    s = max_projection(y, 2.0 * circle.flat_angles, 2.0 * circle.flat_widths, theta_grid_size)
    return speb_from_projection(float(y.sum()), s)


def worst_case_speb(cover: UncertaintyCover, x, theta_grid_size: int = 100_000) -> np.ndarray:
    """Per position, the worst case over all of its circles."""
    return np.array([max(worst_case_speb_oracle(c, x, theta_grid_size) for c in per_pos)
                     for per_pos in cover.circles])


def requirements_of_cover(cover: UncertaintyCover) -> np.ndarray:
    return np.array([per_pos[0].requirement for per_pos in cover.circles])
