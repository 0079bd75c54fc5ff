"""Robust minimum-power programs.

Two families:

* asymptotic: one cone per circle and per direction ``theta_m``, using the
  ``g`` rows (conservative, upper variant) or the ``h`` rows (optimistic,
  lower variant); both converge to the exact robust optimum as ``M`` grows;
* efficient: four cones per circle built from bounds on how far
  ``cos(2 phi)`` and ``sin(2 phi)`` can move inside the angle interval.
"""
from __future__ import annotations

import math
import warnings

import numpy as np
from scipy.optimize import minimize_scalar

from ..allocate import cap_rows, speb_cone
from ..conic import ConeProgram
from ..errors import DomainError
from .bounds import bound_vectors
from .cover import CircleUncertainty, UncertaintyCover

TILDE_SAMPLES = 10_000


def _reduce(circle: CircleUncertainty, rows: np.ndarray) -> np.ndarray:
    """Map per-link rows ``(..., n_links)`` to rows on ``x`` via ``xi_lo``."""
    xi = circle.xi_lo.reshape(-1, circle.n_powers)
    r = rows.reshape(rows.shape[:-1] + xi.shape)
    return (r * xi).sum(axis=-2)


def _program(n: int, cones, net, kind: str, **extra) -> ConeProgram:
    caps = cap_rows(net) if net is not None else []
    return ConeProgram(np.ones(n), cones, caps, np.arange(n),
                       labels={"kind": kind, "n_powers": n, **extra})


def build_robust_socp_asymptotic(net, cover: UncertaintyCover, M: int, variant: str = "upper") -> ConeProgram:
    """``M`` two-row cones per circle: ``||(v_m^T R x, 2/rho)|| <= 1^T R x - 2/rho``.

    ``v_m`` is ``g_m`` for ``variant="upper"`` and ``h_m`` for ``"lower"``;
    ``R`` holds the lower coefficient bounds.
    """
    if variant not in ("upper", "lower"):
        raise DomainError("variant must be 'upper' or 'lower'")
    cones = []
    for circle in cover:
        bv = bound_vectors(circle, M)
        rows = _reduce(circle, bv.g if variant == "upper" else bv.h)
        g = _reduce(circle, np.ones(circle.phi_hat.size))
        for r in rows:
            cones.append(speb_cone([r], g, circle.requirement))
    return _program(cover.n_powers, cones, net, f"robust-asym-{variant}", M=int(M))


def _tilde_max(fun, centers, widths, samples: int) -> np.ndarray:
    """``max_{|e| <= w_j} |fun(c_j, e)|`` per entry, by sampling then refinement."""
    centers = np.asarray(centers, dtype=float)
    widths = np.asarray(widths, dtype=float)
    out = np.zeros(centers.shape)
    t = np.linspace(-1.0, 1.0, samples + 1)
    for idx in np.ndindex(centers.shape):
        w = float(widths[idx])
        if w == 0.0:
            continue
        c = float(centers[idx])
        eps = t * w
        vals = np.abs(fun(c, eps))
        i = int(np.argmax(vals))
        best = float(vals[i])
        lo, hi = eps[max(i - 1, 0)], eps[min(i + 1, samples)]
        if hi > lo:
            res = minimize_scalar(lambda e: -abs(fun(c, e)), bounds=(lo, hi), method="bounded",
                                  options={"xatol": 1e-14})
            best = max(best, -float(res.fun))
        out[idx] = best
    return out


def tilde_vectors_wnl(circle: CircleUncertainty, samples: int = TILDE_SAMPLES):
    """``(c_tilde, s_tilde, c_hat, s_hat)`` over the flattened links.

    ``cos(2 phi)`` stays within ``c_hat +- s_tilde`` and ``sin(2 phi)``
    within ``s_hat +- c_tilde`` on the angle intervals.
    """
    phi2 = 2.0 * circle.flat_angles
    w = circle.flat_widths
    s_t = _tilde_max(lambda c, e: 2.0 * np.sin(c + e) * np.sin(e), phi2, w, samples)
    c_t = _tilde_max(lambda c, e: 2.0 * np.cos(c + e) * np.sin(e), phi2, w, samples)
    return c_t, s_t, np.cos(phi2), np.sin(phi2)


def _four_cones(c_rows, s_rows, c_t, s_t, g, rho):
    cones = []
    for e1 in (1.0, -1.0):
        for e2 in (1.0, -1.0):
            cones.append(speb_cone([c_rows + e1 * s_t, s_rows + e2 * c_t], g, rho))
    return cones


def build_robust_socp_efficient_wnl(net, cover: UncertaintyCover) -> ConeProgram:
    """Four cones per circle over the sign pairs ``(e1, e2)``."""
    cones = []
    for circle in cover:
        c_t, s_t, c_h, s_h = tilde_vectors_wnl(circle)
        g = _reduce(circle, np.ones_like(c_h))
        cones += _four_cones(_reduce(circle, c_h), _reduce(circle, s_h),
                             _reduce(circle, c_t), _reduce(circle, s_t), g, circle.requirement)
    return _program(cover.n_powers, cones, net, "robust-efficient")


def efficient_rnl_vectors(circle: CircleUncertainty, samples: int = TILDE_SAMPLES):
    """Receiver-summed vectors for the radar relaxation.

    Returns ``(r_sum, c_hat, s_hat, c_tilde, s_tilde)`` where ``r_sum`` is
    the column sum of the lower coefficients and the other four are the
    ``r_sum``-weighted averages of the per-path quantities. Transmitters with
    ``r_sum = 0`` get zeros.
    """
    c_t, s_t, c_h, s_h = tilde_vectors_wnl(circle, samples)
    r_sum = circle.xi_lo.reshape(-1, circle.n_powers).sum(axis=0)
    safe = np.where(r_sum > 0, r_sum, 1.0)
    avg = lambda v: np.where(r_sum > 0, _reduce(circle, v) / safe, 0.0)
    return r_sum, avg(c_h), avg(s_h), avg(c_t), avg(s_t)


def build_robust_socp_efficient_rnl(net, cover: UncertaintyCover) -> ConeProgram:
    """Radar version of the four-cone relaxation on ``R_sum``-weighted vectors."""
    cones = []
    for circle in cover:
        r_sum, c_h, s_h, c_t, s_t = efficient_rnl_vectors(circle)
        dead = np.flatnonzero(r_sum == 0)
        if dead.size:
            warnings.warn(f"transmitters {dead.tolist()} have zero lower coefficient at every receiver;"
                          " they contribute nothing to the robust constraint", RuntimeWarning, stacklevel=2)
        cones += _four_cones(r_sum * c_h, r_sum * s_h, r_sum * c_t, r_sum * s_t, r_sum, circle.requirement)
    return _program(cover.n_powers, cones, net, "robust-efficient")


def build_robust_socp_efficient(net, cover: UncertaintyCover) -> ConeProgram:
    if cover.kind == "rnl":
        return build_robust_socp_efficient_rnl(net, cover)
    return build_robust_socp_efficient_wnl(net, cover)
