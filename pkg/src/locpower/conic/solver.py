"""Dense primal-dual interior-point method for second-order cone programs.

The iteration works on the homogeneous self-dual embedding of

    minimize c^T x  s.t.  G x + s = h,  s in K
    maximize -h^T z s.t.  G^T z + c = 0, z in K

so that a single loop either converges to a primal-dual optimal pair or
produces a Farkas certificate of primal or dual infeasibility. Search
directions use Nesterov-Todd scaling and a Mehrotra predictor-corrector;
each Newton system is reduced to the ``n x n`` normal equations
``G^T W^{-2} G``, which is small for the programs built in this package
(at most a few hundred variables, possibly thousands of 3-dimensional cones).
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np
import scipy.linalg as sla

from .cones import ConeProduct, NTScaling
from .program import ConeProgram, StandardForm

log = logging.getLogger(__name__)

STEP_BACKOFF = 0.99
BACKTRACK_STEPS = 8
SIGMA_MIN = 1e-4
SIGMA_MAX = 1.0


class Status(str, Enum):
    OPTIMAL = "optimal"
    PRIMAL_INFEASIBLE = "primal_infeasible"
    DUAL_INFEASIBLE = "dual_infeasible"
    MAX_ITERATIONS = "max_iterations"
    NUMERICAL_FAILURE = "numerical_failure"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Residuals:
    primal: float
    dual: float
    gap: float

    def as_tuple(self):
        return (self.primal, self.dual, self.gap)


@dataclass(frozen=True)
class Solution:
    """Solver output.

    ``v`` is the primal point when optimal, the unboundedness ray (scaled to
    ``c^T v = -1``) when dual infeasible, and ``None`` otherwise. The dual
    multipliers and slacks are split per constraint in program order; for a
    primal-infeasible program the duals hold the Farkas certificate scaled
    to ``h^T z = -1``.
    """

    status: Status
    v: Optional[np.ndarray]
    objective_value: float
    iterations: int
    residuals: Residuals
    soc_duals: tuple = ()
    linear_duals: np.ndarray = field(default_factory=lambda: np.zeros(0))
    nonneg_duals: np.ndarray = field(default_factory=lambda: np.zeros(0))
    soc_slacks: tuple = ()
    linear_slacks: np.ndarray = field(default_factory=lambda: np.zeros(0))
    nonneg_slacks: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def is_optimal(self) -> bool:
        return self.status is Status.OPTIMAL


def _equilibrate(G: np.ndarray, cones: ConeProduct, passes: int = 15):
    """Ruiz scaling ``E G D`` with one row factor per cone block."""
    m, n = G.shape
    D = np.ones(n)
    E = np.ones(m)
    A = G.copy()
    for _ in range(passes):
        rows = np.abs(A).max(axis=1) if n else np.zeros(m)
        for g in cones.groups:
            blk = rows[g.start:g.stop].reshape(g.count, g.dim)
            rows[g.start:g.stop] = np.repeat(blk.max(axis=1), g.dim)
        cols = np.abs(A).max(axis=0) if m else np.zeros(n)
        rs = np.where(rows > 0, 1.0 / np.sqrt(np.clip(rows, 1e-8, 1e8)), 1.0)
        cs = np.where(cols > 0, 1.0 / np.sqrt(np.clip(cols, 1e-8, 1e8)), 1.0)
        A *= rs[:, None]
        A *= cs[None, :]
        E *= rs
        D *= cs
        if np.all(np.abs(rs - 1) < 1e-3) and np.all(np.abs(cs - 1) < 1e-3):
            break
    return D, E


class _NormalEquations:
    """Factorization of ``G^T W^{-2} G`` and the reduced KKT solve."""

    def __init__(self, G: np.ndarray, cones: ConeProduct, W: NTScaling):
        self.G = G
        self.W = W
        # Gram form of W^{-1} G stays PSD where the dense W^{-2} blocks cancel
        WG = W.apply_inv_cols(G)
        H = WG.T @ WG
        H = 0.5 * (H + H.T)
        scale = np.sqrt(np.maximum(np.diag(H), 1e-300))
        Hs = H / np.outer(scale, scale)
        reg = 1e-13
        while True:
            try:
                self.factor = sla.cho_factor(Hs + reg * np.eye(len(Hs)), lower=True, check_finite=True)
                break
            except (np.linalg.LinAlgError, ValueError):
                reg *= 100.0
                if reg > 1e-2:
                    raise np.linalg.LinAlgError("normal equations are not positive definite")
        self.scale = scale

    def _hsolve(self, r: np.ndarray) -> np.ndarray:
        return sla.cho_solve(self.factor, r / self.scale) / self.scale

    def solve(self, r1: np.ndarray, r3: np.ndarray):
        """Solve ``G^T dz = r1``, ``G dx - W^2 dz = r3``."""
        G, W = self.G, self.W
        dx = self._hsolve(r1 + G.T @ W.apply_inv_sq(r3))
        dz = W.apply_inv_sq(G @ dx - r3)
        base = np.linalg.norm(r1, np.inf) + np.linalg.norm(r3, np.inf) + 1e-300
        err_prev = np.inf
        for _ in range(5):
            e1 = r1 - G.T @ dz
            e3 = r3 - (G @ dx - W.apply_sq(dz))
            err = np.linalg.norm(e1, np.inf) + np.linalg.norm(e3, np.inf)
            if err <= 1e-15 * base or err >= 0.5 * err_prev:
                break
            err_prev = err
            ddx = self._hsolve(e1 + G.T @ W.apply_inv_sq(e3))
            dx += ddx
            dz += W.apply_inv_sq(G @ ddx - e3)
        return dx, dz


def _split(std: StandardForm, u: np.ndarray):
    return (tuple(u[sl].copy() for sl in std.soc_slices), u[std.linear_rows].copy(),
            u[std.nonneg_rows].copy())


def _residuals(c, G, h, x, s, z):
    Gx = G @ x
    Gz = G.T @ z
    pres = np.linalg.norm(Gx + s - h, np.inf) / (
        1.0 + max(np.linalg.norm(h, np.inf), np.linalg.norm(Gx, np.inf), np.linalg.norm(s, np.inf)))
    dres = np.linalg.norm(Gz + c, np.inf) / (1.0 + max(np.linalg.norm(c, np.inf), np.linalg.norm(Gz, np.inf)))
    pcost, dcost = float(c @ x), float(-h @ z)
    gap = max(abs(pcost - dcost), abs(float(s @ z))) / (1.0 + min(abs(pcost), abs(dcost)))
    return Residuals(float(pres), float(dres), float(gap))


def solve(prog: ConeProgram, tol: float = 1e-8, max_iter: int = 200, verbose: bool = False) -> Solution:
    """Solve ``prog`` to tolerance ``tol`` (primal, dual and relative gap)."""
    std = prog.standard_form()
    cones = std.cones
    c0, G0, h0 = std.c, std.G, std.h
    D, E = _equilibrate(G0, cones)
    G = E[:, None] * G0 * D[None, :]
    h = E * h0
    c = D * c0
    # unit-size cost and right-hand side; undone in ``unscale``
    sc = float(np.linalg.norm(c, np.inf))
    sh = float(np.linalg.norm(h, np.inf))
    sc = 1.0 / sc if sc > 0 else 1.0
    sh = 1.0 / sh if sh > 0 else 1.0
    c = c * sc
    h = h * sh
    n, m = G.shape[1], G.shape[0]
    nu = cones.degree

    x = np.zeros(n)
    s = cones.identity()
    z = cones.identity()
    tau = kappa = 1.0
    unscale = lambda xs, ss, zs: (D * xs / sh, ss / (E * sh), E * zs / sc)

    def finish(status, it, xs, ss, zs, t, res, v=None, obj=math.nan):
        xo, so, zo = unscale(xs, ss, zs)
        if status is Status.OPTIMAL:
            xo, so, zo = xo / t, so / t, zo / t
            v, obj = xo, float(c0 @ xo)
        elif status is Status.PRIMAL_INFEASIBLE:
            k = -float(h0 @ zo)
            zo, so, xo = zo / k, np.zeros_like(so), None
        elif status is Status.DUAL_INFEASIBLE:
            k = -float(c0 @ xo)
            xo, so, zo = xo / k, so / k, np.zeros_like(zo)
            v = xo
        else:
            xo, so, zo = xo / t, so / t, zo / t
            v = xo
            obj = float(c0 @ xo)
        sd, ld, nd = _split(std, zo)
        ss_, ls, ns = _split(std, so)
        if verbose:
            log.info("status %s after %d iterations", status, it)
        return Solution(status, v, obj, it, res, sd, ld, nd, ss_, ls, ns)

    stall = 0
    res = Residuals(math.inf, math.inf, math.inf)
    for it in range(max_iter + 1):
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(z)) and np.all(np.isfinite(s))
                and math.isfinite(tau) and math.isfinite(kappa)):
            return finish(Status.NUMERICAL_FAILURE, it, x, s, z, tau, res)
        xo, so, zo = unscale(x, s, z)
        res = _residuals(c0, G0, h0, xo / tau, so / tau, zo / tau)
        if verbose:
            log.info("it %3d pres %.2e dres %.2e gap %.2e tau %.2e kappa %.2e",
                     it, res.primal, res.dual, res.gap, tau, kappa)
        if res.primal <= tol and res.dual <= tol and res.gap <= tol:
            return finish(Status.OPTIMAL, it, x, s, z, tau, res)
        # certificates are judged on the equilibrated data, and only once the
        # embedding points away from a finite optimum
        hz = float(h @ z)
        if hz < 0 and kappa >= tau:
            cert = np.linalg.norm(G.T @ z, np.inf) / (-hz)
            if cert <= tol:
                return finish(Status.PRIMAL_INFEASIBLE, it, x, s, z, tau, Residuals(cert, 0.0, 0.0))
        cx = float(c @ x)
        if cx < 0 and kappa >= tau:
            cert = np.linalg.norm(G @ x + s, np.inf) / (-cx)
            if cert <= tol:
                return finish(Status.DUAL_INFEASIBLE, it, x, s, z, tau, Residuals(0.0, cert, 0.0))
        if it == max_iter:
            break

        try:
            W = NTScaling(cones, s, z)
            lam = W.lam
            kkt = _NormalEquations(G, cones, W)
            x1, z1 = kkt.solve(-c, h)
        except (np.linalg.LinAlgError, FloatingPointError, ValueError):
            return finish(Status.NUMERICAL_FAILURE, it, x, s, z, tau, res)

        F1 = G.T @ z + c * tau
        F3 = s + G @ x - h * tau
        F4 = kappa + float(c @ x) + float(h @ z)
        mu = (float(s @ z) + tau * kappa) / (nu + 1)
        denom = float(c @ x1 + h @ z1) - kappa / tau

        def direction(eta, ds, dk):
            r1 = -eta * F1
            r3 = -eta * F3 - W.apply(cones.jordan_div(lam, ds))
            dx2, dz2 = kkt.solve(r1, r3)
            d4 = -eta * F4
            dtau = (d4 - dk / tau - float(c @ dx2) - float(h @ dz2)) / denom
            dx = dx2 + dtau * x1
            dz = dz2 + dtau * z1
            # from the primal row, so that its residual contracts exactly
            dsv = -eta * F3 - G @ dx + h * dtau
            dkap = (dk - kappa * dtau) / tau
            return dx, dsv, dz, dtau, dkap

        def max_step(dsv, dz, dtau, dkap):
            a = min(cones.max_step(s, dsv), cones.max_step(z, dz))
            if dtau < 0:
                a = min(a, -tau / dtau)
            if dkap < 0:
                a = min(a, -kappa / dkap)
            return a

        lam_sq = cones.jordan(lam, lam)
        dx_a, ds_a, dz_a, dtau_a, dkap_a = direction(1.0, -lam_sq, -tau * kappa)
        alpha_a = min(1.0, max_step(ds_a, dz_a, dtau_a, dkap_a))
        sigma = min(SIGMA_MAX, max(SIGMA_MIN, (1.0 - alpha_a) ** 3))

        ds_comb = (-lam_sq - cones.jordan(W.apply_inv(ds_a), W.apply(dz_a))
                   + sigma * mu * cones.identity())
        dk_comb = -tau * kappa - dtau_a * dkap_a + sigma * mu
        dx, dsv, dz, dtau, dkap = direction(1.0 - sigma, ds_comb, dk_comb)
        alpha = min(1.0, STEP_BACKOFF * max_step(dsv, dz, dtau, dkap))

        if alpha < 1e-10:
            stall += 1
            if stall >= 5:
                return finish(Status.NUMERICAL_FAILURE, it, x, s, z, tau, res)
        else:
            stall = 0
        # keep the iterate strictly interior despite rounding; halve the step if needed
        for _ in range(BACKTRACK_STEPS):
            s_new, z_new = s + alpha * dsv, z + alpha * dz
            tau_new, kappa_new = tau + alpha * dtau, kappa + alpha * dkap
            if cones.min_margin(s_new) > 0 and cones.min_margin(z_new) > 0 and tau_new > 0 and kappa_new > 0:
                break
            alpha *= 0.5
        else:
            return finish(Status.NUMERICAL_FAILURE, it + 1, x, s, z, tau, res)
        x = x + alpha * dx
        s, z, tau, kappa = s_new, z_new, tau_new, kappa_new

    return finish(Status.MAX_ITERATIONS, max_iter, x, s, z, tau, res)
