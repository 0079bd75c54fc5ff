"""Nominal power allocation programs and the uniform baseline.

With ``y = R x`` the SPEB constraint ``4 1^T y / (y^T Lambda y) <= rho`` is
equivalent to the single second-order cone

    ||(c^T y, s^T y, 2/rho)|| <= 1^T y - 2/rho,

where ``c = cos(2 phi)`` and ``s = sin(2 phi)``. All builders in this module
(and the robust ones) emit cones of this shape, differing only in which
rows ``A`` and offsets ``b`` they use.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .conic import ConeProgram, LinearConstraint, Solution, SocConstraint, solve
from .errors import DimensionError, DomainError, InfeasibleBaselineError
from .fisher import SpebScene, requirements_of, scenes_of, speb_of
from .netmodel import RadarNetwork, WirelessNetwork


def scene_rows(scene: SpebScene) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(R^T c, R^T s, R^T 1)`` as row vectors acting on ``x``.

    For a radar scene the per-receiver blocks are summed, since every block
    multiplies the same power vector.
    """
    xi = scene.ercs.reshape(-1, scene.n_powers)
    phi2 = 2.0 * scene.angles.reshape(-1, scene.n_powers)
    return ((xi * np.cos(phi2)).sum(axis=0), (xi * np.sin(phi2)).sum(axis=0), xi.sum(axis=0))


def speb_cone(rows: Sequence[np.ndarray], g: np.ndarray, rho: float,
              offsets: Optional[Sequence[float]] = None, g0: float = 0.0,
              n: Optional[int] = None) -> SocConstraint:
    """``||(rows @ x + offsets, 2/rho)|| <= g^T x + g0 - 2/rho``.

    ``n`` pads every row with zeros up to the decision length (extra
    variables such as the min-max accuracy are appended by the caller).
    """
    if not rho > 0:
        raise DomainError("requirement must be positive")
    k = len(g) if n is None else n
    A = np.zeros((len(rows) + 1, k))
    for i, r in enumerate(rows):
        A[i, :len(r)] = r
    b = np.zeros(len(rows) + 1)
    if offsets is not None:
        b[:len(rows)] = offsets
    b[-1] = 2.0 / rho
    gv = np.zeros(k)
    gv[:len(g)] = g
    return SocConstraint(A, b, gv, g0 - 2.0 / rho)


def cap_rows(net, n: Optional[int] = None) -> list[LinearConstraint]:
    """``x_j <= cap_j`` for every finite cap."""
    caps = net.power_caps
    if caps is None:
        return []
    k = net.n_powers if n is None else n
    out = []
    for j, cap in enumerate(np.asarray(caps, dtype=float)):
        if math.isfinite(cap):
            f = np.zeros(k)
            f[j] = 1.0
            out.append(LinearConstraint(f, cap))
    return out


def _check_nonempty(net):
    if net.n_powers == 0:
        raise DimensionError("network has no transmitters")
    if isinstance(net, WirelessNetwork) and net.n_agents == 0:
        raise DimensionError("network has no agents")


def build_min_power_wnl(net: WirelessNetwork) -> ConeProgram:
    """Minimize ``1^T x`` subject to every agent meeting its SPEB requirement."""
    _check_nonempty(net)
    cones = []
    for scene, rho in zip(scenes_of(net), requirements_of(net)):
        c, s, g = scene_rows(scene)
        cones.append(speb_cone([c, s], g, rho))
    n = net.n_anchors
    return ConeProgram(np.ones(n), cones, cap_rows(net), np.arange(n),
                       labels={"kind": "min-power", "n_powers": n})


def build_min_power_rnl(net: RadarNetwork) -> ConeProgram:
    """Minimize ``1^T x`` subject to the target SPEB requirement."""
    _check_nonempty(net)
    c, s, g = scene_rows(SpebScene.for_target(net))
    n = net.n_tx
    return ConeProgram(np.ones(n), [speb_cone([c, s], g, net.requirement)], cap_rows(net),
                       np.arange(n), labels={"kind": "min-power", "n_powers": n})


def build_min_power(net) -> ConeProgram:
    if isinstance(net, RadarNetwork):
        return build_min_power_rnl(net)
    return build_min_power_wnl(net)


def uniform_min_power(net) -> tuple[float, np.ndarray]:
    """Smallest common power ``t`` such that ``x = t 1`` meets every requirement.

    SPEB scales as ``1/t``, so ``t = max_k speb_k(1) / rho_k``.
    """
    _check_nonempty(net)
    base = speb_of(net, np.ones(net.n_powers))
    if not np.all(np.isfinite(base)):
        raise InfeasibleBaselineError("uniform allocation has infinite SPEB for some position")
    t = float(np.max(base / requirements_of(net)))
    return t, np.full(net.n_powers, t)


def build_minmax_wnl(net: WirelessNetwork, p_tot: float) -> ConeProgram:
    """Maximize the common accuracy ``r`` (worst SPEB ``1/r``) under ``1^T x <= p_tot``.

    Decision is ``(x, r)``; the objective is ``-r``.
    """
    _check_nonempty(net)
    if not p_tot > 0:
        raise DomainError("total power budget must be positive")
    n = net.n_anchors
    cones = []
    for scene in scenes_of(net):
        c, s, g = scene_rows(scene)
        A = np.zeros((3, n + 1))
        A[0, :n], A[1, :n], A[2, n] = c, s, 2.0
        gv = np.zeros(n + 1)
        gv[:n], gv[n] = g, -2.0
        cones.append(SocConstraint(A, np.zeros(3), gv, 0.0))
    budget = LinearConstraint(np.r_[np.ones(n), 0.0], p_tot)
    cost = np.zeros(n + 1)
    cost[n] = -1.0
    return ConeProgram(cost, cones, [budget] + cap_rows(net, n + 1), np.arange(n),
                       labels={"kind": "min-max", "n_powers": n})


@dataclass(frozen=True)
class PriorInfo:
    """Prior position information ``J0[k]`` and expected link matrices ``Jkj[k, j]``."""

    J0: np.ndarray
    Jkj: np.ndarray

    def __post_init__(self):
        J0 = np.array(self.J0, dtype=float)
        Jkj = np.array(self.Jkj, dtype=float)
        if J0.ndim != 3 or J0.shape[1:] != (2, 2):
            raise DimensionError("J0 must have shape (n_agents, 2, 2)")
        if Jkj.ndim != 4 or Jkj.shape[0] != J0.shape[0] or Jkj.shape[2:] != (2, 2):
            raise DimensionError("Jkj must have shape (n_agents, n_anchors, 2, 2)")
        for arr in (J0, Jkj):
            arr.setflags(write=False)
        object.__setattr__(self, "J0", J0)
        object.__setattr__(self, "Jkj", Jkj)

    @classmethod
    def from_network(cls, net: WirelessNetwork, J0) -> "PriorInfo":
        """Link matrices ``xi_kj J_r(phi_kj)`` of ``net`` combined with the given prior."""
        phi, xi = net.angles(), net.ercs()
        u = np.stack([np.cos(phi), np.sin(phi)], axis=-1)
        Jkj = xi[..., None, None] * u[..., :, None] * u[..., None, :]
        return cls(J0, Jkj)


def rank_one_terms(J: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-split a PSD 2x2 matrix into ``sum_i w_i J_r(theta_i)``.

    Returns weights ``w`` (length 2) and angles ``theta``. Eigenvalues in
    ``[-1e-12 * scale, 0)`` are clamped to zero; anything more negative is an
    error.
    """
    J = np.asarray(J, dtype=float)
    if np.max(np.abs(J - J.T)) > 1e-12 * max(np.max(np.abs(J)), 1e-300):
        raise DomainError("information matrix must be symmetric")
    w, V = np.linalg.eigh(0.5 * (J + J.T))
    scale = max(float(np.max(np.abs(w))), 1.0)
    if w[0] < -1e-12 * scale:
        raise DomainError(f"information matrix is not PSD (eigenvalue {w[0]:.3e})")
    w = np.maximum(w, 0.0)
    return w, np.arctan2(V[1], V[0])


def build_min_power_prior_wnl(net: WirelessNetwork, prior: PriorInfo) -> ConeProgram:
    """Minimum power when each agent also has prior information ``J0``.

    Every matrix is replaced by its two eigen-directions, giving ``2 Nb + 2``
    virtual links per agent; the prior ones have fixed weight and so only
    shift the cone data.
    """
    _check_nonempty(net)
    n = net.n_anchors
    if prior.J0.shape[0] != net.n_agents or prior.Jkj.shape[1] != n:
        raise DimensionError("prior dimensions do not match the network")
    cones = []
    for k, rho in enumerate(requirements_of(net)):
        c, s, g = np.zeros(n), np.zeros(n), np.zeros(n)
        for j in range(n):
            w, th = rank_one_terms(prior.Jkj[k, j])
            c[j] = w @ np.cos(2 * th)
            s[j] = w @ np.sin(2 * th)
            g[j] = w.sum()
        w0, th0 = rank_one_terms(prior.J0[k])
        cones.append(speb_cone([c, s], g, rho, offsets=[w0 @ np.cos(2 * th0), w0 @ np.sin(2 * th0)],
                               g0=float(w0.sum())))
    return ConeProgram(np.ones(n), cones, cap_rows(net), np.arange(n),
                       labels={"kind": "min-power-prior", "n_powers": n})


def allocation_from(prog: ConeProgram, sol: Solution) -> Optional[np.ndarray]:
    """Power part of an optimal solution, with round-off negatives set to zero."""
    if not sol.is_optimal:
        return None
    n = prog.labels.get("n_powers", prog.n)
    return np.maximum(np.asarray(sol.v[:n]), 0.0)


def solve_allocation(prog: ConeProgram, tol: float = 1e-8, max_iter: int = 200):
    """Solve ``prog``; returns ``(solution, x or None)``."""
    sol = solve(prog, tol=tol, max_iter=max_iter)
    return sol, allocation_from(prog, sol)
