"""Equivalent Fisher information and the squared position error bound (SPEB).

The EFIM of a position is a nonnegative combination of rank-one direction
matrices ``u(phi) u(phi)^T``. Its inverse trace, the SPEB, is available in
two algebraically equivalent forms: the 2x2 closed-form inverse and a
fractional form built from the rank-<=3 topology matrix. Both are exposed so
that each can check the other.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError
from .netmodel import RadarNetwork, WirelessNetwork, as_power

#: Relative determinant below which an EFIM is treated as singular.
EPS_SING = 1e-12


@dataclass(frozen=True)
class Efim:
    """A 2x2 symmetric positive-semidefinite information matrix."""

    m: np.ndarray

    def __post_init__(self):
        m = np.array(self.m, dtype=float)
        if m.shape != (2, 2):
            raise DimensionError(f"EFIM must be 2x2, got {m.shape}")
        scale = max(abs(m[0, 1]), abs(m[1, 0]), abs(m[0, 0]) + abs(m[1, 1]))
        if abs(m[0, 1] - m[1, 0]) > 1e-12 * max(scale, 1e-300):
            raise DomainError("EFIM must be symmetric")
        m[1, 0] = m[0, 1]
        m.setflags(write=False)
        object.__setattr__(self, "m", m)

    def __add__(self, other: "Efim") -> "Efim":
        return Efim(self.m + np.asarray(other.m if isinstance(other, Efim) else other))

    @property
    def trace(self) -> float:
        return float(self.m[0, 0] + self.m[1, 1])


def direction_matrix(phi: float) -> np.ndarray:
    """Rank-one matrix ``u(phi) u(phi)^T`` with ``u(phi) = (cos phi, sin phi)``."""
    u = np.array([math.cos(phi), math.sin(phi)])
    return np.outer(u, u)


def _weighted_directions(weights: np.ndarray, angles: np.ndarray) -> np.ndarray:
    w = np.ravel(weights)
    a = np.ravel(angles)
    c, s = np.cos(a), np.sin(a)
    cc = float(np.dot(w, c * c))
    ss = float(np.dot(w, s * s))
    cs = float(np.dot(w, c * s))
    return np.array([[cc, cs], [cs, ss]])


def _check_power(x: np.ndarray, n: int) -> np.ndarray:
    if x.shape != (n,):
        raise DimensionError(f"power allocation must have length {n}, got {x.shape}")
    if np.any(x < 0):
        raise DomainError("powers must be nonnegative")
    return x


def efim_wnl(net: WirelessNetwork, x, agent_index: int) -> Efim:
    """EFIM of agent ``agent_index``: ``sum_j x_j xi_kj J_r(phi_kj)``."""
    x = _check_power(as_power(x), net.n_anchors)
    xi = net.ercs()[agent_index]
    return Efim(_weighted_directions(x * xi, net.angles()[agent_index]))


def efim_rnl(net: RadarNetwork, x) -> Efim:
    """Target EFIM ``sum_j sum_k x_j xi_kj J_r((psi_k + varphi_j)/2)``."""
    x = _check_power(as_power(x), net.n_tx)
    weights = net.ercs() * x[None, :]
    return Efim(_weighted_directions(weights, net.angles()))


def efim_rnl_sum_of_unit_vectors(net: RadarNetwork, x) -> Efim:
    """Target EFIM from the unreduced form
    ``sum_j x_j/d_j^{2b} sum_k zeta_kj/d_k^{2b} u_kj u_kj^T`` with
    ``u_kj = u(psi_k) + u(varphi_j)``.

    Algebraically equal to :func:`efim_rnl`; kept as an independent route.
    """
    x = _check_power(as_power(x), net.n_tx)
    b2 = 2.0 * net.beta
    m = np.zeros((2, 2))
    for j in range(net.n_tx):
        uj = np.array([math.cos(net.varphi[j]), math.sin(net.varphi[j])])
        outer = np.zeros((2, 2))
        for k in range(net.n_rx):
            uk = np.array([math.cos(net.psi[k]), math.sin(net.psi[k])])
            ukj = uk + uj
            outer += net.rc[k, j] / net.d_rx[k] ** b2 * np.outer(ukj, ukj)
        m += x[j] / net.d_tx[j] ** b2 * outer
    return Efim(m)


def speb(J) -> float:
    """Trace of the inverse EFIM; ``inf`` when the matrix is (numerically) singular."""
    m = J.m if isinstance(J, Efim) else np.asarray(J, dtype=float)
    if m.shape != (2, 2):
        raise DimensionError("SPEB needs a 2x2 matrix")
    a, b, d = float(m[0, 0]), 0.5 * float(m[0, 1] + m[1, 0]), float(m[1, 1])
    tr = a + d
    lam_min = 0.5 * tr - math.hypot(0.5 * (a - d), b)
    if tr < 0 or lam_min < -1e-12 * max(tr, 0.0) - 1e-300:
        raise DomainError("EFIM is not positive semidefinite")
    det = a * d - b * b
    if det <= EPS_SING * (0.5 * tr) ** 2:
        return math.inf
    return tr / det


def topology_matrix(angles) -> np.ndarray:
    """``11^T - c(2phi)c(2phi)^T - s(2phi)s(2phi)^T``; entries ``2 sin^2(phi_i - phi_j)``."""
    phi2 = 2.0 * np.ravel(np.asarray(angles, dtype=float))
    c, s = np.cos(phi2), np.sin(phi2)
    one = np.ones_like(c)
    return np.outer(one, one) - np.outer(c, c) - np.outer(s, s)


@dataclass(frozen=True)
class SpebScene:
    """Angles and effective coefficients seen by one position.

    For an agent both arrays have shape ``(n,)``. For a radar target they have
    shape ``(n_rx, n_tx)``: one diagonal coefficient block per receiver, each
    acting on the same power vector.
    """

    angles: np.ndarray
    ercs: np.ndarray

    def __post_init__(self):
        ang = np.array(self.angles, dtype=float)
        xi = np.array(self.ercs, dtype=float)
        if ang.shape != xi.shape or ang.ndim not in (1, 2):
            raise DimensionError("angles and coefficients must have matching 1-D or 2-D shapes")
        if np.any(xi < 0):
            raise DomainError("effective coefficients must be nonnegative")
        ang.setflags(write=False)
        xi.setflags(write=False)
        object.__setattr__(self, "angles", ang)
        object.__setattr__(self, "ercs", xi)

    @property
    def n_powers(self) -> int:
        return self.ercs.shape[-1]

    def stacked(self, x) -> np.ndarray:
        """``R x`` with the per-receiver blocks stacked into one vector."""
        x = as_power(x)
        if x.shape != (self.n_powers,):
            raise DimensionError(f"power allocation must have length {self.n_powers}")
        return np.ravel(self.ercs * x)

    @classmethod
    def for_agent(cls, net: WirelessNetwork, k: int) -> "SpebScene":
        return cls(net.angles()[k], net.ercs()[k])

    @classmethod
    def for_target(cls, net: RadarNetwork) -> "SpebScene":
        return cls(net.angles(), net.ercs())


def speb_fractional(scene: SpebScene, x) -> float:
    """SPEB as ``4 * 1^T R x / (x^T R^T Lambda R x)``."""
    y = scene.stacked(x)
    if np.any(y < 0):
        raise DomainError("powers must be nonnegative")
    total = float(y.sum())
    lam = topology_matrix(scene.angles)
    den = float(y @ lam @ y)
    if total <= 0 or den <= EPS_SING * total * total:
        return math.inf
    return 4.0 * total / den


def speb_wnl(net: WirelessNetwork, x) -> np.ndarray:
    """SPEB of every agent."""
    return np.array([speb(efim_wnl(net, x, k)) for k in range(net.n_agents)])


def speb_rnl(net: RadarNetwork, x) -> float:
    return speb(efim_rnl(net, x))


def speb_of(net, x) -> np.ndarray:
    """Per-position SPEB for either network type (length 1 for radar)."""
    if isinstance(net, RadarNetwork):
        return np.array([speb_rnl(net, x)])
    return speb_wnl(net, x)


def requirements_of(net) -> np.ndarray:
    if isinstance(net, RadarNetwork):
        return np.array([net.requirement])
    return np.asarray(net.requirements, dtype=float)


def scenes_of(net) -> list[SpebScene]:
    if isinstance(net, RadarNetwork):
        return [SpebScene.for_target(net)]
    return [SpebScene.for_agent(net, k) for k in range(net.n_agents)]
