"""Network scenarios and the geometric/channel quantities derived from them.

Two scenario types are supported:

* :class:`WirelessNetwork` -- anchors at known positions broadcast ranging
  signals to agents whose positions are to be inferred (active localization).
* :class:`RadarNetwork` -- transmit antennas illuminate a target whose
  reflections are collected by receive antennas (passive localization).

All angles are normalized to ``[0, 2*pi)``. Positions are plain 2-D float
pairs in meters.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import DegenerateGeometryError, DimensionError, DomainError

TWO_PI = 2.0 * math.pi


def _points(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 1 and arr.size == 2:
        arr = arr.reshape(1, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise DimensionError(f"{name} must be a list of 2-D points, got shape {arr.shape}")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


def _frozen(values, name: str, ndim: int) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != ndim:
        raise DimensionError(f"{name} must have {ndim} dimension(s), got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


def wrap_angle(angle):
    """Map angles into ``[0, 2*pi)``."""
    wrapped = np.mod(angle, TWO_PI)
    # np.mod can return exactly 2*pi for tiny negative inputs
    wrapped = np.where(wrapped >= TWO_PI, 0.0, wrapped)
    return float(wrapped) if wrapped.ndim == 0 else wrapped


def geometry(p_from, p_to) -> tuple[float, float]:
    """Angle (counterclockwise from +x, in ``[0, 2*pi)``) and distance from
    ``p_from`` to ``p_to``."""
    dx = float(p_to[0]) - float(p_from[0])
    dy = float(p_to[1]) - float(p_from[1])
    dist = math.hypot(dx, dy)
    if dist == 0.0:
        raise DegenerateGeometryError(f"coincident points {tuple(p_from)} and {tuple(p_to)}")
    return wrap_angle(math.atan2(dy, dx)), dist


def _pairwise_geometry(src: np.ndarray, dst: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Angles and distances from every ``src`` point to every ``dst`` point."""
    delta = dst[None, :, :] - src[:, None, :]
    dist = np.hypot(delta[..., 0], delta[..., 1])
    if np.any(dist == 0.0):
        i, j = np.argwhere(dist == 0.0)[0]
        raise DegenerateGeometryError(f"point {tuple(src[i])} coincides with {tuple(dst[j])}")
    ang = wrap_angle(np.arctan2(delta[..., 1], delta[..., 0]))
    return ang, dist


def erc_wnl(zeta, distance, beta):
    """Effective ranging coefficient of an anchor-agent link, ``zeta / d**(2*beta)``."""
    d = np.asarray(distance, dtype=float)
    if np.any(d <= 0):
        raise DomainError("distance must be positive")
    out = np.asarray(zeta, dtype=float) / d ** (2.0 * beta)
    return float(out) if out.ndim == 0 else out


def erc_rnl(zeta, d_rx, d_tx, psi, varphi, beta):
    """Effective ranging coefficient of a tx-target-rx path.

    The bistatic factor ``cos^2((psi - varphi)/2)`` vanishes for the
    forward-scatter geometry where the target sits between the antennas.
    """
    dr = np.asarray(d_rx, dtype=float)
    dt = np.asarray(d_tx, dtype=float)
    if np.any(dr <= 0) or np.any(dt <= 0):
        raise DomainError("distances must be positive")
    half = 0.5 * (np.asarray(psi, dtype=float) - np.asarray(varphi, dtype=float))
    out = 4.0 * np.asarray(zeta, dtype=float) / (dr ** (2.0 * beta) * dt ** (2.0 * beta)) * np.cos(half) ** 2
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class PowerAllocation:
    """Transmit power per anchor (or per transmit antenna)."""

    x: np.ndarray

    def __post_init__(self):
        arr = _frozen(self.x, "x", 1)
        if np.any(arr < 0):
            raise DomainError("powers must be nonnegative")
        object.__setattr__(self, "x", arr)

    @property
    def total(self) -> float:
        return float(self.x.sum())

    def __len__(self):
        return self.x.size


def as_power(x) -> np.ndarray:
    """Accept a :class:`PowerAllocation` or array-like and return a float array."""
    if isinstance(x, PowerAllocation):
        return x.x
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1:
        raise DimensionError("power allocation must be a vector")
    return arr


@dataclass(frozen=True)
class WirelessNetwork:
    """Anchors broadcasting to agents.

    ``rc[k, j]`` is the ranging coefficient between agent ``k`` and anchor
    ``j``. ``requirements[k]`` is the SPEB target of agent ``k`` in m^2.
    """

    anchor_positions: np.ndarray
    agent_positions: np.ndarray
    rc: np.ndarray
    beta: float = 1.0
    requirements: np.ndarray = None
    power_caps: Optional[np.ndarray] = None
    _angles: np.ndarray = field(init=False, repr=False, compare=False)
    _distances: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        anchors = _points(self.anchor_positions, "anchor_positions")
        agents = _points(self.agent_positions, "agent_positions")
        if len(anchors) == 0 or len(agents) == 0:
            raise DimensionError("network needs at least one anchor and one agent")
        rc = _frozen(np.atleast_2d(self.rc), "rc", 2)
        if rc.shape != (len(agents), len(anchors)):
            raise DimensionError(f"rc must be {len(agents)}x{len(anchors)}, got {rc.shape}")
        if np.any(rc < 0):
            raise DomainError("ranging coefficients must be nonnegative")
        if not self.beta > 0:
            raise DomainError("beta must be positive")
        req = np.ones(len(agents)) if self.requirements is None else np.atleast_1d(
            np.asarray(self.requirements, dtype=float))
        if req.size == 1 and len(agents) > 1:
            req = np.full(len(agents), float(req[0]))
        req = _frozen(req, "requirements", 1)
        if req.size != len(agents):
            raise DimensionError("one requirement per agent")
        if np.any(req <= 0):
            raise DomainError("requirements must be positive")
        caps = None
        if self.power_caps is not None:
            caps = _frozen(np.atleast_1d(self.power_caps), "power_caps", 1)
            if caps.size != len(anchors):
                raise DimensionError("one power cap per anchor")
            if np.any(caps < 0):
                raise DomainError("power caps must be nonnegative")
        ang, dist = _pairwise_geometry(agents, anchors)
        ang.setflags(write=False)
        dist.setflags(write=False)
        for name, val in (("anchor_positions", anchors), ("agent_positions", agents), ("rc", rc),
                          ("requirements", req), ("power_caps", caps), ("_angles", ang),
                          ("_distances", dist), ("beta", float(self.beta))):
            object.__setattr__(self, name, val)

    @property
    def n_anchors(self) -> int:
        return len(self.anchor_positions)

    @property
    def n_agents(self) -> int:
        return len(self.agent_positions)

    @property
    def n_powers(self) -> int:
        return self.n_anchors

    def angles(self) -> np.ndarray:
        """``angles()[k, j]``: angle from agent ``k`` to anchor ``j``."""
        return self._angles

    def distances(self) -> np.ndarray:
        return self._distances

    def ercs(self) -> np.ndarray:
        """Effective ranging coefficients, agents x anchors."""
        return erc_wnl(self.rc, self._distances, self.beta)

    def replace(self, **changes) -> "WirelessNetwork":
        kw = dict(anchor_positions=self.anchor_positions, agent_positions=self.agent_positions,
                  rc=self.rc, beta=self.beta, requirements=self.requirements,
                  power_caps=self.power_caps)
        kw.update(changes)
        return WirelessNetwork(**kw)


@dataclass(frozen=True)
class RadarNetwork:
    """Transmit/receive antennas localizing a single target.

    ``rc[k, j]`` is the ranging coefficient of the path from transmitter
    ``j`` via the target to receiver ``k``.
    """

    tx_positions: np.ndarray
    rx_positions: np.ndarray
    target_position: np.ndarray
    rc: np.ndarray
    beta: float = 1.0
    requirement: float = 1.0
    power_caps: Optional[np.ndarray] = None
    _tx_geo: tuple = field(init=False, repr=False, compare=False)
    _rx_geo: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        tx = _points(self.tx_positions, "tx_positions")
        rx = _points(self.rx_positions, "rx_positions")
        target = _points(self.target_position, "target_position")
        if target.shape[0] != 1:
            raise DimensionError("exactly one target position")
        if len(tx) == 0 or len(rx) == 0:
            raise DimensionError("need at least one transmitter and one receiver")
        rc = _frozen(np.atleast_2d(self.rc), "rc", 2)
        if rc.shape != (len(rx), len(tx)):
            raise DimensionError(f"rc must be {len(rx)}x{len(tx)}, got {rc.shape}")
        if np.any(rc < 0):
            raise DomainError("ranging coefficients must be nonnegative")
        if not self.beta > 0:
            raise DomainError("beta must be positive")
        if not float(self.requirement) > 0:
            raise DomainError("requirement must be positive")
        caps = None
        if self.power_caps is not None:
            caps = _frozen(np.atleast_1d(self.power_caps), "power_caps", 1)
            if caps.size != len(tx):
                raise DimensionError("one power cap per transmitter")
            if np.any(caps < 0):
                raise DomainError("power caps must be nonnegative")
        # angle from each antenna to the target
        tx_ang, tx_d = _pairwise_geometry(tx, target)
        rx_ang, rx_d = _pairwise_geometry(rx, target)
        for name, val in (("tx_positions", tx), ("rx_positions", rx), ("target_position", target[0]),
                          ("rc", rc), ("power_caps", caps), ("beta", float(self.beta)),
                          ("requirement", float(self.requirement)),
                          ("_tx_geo", (tx_ang[:, 0], tx_d[:, 0])),
                          ("_rx_geo", (rx_ang[:, 0], rx_d[:, 0]))):
            object.__setattr__(self, name, val)

    @property
    def n_tx(self) -> int:
        return len(self.tx_positions)

    @property
    def n_rx(self) -> int:
        return len(self.rx_positions)

    @property
    def n_powers(self) -> int:
        return self.n_tx

    @property
    def psi(self) -> np.ndarray:
        """Angles from each receive antenna to the target."""
        return self._rx_geo[0]

    @property
    def varphi(self) -> np.ndarray:
        """Angles from each transmit antenna to the target."""
        return self._tx_geo[0]

    @property
    def d_rx(self) -> np.ndarray:
        return self._rx_geo[1]

    @property
    def d_tx(self) -> np.ndarray:
        return self._tx_geo[1]

    def angles(self) -> np.ndarray:
        """Bisector angles ``(psi_k + varphi_j)/2``, rx x tx."""
        return 0.5 * (self.psi[:, None] + self.varphi[None, :])

    def ercs(self) -> np.ndarray:
        """Effective ranging coefficients, rx x tx."""
        return erc_rnl(self.rc, self.d_rx[:, None], self.d_tx[None, :],
                       self.psi[:, None], self.varphi[None, :], self.beta)

    def replace(self, **changes) -> "RadarNetwork":
        kw = dict(tx_positions=self.tx_positions, rx_positions=self.rx_positions,
                  target_position=self.target_position, rc=self.rc, beta=self.beta,
                  requirement=self.requirement, power_caps=self.power_caps)
        kw.update(changes)
        return RadarNetwork(**kw)


def uniform_angle_network(n_anchors: int, radius: float = 1.0, rc: float = 1.0,
                          beta: float = 1.0, requirement: float = 1.0,
                          offset: float = 0.0) -> WirelessNetwork:
    """A single agent at the origin with anchors evenly spaced on a circle.

    With ``radius = 1`` and ``rc = 1`` every effective coefficient is ``rc``.
    """
    theta = offset + TWO_PI * np.arange(n_anchors) / n_anchors
    anchors = radius * np.column_stack([np.cos(theta), np.sin(theta)])
    return WirelessNetwork(anchor_positions=anchors, agent_positions=[[0.0, 0.0]],
                           rc=np.full((1, n_anchors), float(rc)), beta=beta,
                           requirements=[requirement])


def network_from_angles(angles: Sequence[float], ercs: Sequence[float],
                        requirement: float = 1.0, beta: float = 1.0) -> WirelessNetwork:
    """Single-agent network at the origin with anchors at unit distance in the
    given directions, so that the effective coefficients equal ``ercs``."""
    angles = np.asarray(angles, dtype=float)
    anchors = np.column_stack([np.cos(angles), np.sin(angles)])
    return WirelessNetwork(anchor_positions=anchors, agent_positions=[[0.0, 0.0]],
                           rc=np.asarray(ercs, dtype=float)[None, :], beta=beta,
                           requirements=[requirement])
