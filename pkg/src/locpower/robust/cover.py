"""Finite covers of the position uncertainty and the link intervals they induce.

Each circle of radius ``delta`` around a nominal point turns into, for every
link, a nominal angle with a symmetric half-width and an interval for the
effective ranging coefficient. Radar links are stored as ``(n_rx, n_tx)``
arrays; wireless links as length-``n_anchors`` vectors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from ..errors import DimensionError, DomainError
from ..netmodel import RadarNetwork, WirelessNetwork, _pairwise_geometry


class Circle(NamedTuple):
    center: tuple
    radius: float


def _ro(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class CircleUncertainty:
    """Link intervals for one circle of one agent (or of the target)."""

    center: np.ndarray
    radius: float
    phi_hat: np.ndarray
    phi_tilde: np.ndarray
    xi_lo: np.ndarray
    xi_hi: np.ndarray
    requirement: float

    def __post_init__(self):
        for name in ("center", "phi_hat", "phi_tilde", "xi_lo", "xi_hi"):
            object.__setattr__(self, name, _ro(getattr(self, name)))
        shape = self.phi_hat.shape
        if any(getattr(self, f).shape != shape for f in ("phi_tilde", "xi_lo", "xi_hi")):
            raise DimensionError("link arrays of a circle must share one shape")
        if np.any(self.phi_tilde < 0) or np.any(self.phi_tilde > 0.5 * math.pi + 1e-15):
            raise DomainError("angular half-widths must lie in [0, pi/2]")
        if np.any(self.xi_lo < 0) or np.any(self.xi_lo > self.xi_hi * (1 + 1e-12) + 1e-300):
            raise DomainError("coefficient intervals must satisfy 0 <= lo <= hi")
        if not self.requirement > 0:
            raise DomainError("requirement must be positive")

    @property
    def n_powers(self) -> int:
        return self.phi_hat.shape[-1]

    def stacked(self, x) -> np.ndarray:
        """Worst-case weights ``xi_lo * x`` flattened over all links."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n_powers,):
            raise DimensionError(f"power allocation must have length {self.n_powers}")
        return np.ravel(self.xi_lo * x)

    @property
    def flat_angles(self) -> np.ndarray:
        return np.ravel(self.phi_hat)

    @property
    def flat_widths(self) -> np.ndarray:
        return np.ravel(self.phi_tilde)


@dataclass(frozen=True)
class UncertaintyCover:
    """Per position, the list of circles covering it."""

    circles: tuple
    kind: str

    def __post_init__(self):
        circles = tuple(tuple(c) for c in self.circles)
        if not circles or any(len(c) == 0 for c in circles):
            raise DimensionError("every position needs at least one circle")
        if self.kind not in ("wnl", "rnl"):
            raise DomainError("kind must be 'wnl' or 'rnl'")
        object.__setattr__(self, "circles", circles)

    @property
    def n_powers(self) -> int:
        return self.circles[0][0].n_powers

    def __iter__(self):
        for per_pos in self.circles:
            yield from per_pos


def hex_cover(region: Sequence[float], radius: float) -> list[Circle]:
    """Circles of ``radius`` on a triangular lattice covering the rectangle
    ``(xmin, ymin, xmax, ymax)``.

    Centers within a row are ``sqrt(3) r`` apart, rows ``1.5 r`` apart with
    alternate rows shifted by half a spacing; every point of the plane is then
    within ``r`` of a center.
    """
    xmin, ymin, xmax, ymax = map(float, region)
    if not (xmax >= xmin and ymax >= ymin):
        raise DomainError("region must be (xmin, ymin, xmax, ymax) with min <= max")
    if not radius > 0:
        raise DomainError("radius must be positive")
    dx = math.sqrt(3.0) * radius
    dy = 1.5 * radius
    rows = int(math.ceil((ymax - ymin) / dy)) + 1
    out = []
    for r in range(rows):
        y = ymin + r * dy
        shift = 0.5 * dx if r % 2 else 0.0
        x = xmin - shift
        while x - 0.5 * dx <= xmax:
            out.append(Circle((x, y), radius))
            x += dx
    return out


def single_circle_cover(points, radius: float) -> list[list[Circle]]:
    """One circle of ``radius`` around every nominal point."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    return [[Circle(tuple(p), float(radius))] for p in pts]


def _half_width(radius: float, d: np.ndarray) -> np.ndarray:
    if np.any(radius >= d):
        raise DomainError("uncertainty radius must be smaller than every link distance")
    return np.arcsin(radius / d)


def _zeta_bounds(rc, rc_lo, rc_hi):
    lo = rc if rc_lo is None else np.asarray(rc_lo, dtype=float)
    hi = rc if rc_hi is None else np.asarray(rc_hi, dtype=float)
    if lo.shape != rc.shape or hi.shape != rc.shape:
        raise DimensionError("coefficient bounds must match the network's rc shape")
    if np.any(lo < 0) or np.any(lo > hi):
        raise DomainError("coefficient bounds must satisfy 0 <= lo <= hi")
    return lo, hi


def derive_intervals_wnl(net: WirelessNetwork, circles, rc_lo=None, rc_hi=None) -> UncertaintyCover:
    """Angle and coefficient intervals for every agent circle.

    ``circles[k]`` lists the circles covering agent ``k``. ``rc_lo``/``rc_hi``
    bound the ranging coefficients (default: the nominal ``rc``).
    """
    if len(circles) != net.n_agents:
        raise DimensionError("need one circle list per agent")
    lo, hi = _zeta_bounds(net.rc, rc_lo, rc_hi)
    b2 = 2.0 * net.beta
    out = []
    for k, per_agent in enumerate(circles):
        row = []
        for center, radius in per_agent:
            ang, d = _pairwise_geometry(np.atleast_2d(np.asarray(center, dtype=float)), net.anchor_positions)
            ang, d = ang[0], d[0]
            width = _half_width(float(radius), d)
            row.append(CircleUncertainty(
                center, radius, ang, width,
                lo[k] / (d + radius) ** b2, hi[k] / (d - radius) ** b2,
                float(net.requirements[k])))
        out.append(row)
    return UncertaintyCover(out, "wnl")


def _contains(lo, hi, period, offset):
    """Whether ``[lo, hi]`` contains some ``offset + n * period``."""
    return np.ceil((lo - offset) / period) * period + offset <= hi


def cos2_range(lo, hi) -> tuple[np.ndarray, np.ndarray]:
    """Minimum and maximum of ``cos^2`` over ``[lo, hi]`` (elementwise)."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    if np.any(hi < lo):
        raise DomainError("interval must satisfy lo <= hi")
    ends = np.minimum(np.cos(lo) ** 2, np.cos(hi) ** 2), np.maximum(np.cos(lo) ** 2, np.cos(hi) ** 2)
    cmin = np.where(_contains(lo, hi, math.pi, 0.5 * math.pi), 0.0, ends[0])
    cmax = np.where(_contains(lo, hi, math.pi, 0.0), 1.0, ends[1])
    return cmin, cmax


def derive_intervals_rnl(net: RadarNetwork, circles, rc_lo=None, rc_hi=None) -> UncertaintyCover:
    """Bisector-angle and coefficient intervals for the target's circles.

    The rx and tx angles get half-widths ``arcsin(delta/d)``; the bisector
    half-width is their mean, and the ``cos^2`` factor is bounded over the
    corresponding interval of half angle differences.
    """
    if len(circles) != 1:
        raise DimensionError("a radar network has a single target; pass one circle list")
    lo, hi = _zeta_bounds(net.rc, rc_lo, rc_hi)
    b2 = 2.0 * net.beta
    row = []
    for center, radius in circles[0]:
        c = np.atleast_2d(np.asarray(center, dtype=float))
        psi, d_rx = _pairwise_geometry(net.rx_positions, c)
        varphi, d_tx = _pairwise_geometry(net.tx_positions, c)
        psi, d_rx, varphi, d_tx = psi[:, 0], d_rx[:, 0], varphi[:, 0], d_tx[:, 0]
        w_rx = _half_width(float(radius), d_rx)
        w_tx = _half_width(float(radius), d_tx)
        phi_hat = 0.5 * (psi[:, None] + varphi[None, :])
        phi_tilde = 0.5 * (w_rx[:, None] + w_tx[None, :])
        half_diff = 0.5 * (psi[:, None] - varphi[None, :])
        cmin, cmax = cos2_range(half_diff - phi_tilde, half_diff + phi_tilde)
        near = (d_rx[:, None] - radius) ** b2 * (d_tx[None, :] - radius) ** b2
        far = (d_rx[:, None] + radius) ** b2 * (d_tx[None, :] + radius) ** b2
        row.append(CircleUncertainty(center, radius, phi_hat, phi_tilde,
                                     4.0 * lo * cmin / far, 4.0 * hi * cmax / near,
                                     float(net.requirement)))
    return UncertaintyCover([row], "rnl")


def derive_intervals(net, circles, rc_lo=None, rc_hi=None) -> UncertaintyCover:
    if isinstance(net, RadarNetwork):
        return derive_intervals_rnl(net, circles, rc_lo, rc_hi)
    return derive_intervals_wnl(net, circles, rc_lo, rc_hi)


def nominal_points(net) -> np.ndarray:
    if isinstance(net, RadarNetwork):
        return np.atleast_2d(net.target_position)
    return net.agent_positions


def nuss_cover(net, nuss: float, size: float, rc_lo=None, rc_hi=None) -> UncertaintyCover:
    """Single-circle cover with radius ``nuss * size / 2`` at every nominal point."""
    if not 0 <= nuss < 1:
        raise DomainError("normalized uncertainty size must lie in [0, 1)")
    return derive_intervals(net, single_circle_cover(nominal_points(net), 0.5 * nuss * size), rc_lo, rc_hi)
