"""Finite-direction bounds on the worst-case SPEB and their gap constant.

Evaluating the support sum on ``M`` evenly spaced directions
``theta_m = (2m + 1) pi / M`` gives a lower bound on ``S``; dividing by
``cos(pi/M)`` gives an upper bound. Plugged into ``4a / (a^2 - S^2)`` both
become bounds on the worst-case SPEB, valid while ``M >= pi sqrt(B)``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError, ValidityError
from .cover import CircleUncertainty, UncertaintyCover
from .oracle import arc_support


def grid_angles(M: int) -> np.ndarray:
    return (2.0 * np.arange(M) + 1.0) * math.pi / M


@dataclass(frozen=True)
class BoundVectors:
    """Rows ``h[m]`` and ``g[m] = h[m] / cos(pi/M)`` over the flattened links."""

    M: int
    theta: np.ndarray
    h: np.ndarray
    g: np.ndarray

    def __post_init__(self):
        for name in ("theta", "h", "g"):
            getattr(self, name).setflags(write=False)


def bound_vectors(circle: CircleUncertainty, M: int) -> BoundVectors:
    """Exact per-entry bound vectors for ``M`` directions."""
    if int(M) != M or M < 2:
        raise DomainError("M must be an integer >= 2")
    M = int(M)
    theta = grid_angles(M)
    h = arc_support(theta, 2.0 * circle.flat_angles, 2.0 * circle.flat_widths)
    return BoundVectors(M, theta, h, h / math.cos(math.pi / M))


def _max_ratio(total: float, proj: np.ndarray) -> float:
    den = total * total - proj * proj
    if total <= 0 or np.any(den <= 0):
        return math.inf
    return float(np.max(4.0 * total / den))


@dataclass(frozen=True)
class SpebBounds:
    """``lower <= worst-case SPEB <= upper`` (the upper limb needs ``valid``).

    ``B`` is the oracle-free estimate ``a * lower / 4`` (never above the true
    value); ``B_upper = a * upper / 4`` never falls below it, so
    ``valid = M >= pi sqrt(B_upper)`` is a sufficient check.
    """

    lower: float
    upper: float
    B: float
    B_upper: float
    valid: bool

    def __iter__(self):
        return iter((self.lower, self.upper, self.B))

    @property
    def min_valid_M(self) -> int:
        return int(math.ceil(math.pi * math.sqrt(self.B_upper))) if math.isfinite(self.B_upper) else 0


def speb_bounds_eval(circle: CircleUncertainty, x, M: int) -> SpebBounds:
    bv = bound_vectors(circle, M)
    y = circle.stacked(x)
    a = float(y.sum())
    lower = _max_ratio(a, bv.h @ y)
    upper = _max_ratio(a, bv.g @ y)
    B = a * lower / 4.0 if math.isfinite(lower) else math.inf
    B_up = a * upper / 4.0 if math.isfinite(upper) else math.inf
    return SpebBounds(lower, upper, B, B_up, bool(M >= math.pi * math.sqrt(B_up)))


def gap_constant(B: float, M: int) -> float:
    """``C`` with ``upper <= (1 + C) lower``; decays like ``pi^2 (B - 1) / M^2``."""
    if B < 1:
        raise DomainError("B is at least 1 by construction")
    if M <= math.pi * math.sqrt(B):
        raise ValidityError(f"M={M} is too small for B={B:.6g}; need M > {math.pi * math.sqrt(B):.4g}")
    s2 = math.sin(math.pi / M) ** 2
    return s2 * (B - 1.0) / (1.0 - s2 * B)


VALIDITY_PROBE_M = 4096


def check_validity(cover: UncertaintyCover, x, M: int, warn: bool = True) -> int:
    """Smallest ``M`` certified to make the bounds valid at ``x`` over all circles.

    ``B_upper`` shrinks towards ``B`` as ``M`` grows, so the search starts
    from the threshold read at ``max(M, 4096)``; a warning is emitted when the bounds at the given
    ``M`` are not certified. Returns 0 if no finite threshold exists (the
    worst-case information is singular).
    """
    at_m = [speb_bounds_eval(c, x, M) for c in cover]
    probe = at_m if M >= VALIDITY_PROBE_M else [speb_bounds_eval(c, x, VALIDITY_PROBE_M) for c in cover]
    finite = all(math.isfinite(b.B_upper) for b in probe)
    need = max(b.min_valid_M for b in probe) if finite else 0
    # the threshold read at a larger M can be too optimistic at ``need`` itself
    while finite and need and not all(speb_bounds_eval(c, x, need).valid for c in cover):
        need += 1
    if warn and not all(b.valid for b in at_m):
        hint = f"use M >= {need}" if finite else "the worst-case information is singular"
        warnings.warn(f"M={M} does not certify the bounds at this allocation; {hint}",
                      RuntimeWarning, stacklevel=2)
    return need
