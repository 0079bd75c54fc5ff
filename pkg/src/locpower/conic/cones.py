"""Vectorized algebra on a product of a nonnegative orthant and second-order cones.

A vector in the product space is stored flat: the orthant block first, then
one contiguous block per second-order cone *dimension group*; within a group
the cones are stored row-major so that the block reshapes to ``(K, q)``. The
first entry of each cone is its "scalar" part: ``(u0, u1)`` is in the cone
when ``u0 >= ||u1||``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SocGroup:
    dim: int
    count: int
    start: int

    @property
    def stop(self) -> int:
        return self.start + self.dim * self.count


class ConeProduct:
    """Layout and Jordan algebra of ``R^l_+ x Q^{q_1} x ... x Q^{q_K}``."""

    def __init__(self, n_orthant: int, groups: list[tuple[int, int]]):
        self.l = int(n_orthant)
        start = self.l
        out = []
        for dim, count in groups:
            out.append(SocGroup(int(dim), int(count), start))
            start += dim * count
        self.groups = out
        self.m = start
        self.degree = self.l + sum(g.count for g in out)

    def blocks(self, u: np.ndarray):
        """Orthant part and the ``(K, q)`` views of each SOC group."""
        return u[: self.l], [u[g.start:g.stop].reshape(g.count, g.dim) for g in self.groups]

    def identity(self) -> np.ndarray:
        e = np.zeros(self.m)
        e[: self.l] = 1.0
        for g in self.groups:
            e[g.start:g.stop:g.dim] = 1.0
        return e

    def jordan(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        out = np.empty(self.m)
        out[: self.l] = u[: self.l] * v[: self.l]
        ub, vb = self.blocks(u)[1], self.blocks(v)[1]
        for g, a, b in zip(self.groups, ub, vb):
            blk = np.empty_like(a)
            blk[:, 0] = np.einsum("ij,ij->i", a, b)
            blk[:, 1:] = a[:, :1] * b[:, 1:] + b[:, :1] * a[:, 1:]
            out[g.start:g.stop] = blk.ravel()
        return out

    def jordan_div(self, lam: np.ndarray, d: np.ndarray) -> np.ndarray:
        """Solve ``lam o w = d`` for ``w`` (``lam`` in the cone interior)."""
        out = np.empty(self.m)
        out[: self.l] = d[: self.l] / lam[: self.l]
        lb, db = self.blocks(lam)[1], self.blocks(d)[1]
        for g, a, b in zip(self.groups, lb, db):
            a0, a1 = a[:, 0], a[:, 1:]
            det = a0 * a0 - np.einsum("ij,ij->i", a1, a1)
            w0 = (a0 * b[:, 0] - np.einsum("ij,ij->i", a1, b[:, 1:])) / det
            blk = np.empty_like(a)
            blk[:, 0] = w0
            blk[:, 1:] = (b[:, 1:] - w0[:, None] * a1) / a0[:, None]
            out[g.start:g.stop] = blk.ravel()
        return out

    def min_margin(self, u: np.ndarray) -> float:
        """Smallest of ``u_i`` (orthant) and ``u0 - ||u1||`` (cones); >0 iff interior."""
        vals = [np.min(u[: self.l])] if self.l else []
        for b in self.blocks(u)[1]:
            vals.append(np.min(b[:, 0] - np.linalg.norm(b[:, 1:], axis=1)))
        return float(min(vals)) if vals else np.inf

    def max_step(self, u: np.ndarray, du: np.ndarray) -> float:
        """Largest ``alpha`` with ``u + alpha du`` in the closed cone (``u`` interior)."""
        alpha = np.inf
        if self.l:
            neg = du[: self.l] < 0
            if np.any(neg):
                alpha = min(alpha, float(np.min(-u[: self.l][neg] / du[: self.l][neg])))
        ub, dub = self.blocks(u)[1], self.blocks(du)[1]
        for a, d in zip(ub, dub):
            n1 = np.linalg.norm(a[:, 1:], axis=1)
            c = (a[:, 0] - n1) * (a[:, 0] + n1)
            qa = d[:, 0] ** 2 - np.einsum("ij,ij->i", d[:, 1:], d[:, 1:])
            qb = a[:, 0] * d[:, 0] - np.einsum("ij,ij->i", a[:, 1:], d[:, 1:])
            disc = qb * qb - qa * c
            hits = (disc >= 0) & ((qa < 0) | (qb < 0))
            if np.any(hits):
                root = c[hits] / (np.sqrt(np.maximum(disc[hits], 0.0)) - qb[hits])
                root = root[root >= 0]
                if root.size:
                    alpha = min(alpha, float(np.min(root)))
        return alpha


class NTScaling:
    """Nesterov-Todd scaling ``W`` with ``W z = W^{-1} s = lam``.

    Orthant: ``W = diag(sqrt(s/z))``. Each SOC block:
    ``W = eta * [[w0, w1^T], [w1, I + w1 w1^T / (1 + w0)]]`` with ``w``
    normalized so that ``w0^2 - ||w1||^2 = 1``.
    """

    def __init__(self, cones: ConeProduct, s: np.ndarray, z: np.ndarray):
        self.cones = cones
        self.d = np.sqrt(s[: cones.l] / z[: cones.l])
        self.w = []
        self.eta = []
        sb, zb = cones.blocks(s)[1], cones.blocks(z)[1]
        for a, b in zip(sb, zb):
            na = np.sqrt(_det(a))
            nb = np.sqrt(_det(b))
            sbar = a / na[:, None]
            zbar = b / nb[:, None]
            gamma = np.sqrt(0.5 * (1.0 + np.einsum("ij,ij->i", sbar, zbar)))
            w = sbar.copy()
            w[:, 0] += zbar[:, 0]
            w[:, 1:] -= zbar[:, 1:]
            w /= (2.0 * gamma)[:, None]
            # renormalize to counter rounding: w0 = sqrt(1 + ||w1||^2)
            w[:, 0] = np.sqrt(1.0 + np.einsum("ij,ij->i", w[:, 1:], w[:, 1:]))
            self.w.append(w)
            self.eta.append(np.sqrt(na / nb))
        self.lam = self.apply(z)

    def _apply(self, v: np.ndarray, inverse: bool) -> np.ndarray:
        cones = self.cones
        out = np.empty(cones.m)
        out[: cones.l] = v[: cones.l] / self.d if inverse else v[: cones.l] * self.d
        for g, w, eta, b in zip(cones.groups, self.w, self.eta, cones.blocks(v)[1]):
            w0, w1 = w[:, 0], w[:, 1:]
            v0, v1 = b[:, 0], b[:, 1:]
            t = np.einsum("ij,ij->i", w1, v1)
            blk = np.empty_like(b)
            if inverse:
                blk[:, 0] = w0 * v0 - t
                blk[:, 1:] = v1 + ((t / (1.0 + w0) - v0))[:, None] * w1
                blk /= eta[:, None]
            else:
                blk[:, 0] = w0 * v0 + t
                blk[:, 1:] = v1 + ((t / (1.0 + w0) + v0))[:, None] * w1
                blk *= eta[:, None]
            out[g.start:g.stop] = blk.ravel()
        return out

    def apply(self, v: np.ndarray) -> np.ndarray:
        return self._apply(v, inverse=False)

    def apply_inv(self, v: np.ndarray) -> np.ndarray:
        return self._apply(v, inverse=True)

    def apply_inv_cols(self, V: np.ndarray) -> np.ndarray:
        """``W^{-1} V`` for every column of an ``(m, k)`` matrix."""
        cones = self.cones
        out = np.empty_like(V, dtype=float)
        out[: cones.l] = V[: cones.l] / self.d[:, None]
        for g, w, eta in zip(cones.groups, self.w, self.eta):
            b = V[g.start:g.stop].reshape(g.count, g.dim, -1)
            w0, w1 = w[:, 0], w[:, 1:]
            t = np.einsum("ij,ijk->ik", w1, b[:, 1:])
            blk = np.empty_like(b)
            blk[:, 0] = w0[:, None] * b[:, 0] - t
            blk[:, 1:] = b[:, 1:] + (t / (1.0 + w0)[:, None] - b[:, 0])[:, None, :] * w1[:, :, None]
            blk /= eta[:, None, None]
            out[g.start:g.stop] = blk.reshape(g.count * g.dim, -1)
        return out

    def apply_sq(self, v: np.ndarray) -> np.ndarray:
        """``W^T W v`` (factored; the dense blocks lose accuracy near the boundary)."""
        return self.apply(self.apply(v))

    def apply_inv_sq(self, v: np.ndarray) -> np.ndarray:
        return self.apply_inv(self.apply_inv(v))


def _det(b: np.ndarray) -> np.ndarray:
    n1 = np.linalg.norm(b[:, 1:], axis=1)
    return (b[:, 0] - n1) * (b[:, 0] + n1)
