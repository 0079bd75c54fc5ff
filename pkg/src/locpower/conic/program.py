"""Second-order cone programs in the user-facing form.

``minimize c^T v`` subject to

* ``||A v + b||_2 <= g^T v + h`` for each :class:`SocConstraint`,
* ``f^T v <= e`` for each :class:`LinearConstraint`,
* ``v_i >= 0`` for every ``i`` in ``nonneg``.

:meth:`ConeProgram.standard_form` maps this to ``G v + s = h, s in K`` with
``K`` a product of a nonnegative orthant (linear rows, then sign rows) and
second-order cones grouped by dimension.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..errors import DimensionError
from .cones import ConeProduct


def _frozen(a, ndim):
    arr = np.array(a, dtype=float)
    if arr.ndim != ndim:
        raise DimensionError(f"expected {ndim}-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DimensionError("program data must be finite")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class SocConstraint:
    """``||A v + b|| <= g^T v + h``."""

    A: np.ndarray
    b: np.ndarray
    g: np.ndarray
    h: float

    def __post_init__(self):
        A = _frozen(np.atleast_2d(self.A), 2)
        b = _frozen(np.atleast_1d(self.b), 1)
        g = _frozen(np.atleast_1d(self.g), 1)
        if A.shape[0] != b.size or A.shape[1] != g.size:
            raise DimensionError(f"cone data mismatch: A {A.shape}, b {b.shape}, g {g.shape}")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "h", float(self.h))

    @property
    def dim(self) -> int:
        return self.A.shape[0] + 1

    def slack(self, v: np.ndarray) -> np.ndarray:
        """The cone member ``(g^T v + h, A v + b)``."""
        return np.concatenate([[self.g @ v + self.h], self.A @ v + self.b])

    def violation(self, v: np.ndarray) -> float:
        return max(0.0, float(np.linalg.norm(self.A @ v + self.b) - (self.g @ v + self.h)))


@dataclass(frozen=True)
class LinearConstraint:
    """``f^T v <= e``."""

    f: np.ndarray
    e: float

    def __post_init__(self):
        object.__setattr__(self, "f", _frozen(np.atleast_1d(self.f), 1))
        object.__setattr__(self, "e", float(self.e))

    def violation(self, v: np.ndarray) -> float:
        return max(0.0, float(self.f @ v - self.e))


@dataclass(frozen=True)
class StandardForm:
    c: np.ndarray
    G: np.ndarray
    h: np.ndarray
    cones: ConeProduct
    # position in the flat cone vector of linear row i / sign row i / SOC constraint i
    linear_rows: np.ndarray
    nonneg_rows: np.ndarray
    soc_slices: tuple


@dataclass(frozen=True)
class ConeProgram:
    objective: np.ndarray
    soc_constraints: Sequence[SocConstraint] = ()
    linear_constraints: Sequence[LinearConstraint] = ()
    nonneg: Sequence[int] = ()
    labels: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        c = _frozen(np.atleast_1d(self.objective), 1)
        n = c.size
        socs = tuple(self.soc_constraints)
        lins = tuple(self.linear_constraints)
        for k, con in enumerate(socs):
            if con.A.shape[1] != n:
                raise DimensionError(f"cone {k} has {con.A.shape[1]} columns, program has {n} variables")
        for k, con in enumerate(lins):
            if con.f.size != n:
                raise DimensionError(f"linear row {k} has length {con.f.size}, program has {n} variables")
        nonneg = np.asarray(self.nonneg, dtype=bool) if (
            len(self.nonneg) == n and np.asarray(self.nonneg).dtype == bool) else None
        idx = np.flatnonzero(nonneg) if nonneg is not None else np.unique(np.asarray(self.nonneg, dtype=int))
        if idx.size and (idx.min() < 0 or idx.max() >= n):
            raise DimensionError("nonnegativity index out of range")
        if not socs and not lins and not idx.size:
            raise DimensionError("program needs at least one constraint")
        object.__setattr__(self, "objective", c)
        object.__setattr__(self, "soc_constraints", socs)
        object.__setattr__(self, "linear_constraints", lins)
        object.__setattr__(self, "nonneg", tuple(int(i) for i in idx))

    @property
    def n(self) -> int:
        return self.objective.size

    def standard_form(self) -> StandardForm:
        n = self.n
        n_lin = len(self.linear_constraints)
        nn = np.asarray(self.nonneg, dtype=int)
        l = n_lin + nn.size
        dims = sorted({con.dim for con in self.soc_constraints})
        groups = [(q, sum(1 for con in self.soc_constraints if con.dim == q)) for q in dims]
        cones = ConeProduct(l, groups)
        G = np.zeros((cones.m, n))
        h = np.zeros(cones.m)
        for i, con in enumerate(self.linear_constraints):
            G[i] = con.f
            h[i] = con.e
        G[n_lin + np.arange(nn.size), nn] = -1.0
        slices = [None] * len(self.soc_constraints)
        cursor = {g.dim: g.start for g in cones.groups}
        for k, con in enumerate(self.soc_constraints):
            start = cursor[con.dim]
            cursor[con.dim] += con.dim
            G[start] = -con.g
            G[start + 1:start + con.dim] = -con.A
            h[start] = con.h
            h[start + 1:start + con.dim] = con.b
            slices[k] = slice(start, start + con.dim)
        return StandardForm(self.objective, G, h, cones, np.arange(n_lin),
                            n_lin + np.arange(nn.size), tuple(slices))

    def to_text(self) -> str:
        """Plain-text dump: objective, cone rows, linear rows, sign constraints."""
        out = io.StringIO()
        fmt = lambda a: " ".join(repr(float(t)) for t in np.ravel(a))
        out.write(f"n {self.n}\n")
        out.write(f"objective {fmt(self.objective)}\n")
        for k, con in enumerate(self.soc_constraints):
            out.write(f"cone {k} dim {con.dim}\n")
            out.write(f"  g {fmt(con.g)}\n  h {float(con.h)!r}\n")
            for row, bi in zip(con.A, con.b):
                out.write(f"  A {fmt(row)} b {float(bi)!r}\n")
        for k, con in enumerate(self.linear_constraints):
            out.write(f"linear {k} f {fmt(con.f)} e {float(con.e)!r}\n")
        out.write("nonneg " + " ".join(str(i) for i in self.nonneg) + "\n")
        return out.getvalue()

    @classmethod
    def from_text(cls, text: str) -> "ConeProgram":
        """Inverse of :meth:`to_text`."""
        lines = [ln.split() for ln in text.splitlines() if ln.strip()]
        objective = None
        socs, lins, nonneg = [], [], []
        cur = None

        def flush():
            if cur is not None:
                socs.append(SocConstraint(np.array(cur["A"]).reshape(-1, len(cur["g"])),
                                          cur["b"], cur["g"], cur["h"]))

        for tok in lines:
            head = tok[0]
            if head == "objective":
                objective = [float(t) for t in tok[1:]]
            elif head == "cone":
                flush()
                cur = {"A": [], "b": [], "g": None, "h": 0.0}
            elif head == "g":
                cur["g"] = [float(t) for t in tok[1:]]
            elif head == "h":
                cur["h"] = float(tok[1])
            elif head == "A":
                bpos = tok.index("b")
                cur["A"].extend(float(t) for t in tok[1:bpos])
                cur["b"].append(float(tok[bpos + 1]))
            elif head == "linear":
                flush()
                cur = None
                epos = tok.index("e")
                lins.append(LinearConstraint([float(t) for t in tok[3:epos]], float(tok[epos + 1])))
            elif head == "nonneg":
                flush()
                cur = None
                nonneg = [int(t) for t in tok[1:]]
        flush() if cur is not None else None
        return cls(objective, socs, lins, nonneg)
