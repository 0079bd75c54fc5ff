"""Independent optimality check of a :class:`Solution`.

Everything is recomputed from the program data and the returned vectors;
nothing from the solver's internal state is reused.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .program import ConeProgram
from .solver import Solution, Status


@dataclass(frozen=True)
class KKTReport:
    """Absolute residuals, their scale-free versions, and an overall verdict.

    The relative residuals divide by ``1 + ||data||`` terms exactly as the
    solver's stopping rule does; ``ok`` is judged on them.
    """

    primal_residual: float
    max_violation: float
    dual_residual: float
    complementarity: float
    dual_cone_violation: float
    certificate: bool
    ok: bool
    rel_primal: float = math.nan
    rel_dual: float = math.nan
    rel_gap: float = math.nan

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def _cone_margin(u: np.ndarray) -> float:
    """How far ``u`` lies outside the second-order cone (0 when inside)."""
    return max(0.0, float(np.linalg.norm(u[1:]) - u[0]))


def _stack(prog: ConeProgram, sol: Solution, dual: bool):
    std = prog.standard_form()
    out = np.zeros(std.cones.m)
    soc = sol.soc_duals if dual else sol.soc_slacks
    lin = sol.linear_duals if dual else sol.linear_slacks
    nn = sol.nonneg_duals if dual else sol.nonneg_slacks
    for sl, blk in zip(std.soc_slices, soc):
        out[sl] = blk
    out[std.linear_rows] = lin
    out[std.nonneg_rows] = nn
    return std, out


def _dual_cone_violation(prog: ConeProgram, sol: Solution) -> float:
    worst = 0.0
    for z in sol.soc_duals:
        worst = max(worst, _cone_margin(np.asarray(z)))
    for arr in (sol.linear_duals, sol.nonneg_duals):
        if np.size(arr):
            worst = max(worst, float(np.max(-np.asarray(arr), initial=0.0)))
    return worst


def check_kkt(prog: ConeProgram, sol: Solution, tol: float = 1e-6) -> KKTReport:
    """Residuals of the optimality (or infeasibility) conditions.

    For an optimal solution: ``||G v + s - h||`` with the returned slacks,
    the worst constraint violation of ``v``, ``||G^T z + c||``, the
    complementarity ``|s^T z|``, and the distance of ``z`` from the dual
    cone (infinity norms throughout). For a primal-infeasible status the duals
    are checked as a Farkas certificate instead.
    """
    std, z = _stack(prog, sol, dual=True)
    _, s = _stack(prog, sol, dual=False)
    G, h, c = std.G, std.h, std.c
    zviol = _dual_cone_violation(prog, sol)
    if sol.status is Status.PRIMAL_INFEASIBLE:
        hz = float(h @ z)
        if hz >= 0:
            return KKTReport(math.nan, math.nan, math.inf, math.nan, zviol, True, False)
        zn = z / -hz
        dres = float(np.linalg.norm(G.T @ zn, np.inf))
        zviol = zviol / -hz
        return KKTReport(math.nan, math.nan, dres, math.nan, zviol, True,
                         dres <= tol and zviol <= tol)
    if sol.v is None:
        return KKTReport(math.inf, math.inf, math.inf, math.inf, zviol, False, False)
    v = np.asarray(sol.v, dtype=float)
    if sol.status is Status.DUAL_INFEASIBLE:
        cv = float(c @ v)
        ray = float(np.linalg.norm(G @ v + s, np.inf)) / max(-cv, 1e-300)
        ok = cv < 0 and ray <= tol
        return KKTReport(ray, math.nan, math.nan, math.nan, 0.0, True, ok)

    Gv, Gz = G @ v, G.T @ z
    inf = lambda a: float(np.linalg.norm(a, np.inf))
    pres = inf(Gv + s - h)
    viol = 0.0
    for con in prog.soc_constraints:
        viol = max(viol, con.violation(v))
    for con in prog.linear_constraints:
        viol = max(viol, con.violation(v))
    if prog.nonneg:
        viol = max(viol, float(np.max(-v[list(prog.nonneg)], initial=0.0)))
    dres = inf(Gz + c)
    comp = abs(float(s @ z))
    pcost, dcost = float(c @ v), float(-h @ z)
    rel_p = pres / (1.0 + max(inf(h), inf(Gv), inf(s)))
    rel_d = dres / (1.0 + max(inf(c), inf(Gz)))
    rel_g = max(abs(pcost - dcost), comp) / (1.0 + min(abs(pcost), abs(dcost)))
    ok = max(rel_p, rel_d, rel_g, zviol) <= tol and viol <= tol * (1.0 + inf(h))
    return KKTReport(pres, viol, dres, comp, zviol, False, ok, rel_p, rel_d, rel_g)
