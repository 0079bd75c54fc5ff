"""Seeded random scenarios and Monte-Carlo sweeps over allocation algorithms.

Every trial draws its network from its own counter-based substream keyed by
``(seed, grid index, trial)``, so reports do not depend on execution order.
"""
from __future__ import annotations

import csv
import io
import math
import re
import time
from dataclasses import asdict, dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .allocate import build_min_power, solve_allocation, uniform_min_power
from .errors import DomainError, InfeasibleBaselineError
from .fisher import requirements_of, speb_of
from .netmodel import RadarNetwork, WirelessNetwork
from .robust import (build_robust_socp_asymptotic, build_robust_socp_efficient, nuss_cover,
                     worst_case_speb)

ALGORITHMS = ("nominal-socp", "uniform", "robust-asym-upper", "robust-asym-lower",
              "robust-efficient", "nonrobust-under-uncertainty")
DEFAULT_M = 64
VIOLATION_TOL = 1e-6


@dataclass(frozen=True)
class ScenarioSpec:
    """One grid point of a sweep.

    ``n_tx`` counts anchors (wireless) or transmit antennas (radar);
    ``n_rx`` counts agents (wireless) or receive antennas (radar).
    """

    kind: str = "wnl"
    n_tx: int = 8
    n_rx: int = 1
    size: float = 100.0
    beta: float = 1.0
    mu_zeta: float = 1.0
    requirement: float = 1.0
    nuss: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("wnl", "rnl"):
            raise DomainError("kind must be 'wnl' or 'rnl'")
        if self.n_tx < 1 or self.n_rx < 1:
            raise DomainError("counts must be at least 1")
        if not (self.size > 0 and self.mu_zeta > 0 and self.beta > 0 and self.requirement > 0):
            raise DomainError("size, mu_zeta, beta and requirement must be positive")
        if not 0 <= self.nuss < 1:
            raise DomainError("normalized uncertainty size must lie in [0, 1)")

    @property
    def delta(self) -> float:
        return 0.5 * self.nuss * self.size

    def normalizer(self) -> float:
        """Factor turning ``1^T x`` into the normalized total power."""
        exp = 2.0 if self.kind == "wnl" else 4.0
        return self.mu_zeta / self.size ** (exp * self.beta)


def trial_rng(seed: int, grid_index: int = 0, trial: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(grid_index), int(trial)])))


def rayleigh_scale(mean: float) -> float:
    return mean * math.sqrt(2.0 / math.pi)


def _min_distance(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.min(np.hypot(*(a[:, None, :] - b[None, :, :]).transpose(2, 0, 1))))


def generate(spec: ScenarioSpec, trial: int = 0, grid_index: int = 0, max_draws: int = 10_000):
    """Random network for ``spec``; positions uniform on the square, Rayleigh ``zeta``.

    Layouts where a nominal position is closer than ``delta + 0.01 size`` to
    any antenna are redrawn.
    """
    rng = trial_rng(spec.seed, grid_index, trial)
    D = spec.size
    guard = spec.delta + 0.01 * D
    sigma = rayleigh_scale(spec.mu_zeta)
    for _ in range(max_draws):
        if spec.kind == "wnl":
            anchors = rng.uniform(0.0, D, (spec.n_tx, 2))
            agents = rng.uniform(0.0, D, (spec.n_rx, 2))
            if _min_distance(agents, anchors) < guard:
                continue
            rc = rng.rayleigh(sigma, (spec.n_rx, spec.n_tx))
            return WirelessNetwork(anchors, agents, rc, beta=spec.beta,
                                   requirements=np.full(spec.n_rx, spec.requirement))
        tx = rng.uniform(0.0, D, (spec.n_tx, 2))
        rx = rng.uniform(0.0, D, (spec.n_rx, 2))
        target = rng.uniform(0.0, D, (1, 2))
        if _min_distance(target, np.vstack([tx, rx])) < guard:
            continue
        rc = rng.rayleigh(sigma, (spec.n_rx, spec.n_tx))
        return RadarNetwork(tx, rx, target[0], rc, beta=spec.beta, requirement=spec.requirement)
    raise DomainError("could not draw a layout respecting the minimum distance")


def parse_algorithm(name: str) -> tuple[str, Optional[int]]:
    """``"robust-asym-upper(512)"`` -> ``("robust-asym-upper", 512)``."""
    m = re.fullmatch(r"\s*([a-z-]+)\s*(?:\(\s*(\d+)\s*\))?\s*", name)
    if not m or m.group(1) not in ALGORITHMS:
        raise DomainError(f"unknown algorithm {name!r}; known: {', '.join(ALGORITHMS)}")
    base, M = m.group(1), m.group(2)
    if base.startswith("robust-asym"):
        M = int(M) if M else DEFAULT_M
        if M < 2:
            raise DomainError("M must be at least 2")
        return base, M
    if M:
        raise DomainError(f"algorithm {base} takes no parameter")
    return base, None


def evaluate_violation(net, cover, x, theta_grid_size: int = 100_000):
    """Oracle worst-case SPEB of ``x`` per position, and whether it misses the requirement."""
    worst = worst_case_speb(cover, np.asarray(x, dtype=float), theta_grid_size)
    return worst, worst > requirements_of(net) * (1.0 + VIOLATION_TOL)


def run_algorithm(name: str, net, cover, tol: float = 1e-8):
    """Allocation of one algorithm; returns ``(status, x, speb per position)``.

    Robust algorithms and ``nonrobust-under-uncertainty`` report the oracle
    worst case over ``cover``; the others report the nominal SPEB.
    """
    base, M = parse_algorithm(name)
    if base == "uniform":
        try:
            _, x = uniform_min_power(net)
        except InfeasibleBaselineError:
            return "infeasible_baseline", None, None
        return "optimal", x, speb_of(net, x)
    if base in ("nominal-socp", "nonrobust-under-uncertainty"):
        prog = build_min_power(net)
    elif base == "robust-efficient":
        prog = build_robust_socp_efficient(net, cover)
    else:
        prog = build_robust_socp_asymptotic(net, cover, M, base.rsplit("-", 1)[1])
    sol, x = solve_allocation(prog, tol=tol)
    if x is None:
        return str(sol.status), None, None
    if base == "nominal-socp":
        return "optimal", x, speb_of(net, x)
    return "optimal", x, worst_case_speb(cover, x)


SCENARIO_COLUMNS = ("grid", "kind", "n_tx", "n_rx", "size", "beta", "mu_zeta", "requirement", "nuss", "seed")
METRIC_COLUMNS = ("algorithm", "trial", "status", "total_power", "normalized_power",
                  "speb_max", "speb", "violation")


@dataclass
class SweepReport:
    rows: list = field(default_factory=list)

    def columns(self, include_time: bool = False):
        return SCENARIO_COLUMNS + METRIC_COLUMNS + (("wall_time",) if include_time else ())

    @staticmethod
    def _fmt(v) -> str:
        if isinstance(v, bool):
            return str(int(v))
        if isinstance(v, float):
            return format(v, ".17g")
        if isinstance(v, (list, tuple, np.ndarray)):
            return ";".join(format(float(t), ".17g") for t in v)
        return str(v)

    def to_csv(self, out=None, include_time: bool = False) -> str:
        """CSV text (also written to ``out`` when given a path or file)."""
        cols = self.columns(include_time)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for row in self.rows:
            w.writerow([self._fmt(row[c]) for c in cols])
        text = buf.getvalue()
        if isinstance(out, str):
            with open(out, "w", newline="") as fh:
                fh.write(text)
        elif out is not None:
            out.write(text)
        return text

    def select(self, algorithm: Optional[str] = None, grid: Optional[int] = None) -> list:
        return [r for r in self.rows if (algorithm is None or r["algorithm"] == algorithm)
                and (grid is None or r["grid"] == grid)]

    def summary(self) -> list[dict]:
        """Mean and median normalized power per (grid point, algorithm), over solved trials."""
        keys = []
        for r in self.rows:
            k = (r["grid"], r["algorithm"])
            if k not in keys:
                keys.append(k)
        out = []
        for g, a in keys:
            rows = self.select(a, g)
            vals = np.array([r["normalized_power"] for r in rows if r["status"] == "optimal"])
            out.append({"grid": g, "algorithm": a, "trials": len(rows), "solved": int(vals.size),
                        "mean": float(vals.mean()) if vals.size else math.nan,
                        "median": float(np.median(vals)) if vals.size else math.nan,
                        "violations": int(sum(r["violation"] for r in rows))})
        return out


def run_sweep(specs: Sequence[ScenarioSpec] | ScenarioSpec, algorithms: Iterable[str],
              trials: int = 200, tol: float = 1e-8) -> SweepReport:
    """Solve every algorithm on the same random network, trial by trial."""
    if isinstance(specs, ScenarioSpec):
        specs = [specs]
    algorithms = list(algorithms)
    for a in algorithms:
        parse_algorithm(a)
    report = SweepReport()
    for g, spec in enumerate(specs):
        scen = {"grid": g, **asdict(spec)}
        for t in range(trials):
            net = generate(spec, t, g)
            cover = nuss_cover(net, spec.nuss, spec.size)
            for a in algorithms:
                t0 = time.perf_counter()
                try:
                    status, x, sp = run_algorithm(a, net, cover, tol)
                except np.linalg.LinAlgError:
                    status, x, sp = "numerical_failure", None, None
                wall = time.perf_counter() - t0
                total = float(np.sum(x)) if x is not None else math.nan
                sp = np.full(len(requirements_of(net)), math.nan) if sp is None else sp
                report.rows.append({
                    **scen, "algorithm": a, "trial": t, "status": status, "total_power": total,
                    "normalized_power": total * spec.normalizer(), "speb_max": float(np.max(sp)),
                    "speb": sp, "violation": bool(np.any(sp > requirements_of(net) * (1 + VIOLATION_TOL))),
                    "wall_time": wall,
                })
    return report
