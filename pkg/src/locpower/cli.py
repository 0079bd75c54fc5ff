"""Command-line entry point.

Exit codes: 0 success, 1 usage or configuration error, 2 infeasible (or a
requirement not met in ``validate``), 3 solver failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Optional, Sequence

import numpy as np

from .allocate import (build_min_power, build_minmax_wnl, solve_allocation, uniform_min_power)
from .conic import check_kkt
from .config import Scenario, load_caps, load_scenario
from .errors import ConfigError, InfeasibleBaselineError, LocPowerError
from .fisher import requirements_of, speb_of
from .netmodel import RadarNetwork
from .robust import (build_robust_socp_asymptotic, build_robust_socp_efficient, check_validity,
                     derive_intervals, nominal_points, single_circle_cover, speb_bounds_eval,
                     worst_case_speb)
from .simbench import ALGORITHMS, ScenarioSpec, run_sweep

MODES = ("solve", "robust-solve", "minmax", "oracle", "sweep", "validate")
EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_SOLVER = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _Usage(f"{self.prog}: error: {message}")


class _Usage(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="locpower", description="Power allocation for network localization.")
    p.add_argument("mode_pos", nargs="?", choices=MODES, metavar="MODE", help=" | ".join(MODES))
    p.add_argument("--mode", choices=MODES)
    p.add_argument("--net", help="scenario TOML file")
    p.add_argument("--nuss", type=float, help="normalized uncertainty size 2*delta/size")
    p.add_argument("--size", type=float, help="region size used with --nuss (default 100 or from config)")
    p.add_argument("--M", type=int, default=64, help="number of bound directions (default 64)")
    p.add_argument("--variant", choices=("upper", "lower", "efficient"), default="efficient")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.add_argument("--x", help="allocation: 'uniform', 'optimal' or comma-separated powers")
    p.add_argument("--requirement", type=float, help="override every SPEB requirement")
    p.add_argument("--caps", help="TOML file with power caps")
    p.add_argument("--ptot", type=float, help="total power budget for minmax")
    p.add_argument("--kind", choices=("wnl", "rnl"), default="wnl", help="sweep network type")
    p.add_argument("--n-tx", type=int, default=8, help="sweep: anchors or transmit antennas")
    p.add_argument("--n-rx", type=int, default=1, help="sweep: agents or receive antennas")
    p.add_argument("--algorithms", default="nominal-socp,uniform",
                   help="sweep: comma-separated from " + ", ".join(ALGORITHMS))
    return p


def _net_with_overrides(scen: Scenario, args):
    net = scen.net
    if args.requirement is not None:
        if isinstance(net, RadarNetwork):
            net = net.replace(requirement=args.requirement)
        else:
            net = net.replace(requirements=np.full(net.n_agents, args.requirement))
    if args.caps:
        net = net.replace(power_caps=load_caps(args.caps))
    return net


def _cover(scen: Scenario, net, args):
    nuss = args.nuss if args.nuss is not None else scen.nuss
    if scen.circles is not None and args.nuss is None:
        circles = scen.circles
    elif nuss is not None:
        size = args.size or scen.size or 100.0
        circles = single_circle_cover(nominal_points(net), 0.5 * nuss * size)
    else:
        raise ConfigError("robust modes need --nuss or an [uncertainty] section")
    return derive_intervals(net, circles, scen.rc_lo, scen.rc_hi)


def _floats(a) -> list:
    return [float(v) for v in np.ravel(a)]


def _emit(result: dict, args, out) -> None:
    if args.format == "json":
        out.write(json.dumps(result, indent=2, allow_nan=True) + "\n")
        return
    if args.format == "csv":
        keys = [k for k, v in result.items() if not isinstance(v, (dict, list))]
        out.write(",".join(keys) + "\n")
        out.write(",".join(repr(result[k]) if isinstance(result[k], float) else str(result[k]) for k in keys) + "\n")
        return
    for k, v in result.items():
        if k == "total_power" and isinstance(v, float):
            out.write(f"total power {v:.6f}\n")
        elif isinstance(v, list):
            out.write(f"{k} " + " ".join(repr(t) if isinstance(t, float) else str(t) for t in v) + "\n")
        elif isinstance(v, dict):
            out.write(f"{k} " + " ".join(f"{a}={b!r}" for a, b in v.items()) + "\n")
        else:
            out.write(f"{k} {v}\n")


def _solve_result(prog, args, net, extra=None):
    sol, x = solve_allocation(prog, tol=args.tol)
    res = {"status": str(sol.status), "iterations": sol.iterations}
    res["kkt"] = check_kkt(prog, sol, max(args.tol, 1e-12)).as_dict()
    if x is not None:
        res["objective"] = float(sol.objective_value)
        res["total_power"] = float(np.sum(x))
        res["x"] = _floats(x)
        res["speb"] = _floats(speb_of(net, x))
        res["requirement"] = _floats(requirements_of(net))
    if extra:
        res.update(extra(sol, x) or {})
    code = EXIT_OK if sol.is_optimal else (
        EXIT_INFEASIBLE if str(sol.status) == "primal_infeasible" else EXIT_SOLVER)
    return res, code


def _parse_x(spec: str, net, args) -> np.ndarray:
    if spec == "uniform":
        return uniform_min_power(net)[1]
    if spec == "optimal":
        _, x = solve_allocation(build_min_power(net), tol=args.tol)
        if x is None:
            raise InfeasibleBaselineError("nominal program has no optimal allocation")
        return x
    try:
        x = np.array([float(t) for t in spec.split(",")])
    except ValueError as exc:
        raise ConfigError(f"cannot parse --x {spec!r}") from exc
    if x.size != net.n_powers:
        raise ConfigError(f"--x needs {net.n_powers} values")
    return x


def run(args, out) -> int:
    mode = args.mode or args.mode_pos
    if mode is None:
        raise _Usage("locpower: error: a mode is required (" + ", ".join(MODES) + ")")
    if args.M < 2:
        raise _Usage("locpower: error: --M must be at least 2")

    if mode == "sweep":
        algs = [a.strip() for a in args.algorithms.split(",") if a.strip()]
        try:
            spec = ScenarioSpec(kind=args.kind, n_tx=args.n_tx, n_rx=args.n_rx,
                                size=args.size or 100.0, nuss=args.nuss or 0.0, seed=args.seed,
                                requirement=args.requirement or 1.0)
        except LocPowerError as exc:
            raise ConfigError(str(exc)) from exc
        report = run_sweep(spec, algs, args.trials, tol=args.tol)
        if args.format == "json":
            out.write(json.dumps(report.summary(), indent=2) + "\n")
        else:
            report.to_csv(out)
        return EXIT_OK

    if not args.net:
        raise _Usage(f"locpower: error: mode {mode} needs --net")
    scen = load_scenario(args.net)
    net = _net_with_overrides(scen, args)

    if mode == "solve":
        res, code = _solve_result(build_min_power(net), args, net)
    elif mode == "minmax":
        if isinstance(net, RadarNetwork):
            raise ConfigError("minmax is defined for wireless networks")
        if args.ptot is None:
            raise _Usage("locpower: error: minmax needs --ptot")
        prog = build_minmax_wnl(net, args.ptot)
        res, code = _solve_result(prog, args, net, lambda sol, x: {
            "accuracy": float(sol.v[-1]), "worst_speb": 1.0 / float(sol.v[-1])} if x is not None else {})
    elif mode == "robust-solve":
        cover = _cover(scen, net, args)
        if args.variant == "efficient":
            prog = build_robust_socp_efficient(net, cover)
        else:
            prog = build_robust_socp_asymptotic(net, cover, args.M, args.variant)

        def extra(sol, x):
            if x is None:
                return {}
            info = {"worst_case_speb": _floats(worst_case_speb(cover, x)), "variant": args.variant}
            if args.variant != "efficient":
                info["min_valid_M"] = check_validity(cover, x, args.M)
            return info
        res, code = _solve_result(prog, args, net, extra)
    elif mode == "oracle":
        cover = _cover(scen, net, args)
        x = _parse_x(args.x or "uniform", net, args)
        bounds = [speb_bounds_eval(c, x, args.M) for c in cover]
        res = {"x": _floats(x), "worst_case_speb": _floats(worst_case_speb(cover, x)),
               "lower": [b.lower for b in bounds], "upper": [b.upper for b in bounds],
               "B": [b.B for b in bounds], "valid": [b.valid for b in bounds],
               "requirement": _floats(requirements_of(net))}
        code = EXIT_OK
    else:  # validate
        x = _parse_x(args.x or "uniform", net, args)
        sp = speb_of(net, x)
        req = requirements_of(net)
        ok = sp <= req * (1 + 1e-9)
        res = {"x": _floats(x), "total_power": float(np.sum(x)), "speb": _floats(sp),
               "requirement": _floats(req), "satisfied": [bool(v) for v in ok]}
        code = EXIT_OK if np.all(ok) else EXIT_INFEASIBLE
    res = {"mode": mode, **res}
    _emit(res, args, out)
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.out:
            with open(args.out, "w") as fh:
                return run(args, fh)
        return run(args, sys.stdout)
    except _Usage as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        print(f"locpower: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InfeasibleBaselineError as exc:
        print(f"locpower: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except LocPowerError as exc:
        print(f"locpower: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"locpower: cannot write output: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
