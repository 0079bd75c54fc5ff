"""TOML scenario files.

Wireless network::

    [anchors]
    positions = [[1.0, 0.0], [-0.5, 0.866]]
    caps = [10.0, 10.0]          # optional

    [agents]
    positions = [[0.0, 0.0]]

    [channel]
    beta = 1.0
    rc = [[1.0, 1.0]]            # agents x anchors
    rc_lo = [[0.9, 0.9]]         # optional bounds for robust modes
    rc_hi = [[1.1, 1.1]]

    [requirements]
    rho = [1.0]                  # or a single number

Radar network: ``[tx]``/``[rx]`` (positions, optional tx caps) and
``[target] position = [x, y]`` replace anchors/agents; ``rc`` is rx x tx.

An optional ``[uncertainty]`` section holds ``nuss`` and ``size`` or explicit
``circles = [[[cx, cy, r], ...], ...]`` (one list per agent).
"""
from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ConfigError, LocPowerError
from .netmodel import RadarNetwork, WirelessNetwork


@dataclass(frozen=True)
class Scenario:
    net: object
    rc_lo: Optional[np.ndarray] = None
    rc_hi: Optional[np.ndarray] = None
    nuss: Optional[float] = None
    size: Optional[float] = None
    circles: Optional[list] = None


def read_toml(path: str) -> dict:
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from exc


def _get(doc: dict, section: str, key: str, required: bool = True):
    sec = doc.get(section)
    if sec is None or key not in sec:
        if required:
            raise ConfigError(f"missing '{key}' in section [{section}]")
        return None
    return sec[key]


def _array(value, what: str, ndim: Optional[int] = None) -> np.ndarray:
    try:
        arr = np.array(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{what} must be numeric") from exc
    if ndim is not None and arr.ndim != ndim:
        raise ConfigError(f"{what} must be a {ndim}-D array")
    return arr


def load_caps(path: str) -> np.ndarray:
    """Power caps from a file with ``caps = [...]`` at top level or in ``[anchors]``/``[tx]``."""
    doc = read_toml(path)
    for value in (doc.get("caps"), _get(doc, "anchors", "caps", False), _get(doc, "tx", "caps", False)):
        if value is not None:
            return _array(value, "caps", 1)
    raise ConfigError(f"no caps found in {path}")


def scenario_from_dict(doc: dict) -> Scenario:
    beta = float(_get(doc, "channel", "beta", False) or 1.0)
    rc = _array(_get(doc, "channel", "rc"), "channel.rc", 2)
    lo, hi = _get(doc, "channel", "rc_lo", False), _get(doc, "channel", "rc_hi", False)
    rho = _get(doc, "requirements", "rho", False)
    try:
        if "tx" in doc or "target" in doc:
            caps = _get(doc, "tx", "caps", False)
            net = RadarNetwork(_array(_get(doc, "tx", "positions"), "tx.positions", 2),
                               _array(_get(doc, "rx", "positions"), "rx.positions", 2),
                               _array(_get(doc, "target", "position"), "target.position", 1),
                               rc, beta=beta, requirement=float(np.ravel([1.0 if rho is None else rho])[0]),
                               power_caps=None if caps is None else _array(caps, "tx.caps", 1))
        else:
            agents = _array(_get(doc, "agents", "positions"), "agents.positions", 2)
            caps = _get(doc, "anchors", "caps", False)
            reqs = None if rho is None else np.broadcast_to(np.ravel(rho), (len(agents),)).copy()
            net = WirelessNetwork(_array(_get(doc, "anchors", "positions"), "anchors.positions", 2),
                                  agents, rc, beta=beta, requirements=reqs,
                                  power_caps=None if caps is None else _array(caps, "anchors.caps", 1))
    except LocPowerError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"invalid network: {exc}") from exc
    unc = doc.get("uncertainty", {})
    circles = unc.get("circles")
    if circles is not None:
        circles = [[((float(c[0]), float(c[1])), float(c[2])) for c in per] for per in circles]
    return Scenario(net,
                    None if lo is None else _array(lo, "channel.rc_lo", 2),
                    None if hi is None else _array(hi, "channel.rc_hi", 2),
                    unc.get("nuss"), unc.get("size"), circles)


def load_scenario(path: str) -> Scenario:
    return scenario_from_dict(read_toml(path))
