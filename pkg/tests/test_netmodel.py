import math

import numpy as np
import pytest

from locpower.errors import DegenerateGeometryError, DimensionError, DomainError
from locpower.netmodel import (PowerAllocation, RadarNetwork, WirelessNetwork, erc_rnl, erc_wnl,
                               geometry, network_from_angles, uniform_angle_network, wrap_angle)


@pytest.mark.parametrize("p, q, angle, dist", [
    ((0, 0), (1, 0), 0.0, 1.0),
    ((0, 0), (0, 2), math.pi / 2, 2.0),
    ((1, 1), (0, 0), 5 * math.pi / 4, math.sqrt(2)),
])
def test_geometry_examples(p, q, angle, dist):
    a, d = geometry(p, q)
    assert a == pytest.approx(angle, abs=1e-15)
    assert d == pytest.approx(dist, rel=1e-15)


def test_geometry_coincident_points():
    with pytest.raises(DegenerateGeometryError):
        geometry((1.0, 2.0), (1.0, 2.0))


def test_geometry_reversal():
    rng = np.random.default_rng(0)
    for _ in range(200):
        p, q = rng.normal(size=2), rng.normal(size=2)
        a1, d1 = geometry(p, q)
        a2, d2 = geometry(q, p)
        assert d1 == d2
        assert wrap_angle(a1 - a2 - math.pi) == pytest.approx(0.0, abs=1e-12) or \
            wrap_angle(a1 - a2 - math.pi) == pytest.approx(2 * math.pi, abs=1e-12)


def test_wrap_angle_range():
    vals = wrap_angle(np.array([-1e-300, -2 * math.pi, 7.0, 2 * math.pi]))
    assert np.all(vals >= 0) and np.all(vals < 2 * math.pi)


@pytest.mark.parametrize("zeta, d, beta, want", [(2, 2, 1, 0.5), (1, 1, 0.7, 1.0), (1, 1, 3.0, 1.0),
                                                 (3, 10, 1.5, 0.003)])
def test_erc_wnl_examples(zeta, d, beta, want):
    assert erc_wnl(zeta, d, beta) == pytest.approx(want, rel=1e-14)


def test_erc_wnl_monotone_and_linear():
    d = np.linspace(0.5, 50, 200)
    xi = erc_wnl(1.7, d, 1.3)
    assert np.all(np.diff(xi) < 0)
    assert erc_wnl(3.4, 2.5, 1.3) == pytest.approx(2 * erc_wnl(1.7, 2.5, 1.3), rel=1e-15)


def test_erc_nonpositive_distance():
    with pytest.raises(DomainError):
        erc_wnl(1.0, 0.0, 1.0)
    with pytest.raises(DomainError):
        erc_rnl(1.0, -1.0, 1.0, 0.0, 0.0, 1.0)


def test_erc_rnl_examples():
    assert erc_rnl(1, 1, 1, 0.3, 0.3, 1) == pytest.approx(4.0)
    assert erc_rnl(1, 1, 1, 0.0, math.pi, 1) == pytest.approx(0.0, abs=1e-30)
    # 4 * 2 / (2^2 * 1^2) with the unit bistatic factor
    assert erc_rnl(2, 2, 1, 0, 0, 1) == pytest.approx(2.0)


def test_erc_rnl_swap_symmetry():
    rng = np.random.default_rng(1)
    for _ in range(100):
        z, dk, dj, psi, phi = rng.uniform(0.1, 3), rng.uniform(0.5, 5), rng.uniform(0.5, 5), \
            rng.uniform(0, 2 * math.pi), rng.uniform(0, 2 * math.pi)
        assert erc_rnl(z, dk, dj, psi, phi, 1.2) == pytest.approx(erc_rnl(z, dj, dk, phi, psi, 1.2), rel=1e-13)


def test_wireless_network_invariants():
    net = WirelessNetwork([[0, 0], [3, 4]], [[1, 1]], [[1.0, 2.0]])
    assert net.requirements.tolist() == [1.0]
    assert net.distances()[0, 1] == pytest.approx(math.hypot(2, 3))
    assert net.ercs()[0, 1] == pytest.approx(2.0 / 13.0)
    with pytest.raises(ValueError):
        net.rc[0, 0] = 5.0
    with pytest.raises(DimensionError):
        WirelessNetwork([[0, 0], [3, 4]], [[1, 1]], [[1.0, 2.0, 3.0]])
    with pytest.raises(DomainError):
        WirelessNetwork([[0, 0]], [[1, 1]], [[-1.0]])
    with pytest.raises(DomainError):
        WirelessNetwork([[0, 0]], [[1, 1]], [[1.0]], requirements=[0.0])
    with pytest.raises(DegenerateGeometryError):
        WirelessNetwork([[0, 0]], [[0, 0]], [[1.0]])
    with pytest.raises(DimensionError):
        WirelessNetwork([[0, 0]], [[1, 1]], [[1.0]], power_caps=[1.0, 2.0])


def test_radar_network_geometry():
    net = RadarNetwork(tx_positions=[[2, 0]], rx_positions=[[0, 3], [-1, 0]], target_position=[0, 0],
                       rc=[[1.0], [2.0]])
    # angles are measured from each antenna towards the target
    assert net.varphi[0] == pytest.approx(math.pi)
    assert net.psi[0] == pytest.approx(3 * math.pi / 2)
    assert net.psi[1] == pytest.approx(0.0)
    assert net.d_rx.tolist() == pytest.approx([3.0, 1.0])
    want = erc_rnl(2.0, 1.0, 2.0, 0.0, math.pi, 1.0)
    assert net.ercs()[1, 0] == pytest.approx(want, abs=1e-30)
    with pytest.raises(DegenerateGeometryError):
        RadarNetwork([[0, 0]], [[1, 1]], [0, 0], [[1.0]])
    with pytest.raises(DimensionError):
        RadarNetwork([[2, 0]], [[1, 1]], [0, 0], [[1.0, 1.0]])


def test_power_allocation():
    pa = PowerAllocation([1.0, 2.0])
    assert pa.total == 3.0 and len(pa) == 2
    with pytest.raises(DomainError):
        PowerAllocation([1.0, -1e-9])


def test_uniform_angle_network_unit_coefficients():
    net = uniform_angle_network(5, rc=2.0)
    assert np.allclose(net.ercs(), 2.0)
    assert np.allclose(np.sort(net.angles()[0]), 2 * np.pi * np.arange(5) / 5)
    net2 = network_from_angles([0.1, 1.0], [0.5, 3.0])
    assert np.allclose(net2.ercs(), [[0.5, 3.0]])
