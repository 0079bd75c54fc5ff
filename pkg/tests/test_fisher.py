import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from locpower.errors import DimensionError, DomainError
from locpower.fisher import (Efim, SpebScene, direction_matrix, efim_rnl, efim_rnl_sum_of_unit_vectors,
                             efim_wnl, speb, speb_fractional, speb_rnl, speb_wnl, topology_matrix)
from locpower.netmodel import RadarNetwork, WirelessNetwork, network_from_angles


def _inv_trace(m):
    return float(np.trace(np.linalg.inv(m)))


@pytest.mark.parametrize("phi, want", [(0.0, [[1, 0], [0, 0]]), (math.pi / 2, [[0, 0], [0, 1]]),
                                       (math.pi / 4, [[.5, .5], [.5, .5]])])
def test_direction_matrix(phi, want):
    m = direction_matrix(phi)
    assert np.allclose(m, want, atol=1e-15)
    assert np.trace(m) == pytest.approx(1.0)
    assert np.linalg.matrix_rank(m) == 1


def test_efim_wnl_examples():
    net = network_from_angles([0, math.pi / 2], [1, 1])
    assert np.allclose(efim_wnl(net, [1, 1], 0).m, np.eye(2))
    assert np.allclose(efim_wnl(net, [0, 0], 0).m, 0)
    tri = network_from_angles(2 * np.pi * np.arange(3) / 3, [1, 1, 1])
    t = 0.7
    # direct sum of three rank-one terms
    direct = sum(t * direction_matrix(a) for a in 2 * np.pi * np.arange(3) / 3)
    assert np.allclose(efim_wnl(tri, [t] * 3, 0).m, direct, atol=1e-15)
    assert np.allclose(direct, 1.5 * t * np.eye(2), atol=1e-15)


def test_efim_wnl_linear_in_power():
    rng = np.random.default_rng(2)
    net = network_from_angles(rng.uniform(0, 2 * np.pi, 6), rng.uniform(0.1, 2, 6))
    x1, x2 = rng.uniform(0, 1, 6), rng.uniform(0, 1, 6)
    lhs = efim_wnl(net, 2 * x1 + 3 * x2, 0).m
    rhs = 2 * efim_wnl(net, x1, 0).m + 3 * efim_wnl(net, x2, 0).m
    assert np.allclose(lhs, rhs, rtol=1e-13)


def test_efim_dimension_and_sign_errors():
    net = network_from_angles([0, 1], [1, 1])
    with pytest.raises(DimensionError):
        efim_wnl(net, [1, 1, 1], 0)
    with pytest.raises(DomainError):
        efim_wnl(net, [1, -1], 0)


def test_efim_rnl_examples():
    one = RadarNetwork([[-1, 0]], [[-1, 0]], [0, 0], [[1.0]])
    # both angles 0 from the antennas to the target, unit distances
    assert np.allclose(efim_rnl(one, [1.0]).m, 4 * direction_matrix(0.0))
    assert np.allclose(efim_rnl(one, [0.0]).m, 0)
    # second receiver on the far side: forward scatter contributes nothing
    two = RadarNetwork([[-1, 0]], [[-1, 0], [1, 0]], [0, 0], [[1.0], [1.0]])
    for J in (efim_rnl(two, [1.0]), efim_rnl_sum_of_unit_vectors(two, [1.0])):
        assert np.allclose(J.m, 4 * direction_matrix(0.0), atol=1e-14)


def test_efim_rnl_paths_agree():
    rng = np.random.default_rng(3)
    for _ in range(200):
        nt, nr = rng.integers(1, 5), rng.integers(1, 5)
        net = RadarNetwork(rng.uniform(-5, 5, (nt, 2)), rng.uniform(-5, 5, (nr, 2)), rng.uniform(-5, 5, 2),
                           rng.uniform(0, 2, (nr, nt)), beta=rng.uniform(0.5, 2))
        x = rng.uniform(0, 3, nt)
        a, b = efim_rnl(net, x).m, efim_rnl_sum_of_unit_vectors(net, x).m
        assert np.allclose(a, b, rtol=1e-12, atol=1e-12 * np.abs(b).max())


@pytest.mark.parametrize("m, want", [(np.eye(2), 2.0), (1.5 * 0.7 * np.eye(2), 4 / (3 * 0.7)),
                                     (direction_matrix(0.0), math.inf)])
def test_speb_examples(m, want):
    assert speb(Efim(m)) == pytest.approx(want, rel=1e-14)


def test_speb_matches_inverse_trace():
    rng = np.random.default_rng(4)
    for _ in range(200):
        a = rng.normal(size=(2, 2))
        m = a @ a.T + 1e-3 * np.eye(2)
        assert speb(Efim(m)) == pytest.approx(_inv_trace(m), rel=1e-10)


def test_speb_rejects_indefinite_and_asymmetric():
    with pytest.raises(DomainError):
        speb(Efim(np.diag([1.0, -0.5])))
    with pytest.raises(DomainError):
        Efim([[1.0, 0.2], [0.3, 1.0]])
    with pytest.raises(DimensionError):
        Efim(np.eye(3))


def test_topology_matrix_examples():
    assert np.allclose(topology_matrix([0, math.pi / 2]), [[0, 2], [2, 0]], atol=1e-15)
    assert np.allclose(topology_matrix([0.4, 0.4, 0.4]), 0, atol=1e-15)
    lam = topology_matrix(2 * np.pi * np.arange(3) / 3)
    off = lam[~np.eye(3, dtype=bool)]
    assert np.allclose(off, 2 * math.sin(2 * math.pi / 3) ** 2)
    assert np.allclose(off, 1.5)


def test_topology_matrix_entries_and_rank():
    rng = np.random.default_rng(5)
    for _ in range(100):
        phi = rng.uniform(0, 2 * np.pi, rng.integers(4, 21))
        lam = topology_matrix(phi)
        assert np.allclose(lam, 2 * np.sin(phi[:, None] - phi[None, :]) ** 2, atol=1e-14)
        sv = np.linalg.svd(lam, compute_uv=False)
        assert sv[3] <= 1e-10 * sv[0]


def test_speb_fractional_examples():
    scene = SpebScene(2 * np.pi * np.arange(3) / 3, np.ones(3))
    t = 0.9
    assert speb_fractional(scene, [t] * 3) == pytest.approx(4 / (3 * t), rel=1e-13)
    assert speb_fractional(SpebScene([0.3], [1.0]), [2.0]) == math.inf
    assert speb_fractional(scene, [0, 0, 0]) == math.inf


def test_scene_shape_validation():
    with pytest.raises(DimensionError):
        SpebScene([0.0, 1.0], [1.0])
    with pytest.raises(DomainError):
        SpebScene([0.0], [-1.0])


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 10), st.integers(0, 2 ** 31))
def test_fractional_matches_trace_form(n, seed):
    rng = np.random.default_rng(seed)
    phi, xi, x = rng.uniform(0, 2 * np.pi, n), rng.uniform(0.05, 3, n), rng.uniform(0.05, 3, n)
    net = network_from_angles(phi, xi)
    direct = _inv_trace(sum(x[j] * xi[j] * direction_matrix(phi[j]) for j in range(n)))
    assert speb_wnl(net, x)[0] == pytest.approx(direct, rel=1e-9)
    assert speb_fractional(SpebScene(phi, xi), x) == pytest.approx(direct, rel=1e-9)


def test_radar_fractional_matches_trace_form():
    rng = np.random.default_rng(6)
    for _ in range(100):
        net = RadarNetwork(rng.uniform(-5, 5, (3, 2)), rng.uniform(-5, 5, (2, 2)), [0.1, 0.2],
                           rng.uniform(0.2, 2, (2, 3)))
        x = rng.uniform(0.1, 2, 3)
        assert speb_fractional(SpebScene.for_target(net), x) == pytest.approx(speb_rnl(net, x), rel=1e-9)


def test_power_scaling_and_monotonicity():
    rng = np.random.default_rng(7)
    for _ in range(100):
        n = rng.integers(3, 9)
        net = network_from_angles(rng.uniform(0, 2 * np.pi, n), rng.uniform(0.1, 2, n))
        x = rng.uniform(0.1, 2, n)
        c = 10 ** rng.uniform(-3, 3)
        assert speb_wnl(net, c * x)[0] == pytest.approx(speb_wnl(net, x)[0] / c, rel=1e-12)
        bumped = x.copy()
        bumped[rng.integers(n)] += rng.uniform(0, 1)
        assert speb_wnl(net, bumped)[0] <= speb_wnl(net, x)[0] * (1 + 1e-14)


def test_multi_agent_speb():
    net = WirelessNetwork([[1, 0], [0, 1], [-1, 0]], [[0, 0], [0.2, 0.1]], np.ones((2, 3)))
    vals = speb_wnl(net, [1, 1, 1])
    assert vals.shape == (2,)
    for k in range(2):
        J = sum(net.ercs()[k, j] * direction_matrix(net.angles()[k, j]) for j in range(3))
        assert vals[k] == pytest.approx(_inv_trace(J), rel=1e-12)
