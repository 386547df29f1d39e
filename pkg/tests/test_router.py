import numpy as np
import pytest

from selfx import NoPathFound, polyline_is_simple
from selfx.geometry import WireRouter, crossing_segments


def _bars(rng, k):
    """k disjoint short horizontal segments, sampled with a few points each."""
    ys = np.sort(rng.uniform(-0.8, 0.8, k))
    ys += np.arange(k) * 1e-3  # keep them apart
    out = []
    for y in ys:
        x0 = rng.uniform(-0.8, 0.2)
        out.append(np.linspace(x0, x0 + rng.uniform(0.2, 0.6), 5) + 1j * y)
    return out


def _assert_non_crossing(polylines):
    for (l1, s1), (l2, s2) in crossing_segments(polylines):
        a = polylines[l1][s1:s1 + 2]
        b = polylines[l2][s2:s2 + 2]
        shared = set(a.tolist()) & set(b.tolist())
        assert shared, f"lines {l1} and {l2} cross"


@pytest.mark.parametrize("seed", range(6))
def test_wires_never_cross(seed):
    rng = np.random.default_rng(seed)
    bars = _bars(rng, 6)
    router = WireRouter(bars, 2.0, boundary_vertices=64)
    ends = [(bars[i][-1], bars[(i + 1) % 6][0]) for i in range(6)]
    wires = [router.connect(*e) for e in ends]
    drawn = [router.draw(w) for w in wires]
    _assert_non_crossing(bars + drawn)
    # the wires close the bars into one simple loop
    loop = np.concatenate([np.concatenate([b, d[1:-1]]) for b, d in zip(bars, drawn)])
    assert polyline_is_simple(loop)[0]


def test_remove_restores_state():
    rng = np.random.default_rng(10)
    bars = _bars(rng, 3)
    router = WireRouter(bars, 2.0, boundary_vertices=32)
    w1 = router.connect(bars[0][-1], bars[1][0])
    before = {e: list(t) for e, t in router.crossings.items() if t}
    w2 = router.connect(bars[1][-1], bars[2][0])
    router.remove(w2)
    after = {e: list(t) for e, t in router.crossings.items() if t}
    assert before == after
    assert set(router.wires) == {w1}


def test_direct_edge_is_used_for_neighbours():
    bars = [np.array([0, 0.1]), np.array([0.2, 0.3])]
    router = WireRouter(bars, 2.0, boundary_vertices=16)
    assert router.is_direct(0.1, 0.2)
    assert router.route_length(0.1, 0.2) == 0
    w = router.connect(0.1, 0.2)
    assert np.allclose(router.draw(w), [0.1, 0.2])


def test_wire_to_boundary_reaches_ring():
    bars = [np.linspace(-0.5, 0.5, 11)]
    router = WireRouter(bars, 1.0, boundary_vertices=32)
    side = router.right_side_triangles(bars[0][4], bars[0][5], bars[0][6])
    assert side
    w = router.connect_to_boundary(bars[0][5], side)
    path = router.draw(w)
    assert abs(abs(path[-1]) - 1.0) < 1e-12
    # leaves to the right of a left-to-right bar, i.e. downwards
    assert path[1].imag < 0


def test_crossing_obstacles_rejected():
    bars = [np.array([-1, 1]), np.array([-1j, 1j])]
    with pytest.raises(NoPathFound):
        WireRouter(bars, 3.0)


def test_enclosed_vertex_has_no_route():
    box = np.array([-0.2 - 0.2j, 0.2 - 0.2j, 0.2 + 0.2j, -0.2 + 0.2j, -0.2 - 0.2j])
    inner = np.array([-0.05, 0.05])
    outer = np.array([0.6, 0.7])
    router = WireRouter([box, inner, outer], 2.0, boundary_vertices=32)
    with pytest.raises(NoPathFound):
        router.connect(0.05, 0.6)


def test_many_wires_between_two_walls_stay_apart():
    # eight stubs on each side; every route must pass around or between the walls
    top = np.linspace(-1, 1, 9) + 0.05j
    bottom = np.linspace(-1, 1, 9) - 0.05j
    ys = np.linspace(-0.6, 0.6, 8)
    left = [np.array([-1.5 + y * 1j, -1.4 + y * 1j]) for y in ys]
    right = [np.array([1.4 - y * 1j, 1.5 - y * 1j]) for y in ys]
    router = WireRouter([top, bottom] + left + right, 3.0, boundary_vertices=64)
    wires = [router.connect(a[-1], b[0]) for a, b in zip(left, right)]
    # crossing positions depend on every wire on an edge, so draw after routing
    drawn = [router.draw(w) for w in wires]
    _assert_non_crossing([top, bottom] + left + right + drawn)
