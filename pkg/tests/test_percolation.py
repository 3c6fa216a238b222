"""Triangle geometry, reachability against a brute-force path oracle, coupling."""

import numpy as np
import pytest

from stavskaya import (
    PercolationSample,
    RngStream,
    Triangle,
    coupled_run,
    coupling_check,
    reachable,
    sample_triangle,
)


def test_triangle_vertex_count():
    assert Triangle((0, 8)).vertex_count() == 45
    assert Triangle((3, 0)).vertex_count() == 1
    tri = Triangle((-2, 5))
    assert len(list(tri.vertices())) == tri.vertex_count()
    assert tri.contains(tri.apex)


def test_triangle_negative_time_rejected():
    with pytest.raises(ValueError):
        Triangle((0, -1))


def test_sample_extremes():
    s = sample_triangle((0, 6), 0.0, RngStream(0))
    assert all(level.all() for level in s.levels)
    s = sample_triangle((0, 6), 1.0, RngStream(0))
    assert s.levels[0].all()
    assert not any(level.any() for level in s.levels[1:])


def test_sample_open_map_covers_non_initial_vertices():
    s = sample_triangle((2, 5), 0.4, RngStream(3))
    m = s.open_map()
    assert len(m) == s.triangle.vertex_count() - s.triangle.level_width(0)
    for (j, lev), flag in m.items():
        assert s.is_open((j, lev)) == flag


def test_reachable_trivial():
    assert reachable(sample_triangle((0, 5), 0.0, RngStream(1)))
    s = sample_triangle((0, 5), 0.0, RngStream(1))
    closed_apex = list(s.levels)
    closed_apex[-1] = np.array([False])
    assert not reachable(PercolationSample(s.triangle, s.alpha, tuple(closed_apex)))
    # a zero-height triangle is its own open source
    assert reachable(sample_triangle((4, 0), 0.9, RngStream(1)))


def _brute_force_reachable(sample):
    # walk every descending path apex -> level 0; feeders of (j, s) are
    # (j, s-1) and (j+1, s-1)
    tri = sample.triangle

    def down(j, s):
        if not sample.is_open((j, s)):
            return False
        if s == 0:
            return True
        return down(j, s - 1) or down(j + 1, s - 1)

    return down(tri.i, tri.t)


def test_reachable_matches_path_enumeration():
    for seed in range(300):
        s = sample_triangle((0, 4), 0.5, RngStream(seed))
        assert reachable(s) == _brute_force_reachable(s)


def test_opening_vertices_is_monotone():
    for seed in range(50):
        s = sample_triangle((0, 5), 0.6, RngStream(1000 + seed))
        before = reachable(s)
        for v, flag in s.open_map().items():
            if not flag:
                after = reachable(s.with_vertex_open(v))
                assert after or not before


def test_reachability_nonincreasing_in_alpha():
    # shared uniforms: the higher rate closes a superset of vertices
    for seed in range(200):
        lo = sample_triangle((0, 6), 0.2, RngStream(seed))
        hi = sample_triangle((0, 6), 0.5, RngStream(seed))
        for l_lo, l_hi in zip(lo.levels[1:], hi.levels[1:]):
            assert np.all(l_hi <= l_lo)
        assert reachable(lo) or not reachable(hi)


def test_coupling_trivial():
    assert coupling_check((0, 4), 0.0, RngStream(0))
    assert coupling_check((0, 4), 1.0, RngStream(0))
    assert coupling_check((7, 0), 0.5, RngStream(0))


def test_coupled_run_matches_occupancy_semantics():
    s = sample_triangle((0, 3), 1.0, RngStream(5))
    final = coupled_run(s)
    assert final.width == 1 and final.cells[0] == 0


def test_coupling_battery_small():
    # the full 1e4-per-cell battery runs in the acceptance suite
    idx = 0
    for alpha in (0.1, 0.3, 0.5):
        for t in range(7):
            for i in (-2, 0, 3):
                for _ in range(120):
                    assert coupling_check((i, t), alpha, RngStream(42, idx))
                    idx += 1
