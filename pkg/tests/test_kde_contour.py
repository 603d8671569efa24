import math

import numpy as np
import pytest

from vizbridge.gog import KdeError, KdeSpec, epanechnikov_kde_2d, extract_contours
from vizbridge.gog.contour import bilinear
from vizbridge.gog.kde import epanechnikov, silverman_bandwidth


class TestKernel:
    def test_peak(self):
        assert epanechnikov(np.array([0.0]))[0] == 0.75

    def test_support(self):
        assert epanechnikov(np.array([1.0]))[0] == 0.0
        assert epanechnikov(np.array([-1.5]))[0] == 0.0
        assert epanechnikov(np.array([0.5]))[0] == pytest.approx(0.75 * 0.75)


class TestKde2d:
    def test_single_sample_peak_value(self):
        spec = KdeSpec(bandwidth=(1.0, 1.0), grid=(3, 3))
        grid = epanechnikov_kde_2d([(0.0, 0.0)], spec, ((-1.0, 1.0), (-1.0, 1.0)))
        assert grid[1, 1] == 0.5625  # 0.75^2 exactly, by direct kernel product

    def test_zero_outside_support(self):
        spec = KdeSpec(bandwidth=(1.0, 1.0), grid=(5, 5))
        grid = epanechnikov_kde_2d([(0.0, 0.0)], spec, ((1.5, 3.0), (-0.5, 0.5)))
        assert np.all(grid == 0.0)

    def test_nonnegative(self):
        rng = np.random.default_rng(2)
        pts = rng.normal(size=(100, 2))
        spec = KdeSpec(bandwidth=(0.4, 0.4), grid=(32, 32))
        grid = epanechnikov_kde_2d(pts, spec, ((-4, 4), (-4, 4)))
        assert np.all(grid >= 0.0)

    def test_riemann_sum_normalizes(self):
        rng = np.random.default_rng(9)
        pts = rng.uniform(size=(500, 2))
        hx = silverman_bandwidth(pts[:, 0])
        hy = silverman_bandwidth(pts[:, 1])
        spec = KdeSpec(bandwidth=(hx, hy), grid=(64, 64))
        domain = ((0.0 - hx, 1.0 + hx), (0.0 - hy, 1.0 + hy))
        grid = epanechnikov_kde_2d(pts, spec, domain)
        xs = np.linspace(*domain[0], 64)
        ys = np.linspace(*domain[1], 64)
        total = np.trapezoid(np.trapezoid(grid, ys, axis=1), xs)
        assert total == pytest.approx(1.0, abs=1e-2)

    def test_permutation_invariant(self):
        rng = np.random.default_rng(4)
        pts = rng.normal(size=(50, 2))
        spec = KdeSpec(bandwidth=(0.5, 0.7), grid=(16, 16))
        domain = ((-3, 3), (-3, 3))
        a = epanechnikov_kde_2d(pts, spec, domain)
        b = epanechnikov_kde_2d(pts[::-1], spec, domain)
        assert np.allclose(a, b, atol=1e-12)

    def test_duplication_invariant(self):
        rng = np.random.default_rng(8)
        pts = rng.normal(size=(40, 2))
        spec = KdeSpec(bandwidth=(0.5, 0.5), grid=(16, 16))
        domain = ((-3, 3), (-3, 3))
        once = epanechnikov_kde_2d(pts, spec, domain)
        twice = epanechnikov_kde_2d(np.vstack([pts, pts]), spec, domain)
        assert np.allclose(once, twice, atol=1e-12)

    def test_empty_points_rejected(self):
        spec = KdeSpec(bandwidth=(1.0, 1.0))
        with pytest.raises(KdeError):
            epanechnikov_kde_2d([], spec, ((0, 1), (0, 1)))

    def test_bad_spec_rejected(self):
        with pytest.raises(KdeError):
            KdeSpec(bandwidth=(0.0, 1.0))
        with pytest.raises(KdeError):
            KdeSpec(bandwidth=(1.0, 1.0), grid=(1, 8))


class TestContours:
    def test_two_by_two_single_segment(self):
        # value rises 0 -> 1 along the second grid axis; the 0.5 isoline is
        # one segment at the midpoint of that axis, spanning the first
        grid = np.array([[0.0, 1.0], [0.0, 1.0]])
        result = extract_contours(grid, [0.5])
        assert len(result) == 1
        level, polys = result[0]
        assert level == 0.5
        assert len(polys) == 1
        vertices = polys[0]
        assert len(vertices) == 2
        assert {v[0] for v in vertices} == {0.0, 1.0}
        assert all(v[1] == 0.5 for v in vertices)

    def test_constant_grid_no_polylines(self):
        grid = np.full((8, 8), 3.0)
        for level in (2.0, 4.0):
            assert extract_contours(grid, [level])[0][1] == []

    def test_level_outside_range_empty_not_error(self):
        grid = np.array([[0.0, 1.0], [0.0, 1.0]])
        result = extract_contours(grid, [5.0])
        assert result == [(5.0, [])]

    def test_levels_must_increase(self):
        grid = np.array([[0.0, 1.0], [0.0, 1.0]])
        with pytest.raises(ValueError):
            extract_contours(grid, [0.5, 0.5])

    def test_radial_bump_closed_loop_interpolates_to_level(self):
        n = 41
        xs = np.linspace(-2, 2, n)
        ys = np.linspace(-2, 2, n)
        r2 = xs[:, None] ** 2 + ys[None, :] ** 2
        grid = np.exp(-r2)
        level = 0.5 * float(grid.max())
        result = extract_contours(grid, [level])
        polys = result[0][1]
        assert len(polys) >= 1
        for poly in polys:
            assert poly[0] == poly[-1]  # closed
            for x, y in poly:
                assert bilinear(grid, x, y) == pytest.approx(level, abs=1e-6)

    def test_vertices_lie_on_cell_edges(self):
        rng = np.random.default_rng(21)
        grid = rng.uniform(size=(12, 12))
        for level, polys in extract_contours(grid, [0.3, 0.5, 0.7]):
            for poly in polys:
                for x, y in poly:
                    on_x_line = abs(x - round(x)) < 1e-12
                    on_y_line = abs(y - round(y)) < 1e-12
                    assert on_x_line or on_y_line
                    assert bilinear(grid, x, y) == pytest.approx(level, abs=1e-6)

    def test_open_chains_reach_grid_border(self):
        xs = np.linspace(0, 1, 10)
        grid = np.tile(xs, (10, 1))  # ramp along second axis
        polys = extract_contours(grid, [0.45])[0][1]
        assert len(polys) == 1
        poly = polys[0]
        border = {0.0, 9.0}
        assert poly[0][0] in border and poly[-1][0] in border
