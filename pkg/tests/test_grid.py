import numpy as np
import pytest

from nvdlab.errors import ConfigError, NumericalFailure
from nvdlab.grid import (
    DirichletFixed,
    Periodic,
    Transmissive,
    apply_bc,
    build_grid,
    parse_boundary,
)
from nvdlab.stepping import check_finite, march


class TestGrid:
    def test_geometry(self):
        g = build_grid(-1.0, 1.0, 8)
        assert g.dx == 0.25
        np.testing.assert_allclose(g.centers, -1.0 + 0.25 * (np.arange(8) + 0.5))
        assert g.n_total == 12
        assert g.new_field().shape == (1, 12)
        assert g.new_field(3).shape == (3, 12)

    @pytest.mark.parametrize("args", [(1.0, 0.0, 10), (0.0, 1.0, 4), (0.0, 1.0, 10.5), (0.0, np.nan, 10)])
    def test_invalid(self, args):
        with pytest.raises(ConfigError):
            build_grid(*args)


class TestParseBoundary:
    def test_kinds(self):
        assert parse_boundary("periodic") == Periodic()
        assert parse_boundary("transmissive") == Transmissive()
        assert parse_boundary("dirichlet:0") == DirichletFixed((0.0,))
        assert parse_boundary("dirichlet:1,2.5") == DirichletFixed((1.0, 2.5))
        assert parse_boundary("dirichlet") == DirichletFixed((0.0,))

    def test_round_trip(self):
        for kind in (Periodic(), Transmissive(), DirichletFixed((0.5, -1.0))):
            assert parse_boundary(str(kind)) == kind

    @pytest.mark.parametrize("text", ["reflective", "dirichlet:a", "dirichlet:1,,2"])
    def test_bad(self, text):
        with pytest.raises(ConfigError):
            parse_boundary(text)


class TestApplyBC:
    def setup_method(self):
        self.q = np.array([np.nan, np.nan, 1.0, 2.0, 3.0, 4.0, 5.0, np.nan, np.nan])

    def test_periodic(self):
        apply_bc(self.q, Periodic())
        np.testing.assert_array_equal(self.q, [4, 5, 1, 2, 3, 4, 5, 1, 2])

    def test_transmissive(self):
        apply_bc(self.q, Transmissive())
        np.testing.assert_array_equal(self.q, [1, 1, 1, 2, 3, 4, 5, 5, 5])

    def test_dirichlet_mirror(self):
        apply_bc(self.q, DirichletFixed((0.0,)), DirichletFixed((10.0,)))
        np.testing.assert_array_equal(self.q, [-2, -1, 1, 2, 3, 4, 5, 15, 16])
        # linear interpolation to the wall face reproduces the wall value
        assert 0.5 * (self.q[1] + self.q[2]) == 0.0
        assert 0.5 * (self.q[6] + self.q[7]) == 10.0

    def test_mixed(self):
        apply_bc(self.q, Transmissive(), DirichletFixed((0.0,)))
        np.testing.assert_array_equal(self.q, [1, 1, 1, 2, 3, 4, 5, -5, -4])

    def test_periodic_one_side(self):
        with pytest.raises(ConfigError, match="both"):
            apply_bc(self.q, Periodic(), Transmissive())

    def test_system(self):
        q = np.full((2, 9), np.nan)
        q[:, 2:-2] = [[1, 2, 3, 4, 5], [10, 20, 30, 40, 50]]
        apply_bc(q, DirichletFixed((0.0, 1.0)))
        np.testing.assert_array_equal(q[:, :2], [[-2, -1], [-18, -8]])
        np.testing.assert_array_equal(q[:, -2:], [[-5, -4], [-48, -38]])

    def test_dirichlet_component_count(self):
        q = np.zeros((2, 9))
        with pytest.raises(ConfigError):
            apply_bc(q, DirichletFixed((0.0, 1.0, 2.0)))

    def test_interior_untouched(self):
        rng = np.random.default_rng(0)
        q = rng.normal(size=20)
        before = q[2:-2].copy()
        for kind in (Periodic(), Transmissive(), DirichletFixed((0.3,))):
            apply_bc(q, kind)
            np.testing.assert_array_equal(q[2:-2], before)


class TestMarch:
    def run(self, t_final, snaps=(), dt=0.3):
        times = []

        def step(q, h, k):
            times.append(h)
            return q + h

        q, s, n = march(np.zeros(1), t_final, lambda q: None, lambda q: dt, step, snaps)
        return q, s, n, times

    def test_lands_on_final(self):
        q, _, n, times = self.run(1.0)
        assert n == 4 and q[0] == pytest.approx(1.0, abs=1e-15)
        assert times[-1] == pytest.approx(0.1)

    def test_lands_on_snapshots(self):
        q, s, n, _ = self.run(1.0, (0.5, 0.0, 1.0))
        assert sorted(s) == [0.0, 0.5, 1.0]
        assert s[0.0][0] == 0.0
        assert s[0.5][0] == pytest.approx(0.5, abs=1e-15)
        assert s[1.0][0] == pytest.approx(1.0, abs=1e-15)

    def test_zero_time(self):
        q, s, n, _ = self.run(0.0)
        assert n == 0 and q[0] == 0.0

    @pytest.mark.parametrize("snaps", [(-0.1,), (1.5,)])
    def test_bad_snapshot(self, snaps):
        with pytest.raises(ConfigError):
            self.run(1.0, snaps)

    def test_check_finite(self):
        q = np.array([0.0, 0.0, 1.0, np.inf, 1.0, 0.0, 0.0])
        with pytest.raises(NumericalFailure, match="step 7, cell 1"):
            check_finite(q, 7, slice(2, -2))
