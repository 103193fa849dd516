"""Cosine transform exactness and the series propagator."""

import numpy as np
import pytest

import pacavity as pv
from pacavity.spectral import mode_frequencies

from helpers import eigenfield, smooth_random_field


@pytest.fixture
def grid():
    return pv.Grid2D(33)


class TestTransform:
    def test_constant_maps_to_dc_mode(self, grid):
        c = pv.dct2_forward(pv.ScalarField.constant(grid, 1.0))
        assert c.coeffs[0, 0] == pytest.approx(1.0, abs=1e-12)
        rest = c.coeffs.copy()
        rest[0, 0] = 0.0
        assert np.abs(rest).max() <= 1e-12

    def test_single_eigenfunction(self, grid):
        c = pv.dct2_forward(eigenfield(grid, 2, 3))
        assert c.coeffs[2, 3] == pytest.approx(1.0, abs=1e-12)
        rest = c.coeffs.copy()
        rest[2, 3] = 0.0
        assert np.abs(rest).max() <= 1e-12

    def test_round_trip_identity(self, grid):
        rng = np.random.default_rng(0)
        for _ in range(100):
            f = pv.ScalarField(grid, rng.standard_normal((grid.n, grid.n)))
            back = pv.dct2_inverse(pv.dct2_forward(f))
            assert np.abs(back.values - f.values).max() <= 1e-12 * np.abs(f.values).max()

    def test_inverse_of_zero_and_dc(self, grid):
        z = pv.dct2_inverse(pv.CosineCoeffs(grid, np.zeros((grid.n, grid.n))))
        assert np.all(z.values == 0.0)
        dc = np.zeros((grid.n, grid.n))
        dc[0, 0] = 1.0
        one = pv.dct2_inverse(pv.CosineCoeffs(grid, dc))
        assert np.allclose(one.values, 1.0, atol=1e-13)

    def test_against_weighted_projection_oracle(self, grid):
        # brute force: project onto every sampled eigenfunction with the
        # trapezoid weights under which the sampled modes are orthogonal
        rng = np.random.default_rng(1)
        f = smooth_random_field(grid, rng, kmax=grid.n - 1)
        n = grid.n
        w = np.full(n, 1.0)
        w[0] = 0.5
        w[-1] = 0.5
        xb = 0.5 * np.pi * (grid.coords() + 1.0)
        oracle = np.empty((n, n))
        for k in range(n):
            for l in range(n):
                phi = np.outer(np.cos(k * xb), np.cos(l * xb))
                num = np.sum(np.outer(w, w) * phi * f.values)
                den = np.sum(np.outer(w, w) * phi * phi)
                oracle[k, l] = num / den
        mine = pv.dct2_forward(f).coeffs
        assert np.abs(mine - oracle).max() <= 1e-10 * np.abs(oracle).max()


class TestPropagate:
    def test_time_zero_is_identity(self, grid):
        rng = np.random.default_rng(2)
        f = smooth_random_field(grid, rng)
        c = pv.dct2_forward(f)
        u0 = pv.spectral_propagate(c, 0.0)
        assert np.abs(u0.values - f.values).max() <= 1e-12 * np.abs(f.values).max()

    def test_single_mode_phase(self, grid):
        phi = eigenfield(grid, 1, 0)
        c = pv.dct2_forward(phi)
        lam = 0.5 * np.pi
        for t in (0.3, 1.0, 2.0):
            u = pv.spectral_propagate(c, t)
            assert np.allclose(u.values, np.cos(lam * t) * phi.values, atol=1e-12)
        u2 = pv.spectral_propagate(c, 2.0)
        assert np.allclose(u2.values, -phi.values, atol=1e-12)

    def test_nonunit_speed_rejected(self, grid):
        c = pv.dct2_forward(eigenfield(grid, 1, 1))
        with pytest.raises(pv.ConfigError):
            pv.spectral_propagate(c, 1.0, c_sound=pv.ScalarField.constant(grid, 2.0))
        pv.spectral_propagate(c, 1.0, c_sound=pv.ScalarField.constant(grid, 1.0))

    def test_energy_conserved_mode_wise(self, grid):
        # transform the propagated state back and assemble the quadratic
        # form mode by mode; cos^2 + sin^2 keeps it constant in time
        rng = np.random.default_rng(3)
        f = smooth_random_field(grid, rng, kmax=8)
        c = pv.dct2_forward(f)
        lam = mode_frequencies(grid)
        wmode = np.ones(grid.n)
        wmode[0] = 2.0
        wmode[-1] = 2.0
        W = np.outer(wmode, wmode)

        def series_energy(t):
            cu = pv.dct2_forward(pv.spectral_propagate(c, t)).coeffs
            cv = pv.dct2_forward(pv.spectral_velocity(c, t)).coeffs
            return float(np.sum(W * ((lam * cu) ** 2 + cv**2)))

        e0 = series_energy(0.0)
        for t in (0.5, 1.25, 3.0):
            assert series_energy(t) == pytest.approx(e0, rel=1e-8)

    def test_discrete_energy_matches_series_energy(self):
        # the finite-difference energy of the sampled series solution agrees
        # with the conserved mode-wise energy to second order in dx
        g = pv.Grid2D(65)
        rng = np.random.default_rng(4)
        f = smooth_random_field(g, rng, kmax=7)
        c = pv.dct2_forward(f)
        e_series = pv.spectral_energy(c)
        unit = pv.ScalarField.constant(g, 1.0)
        for t in (0.0, 0.7):
            state = pv.StatePair(pv.spectral_propagate(c, t), pv.spectral_velocity(c, t))
            assert pv.energy(state, unit) == pytest.approx(e_series, rel=0.05)

    def test_even_time_extension_composition(self, grid):
        # re-expanding the position snapshot at t1 and propagating by t2
        # yields the even extension [u(t1+t2) + u(t1-t2)] / 2
        rng = np.random.default_rng(5)
        f = smooth_random_field(grid, rng, kmax=6)
        c = pv.dct2_forward(f)
        t1, t2 = 0.8, 0.45
        comp = pv.spectral_propagate(pv.dct2_forward(pv.spectral_propagate(c, t1)), t2)
        target = 0.5 * (pv.spectral_propagate(c, t1 + t2).values
                        + pv.spectral_propagate(c, t1 - t2).values)
        assert np.abs(comp.values - target).max() <= 1e-10 * np.abs(target).max()

    def test_cosine_parity_in_time(self, grid):
        rng = np.random.default_rng(6)
        f = smooth_random_field(grid, rng, kmax=6)
        c = pv.dct2_forward(f)
        lam = mode_frequencies(grid)
        t = 0.9
        forward = pv.spectral_propagate(c, t).values
        mirrored = pv.dct2_inverse(pv.CosineCoeffs(grid, c.coeffs * np.cos(-lam * t))).values
        assert np.array_equal(forward, mirrored)


class TestSynthesize:
    def test_zero_field_gives_zero_trace(self, grid):
        bs = pv.BoundarySpec.full(grid)
        g = pv.synthesize_data(pv.ScalarField.zeros(grid), bs, 1.0, grid.dt)
        assert np.all(g.samples == 0.0)

    def test_first_row_is_initial_restriction(self, grid):
        bs = pv.BoundarySpec.left_bottom(grid)
        rng = np.random.default_rng(7)
        f = smooth_random_field(grid, rng)
        g = pv.synthesize_data(f, bs, 1.0, grid.dt)
        expected = pv.boundary_values(f) * bs.gamma_mask
        assert np.allclose(g.samples[0], expected, atol=1e-12)
        assert np.all(g.samples[:, ~bs.gamma_mask] == 0.0)

    def test_corner_time_series_is_analytic(self, grid):
        bs = pv.BoundarySpec.full(grid)
        f = eigenfield(grid, 1, 1)
        g = pv.synthesize_data(f, bs, 1.5, grid.dt)
        lam = 0.5 * np.pi * np.sqrt(2.0)
        expected = np.cos(lam * g.times)  # phi_{1,1}(-1,-1) = 1, node index 0
        assert np.allclose(g.samples[:, 0], expected, atol=1e-10)

    def test_non_integer_step_count_rejected(self, grid):
        bs = pv.BoundarySpec.full(grid)
        with pytest.raises(pv.ConfigError):
            pv.synthesize_data(pv.ScalarField.zeros(grid), bs, 1.0 + 0.3 * grid.dt, grid.dt)


class TestCrossValidation:
    def test_forward_solver_tracks_series_solution(self):
        # the nearest-neighbor wall fill is first order: the trace error
        # roughly halves (not quarters) per refinement
        errs = {}
        for n in (65, 129):
            g = pv.Grid2D(n)
            x = 0.5 * np.pi * (g.coords() + 1.0)
            vals = (np.outer(np.cos(x), np.ones(n)) + 0.5 * np.outer(np.ones(n), np.cos(x))
                    + 0.25 * np.outer(np.cos(x), np.cos(x)))
            f = pv.ScalarField(g, vals)
            bs = pv.BoundarySpec.full(g)
            ref = pv.synthesize_data(f, bs, 1.0, g.dt)
            got = pv.forward_solve(pv.StatePair(f, pv.ScalarField.zeros(g)),
                                   pv.ScalarField.constant(g, 1.0), bs, 1.0)
            errs[n] = (np.linalg.norm(got.trace.samples - ref.samples)
                       / np.linalg.norm(ref.samples))
        assert errs[65] <= 0.03
        assert errs[129] <= 0.015
        assert errs[65] / errs[129] == pytest.approx(2.0, rel=0.25)
