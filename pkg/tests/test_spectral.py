import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from desitter.errors import BlowUpError, GridMismatchError
from desitter.fields import GridSpec, SpectralField
from desitter.kernels import oracle_arrays
from desitter.spectral import (
    SolverConfig,
    apply_kernel,
    duhamel_solve,
    fractional_derivative,
    gradient_norm,
    nonlinearity,
    picard_iterate,
    read_snapshot,
    sobolev_norm,
    trajectory_norms,
    write_snapshot,
    write_trajectory_csv,
)
from desitter.transforms import InitialData, derive_params, transform_data, untransform_solution

# half_length = pi puts the wavenumbers on the integers
UNIT = GridSpec(1, 32, math.pi)
UNIT2 = GridSpec(2, 16, math.pi)


def mode(grid, k, amplitude=1.0):
    x = grid.coordinates()
    phase = sum(kk * xx for kk, xx in zip(np.atleast_1d(k), x))
    return SpectralField.from_samples(grid, amplitude * np.exp(1j * phase))


def sin_mode(grid, k):
    return SpectralField.from_samples(grid, np.sin(k * grid.coordinates()[0]))


def gaussian_data(grid, eps, params, width=1.0):
    return transform_data(InitialData.gaussian(grid, eps, width), params)


class TestNorms:
    def test_zero_field(self):
        assert sobolev_norm(SpectralField.zeros(UNIT2), 1.5) == 0.0

    @pytest.mark.parametrize("grid,k", [(UNIT, 2), (UNIT2, (2, 0)), (UNIT2, (0, -2))])
    def test_single_mode(self, grid, k):
        u = mode(grid, k)
        l2 = sobolev_norm(u, 0.0)
        assert sobolev_norm(u, 1.0, homogeneous=True) / l2 == pytest.approx(2.0, rel=1e-14)
        assert sobolev_norm(u, 1.0) / l2 == pytest.approx(math.sqrt(5.0), rel=1e-14)

    def test_parseval(self):
        rng = np.random.default_rng(0)
        grid = GridSpec(2, 32, 5.0)
        vals = rng.standard_normal(grid.shape)
        u = SpectralField.from_samples(grid, vals)
        quad = math.sqrt(np.sum(vals**2) * grid.spacing**2)
        assert sobolev_norm(u, 0.0) == pytest.approx(quad, rel=1e-12)

    def test_homogeneous_drops_zero_mode(self):
        c = SpectralField.from_samples(UNIT, np.ones(UNIT.shape))
        assert sobolev_norm(c, 2.0, homogeneous=True) == 0.0

    @settings(max_examples=50, deadline=None)
    @given(st.floats(0.0, 3.0), st.floats(0.1, 10.0))
    def test_norms_are_homogeneous(self, gamma, lam):
        u = SpectralField.from_samples(UNIT2, np.random.default_rng(1).standard_normal(UNIT2.shape))
        assert sobolev_norm(u * lam, gamma) == pytest.approx(lam * sobolev_norm(u, gamma), rel=1e-12)


class TestMultipliers:
    def test_order_zero_is_identity_off_zero_mode(self):
        u = SpectralField.from_samples(UNIT, 1.0 + np.cos(3 * UNIT.axis))
        d = fractional_derivative(u, 0.0)
        assert d.coeffs[0] == 0
        np.testing.assert_allclose(d.coeffs[1:], u.coeffs[1:])

    @pytest.mark.parametrize("k", [1, 3, 7])
    def test_laplacian_on_sine(self, k):
        u = sin_mode(UNIT, k)
        np.testing.assert_allclose(fractional_derivative(u, 2.0).real_samples(), k**2 * u.real_samples(), atol=1e-12)

    @pytest.mark.parametrize("omega", [0.0, 0.5, 1.3])
    def test_gradient_norm_equivalence(self, omega):
        u = SpectralField.from_samples(UNIT2, np.random.default_rng(2).standard_normal(UNIT2.shape))
        assert gradient_norm(u, omega) == pytest.approx(sobolev_norm(u, omega + 1, homogeneous=True), rel=1e-13)

    def test_rejects_negative_order(self):
        with pytest.raises(ValueError):
            fractional_derivative(mode(UNIT, 1), -0.5)


class TestApplyKernel:
    P = derive_params(3, 0.5 * math.sqrt(9 - 2.25), 3)  # mu = 1.5

    def test_equal_times(self):
        u0, u1 = mode(UNIT, 2), mode(UNIT, 5) * 0.5
        a, b = apply_kernel(u0, u1, 1.3, 1.3, self.P)
        np.testing.assert_allclose(a.coeffs, u0.coeffs, atol=1e-13)
        np.testing.assert_allclose(b.coeffs, u1.coeffs, atol=1e-11)

    def test_single_mode_scaling(self):
        u0 = mode(UNIT, 3)
        a, _ = apply_kernel(u0, SpectralField.zeros(UNIT), 2.0, 0.5, self.P)
        k0 = oracle_arrays(self.P, self.P.mu, 2.0, 0.5, 3.0)[0]
        np.testing.assert_allclose(a.coeffs, k0 * u0.coeffs, atol=1e-9)

    @pytest.mark.parametrize("m", [0.5 * math.sqrt(9 - 2.25), 1.5, 2.0])
    def test_matches_modewise_oracle(self, m):
        pr = derive_params(3, m, 3)
        grid = GridSpec(1, 32, 4.0)
        u0, u1 = gaussian_data(grid, 1.0, pr)
        a, b = apply_kernel(u0, u1, 2.5, 0.5, pr)
        k = oracle_arrays(pr, pr.mu, 2.5, 0.5, grid.xi_mag)
        ea = np.max(np.abs(a.coeffs - (k[0] * u0.coeffs + k[2] * u1.coeffs)))
        eb = np.max(np.abs(b.coeffs - (k[1] * u0.coeffs + k[3] * u1.coeffs)))
        assert max(ea, eb) < 1e-6 * np.max(np.abs(u0.coeffs))

    def test_real_fields_stay_real(self):
        grid = GridSpec(2, 32, 6.0)
        u0, u1 = gaussian_data(grid, 1.0, derive_params(2, 1.0, 3))
        a, b = apply_kernel(u0, u1, 3.0, 0.0, derive_params(2, 1.0, 3))
        for f in (a, b):
            assert np.max(np.abs(f.samples().imag)) < 1e-10 * np.max(np.abs(f.samples()))

    def test_grid_mismatch(self):
        with pytest.raises(GridMismatchError):
            apply_kernel(mode(UNIT, 1), mode(UNIT2, (1, 0)), 1.0, 0.0, self.P)


class TestNonlinearity:
    def test_square_of_band_limited_field_is_exact(self):
        grid = GridSpec(1, 64, math.pi)
        x = grid.axis
        u = SpectralField.from_samples(grid, np.cos(3 * x) + 0.5 * np.sin(7 * x))
        fine = np.cos(3 * x) + 0.5 * np.sin(7 * x)
        np.testing.assert_allclose(nonlinearity(u, 2.0).real_samples(), fine**2, atol=1e-13)

    @pytest.mark.parametrize("dealias", [True, False])
    def test_zero_in_zero_out(self, dealias):
        assert not np.any(nonlinearity(SpectralField.zeros(UNIT2), 3.5, dealias).coeffs)

    def test_homogeneity(self):
        u = SpectralField.from_samples(UNIT2, np.random.default_rng(0).standard_normal(UNIT2.shape))
        a = nonlinearity(u * 2.0, 2.5).coeffs
        b = nonlinearity(u, 2.5).coeffs * 2.0**2.5
        np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-12)


class TestDuhamel:
    GRID = GridSpec(1, 128, 16.0)

    def test_zero_data(self):
        pr = derive_params(3, 1.0, 3)
        z = SpectralField.zeros(self.GRID)
        traj = duhamel_solve((z, z), pr, SolverConfig(dt=0.125, t_end=2.0))
        assert not np.any(traj.values) and not np.any(traj.rates)

    @pytest.mark.parametrize("m", [0.5 * math.sqrt(9 - 2.25), 1.5, 2.0])
    def test_linear_run_matches_kernel(self, m):
        pr = derive_params(3, m, 3)
        data = gaussian_data(self.GRID, 1.0, pr)
        cfg = SolverConfig(dt=0.125, t_end=3.0, save_every=4)
        traj = duhamel_solve(data, pr, cfg, source=False)
        for i, t in enumerate(traj.times):
            a, b = apply_kernel(*data, t, 0.0, pr)
            scale = np.max(np.abs(data[0].coeffs)) + np.max(np.abs(data[1].coeffs))
            assert np.max(np.abs(traj.values[i] - a.coeffs)) < 1e-10 * scale
            assert np.max(np.abs(traj.rates[i] - b.coeffs)) < 1e-10 * scale

    def test_second_order_in_time(self):
        pr = derive_params(1, 0.0, 4)  # mu = 1
        grid = GridSpec(1, 128, 16.0)
        data = gaussian_data(grid, 0.5, pr)

        def final(dt):
            return duhamel_solve(data, pr, SolverConfig(dt=dt, t_end=2.0, save_every=int(round(2.0 / dt)))).values[-1]

        ref = final(1 / 128)
        dts = np.array([1 / 8, 1 / 16, 1 / 32])
        errs = [np.max(np.abs(np.fft.ifft(final(dt) - ref))) for dt in dts]
        slope = np.polyfit(np.log(dts), np.log(errs), 1)[0]
        assert slope == pytest.approx(2.0, abs=0.3)

    def test_real_data_closure(self):
        pr = derive_params(2, 0.5, 3)
        grid = GridSpec(2, 32, 6.0)
        traj = duhamel_solve(gaussian_data(grid, 0.5, pr), pr, SolverConfig(dt=0.125, t_end=2.0))
        samples = np.fft.ifftn(traj.values, axes=(1, 2))
        assert np.max(np.abs(samples.imag)) < 1e-9 * np.max(np.abs(samples.real))

    def test_grid_refinement(self):
        pr = derive_params(3, 0.5 * math.sqrt(9 - 2.25), 3)
        cfg = SolverConfig(dt=0.0625, t_end=3.0, save_every=48)
        norms = []
        for pts in (128, 256):
            grid = GridSpec(1, pts, 16.0)
            traj = duhamel_solve(gaussian_data(grid, 1.0, pr), pr, cfg)
            norms.append(sobolev_norm(traj.field(-1), 1.0))
        assert abs(norms[1] - norms[0]) < 0.01 * norms[1]

    def test_torus_size(self):
        pr = derive_params(3, 0.5 * math.sqrt(9 - 2.25), 3)
        cfg = SolverConfig(dt=0.0625, t_end=3.0, save_every=48)
        norms = []
        for pts, half in ((128, 8.0), (256, 16.0)):
            grid = GridSpec(1, pts, half)
            traj = duhamel_solve(gaussian_data(grid, 1.0, pr), pr, cfg)
            norms.append(sobolev_norm(traj.field(-1), 1.0))
        assert abs(norms[1] - norms[0]) < 0.01 * norms[1]

    def test_blow_up_is_reported(self):
        pr = derive_params(3, 1.5, 3)
        grid = GridSpec(1, 64, 8.0)
        with pytest.raises(BlowUpError) as info:
            duhamel_solve(gaussian_data(grid, 5.0, pr), pr, SolverConfig(dt=0.0625, t_end=10.0))
        assert 0 < info.value.time <= 10.0

    def test_save_every_thins_output(self):
        pr = derive_params(3, 1.0, 3)
        traj = duhamel_solve(gaussian_data(self.GRID, 0.1, pr), pr, SolverConfig(dt=0.125, t_end=1.0, save_every=3))
        np.testing.assert_allclose(traj.times, [0.0, 0.375, 0.75, 1.0])


class TestPicard:
    GRID = GridSpec(1, 64, 8.0)

    def test_zero_data_is_a_fixed_point(self):
        pr = derive_params(2, math.sqrt(3) / 2, 4)
        z = SpectralField.zeros(self.GRID)
        res = picard_iterate((z, z), pr, SolverConfig(dt=0.125, t_end=2.0))
        assert res.converged
        assert res.distances == [0.0]

    def test_small_data_contracts(self):
        pr = derive_params(2, math.sqrt(3) / 2, 4)
        cfg = SolverConfig(dt=1 / 16, t_end=4.0, picard_max_iters=6, picard_tol=1e-300, epsilon=1e-3)
        res = picard_iterate(gaussian_data(self.GRID, 1e-3, pr), pr, cfg)
        assert len(res.ratios) == 5
        assert all(r < 1 for r in res.ratios)
        assert all(b <= a * 1.05 for a, b in zip(res.ratios, res.ratios[1:]))

    def test_fixed_point_is_the_marching_solution(self):
        pr = derive_params(3, 1.5, 3)
        data = gaussian_data(self.GRID, 0.3, pr)
        cfg = SolverConfig(dt=0.125, t_end=3.0, picard_max_iters=30)
        res = picard_iterate(data, pr, cfg)
        march = duhamel_solve(data, pr, cfg)
        assert res.converged
        scale = np.max(np.abs(march.values))
        assert np.max(np.abs(res.solution.values - march.values)) < 1e-10 * scale


class TestExport:
    def test_snapshot_round_trip(self, tmp_path):
        u = SpectralField.from_samples(UNIT2, np.random.default_rng(3).standard_normal(UNIT2.shape))
        write_snapshot(tmp_path / "u.bin", u)
        v = read_snapshot(tmp_path / "u.bin")
        assert v.grid == u.grid
        np.testing.assert_array_equal(v.coeffs, u.coeffs)

    def test_snapshot_layout(self):
        u = mode(UNIT, 1)
        buf = io.BytesIO()
        write_snapshot(buf, u)
        assert len(buf.getvalue()) == 24 + 16 * UNIT.points_per_axis

    def test_csv_columns(self, tmp_path):
        pr = derive_params(3, 1.5, 3)
        traj = untransform_solution(duhamel_solve(gaussian_data(UNIT, 0.1, pr), pr, SolverConfig(0.25, 1.0)), pr)
        names = write_trajectory_csv(tmp_path / "t.csv", traj, [1.0, 0.5])
        assert names == ["t", "phi_L2", "phi_Hdot_1", "phi_H_1", "phit_H_1m1", "phi_Hdot_0.5", "phi_H_0.5",
                         "phit_H_0.5m1"]
        rows = np.loadtxt(tmp_path / "t.csv", delimiter=",", skiprows=1)
        cols = trajectory_norms(traj, [1.0, 0.5])
        np.testing.assert_array_equal(rows[:, 3], cols["phi_H_1"])
