import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from desitter.errors import DomainError
from desitter.kernels import (
    KernelEval,
    SampleSpec,
    Zone,
    ZoneConfig,
    audit_multiplier_bounds,
    compare_with_oracle,
    kernel_arrays,
    kernel_error,
    khat,
    khat_balanced,
    khat_dissipation,
    khat_mass,
    khat_oracle,
    oracle_arrays,
    sample_phase_space,
    sup_growth_slope,
    wronskian_residual,
    zone_of,
)
from desitter.transforms import ModelParams, Regime, derive_params

MASS_MU = math.sqrt(1.75)
CASES = [(Regime.DISSIPATION, mu) for mu in (0.5, 1.0, 1.5, 2.0, 2.5, 3.0)] + [
    (Regime.MASS, 0.7),
    (Regime.MASS, MASS_MU),
    (Regime.BALANCED, 0.0),
]


def params_for(regime, mu, n=3):
    return ModelParams(n, 0.0, 3.0, regime, mu, 0.0)


def close(a: KernelEval, b: KernelEval, tol):
    return max(float(np.max(kernel_error(x, y))) for x, y in zip(a.as_tuple(), b.as_tuple())) <= tol


class TestZones:
    @pytest.mark.parametrize(
        "xi,s,t,zone",
        [(1, 0, 2, Zone.Z1), (100, 0, 1, Zone.Z3), (4, 0, 3, Zone.Z2), (2, 0, 3, Zone.Z1), (2 * math.e**3, 0, 3, Zone.Z2)],
    )
    def test_examples(self, xi, s, t, zone):
        assert zone_of(xi, s, t, ZoneConfig(N=2.0)) is zone

    def test_default_threshold(self):
        assert zone_of(1.0, 0.0, 1.0) is Zone.Z1

    def test_rejects_bad_times(self):
        with pytest.raises(DomainError):
            zone_of(1.0, 2.0, 1.0)

    @settings(max_examples=200, deadline=None)
    @given(st.floats(0, 1e3), st.floats(0, 5), st.floats(0, 5))
    def test_zone_definitions(self, xi, a, b):
        s, t = min(a, b), max(a, b)
        z = zone_of(xi, s, t)
        if z is Zone.Z1:
            assert xi * math.exp(-s) <= 1
        elif z is Zone.Z3:
            assert xi * math.exp(-t) > 1
        else:
            assert math.exp(s) < xi <= math.exp(t)


@pytest.mark.parametrize("regime,mu", CASES)
@pytest.mark.parametrize("s", [0.0, 0.7, 3.0])
def test_cauchy_data_at_equal_times(regime, mu, s):
    xi = np.array([0.0, 1e-3, 0.5, 3.0, 17.0, 39.0])
    k = kernel_arrays(regime, mu, s, s, xi)
    np.testing.assert_allclose(k[0], 1.0, atol=1e-12)
    np.testing.assert_allclose(k[1], 0.0, atol=1e-10)
    np.testing.assert_allclose(k[2], 0.0, atol=1e-12)
    np.testing.assert_allclose(k[3], 1.0, atol=1e-10)


@pytest.mark.parametrize("regime,mu", CASES)
def test_all_values_finite(regime, mu):
    t, s, xi = sample_phase_space(2000, seed=5, t_max=12.0, xi_max=400.0)
    for channel in kernel_arrays(regime, mu, t, s, xi):
        assert np.all(np.isfinite(channel))


class TestClosedForms:
    @pytest.mark.parametrize("t", [0.1, 1.0, 4.0])
    @pytest.mark.parametrize("xi", [0.3, 2.0, 25.0])
    def test_mu_one_velocity_kernel(self, t, xi):
        k = khat_dissipation(1.0, t, 0.0, xi)
        assert k.k1.real == pytest.approx(math.sin(xi * (1 - math.exp(-t))) / xi, abs=1e-13)

    def test_mu_one_small_frequency_limit(self):
        t = 2.0
        assert khat_dissipation(1.0, t, 0.0, 1e-7).k1.real == pytest.approx(1 - math.exp(-t), rel=1e-10)

    @pytest.mark.parametrize("mu", [0.5, 1.0, 1.5, 2.0])
    def test_zero_mode_dissipation(self, mu):
        t, s = 3.0, 1.0
        k = khat_dissipation(mu, t, s, 0.0)
        assert k.k1.real == pytest.approx((1 - math.exp(-mu * (t - s))) / mu, rel=1e-14)
        assert k.k0.real == pytest.approx(1.0)

    def test_zero_mode_balanced(self):
        k = khat_balanced(5.0, 1.5, 0.0)
        assert k.k1.real == pytest.approx(3.5)
        assert k.dt_k1.real == pytest.approx(1.0)

    def test_zero_mode_mass(self):
        k = khat_mass(0.7, 2.0, 0.5, 0.0)
        assert k.k0.real == pytest.approx(math.cos(0.7 * 1.5))
        assert k.k1.real == pytest.approx(math.sin(0.7 * 1.5) / 0.7)


class TestAgainstOracle:
    @pytest.mark.parametrize(
        "regime,mu,point",
        [
            (Regime.DISSIPATION, 1.5, (2.0, 0.5, 3.0)),
            (Regime.DISSIPATION, 2.0, (2.0, 0.5, 3.0)),
            (Regime.DISSIPATION, 3.0, (4.0, 0.0, 30.0)),
            (Regime.MASS, MASS_MU, (2.0, 0.0, 5.0)),
            (Regime.BALANCED, 0.0, (3.0, 1.0, 10.0)),
        ],
    )
    def test_single_points(self, regime, mu, point):
        pr = params_for(regime, mu)
        assert close(khat(pr, *point), khat_oracle(pr, *point), 1e-6)

    def test_oracle_cauchy_data(self):
        k = khat_oracle(params_for(Regime.DISSIPATION, 1.5), 1.0, 1.0, 7.0)
        assert (k.k0, k.dt_k0, k.k1, k.dt_k1) == (1, 0, 0, 1)

    def test_oracle_self_consistency(self):
        pr = params_for(Regime.DISSIPATION, 0.5)
        t, s, xi = sample_phase_space(50, seed=3)
        a = oracle_arrays(pr, pr.mu, t, s, xi, tol=1e-9)
        b = oracle_arrays(pr, pr.mu, t, s, xi, tol=5e-10)
        for x, y in zip(a, b):
            assert np.max(kernel_error(x, y)) < 1e-9

    def test_mass_kernels_are_real(self):
        t, s, xi = sample_phase_space(500, seed=9)
        for ch in kernel_arrays(Regime.MASS, MASS_MU, t, s, xi):
            assert np.max(np.abs(np.imag(ch))) < 1e-9

    @pytest.mark.parametrize("regime,mu", CASES)
    def test_random_samples(self, regime, mu):
        cmp = compare_with_oracle(params_for(regime, mu), count=400, seed=11)
        assert cmp.passes, cmp.worst_case
        assert cmp.overall < 1e-8


@pytest.mark.parametrize("delta", [1e-4, -1e-4])
def test_continuity_through_mu_one(delta):
    t, s, xi = sample_phase_space(300, seed=2)
    a = kernel_arrays(Regime.DISSIPATION, 1.0, t, s, xi)
    b = kernel_arrays(Regime.DISSIPATION, 1.0 + delta, t, s, xi)
    worst = max(float(np.max(kernel_error(x, y))) for x, y in zip(b, a))
    assert 1e-7 < worst < 1e-3


@pytest.mark.parametrize("regime,mu", CASES)
def test_fundamental_matrix_composition(regime, mu):
    rng = np.random.default_rng(4)
    s = rng.uniform(0, 2, 60)
    sig = s + rng.uniform(0, 2, 60)
    t = sig + rng.uniform(0, 2, 60)
    xi = rng.uniform(0, 40, 60)

    def mat(a, b):
        return KernelEval(*kernel_arrays(regime, mu, a, b, xi)).matrix()

    direct = mat(t, s)
    composed = mat(t, sig) @ mat(sig, s)
    scale = np.maximum(np.abs(direct), 1.0)
    assert np.max(np.abs(composed - direct) / scale) < 1e-8


class TestWronskians:
    @pytest.mark.parametrize("mu", [0.5, 1.5, 2.0, 2.5, 3.0])
    def test_dissipation(self, mu):
        assert wronskian_residual(Regime.DISSIPATION, mu) < 1e-8

    @pytest.mark.parametrize("mu", [0.7, MASS_MU, 2.2])
    def test_mass(self, mu):
        assert wronskian_residual(Regime.MASS, mu) < 1e-8

    def test_bessel(self):
        assert wronskian_residual(Regime.BALANCED, 0.0, tau_max=1000.0) < 1e-10


class TestBoundAudits:
    SPEC = SampleSpec(n_t=12, n_s=4, n_xi=80)

    @pytest.mark.parametrize("m", [0.5 * math.sqrt(9 - 2.25), 0.5 * math.sqrt(9 - 0.25), 2.0, 1.5])
    def test_constants_finite(self, m):
        reports = audit_multiplier_bounds(derive_params(3, m, 3), self.SPEC)
        assert len(reports) == 5
        for r in reports:
            assert np.isfinite(r.fitted_constant) and r.fitted_constant > 0
            assert r.nan_count == 0

    def test_velocity_kernel_bounded_effective(self):
        pr = derive_params(3, 0.5 * math.sqrt(9 - 2.25), 3)
        (rep,) = [r for r in audit_multiplier_bounds(pr) if r.estimate_id == "k1_bounded"]
        assert rep.stable

    def test_noneffective_position_growth(self):
        pr = derive_params(3, 0.5 * math.sqrt(9 - 0.25), 3)
        (rep,) = [r for r in audit_multiplier_bounds(pr, self.SPEC) if r.estimate_id == "k0_growth_noneffective"]
        assert rep.fitted_constant < 10

    def test_balanced_needs_linear_factor(self):
        pr = derive_params(2, 1.0, 3)
        slope, _, sups = sup_growth_slope(pr, t_max=10.0, n_t=20, spec=self.SPEC)
        assert slope == pytest.approx(1.0, abs=0.15)
        assert np.max(sups / (1 + np.linspace(0.5, 10, 20))) < 2
