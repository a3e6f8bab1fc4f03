"""End-to-end acceptance checks, one test group per criterion.

Every check logs its outcome through the ``record`` fixture; the terminal
summary prints one PASS/FAIL line per criterion.
"""

import math
import time

import numpy as np
import pytest

from desitter.cli import cmd_landscape
from desitter.estimates import fit_decay_rate
from desitter.fields import GridSpec, SpectralField
from desitter.inequalities import (
    GNParams,
    band_limited_ensemble,
    check_fractional_chain_rule,
    check_fractional_leibniz,
    check_fractional_powers,
    check_gagliardo_nirenberg,
    check_sobolev_embedding,
    standard_suite,
)
from desitter.kernels import (
    audit_multiplier_bounds,
    compare_with_oracle,
    kernel_arrays,
    kernel_error,
    sample_phase_space,
    sup_growth_slope,
    wronskian_residual,
)
from desitter.spectral import SolverConfig, duhamel_solve, picard_iterate, sobolev_norm, trajectory_norms
from desitter.transforms import InitialData, ModelParams, Regime, derive_params, transform_data, untransform_solution

pytestmark = pytest.mark.slow

MASS_MU = math.sqrt(1.75)  # n = 3, m = 2
KERNEL_CASES = [(Regime.DISSIPATION, mu) for mu in (0.5, 1.0, 1.5, 2.0, 2.5)] + [
    (Regime.MASS, 0.7),
    (Regime.MASS, MASS_MU),
    (Regime.BALANCED, 0.0),
]


def _case_id(case):
    regime, mu = case
    return f"{regime.name.lower()}-{mu:.4g}"


# ---------------------------------------------------------------------------
# 1. kernels against the ODE oracle


@pytest.mark.parametrize("case", KERNEL_CASES, ids=_case_id)
def test_c1_kernels_match_oracle(case, record):
    regime, mu = case
    t0 = time.perf_counter()
    cmp = compare_with_oracle(ModelParams(3, 0.0, 3.0, regime, mu, 0.0), count=10_000, seed=2024)
    elapsed = time.perf_counter() - t0
    detail = (f"{_case_id(case)}: max err {cmp.non_asymptotic_max_error:.2e} (tol 1e-6), "
              f"asymptotic {cmp.asymptotic_max_error:.2e} (tol 1e-4, {cmp.asymptotic_count} samples), {elapsed:.1f}s")
    ok = record(1, "oracle", cmp.passes and elapsed < 300 / len(KERNEL_CASES), detail)
    assert ok, detail


# ---------------------------------------------------------------------------
# 2. Wronskians


@pytest.mark.parametrize(
    "regime,mu",
    [(Regime.DISSIPATION, mu) for mu in (0.5, 1.5, 2.0, 2.5, 3.0)]
    + [(Regime.MASS, 0.7), (Regime.MASS, MASS_MU), (Regime.BALANCED, 0.0)],
)
def test_c2_wronskians(regime, mu, record):
    res = wronskian_residual(regime, mu, count=2000, tau_min=1e-3, tau_max=200.0)
    ok = record(2, "wronskian", res <= 1e-8, f"{regime.name.lower()} mu={mu:.4g}: rel residual {res:.2e} (tol 1e-8)")
    assert ok


# ---------------------------------------------------------------------------
# 3. mu = 1 closed form


def test_c3_closed_form_vs_oracle(record):
    cmp = compare_with_oracle(ModelParams(3, 0.0, 3.0, Regime.DISSIPATION, 1.0, 0.0), count=10_000, seed=7)
    ok = record(3, "closed form vs oracle", cmp.overall <= 1e-6, f"max err {cmp.overall:.2e} (tol 1e-6)")
    assert ok


def test_c3_closed_form_is_limit_of_general_pair(record):
    t, s, xi = sample_phase_space(4000, seed=8)
    exact = kernel_arrays(Regime.DISSIPATION, 1.0, t, s, xi)
    errs = []
    for delta in (1e-2, 1e-3, 1e-4):
        worst = 0.0
        for sign in (1, -1):
            near = kernel_arrays(Regime.DISSIPATION, 1.0 + sign * delta, t, s, xi)
            worst = max(worst, max(float(np.max(kernel_error(a, b))) for a, b in zip(near, exact)))
        errs.append(worst)
    # the general construction approaches the closed form linearly in mu - 1
    ok = errs[-1] <= 1e-3 and errs[0] > errs[1] > errs[2]
    record(3, "limit mu -> 1", ok, "errors at |mu-1| = 1e-2, 1e-3, 1e-4: " + ", ".join(f"{e:.2e}" for e in errs))
    assert ok


# ---------------------------------------------------------------------------
# 4. linear decay rates


def _decay_rate(n, m, half_length, log_correction):
    """Fitted H^1 rate on [4, 10] for a zero-mean Gaussian filling a quarter of the box.

    A box of half-length ``1e-4`` puts all energy at frequencies above ``e^10``,
    which is where the high-frequency part of the bound is attained.
    """
    pr = derive_params(n, m, 3)
    grid = GridSpec(1, 256, half_length)
    f = np.exp(-((grid.axis / (0.25 * half_length)) ** 2))
    f -= f.mean()
    data = InitialData(SpectralField.from_samples(grid, f), SpectralField.zeros(grid), 1.0)
    traj = duhamel_solve(transform_data(data, pr), pr, SolverConfig(dt=1 / 64, t_end=10.0), source=False)
    cols = trajectory_norms(untransform_solution(traj, pr), [1.0])
    return fit_decay_rate(cols["t"], cols["phi_H_1"], (4.0, 10.0), log_correction).fitted_rate


BALANCED_REASON = (
    "the (1+t) factor is not attained in H^1: high-frequency data decay like e^{-t/2} without it "
    "(log-corrected fit about -0.63) and low-frequency data like (1+t) e^{-t} (about -1.0)"
)


@pytest.mark.parametrize(
    "label,n,m,half_length,log_correction,target",
    [
        ("dissipation n=3 mu=1.5", 3, 0.5 * math.sqrt(9 - 2.25), 16.0, False, -0.75),
        ("mass n=3 m=2", 3, 2.0, 1e-4, False, -1.0),
        pytest.param("balanced n=2 with (1+t)", 2, 1.0, 1e-4, True, -0.5,
                     marks=pytest.mark.xfail(strict=True, reason=BALANCED_REASON)),
    ],
)
def test_c4_linear_decay_rates(label, n, m, half_length, log_correction, target, record):
    t0 = time.perf_counter()
    rate = _decay_rate(n, m, half_length, log_correction)
    elapsed = time.perf_counter() - t0
    ok = abs(rate - target) <= 0.05 and elapsed <= 120
    detail = f"{label}: fitted {rate:.4f} vs {target} (tol 0.05), {elapsed:.1f}s"
    if not ok and log_correction:
        detail += f"; plain fit {_decay_rate(n, m, half_length, False):.4f}"
    record(4, "decay", ok, detail)
    assert ok, detail


# ---------------------------------------------------------------------------
# 5. multiplier bounds


AUDIT_PARAMS = [derive_params(3, 0.5 * math.sqrt(9 - mu * mu), 3) for mu in (0.5, 1.0, 1.5, 2.0, 2.5)] + [
    derive_params(3, math.sqrt(0.49 + 2.25), 3),
    derive_params(3, 2.0, 3),
    derive_params(2, 1.0, 3),
]


@pytest.mark.parametrize("pr", AUDIT_PARAMS, ids=lambda p: f"{p.regime.name.lower()}-{p.mu:.4g}")
def test_c5_bound_constants_stable(pr, record):
    reports = audit_multiplier_bounds(pr)
    worst = max(reports, key=lambda r: r.relative_change)
    ok = all(np.isfinite(r.fitted_constant) and r.nan_count == 0 and r.stable for r in reports)
    record(5, "audit", ok, f"{pr.regime.name.lower()} mu={pr.mu:.4g}: {len(reports)} estimates, "
                           f"max constant {max(r.fitted_constant for r in reports):.3g}, "
                           f"worst refinement change {worst.relative_change:.2%} ({worst.estimate_id})")
    assert ok


def test_c5_balanced_linear_factor_is_necessary(record):
    slope, times, sups = sup_growth_slope(derive_params(2, 1.0, 3), t_max=10.0, n_t=40)
    weighted = np.max(sups / (1 + times))
    ok = abs(slope - 1.0) <= 0.15 and weighted <= 1.0
    record(5, "balanced (1+t)", ok, f"sup|k1| grows with slope {slope:.3f} in t, up to {sups[-1]:.3g} at t = 10; "
                                   f"sup|k1|/(1+t) <= {weighted:.3f}")
    assert ok


# ---------------------------------------------------------------------------
# 6. Picard contraction


@pytest.mark.parametrize("dim,points", [(1, 256), (2, 64)])
def test_c6_picard_contraction(dim, points, record):
    pr = derive_params(2, math.sqrt(3) / 2, 4)
    assert pr.mu == pytest.approx(1.0) and pr.p > 3
    grid = GridSpec(dim, points, 16.0)
    data = InitialData.gaussian(grid, 1e-3, width=2.0)
    cfg = SolverConfig(dt=1 / 32, t_end=10.0, picard_max_iters=9, picard_tol=1e-300)
    res = picard_iterate(transform_data(data, pr), pr, cfg, raise_on_divergence=False)
    ratios = np.array(res.ratios)
    window = ratios[1:7]  # ratios between the increments of iterations 3 to 8
    steps = window[1:] / window[:-1]
    contracting = bool(np.all(ratios < 1))
    monotone = bool(np.all(np.diff(window) <= 1e-3 * window[:-1]))
    stable = bool(np.all((steps >= 0.25) & (steps <= 1.05)))
    cols = trajectory_norms(untransform_solution(res.solution, pr), [1.0])
    rate = fit_decay_rate(cols["t"], cols["phi_H_1"], (4.0, 10.0)).fitted_rate
    ok = contracting and monotone and stable and abs(rate - (-0.5)) <= 0.1
    record(6, f"picard {dim}D", ok,
           f"ratios {', '.join(f'{r:.2e}' for r in ratios)}; successive ratio quotients "
           f"{', '.join(f'{q:.2f}' for q in steps)}; H^1 rate {rate:.4f} vs -0.5 (tol 0.1)")
    assert ok


# ---------------------------------------------------------------------------
# 7. step and grid convergence


CONVERGENCE_CASES = [
    ("dissipation n=3 mu=1.5", 3, 0.5 * math.sqrt(9 - 2.25), 1.0),
    ("mass n=3 m=2", 3, 2.0, 1.0),
    # amplitude 1 blows up near t = 3.9 for this case
    ("balanced n=2", 2, 1.0, 0.5),
]


@pytest.mark.parametrize("label,n,m,eps", CONVERGENCE_CASES)
def test_c7_step_and_grid_convergence(label, n, m, eps, record):
    pr = derive_params(n, m, 3)

    def final(grid, dt):
        data = InitialData.gaussian(grid, eps, width=1.0)
        return duhamel_solve(transform_data(data, pr), pr, SolverConfig(dt=dt, t_end=4.0)).values[-1]

    grid = GridSpec(1, 256, 16.0)
    ref = final(grid, 1 / 128)
    dts = np.array([1 / 8, 1 / 16, 1 / 32])
    errs = np.array([np.linalg.norm(final(grid, dt) - ref) / np.linalg.norm(ref) for dt in dts])
    slope = float(np.polyfit(np.log(dts), np.log(errs), 1)[0])
    fine = grid.with_points(512)
    coarse_norm = sobolev_norm(SpectralField(grid, final(grid, 1 / 32)), 1.0)
    fine_norm = sobolev_norm(SpectralField(fine, final(fine, 1 / 32)), 1.0)
    change = abs(coarse_norm - fine_norm) / fine_norm
    ok = abs(slope - 2.0) <= 0.3 and change < 0.01
    record(7, "convergence", ok, f"{label}: dt slope {slope:.3f} (2 +- 0.3), grid doubling change {change:.1e}")
    assert ok


# ---------------------------------------------------------------------------
# 8. exponent landscape


@pytest.mark.parametrize(
    "n,coverage,gaps",
    [
        (2, ["(2, inf)"], []),
        (3, ["(3/2, inf)"], []),
        (4, ["(4/3, inf)"], []),
        (5, ["(5/4, 5/3]", "(2, inf)"], ["(5/3, 2]"]),
    ],
)
def test_c8_landscape_low_dimensions(n, coverage, gaps, record):
    code, report, text = cmd_landscape(n)
    ok = code == 0 and report["coverage"] == coverage and report["gaps"] == gaps
    record(8, f"n={n}", ok, f"coverage {' U '.join(report['coverage'])}; gaps {report['gaps'] or 'none'}")
    assert ok


@pytest.mark.parametrize("k", [3, 4, 5])
def test_c8_landscape_even_dimensions(k, record):
    _, report, _ = cmd_landscape(2 * k)
    expected = [f"({2 * k}/{2 * k - 1}, {k}/{k - 1}]", f"({k}, inf)"]
    ok = report["coverage"] == expected
    record(8, f"n={2 * k}", ok, f"coverage {' U '.join(report['coverage'])}")
    assert ok


# ---------------------------------------------------------------------------
# 9. inequality audits


@pytest.fixture(scope="module")
def suite_run():
    grid = GridSpec(2, 128, 16.0)
    t0 = time.perf_counter()
    reports = standard_suite(grid, seed=0, count=200)
    return grid, reports, time.perf_counter() - t0


def test_c9_suite_finite(suite_run, record):
    _, reports, elapsed = suite_run
    ok = elapsed <= 60
    for r in reports:
        row_ok = r.skipped is None and r.finite and r.sample_count >= 1
        detail = f"{r.inequality_id}: max {r.max_ratio:.4g} over {r.sample_count}"
        if r.sample_count > 1:
            # the sample maximum creeps up as the tail is explored; reported, not gated
            detail += f" (first 100: {r.max_ratio_over(100):.4g})"
        ok &= record(9, "finite", row_ok, detail)
    record(9, "runtime", elapsed <= 60, f"{elapsed:.1f}s for 200 fields on 128^2 (limit 60s)")
    assert ok


def test_c9_refinement_stable(suite_run, record):
    grid, _, _ = suite_run
    base = standard_suite(grid, seed=0, count=100)
    fine = standard_suite(grid, seed=0, count=100, refine=2)
    ok = True
    for b, f in zip(base, fine):
        change = abs(f.max_ratio / b.max_ratio - 1.0)
        ok &= record(9, "grid refinement", change < 0.05,
                     f"{b.inequality_id}: max {b.max_ratio:.6g} on 128^2, {f.max_ratio:.6g} on 256^2 ({change:.1e})")
    assert ok


def test_c9_exact_cases(suite_run, record):
    grid, reports, _ = suite_run
    by = {r.inequality_id: r for r in reports}
    single = abs(by["gagliardo_nirenberg_single_mode"].max_ratio - 1.0)
    q2 = float(np.max(np.abs(by["sobolev_embedding_q2"].ratios - 1.0)))
    ok = record(9, "single mode", single <= 1e-10, f"|GN ratio - 1| = {single:.1e}")
    ok &= record(9, "L^2 embedding", q2 <= 1e-10, f"max |ratio - 1| = {q2:.1e}")

    us = band_limited_ensemble(grid, 12, 1.0, seed=4)
    vs = band_limited_ensemble(grid, 12, 1.0, seed=5)
    checks = {
        "gagliardo_nirenberg": lambda u, v: check_gagliardo_nirenberg(u, GNParams(0.5, 1.5, 4.0, 2.0, 2.0, 2)),
        "fractional_leibniz": lambda u, v: check_fractional_leibniz(u, v, 1.0, (2.0, 4.0, 4.0, 4.0, 4.0)),
        "fractional_chain_rule": lambda u, v: check_fractional_chain_rule(u, 1.0, 3.0, (2.0, 8.0, 4.0)),
        "sobolev_embedding": lambda u, v: check_sobolev_embedding(u, 4.0),
        "fractional_powers": lambda u, v: check_fractional_powers(u, 3.0, 2.5, 2.0),
    }
    for name, fn in checks.items():
        base = fn(us, vs).ratios
        worst = 0.0
        for a in (1e-3, 17.0):
            scaled = fn([u * a for u in us], [v * a for v in vs]).ratios
            worst = max(worst, float(np.max(np.abs(scaled / base - 1.0))))
        ok &= record(9, "scaling", worst <= 1e-10, f"{name}: max relative change under u -> a u {worst:.1e}")
    assert ok
