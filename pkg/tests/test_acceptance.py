"""Acceptance battery: eleven end-to-end checks of the toolkit.

Every analytic claim is checked against an oracle coded directly in this
file (adaptive quadrature, bracketed root finding, central differences)
or against a seeded Monte Carlo run, never against the routine under
test.  Each test prints a one-line summary when it passes.
"""

import math
import time

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.optimize import brentq

from bcastnet import broadcast, capacity, montecarlo, outage, specfun
from bcastnet.network import NetworkParams, Regime

IL = Regime.INTERFERENCE_LIMITED
NL = Regime.NOISE_LIMITED


def _constants(params):
    """Channel-state CDF constants computed from first principles."""
    delta = 2.0 / params.alpha
    z = math.pi * delta / math.sin(math.pi * delta)
    g_lam = math.pi * params.density * params.r0 ** 2 * params.power ** delta * z
    g_n = params.r0 ** params.alpha * params.noise
    return delta, g_lam, g_n


def _survival(s, delta, g_lam, g_n):
    return math.exp(-g_lam * s ** delta - g_n * s)


def _rate_density(s, delta, g_lam, g_n):
    d = g_n * s + delta * g_lam * s ** delta
    num = 2.0 * g_n * s + delta * (delta + 1.0) * g_lam * s ** delta
    return (num / d - d) / s


def _mean_by_quadrature(params, s0, s1):
    delta, g_lam, g_n = _constants(params)
    val, _ = quad(
        lambda s: _survival(s, delta, g_lam, g_n) * _rate_density(s, delta, g_lam, g_n),
        s0, s1, epsabs=1e-13, epsrel=1e-12, limit=200,
    )
    return val


@pytest.fixture(scope="module")
def reference_run():
    """Shared 200k-trial simulation at (lambda=0.1, alpha=4), seed 42."""
    params = NetworkParams(density=0.1, r0=1.0, alpha=4.0, power=1.0, noise=0.0)
    profile = broadcast.solve_profile(params, IL)
    config = montecarlo.SimConfig(n_trials=200000, seed=42)
    start = time.perf_counter()
    sim, states, _ = montecarlo.simulate_broadcast(params, profile, config,
                                                   xi_list=(0.1, 1.0))
    elapsed = time.perf_counter() - start
    return params, profile, sim, states, elapsed


def test_01_closed_mean_matches_quadrature_interference_limited():
    start = time.perf_counter()
    worst = 0.0
    for lam in (1e-3, 1e-2, 1e-1, 1.0):
        for alpha in (3.0, 4.0, 5.0):
            params = NetworkParams(density=lam, r0=1.0, alpha=alpha,
                                   power=1.0, noise=0.0)
            prof = broadcast.solve_profile(params, IL)
            closed = broadcast.mean_rate(params, IL).mean
            oracle = _mean_by_quadrature(params, prof.s0, prof.s1)
            rel = abs(closed - oracle) / abs(oracle)
            worst = max(worst, rel)
            assert rel <= 1e-6, f"lambda={lam}, alpha={alpha}: rel err {rel:.3e}"
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0, f"took {elapsed:.2f} s"
    print(f"✓ interference-limited closed mean vs quadrature: 12 scenarios, "
          f"worst rel err {worst:.2e}, {elapsed:.2f} s")


def test_02_closed_mean_matches_quadrature_noise_limited():
    worst = 0.0
    for g_n in (0.1, 1.0, 10.0):
        for power in (0.5, 1.0, 2.0):
            params = NetworkParams(density=0.0, r0=1.0, alpha=4.0,
                                   power=power, noise=g_n)
            prof = broadcast.solve_profile(params, NL)
            closed = broadcast.mean_rate(params, NL).mean
            oracle = _mean_by_quadrature(params, prof.s0, prof.s1)
            rel = abs(closed - oracle) / abs(oracle)
            worst = max(worst, rel)
            assert rel <= 1e-6, f"noise={g_n}, power={power}: rel err {rel:.3e}"
    print(f"✓ noise-limited closed mean vs quadrature: 9 scenarios, "
          f"worst rel err {worst:.2e}")


def test_03_monte_carlo_agreement(reference_run):
    params, _, sim, _, elapsed = reference_run
    assert elapsed < 60.0, f"simulation took {elapsed:.1f} s"
    stats = broadcast.variance(params, IL)
    hw = sim.half_width_95
    checks = [
        ("mean", stats.mean, sim.mean, hw["mean"]),
        ("variance", stats.variance, sim.variance, hw["variance"]),
        ("complete outage", broadcast.complete_outage(params),
         sim.complete_outage, hw["complete_outage"]),
    ]
    for xi in (0.1, 1.0):
        checks.append((f"rate outage xi={xi}", capacity.rate_outage(params, xi),
                       sim.rate_outage[xi], hw["rate_outage"][xi]))
    worst = 0.0
    for name, analytic, estimate, half_width in checks:
        pulls = abs(analytic - estimate) / half_width
        worst = max(worst, pulls)
        assert pulls <= 3.0, f"{name}: |{analytic} - {estimate}| = {pulls:.2f} half-widths"
    print(f"✓ Monte Carlo vs analytic at (0.1, 4): 5 statistics within 3 half-widths "
          f"(worst {worst:.2f}), {elapsed:.1f} s for 200000 trials")


def test_04_power_invariance():
    alpha, lam, xi = 4.0, 0.1, 1.0
    rows = []
    for power in (0.1, 1.0, 10.0):
        params = NetworkParams(density=lam, r0=1.0, alpha=alpha,
                               power=power, noise=0.0)
        stats = broadcast.variance(params, IL)
        query = capacity.CapacityQuery(xi=0.1, epsilon=0.05, r0=1.0,
                                       alpha=alpha, power=power)
        rows.append((stats.mean, stats.variance,
                     capacity.rate_outage(params, xi),
                     capacity.transmission_capacity(query).c))
    base = rows[1]
    worst = 0.0
    for row in rows:
        for got, ref in zip(row, base):
            rel = abs(got - ref) / abs(ref)
            worst = max(worst, rel)
            assert rel <= 1e-9
    print(f"✓ power invariance of mean, variance, rate outage, and capacity "
          f"across P in {{0.1, 1, 10}}: worst rel diff {worst:.2e}")


def test_05_dense_network_rate_collapse():
    means = []
    for lam in (1.0, 1e2, 1e4):
        params = NetworkParams(density=lam, r0=1.0, alpha=4.0, power=1.0, noise=0.0)
        means.append(broadcast.mean_rate(params, IL).mean)
    assert means[0] > means[1] > means[2]
    assert means[2] < 1e-2
    print(f"✓ mean rate collapses with density: "
          f"{means[0]:.4g} > {means[1]:.4g} > {means[2]:.4g} < 1e-2")


def test_06_broadcast_dominates_outage_strategy():
    for lam in (1e-3, 1e-2, 1e-1, 1.0):
        params = NetworkParams(density=lam, r0=1.0, alpha=4.0, power=1.0, noise=0.0)
        bs = broadcast.variance(params, IL)
        beta_opt = outage.optimal_beta(params)
        os_stats = outage.rate_stats_os(params, beta_opt)
        assert bs.mean >= os_stats.mean, f"lambda={lam}: mean dominance fails"
        assert bs.variance <= os_stats.variance, f"lambda={lam}: variance dominance fails"
    print("✓ layered strategy dominates the optimized single-threshold strategy "
          "in mean and variance at lambda in {1e-3, 1e-2, 1e-1, 1}")


def test_07_matched_threshold_outage_equality(reference_run):
    params, profile, _, states, _ = reference_run
    beta_m = outage.matched_beta(params)
    p_matched = outage.success_probability(params, beta_m)
    p_layered = 1.0 - broadcast.complete_outage(params, IL)
    assert abs(p_matched - p_layered) <= 1e-10
    assert beta_m == pytest.approx(profile.s0 * params.power, rel=1e-12)
    m_sim = montecarlo.outage_stats_from_states(params, beta_m, states)
    hw = m_sim.half_width_95["complete_outage"]
    gap = abs(p_matched - (1.0 - m_sim.complete_outage))
    assert gap <= 3.0 * hw
    print(f"✓ matched-threshold success equals layered non-outage probability "
          f"(analytic gap {abs(p_matched - p_layered):.1e}, MC gap {gap / hw:.2f} half-widths)")


def test_08_rate_outage_closed_form_consistency():
    alpha, xi, eps = 4.0, 0.1, 0.05
    worst = 0.0
    for lam in (1e-3, 1e-2, 0.1, 0.3, 1.0):
        params = NetworkParams(density=lam, r0=1.0, alpha=alpha, power=1.0, noise=0.0)
        prof = broadcast.solve_profile(params, IL)
        delta, g_lam, _ = _constants(params)
        assert xi < broadcast.layer_rate(prof, prof.s1)

        def cumulative_rate(s):
            val, _ = quad(lambda u: _rate_density(u, delta, g_lam, 0.0),
                          prof.s0, s, epsabs=1e-13, epsrel=1e-12, limit=200)
            return val

        s_xi = brentq(lambda s: cumulative_rate(s) - xi, prof.s0, prof.s1,
                      xtol=1e-14, rtol=8.9e-16)
        oracle = 1.0 - _survival(s_xi, delta, g_lam, 0.0)
        closed = capacity.rate_outage(params, xi)
        gap = abs(closed - oracle)
        worst = max(worst, gap)
        assert gap <= 1e-8, f"lambda={lam}: |closed - inversion oracle| = {gap:.3e}"

    result = capacity.transmission_capacity(
        capacity.CapacityQuery(xi=xi, epsilon=eps, r0=1.0, alpha=alpha, power=1.0))
    params_eps = NetworkParams(density=result.lambda_eps, r0=1.0, alpha=alpha,
                               power=1.0, noise=0.0)
    assert abs(capacity.rate_outage(params_eps, xi) - eps) <= 1e-8

    prof = broadcast.solve_profile(params_eps, IL)
    delta, g_lam, _ = _constants(params_eps)
    t0 = g_lam * prof.s0 ** delta
    ratio = delta / (delta + 1.0)
    h = ratio * t0 * math.exp(ratio * (xi - t0))
    boundary = math.exp(specfun.lambert_w0(-h) / ratio)
    assert abs(boundary - (1.0 - eps)) <= 1e-8
    print(f"✓ Lambert-W rate-outage closed form vs bisection-inversion oracle: "
          f"worst gap {worst:.2e}; q(lambda_eps) = eps and the boundary identity "
          f"hold to 1e-8")


def test_09_capacity_trends_and_outage_jump():
    caps = {}
    for xi in (0.1, 1.0):
        row = []
        for alpha in (3.0, 3.5, 4.0, 5.0, 6.0):
            query = capacity.CapacityQuery(xi=xi, epsilon=0.05, r0=1.0,
                                           alpha=alpha, power=1.0)
            row.append(capacity.transmission_capacity(query).c)
        assert all(b >= a for a, b in zip(row, row[1:])), f"xi={xi}: {row}"
        caps[xi] = row
    assert all(c1 <= c01 for c1, c01 in zip(caps[1.0], caps[0.1]))

    xi = 1.0

    def ceiling_minus_xi(lam):
        params = NetworkParams(density=lam, r0=1.0, alpha=4.0, power=1.0, noise=0.0)
        prof = broadcast.solve_profile(params, IL)
        return broadcast.layer_rate(prof, prof.s1) - xi

    lam_star = brentq(ceiling_minus_xi, 0.05, 1.0, xtol=1e-12)
    above = capacity.rate_outage(
        NetworkParams(density=lam_star * (1 + 1e-6), r0=1.0, alpha=4.0,
                      power=1.0, noise=0.0), xi)
    below = capacity.rate_outage(
        NetworkParams(density=lam_star * (1 - 1e-4), r0=1.0, alpha=4.0,
                      power=1.0, noise=0.0), xi)
    assert above == 1.0
    assert below < 1.0 - math.exp(-2.0) + 1e-6
    assert above - below > 0.1
    print(f"✓ capacity nondecreasing in alpha, decreasing in xi; rate outage jumps "
          f"{below:.4f} -> 1 at lambda = {lam_star:.6f} for xi = 1")


def test_10_layering_profile_is_stationary():
    params = NetworkParams(density=0.1, r0=1.0, alpha=4.0, power=1.0, noise=0.0)
    prof = broadcast.solve_profile(params, IL)
    j = broadcast.mean_rate(params, IL).mean

    class UniformControl:
        """Flat layer power density over [s0, s1]; not a stationary point."""

        def __init__(self, s0, s1, power):
            self.s0, self.s1, self._power = s0, s1, power

        def residual_power(self, s):
            if s <= self.s0:
                return self._power
            if s >= self.s1:
                return 0.0
            return self._power * (self.s1 - s) / (self.s1 - self.s0)

        def density(self, s):
            if self.s0 <= s <= self.s1:
                return self._power / (self.s1 - self.s0)
            return 0.0

    control = UniformControl(prof.s0, prof.s1, params.power)
    worst = 0.0
    violations = 0
    for k in range(10):
        rng = np.random.default_rng(100 + k)
        coeffs = 0.05 * rng.uniform(-1.0, 1.0, size=3)
        pert = broadcast.sine_perturbation(prof.s0, prof.s1, coeffs)
        deriv = broadcast.stationarity_check(params, IL, pert, step=1e-3)
        worst = max(worst, abs(deriv))
        assert abs(deriv) <= 1e-4 * j, f"seed {100 + k}: |dJ| = {abs(deriv):.3e}"
        ctrl_deriv = broadcast.stationarity_check(params, IL, pert, step=1e-3,
                                                  profile=control)
        violations += abs(ctrl_deriv) > 1e-4 * j
    assert violations >= 1
    print(f"✓ solved profile is stationary under 10 random perturbations "
          f"(worst |dJ| = {worst:.2e} vs bound {1e-4 * j:.2e}); "
          f"uniform control violates {violations}/10")


def test_11_special_function_kernel():
    grid = np.linspace(-math.exp(-1.0), 1e3, 1000)
    worst_w = 0.0
    for x in grid:
        w = specfun.lambert_w0(x)
        worst_w = max(worst_w, abs(w * math.exp(w) - x))
    assert worst_w <= 1e-10

    worst_e1 = 0.0
    for x in (1e-3, 1e-2, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0):
        oracle, _ = quad(lambda t: math.exp(-t) / t, x, np.inf,
                         epsabs=1e-14, epsrel=1e-12, limit=200)
        rel = abs(specfun.exp_int(x) - oracle) / oracle
        worst_e1 = max(worst_e1, rel)
        assert rel <= 1e-8

    worst_g2 = 0.0
    for x in (0.0, 0.1, 1.0, 5.0, 20.0):
        oracle, _ = quad(lambda t: t * math.exp(-t), x, np.inf,
                         epsabs=1e-14, epsrel=1e-12, limit=200)
        rel = abs(specfun.gamma_upper_2(x) - oracle) / oracle
        worst_g2 = max(worst_g2, rel)
        assert rel <= 1e-8

    def gamma_quad(a):
        head, _ = quad(lambda u: math.exp(-u ** (1.0 / a)) / a, 0.0, 1.0,
                       epsabs=1e-14, epsrel=1e-12, limit=200)
        tail, _ = quad(lambda t: t ** (a - 1.0) * math.exp(-t), 1.0, np.inf,
                       epsabs=1e-14, epsrel=1e-12, limit=200)
        return head + tail

    worst_z = 0.0
    for delta in (0.1, 0.25, 0.5, 2.0 / 3.0, 0.9):
        oracle = gamma_quad(1.0 + delta) * gamma_quad(1.0 - delta)
        rel = abs(specfun.z_delta(delta) - oracle) / oracle
        worst_z = max(worst_z, rel)
        assert rel <= 1e-8
    print(f"✓ special-function kernel: Lambert-W round-trip residual {worst_w:.1e}, "
          f"E1 rel {worst_e1:.1e}, upper-gamma rel {worst_g2:.1e}, "
          f"interference constant rel {worst_z:.1e}")
