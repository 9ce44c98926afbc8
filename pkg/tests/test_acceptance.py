"""End-to-end acceptance checks for the released toolkit.

Each criterion prints one PASS/FAIL line directly to the terminal (past
pytest's capture) so a log scrape shows the verdicts at a glance.  Two
sub-checks encode published reference numbers that the underlying model
does not actually reproduce; those are marked strict-xfail with the
analysis in the repository notes.
"""
import math
import time

import numpy as np
import pytest

import bandpart
from bandpart import (
    EbN0,
    LinkBudget,
    FadingScenario,
    MonteCarloPlan,
    awgn_spectral_efficiency,
    density_of_b,
    ds_density,
    fading_optimal_n,
    lambert_w0,
    max_density,
    solve,
    solve_fixed_point,
    solve_interference_limited,
    solve_power_limited,
)
from bandpart.optimizer import DensityObjective, grid_oracle_argmax
from bandpart.params import EBN0_INFINITE
from bandpart.stochgeo import _outage_fraction_from_z, calibrated_max_density, empirical_cdf, sample_z

from conftest import scenario_budget

LN2 = math.log(2.0)


_CAPTURE_MANAGER = None


@pytest.fixture(autouse=True)
def _route_reports_past_capture(request):
    global _CAPTURE_MANAGER
    _CAPTURE_MANAGER = request.config.pluginmanager.getplugin("capturemanager")
    yield


def report(num: int, name: str, ok: bool) -> None:
    verdict = "PASS" if ok else "FAIL"
    line = f"[criterion {num:02d}] {name}: {verdict}"
    if _CAPTURE_MANAGER is not None:
        with _CAPTURE_MANAGER.global_and_fixture_disabled():
            print(line, flush=True)
    else:
        print(line, flush=True)


def test_01_interference_limited_optima():
    t0 = time.perf_counter()
    b3 = solve_interference_limited(3.0)
    b4 = solve_interference_limited(4.0)
    per_call = (time.perf_counter() - t0) / 2.0
    beta3_db = 10.0 * math.log10(2.0 ** b3 - 1.0)
    beta4_db = 10.0 * math.log10(2.0 ** b4 - 1.0)
    ok = (
        abs(b3 - 1.26) <= 0.01
        and abs(b4 - 2.30) <= 0.01
        and abs(beta3_db - 1.45) <= 0.05
        and abs(beta4_db - 5.9) <= 0.1
        and per_call < 1e-3
    )
    report(1, "interference-limited optima", ok)
    assert ok, (b3, b4, beta3_db, beta4_db, per_call)


def test_02_fixed_point_certification():
    t0 = time.perf_counter()
    dbs = [0, 3, 6, 9, 12, 15, 18, 21, 24, 27, 30]
    alphas = [2.1, 2.5, 3.0, 3.5, 4.0, 5.0]
    table = {}
    for alpha in alphas:
        for db in dbs:
            eb = EbN0.from_db(db)
            b, residual = solve_fixed_point(eb, alpha)
            assert residual <= 1e-10, (alpha, db, residual)
            oracle = grid_oracle_argmax(
                DensityObjective(eb_n0=eb, alpha=alpha), 1e-4)
            assert abs(b - oracle) <= 2e-4, (alpha, db, b, oracle)
            table[(alpha, db)] = b
    for alpha in alphas:
        row = [table[(alpha, db)] for db in dbs]
        assert all(x <= y + 1e-12 for x, y in zip(row, row[1:]))
    for db in dbs:
        col = [table[(alpha, db)] for alpha in alphas]
        assert all(x <= y + 1e-12 for x, y in zip(col, col[1:]))
    elapsed = time.perf_counter() - t0
    ok = elapsed < 10.0
    report(2, "fixed-point certification on the lattice", ok)
    assert ok, elapsed


def test_03_wideband_regime():
    t0 = time.perf_counter()
    c = 0.05
    eb = EbN0((2.0 ** c - 1.0) / c)
    b, _ = solve_fixed_point(eb, 4.0)
    dens = density_of_b(DensityObjective(eb_n0=eb, alpha=4.0), b)
    coeff = 0.5 ** 0.5 * 0.5 ** 0.5 * 2.0 ** -0.5  # (1-d)^(1-d) d^d 2^-d, d = 1/2
    ok = (
        0.495 <= b / c <= 0.505
        and abs(dens / c - coeff) / coeff <= 0.02
        and abs(coeff - 0.3536) < 1e-4
        and time.perf_counter() - t0 < 1.0
    )
    report(3, "wideband regime coefficients", ok)
    assert ok, (b / c, dens / c, coeff)


def test_04_design_example():
    def budget(rate):
        return LinkBudget(
            rate_R=rate, bandwidth_W=60e6, power_rho=1.0,
            noise_density_N0=0.0, distance_d=10.0,
            pathloss_alpha=3.0, outage_eps=0.1,
        )

    n_low = solve(budget(10e6), 0.1).n_star
    n_high = solve(budget(60e6), 0.1).n_star
    ok = n_low == 8 and n_high == 1
    report(4, "noiseless design example", ok)
    assert ok, (n_low, n_high)


def test_05_interference_cdf_calibration(z_table_1m):
    cdf, elapsed = z_table_1m
    q = cdf.quantile(0.1)
    budget = scenario_budget(30.0)
    kappa = (q / (math.pi * budget.distance_d ** 2)) * (
        budget.bandwidth_W / budget.rate_R)
    ok = abs(q - 0.1015) <= 0.002 and abs(kappa - 0.0032) <= 1e-4 and elapsed < 60.0
    report(5, "interference CDF calibration", ok)
    assert ok, (q, kappa, elapsed)


def _argmax_n(densities: dict[int, float]) -> int:
    return max(densities, key=densities.get)


def test_06_density_vs_partition_reproduction(z_table_1m):
    cdf, _ = z_table_1m
    z = cdf.samples
    expected_peak = {30.0: 23, 20.0: 23, 5.0: 15, 0.0: 5}
    for db, target in expected_peak.items():
        budget = scenario_budget(db)
        analytic, simulated = {}, {}
        for n in range(1, 41):
            try:
                analytic[n] = max_density(budget, n, cdf)[1]
                simulated[n] = calibrated_max_density(budget, n, z)[1]
            except bandpart.InfeasibleError:
                continue
        assert abs(_argmax_n(analytic) - target) <= 1, (db, _argmax_n(analytic))
        assert abs(_argmax_n(simulated) - target) <= 1, (db, _argmax_n(simulated))

    # end-to-end Monte Carlo against the analytic density at the outage target
    budget = scenario_budget(30.0)
    plan = MonteCarloPlan(seed=404, replications=100_000)
    z_fresh = sample_z(budget.pathloss_alpha, plan)
    sigma = math.sqrt(0.1 * 0.9 / plan.replications)
    for n in range(1, 41):
        lam = max_density(budget, n, cdf)[1]
        outage = _outage_fraction_from_z(budget, lam, n, z_fresh)
        assert abs(outage - budget.outage_eps) <= 3 * sigma, (n, outage)
    report(6, "density-vs-partition reproduction", True)


@pytest.mark.xfail(
    strict=True,
    reason="published density ratio 0.8 at 5 dB is not reproduced by the "
    "stated formula: the optimized constant evaluates to 0.870 (see notes); "
    "every neighboring check (peak positions, Monte Carlo agreement) passes",
)
def test_06b_density_ratio_at_5db(z_table_1m):
    cdf, _ = z_table_1m
    budget = scenario_budget(5.0)
    q = cdf.quantile(budget.outage_eps)
    kappa = (q / (math.pi * budget.distance_d ** 2)) * (
        budget.bandwidth_W / budget.rate_R)
    dens = {n: max_density(budget, n, cdf)[1] for n in range(1, 41)
            if n * budget.rate_R / budget.bandwidth_W < 3.6}
    ratio = max(dens.values()) / kappa
    ok = abs(ratio - 0.8) <= 0.05
    report(6, f"density ratio 0.8 at 5 dB (got {ratio:.3f})", ok)
    assert ok, ratio


def test_07_unit_crossing():
    ok = all(
        density_of_b(DensityObjective(eb_n0=EBN0_INFINITE, alpha=a), 1.0) == 1.0
        for a in (2.2, 2.5, 3.0, 4.0, 6.0)
    )
    report(7, "unit spectral-efficiency crossing", ok)
    assert ok


@pytest.mark.xfail(
    strict=True,
    reason="the common intersection of the density curves sits where the "
    "bracket equals 1, at b = 0.1580 for Eb/N0 = -0.82 dB; C/3 = 0.1661 is "
    "only its wideband approximation and misses by 8e-3 > the 1e-3 grid step",
)
def test_07b_low_snr_intersection():
    eb = EbN0((2.0 ** 0.5 - 1.0) / 0.5)  # C = 0.5, i.e. -0.82 dB
    c = awgn_spectral_efficiency(eb).c_bps_hz
    grid = np.arange(1e-3, c, 1e-3)
    objs = [DensityObjective(eb_n0=eb, alpha=a) for a in (2.2, 3.0, 4.0)]
    curves = [np.array([density_of_b(o, float(b)) for b in grid]) for o in objs]
    # pairwise crossing points of the three curves
    crossings = []
    for i in range(len(curves)):
        for j in range(i + 1, len(curves)):
            diff = curves[i] - curves[j]
            sign_change = np.nonzero(np.diff(np.sign(diff)))[0]
            crossings.extend(float(grid[k]) for k in sign_change)
    ok = bool(crossings) and all(abs(b - c / 3.0) <= 1e-3 for b in crossings)
    report(7, f"low-SNR intersection at C/3 (crossings {crossings})", ok)
    assert ok, (crossings, c / 3.0)


def test_08_spreading_comparison():
    noiseless = LinkBudget(
        rate_R=1e6, bandwidth_W=10e6, power_rho=1.0,
        noise_density_N0=0.0, distance_d=10.0,
        pathloss_alpha=4.0, outage_eps=0.1,
    )
    plan = MonteCarloPlan(seed=88, replications=20_000,
                          truncation_rel_tol=1e-2, max_terms=20_000)
    ok = True
    for alpha in (3.0, 4.0):
        budget_a = LinkBudget(
            rate_R=noiseless.rate_R, bandwidth_W=noiseless.bandwidth_W,
            power_rho=1.0, noise_density_N0=0.0, distance_d=10.0,
            pathloss_alpha=alpha, outage_eps=0.1,
        )
        import warnings
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            cdf = empirical_cdf(alpha, plan, on_budget="warn")
        vals = [ds_density(budget_a, n, cdf) for n in range(1, 51)]
        fdma_ref = max_density(budget_a, 1, cdf)[1]
        ok = ok and all(b < a for a, b in zip(vals, vals[1:]))
        ok = ok and all(v <= fdma_ref * (1 + 1e-12) for v in vals)
    report(8, "spreading never beats band splitting", ok)
    assert ok


def test_09_fading_robustness():
    lam = 0.01 / math.pi
    plan = MonteCarloPlan(seed=55, replications=100_000)
    noiseless = LinkBudget(
        rate_R=1e6, bandwidth_W=5e6, power_rho=1e-2,
        noise_density_N0=0.0, distance_d=10.0,
        pathloss_alpha=4.0, outage_eps=0.1,
    )
    n_by_law = {}
    for law, m in (("none", 1.0), ("rayleigh", 1.0), ("nakagami", 5.0)):
        scenario = FadingScenario(budget=noiseless, fading_law=law, nakagami_m=m)
        n_by_law[law] = fading_optimal_n(scenario, lam, range(1, 21), plan)
    spread_ok = max(n_by_law.values()) - min(n_by_law.values()) <= 1

    # finite noise: the optimum must settle at the interference-limited
    # partition once Eb/N0 clears ~20 dB
    b_il = solve_interference_limited(4.0)
    n_il = round(b_il * 5e6 / 1e6)  # 11 or 12 are a near-tie
    settled = []
    for db in (20.0, 25.0, 30.0):
        budget = scenario_budget(db, bandwidth=5e6)
        scenario = FadingScenario(budget=budget, fading_law="rayleigh")
        settled.append(fading_optimal_n(scenario, lam, range(1, 21), plan))
    converge_ok = all(abs(n - n_il) <= 1 for n in settled)
    ok = spread_ok and converge_ok
    report(9, "fading leaves the optimal partition in place", ok)
    assert ok, (n_by_law, settled, n_il)


def test_10_special_functions():
    grid = np.linspace(-1.0 / math.e, 1e6, 10_000)
    worst = 0.0
    for z in grid:
        w = lambert_w0(float(z))
        worst = max(worst, abs(w * math.exp(w) - z) / max(1.0, abs(z)))
    eb = EbN0.from_db(0.0)
    c0 = awgn_spectral_efficiency(eb).c_bps_hz
    residuals = []
    for db in (-1.5, 0.0, 5.0, 15.0, 30.0):
        e = EbN0.from_db(db)
        c = awgn_spectral_efficiency(e).c_bps_hz
        residuals.append(abs(math.expm1(c * LN2) - e.value_linear * c)
                         / max(1.0, e.value_linear * c))
    ok = worst <= 1e-12 and max(residuals) <= 1e-10 and abs(c0 - 1.0) <= 1e-10
    report(10, "special function accuracy", ok)
    assert ok, (worst, max(residuals), c0)
