import time

import pytest

from bandpart import LinkBudget, MonteCarloPlan, empirical_cdf

# measurement-campaign scenario used throughout: 10 MHz split for 1 Mbps
# links at 10 m, alpha = 4, 10% outage target.  Transmit power is set from
# the requested Eb/N0.


def scenario_budget(eb_n0_db: float, noise_density=1e-6, rate=1e6,
                    bandwidth=10e6, distance=10.0, alpha=4.0, eps=0.1) -> LinkBudget:
    rho = 10.0 ** (eb_n0_db / 10.0) * noise_density * rate * distance ** alpha
    return LinkBudget(
        rate_R=rate, bandwidth_W=bandwidth, power_rho=rho,
        noise_density_N0=noise_density, distance_d=distance,
        pathloss_alpha=alpha, outage_eps=eps,
    )


@pytest.fixture(scope="session")
def z_table_1m():
    """10^6-sample alpha=4 interference CDF, built single-threaded and timed."""
    plan = MonteCarloPlan(seed=20260826, replications=1_000_000)
    t0 = time.perf_counter()
    cdf = empirical_cdf(4.0, plan)
    elapsed = time.perf_counter() - t0
    return cdf, elapsed


@pytest.fixture(scope="session")
def z_table_100k():
    plan = MonteCarloPlan(seed=11, replications=100_000)
    return empirical_cdf(4.0, plan)
