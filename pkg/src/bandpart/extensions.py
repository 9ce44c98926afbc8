"""Model extensions: direct-sequence spread spectrum and frequency-flat
fading with variable TX-RX distance.

Fading powers are unit-mean (Rayleigh = exponential(1), Nakagami-m =
gamma(m, 1/m)) so Eb/N0 stays comparable across laws.  The fading-weighted
normalized interference reuses the radial sampler with iid multiplicative
weights per interferer.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .params import InfeasibleError, LinkBudget, b_of_partition, beta_of_b
from .stochgeo import (
    EmpiricalInterferenceCdf,
    MonteCarloPlan,
    _interference_sums,
)

FADING_LAWS = ("none", "rayleigh", "nakagami")
DISTANCE_LAWS = ("fixed", "uniform")


@dataclass(frozen=True)
class FadingScenario:
    """Fading law and TX-RX distance law wrapped around a link budget.

    With ``distance_law="uniform"`` the budget's ``distance_d`` is ignored
    and distances are drawn per replication from [d_lo, d_hi].
    """

    budget: LinkBudget
    fading_law: str = "none"
    nakagami_m: float = 1.0
    distance_law: str = "fixed"
    d_lo: float = 0.0
    d_hi: float = 0.0

    def __post_init__(self) -> None:
        if self.fading_law not in FADING_LAWS:
            raise ValueError(f"unknown fading law {self.fading_law!r}")
        if self.fading_law == "nakagami" and self.nakagami_m < 0.5:
            raise ValueError("nakagami shape must be >= 0.5")
        if self.distance_law not in DISTANCE_LAWS:
            raise ValueError(f"unknown distance law {self.distance_law!r}")
        if self.distance_law == "uniform" and not 0.0 < self.d_lo <= self.d_hi:
            raise ValueError("uniform distance law needs 0 < d_lo <= d_hi")

    @property
    def tag(self) -> str:
        if self.fading_law == "nakagami":
            return f"nakagami{self.nakagami_m:g}"
        return self.fading_law


def ds_density(budget: LinkBudget, n_spreading: int, cdf: EmpiricalInterferenceCdf) -> float:
    """Maximum density for direct-sequence spreading with factor N.

    Despreading divides both signal bandwidth and interference by N, so the
    effective threshold is beta(N)/N against full-band noise N0 W: no
    per-band noise reduction and no band multiplicity.  Strictly
    decreasing in N, hence never better than band splitting.
    """
    if cdf.alpha != budget.pathloss_alpha:
        raise ValueError("CDF path-loss exponent does not match the budget")
    threshold = beta_of_b(b_of_partition(budget, n_spreading)) / n_spreading
    eta = budget.noise_density_N0 * budget.bandwidth_W
    br = 1.0 / threshold - eta / budget.received_power
    if br <= 0.0:
        raise InfeasibleError(f"DS spreading factor {n_spreading} is infeasible")
    q = cdf.quantile(budget.outage_eps)
    d = budget.distance_d
    return (q / (math.pi * d * d)) * br ** (2.0 / budget.pathloss_alpha)


def _environment_samples(
    scenario: FadingScenario, plan: MonteCarloPlan, threads: int = 1
) -> tuple[np.ndarray, np.ndarray]:
    """(weighted Z, received gain G = d^-alpha h0) draws for one scenario.

    Both arrays depend only on (scenario, plan), never on the partition, so
    an N sweep over them uses common random numbers by construction.
    """
    alpha = scenario.budget.pathloss_alpha
    if scenario.fading_law == "none":
        sums = _interference_sums(alpha, plan, threads=threads)
    elif scenario.fading_law == "rayleigh":
        sums = _interference_sums(alpha, plan, weight_law="rayleigh", threads=threads)
    else:
        sums = _interference_sums(
            alpha, plan, weight_law="nakagami",
            weight_param=scenario.nakagami_m, threads=threads,
        )
    z = sums ** (-2.0 / alpha)

    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence((plan.seed, 1))))
    n = plan.replications
    if scenario.distance_law == "fixed":
        d = np.full(n, scenario.budget.distance_d)
    else:
        d = rng.uniform(scenario.d_lo, scenario.d_hi, size=n)
    if scenario.fading_law == "none":
        h0 = np.ones(n)
    elif scenario.fading_law == "rayleigh":
        h0 = rng.standard_exponential(n)
    else:
        h0 = rng.gamma(scenario.nakagami_m, 1.0 / scenario.nakagami_m, size=n)
    return z, d ** (-alpha) * h0


def _outage_from_environment(
    scenario: FadingScenario,
    lambda_total: float,
    n_subbands: int,
    z: np.ndarray,
    g: np.ndarray,
) -> float:
    """Outage fraction for one N given shared (Z, G) draws.

    Outage happens when the received gain alone cannot clear the threshold
    (G <= beta eta / rho) or when interference pushes SINR under it.
    """
    budget = scenario.budget
    alpha = budget.pathloss_alpha
    beta = beta_of_b(b_of_partition(budget, n_subbands))
    eta = budget.noise_density_N0 * budget.bandwidth_W / n_subbands
    lam_band = lambda_total / n_subbands

    margin = g / beta - eta / budget.power_rho
    power_outage = margin <= 0.0
    interference_outage = np.zeros_like(power_outage)
    ok = ~power_outage
    if np.any(ok):
        arg = math.pi * lam_band * margin[ok] ** (-2.0 / alpha)
        interference_outage[ok] = z[ok] <= arg
    return float(np.mean(power_outage | interference_outage))


def fading_outage(
    scenario: FadingScenario,
    lambda_total: float,
    n_subbands: int,
    plan: MonteCarloPlan,
    threads: int = 1,
) -> float:
    """Monte Carlo outage under fading and/or variable distance.

    Collapses to the base fixed-distance model when the scenario has no
    fading and a fixed distance law.
    """
    if lambda_total < 0:
        raise ValueError("lambda_total must be nonnegative")
    if lambda_total == 0.0:
        return 0.0
    z, g = _environment_samples(scenario, plan, threads=threads)
    return _outage_from_environment(scenario, lambda_total, n_subbands, z, g)


def fading_outage_decomposition(
    scenario: FadingScenario,
    lambda_total: float,
    n_subbands: int,
    plan: MonteCarloPlan,
) -> tuple[float, float]:
    """(power-outage term, conditional interference term); sums to outage."""
    z, g = _environment_samples(scenario, plan)
    budget = scenario.budget
    beta = beta_of_b(b_of_partition(budget, n_subbands))
    eta = budget.noise_density_N0 * budget.bandwidth_W / n_subbands
    margin = g / beta - eta / budget.power_rho
    ok = margin > 0.0
    term1 = float(np.mean(~ok))
    if not np.any(ok):
        return term1, 0.0
    arg = math.pi * (lambda_total / n_subbands) * margin[ok] ** (-2.0 / budget.pathloss_alpha)
    cond = float(np.mean(z[ok] <= arg))
    return term1, cond * float(np.mean(ok))


def fading_optimal_n(
    scenario: FadingScenario,
    lambda_total: float,
    n_range: range,
    plan: MonteCarloPlan,
    threads: int = 1,
) -> int:
    """Outage-minimizing sub-band count over n_range, common random numbers.

    Deterministic given the plan seed; ties break to the smaller N.
    """
    if len(n_range) == 0:
        raise ValueError("n_range must be nonempty")
    z, g = _environment_samples(scenario, plan, threads=threads)
    best_n, best_outage = None, math.inf
    for n in n_range:
        outage = _outage_from_environment(scenario, lambda_total, n, z, g)
        if outage < best_outage:
            best_n, best_outage = n, outage
    return best_n
