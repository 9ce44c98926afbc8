"""Optimal spectral efficiency / bandwidth partition.

The density objective (transmitters per m^2, normalized by the scenario
constant kappa) is

    lambda(b) / kappa = b * (1/(2^b - 1) - 1/(b * EbN0))^(2/alpha)

on 0 < b < C(EbN0), degenerating to b * (2^b - 1)^(-2/alpha) in the
noiseless case.  The stationary-point equation, its closed form for the
noiseless case (via Lambert W), the near-minimum-energy first-order
approximation, and a brute-force grid oracle are all provided so each
route can certify the others.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .params import (
    LN2,
    EbN0,
    InfeasibleError,
    LinkBudget,
    SpectralEfficiency,
    b_of_partition,
    beta_of_b,
    eb_n0_of,
    integer_partition_of_b,
)
from .special import awgn_spectral_efficiency, lambert_w0

LOG2E = 1.0 / LN2

#: Eb/N0 (dB) above which a network behaves as interference-limited.
#: Advisory diagnostic only; never a branch in the math.
INTERFERENCE_LIMITED_DB = 15.0

REGIME_INTERFERENCE_LIMITED = "interference_limited"
REGIME_POWER_LIMITED = "power_limited"
REGIME_GENERAL = "general"


@dataclass(frozen=True)
class DensityObjective:
    """Dimensionless density objective lambda(b) / kappa, scaled by kappa."""

    eb_n0: EbN0
    alpha: float
    kappa: float = 1.0

    def __post_init__(self) -> None:
        if self.alpha <= 2:
            raise ValueError("alpha must exceed 2")
        if self.kappa <= 0:
            raise ValueError("kappa must be positive")


@dataclass(frozen=True)
class PartitionSolution:
    """An optimizer answer for one scenario."""

    b_star: float                 # bits/s/Hz, continuous optimum
    n_star: int                   # integer sub-band count
    beta_star: float              # SINR threshold 2^b* - 1
    density_constant: float       # lambda(b*) / kappa
    density_per_m2: float         # transmitters per m^2 at b*
    regime: str
    fixed_point_residual: float


def _bracket(e_linear: float, b):
    """1/(2^b - 1) - 1/(b * EbN0); vanishes at the feasibility boundary."""
    if math.isinf(e_linear):
        return 1.0 / np.expm1(b * LN2)
    return 1.0 / np.expm1(b * LN2) - 1.0 / (b * e_linear)


def density_of_b(obj: DensityObjective, b: SpectralEfficiency) -> float:
    """kappa * b * bracket(b)^(2/alpha); exactly 0 at b = C, error beyond."""
    if b <= 0:
        raise ValueError("b must be positive")
    br = _bracket(obj.eb_n0.value_linear, b)
    if br < 0.0:
        c = awgn_spectral_efficiency(obj.eb_n0).c_bps_hz
        if b <= c * (1.0 + 1e-12):
            return 0.0
        raise InfeasibleError(f"b = {b} exceeds the AWGN boundary C = {c:.6g}")
    return float(obj.kappa * b * br ** (2.0 / obj.alpha))


def _fixed_point_terms(e: float, alpha: float, b: float) -> tuple[float, float, float]:
    """The three terms of the stationary-point equation at finite Eb/N0."""
    x = math.expm1(b * LN2)  # 2^b - 1
    t1 = e * b * x
    t2 = e * (2.0 / alpha) * b * b * (x + 1.0) * LN2
    t3 = (1.0 - 2.0 / alpha) * x * x
    return t1, t2, t3


def _closed_form_residual(alpha: float, b: float) -> float:
    """Relative residual of b = log2(e) * (alpha/2) * (1 - 2^-b)."""
    rhs = LOG2E * (alpha / 2.0) * (1.0 - 2.0 ** (-b))
    return abs(b - rhs) / max(1.0, b)


def solve_interference_limited(alpha: float) -> float:
    """Closed-form noiseless optimum via the principal Lambert W branch."""
    if alpha <= 2:
        raise ValueError("alpha must exceed 2")
    h = alpha / 2.0
    return LOG2E * (h + lambert_w0(-h * math.exp(-h)))


def solve_fixed_point(eb_n0: EbN0, alpha: float) -> tuple[float, float]:
    """Unique root of the stationary-point equation on (0, C).

    Returns (b_star, residual) where the residual is the equation value at
    b_star relative to the magnitude of its largest term.  The noiseless
    sentinel routes to the Lambert W closed form (no inf arithmetic).
    """
    if alpha <= 2:
        raise ValueError("alpha must exceed 2")
    if eb_n0.is_infinite:
        b = solve_interference_limited(alpha)
        return b, _closed_form_residual(alpha, b)
    eb_n0.require_feasible()
    e = eb_n0.value_linear
    c = awgn_spectral_efficiency(eb_n0).c_bps_hz

    def f(b: float) -> float:
        t1, t2, t3 = _fixed_point_terms(e, alpha, b)
        return t1 - t2 - t3

    # f > 0 below the root and f < 0 above it on (0, C)
    lo, hi = 1e-9 * c, c * (1.0 - 1e-9)
    if f(lo) <= 0.0:  # root is pinned against the lower end
        lo = 1e-15 * c
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if f(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    b = 0.5 * (lo + hi)
    t1, t2, t3 = _fixed_point_terms(e, alpha, b)
    scale = max(abs(t1), abs(t2), abs(t3), 1e-300)
    return b, abs(t1 - t2 - t3) / scale


def solve_power_limited(eb_n0: EbN0, alpha: float) -> tuple[float, float]:
    """First-order optimum near the -1.59 dB minimum-energy point.

    Returns (b_approx, density_constant_approx) with
    b ~ (1 - 2/alpha) C and lambda/kappa ~ (1-d)^(1-d) d^d 2^-d C for
    d = 2/alpha; both are accurate up to O(b^2).
    """
    if alpha <= 2:
        raise ValueError("alpha must exceed 2")
    eb_n0.require_feasible()
    c = awgn_spectral_efficiency(eb_n0).c_bps_hz
    d = 2.0 / alpha
    coeff = (1.0 - d) ** (1.0 - d) * d ** d * 2.0 ** (-d)
    return (1.0 - d) * c, coeff * c


def grid_oracle_argmax(obj: DensityObjective, step: float) -> float:
    """Exhaustive scan of the density objective; certifies the root solver.

    Scans b in (step, C - step] (noiseless: up to the analytic upper bound
    (alpha/2) log2 e plus margin) and returns the argmax.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    if obj.eb_n0.is_infinite:
        upper = (obj.alpha / 2.0) * LOG2E + 2.0
    else:
        upper = awgn_spectral_efficiency(obj.eb_n0).c_bps_hz - step
    grid = np.arange(step, upper + 0.5 * step, step)
    br = np.maximum(_bracket(obj.eb_n0.value_linear, grid), 0.0)
    vals = grid * br ** (2.0 / obj.alpha)
    return float(grid[int(np.argmax(vals))])


def apply_capacity_gap(eb_n0: EbN0, gamma_linear: float) -> EbN0:
    """Effective Eb/N0 when rates sit at a gap Gamma >= 1 to capacity."""
    if gamma_linear < 1.0:
        raise ValueError("gamma_linear must be >= 1")
    if eb_n0.is_infinite:
        return eb_n0
    return EbN0(eb_n0.value_linear / gamma_linear)


def capacity_gap_density_multiplier(gamma_linear: float, alpha: float) -> float:
    """Density penalty Gamma^(-2/alpha) that accompanies a capacity gap."""
    if gamma_linear < 1.0:
        raise ValueError("gamma_linear must be >= 1")
    return gamma_linear ** (-2.0 / alpha)


def outage_of_b(budget: LinkBudget, lambda_total: float, b: SpectralEfficiency, fz) -> float:
    """Outage probability at total intensity lambda_total and efficiency b.

    Evaluates F_Z(lambda pi d^2 (R/W) (1/b) bracket(b)^(-2/alpha)); its
    argmin over b coincides with the density argmax.
    """
    if b <= 0:
        raise ValueError("b must be positive")
    if lambda_total < 0:
        raise ValueError("lambda_total must be nonnegative")
    if lambda_total == 0.0:
        return 0.0
    e = eb_n0_of(budget).value_linear
    br = _bracket(e, b)
    if br < 0.0:
        c = awgn_spectral_efficiency(eb_n0_of(budget)).c_bps_hz
        if b <= c * (1.0 + 1e-12):
            return 1.0
        raise InfeasibleError(f"b = {b} exceeds the AWGN boundary C = {c:.6g}")
    if br == 0.0:
        return 1.0
    d = budget.distance_d
    arg = (
        lambda_total
        * math.pi
        * d
        * d
        * (budget.rate_R / budget.bandwidth_W)
        * (1.0 / b)
        * br ** (-2.0 / budget.pathloss_alpha)
    )
    return float(fz.cdf(arg))


def _regime_label(eb_n0: EbN0) -> str:
    if eb_n0.is_infinite or eb_n0.value_db >= INTERFERENCE_LIMITED_DB:
        return REGIME_INTERFERENCE_LIMITED
    if awgn_spectral_efficiency(eb_n0).c_bps_hz <= 1.0:
        return REGIME_POWER_LIMITED
    return REGIME_GENERAL


def solve(budget: LinkBudget, fz) -> PartitionSolution:
    """Full pipeline: Eb/N0 -> fixed point -> integer partition -> density.

    ``fz`` is either an empirical interference CDF (its quantile at the
    budget's outage target supplies kappa) or the quantile value itself.
    """
    eb = eb_n0_of(budget)
    eb.require_feasible()
    quantile = fz if isinstance(fz, (int, float)) else fz.quantile(budget.outage_eps)
    if quantile <= 0:
        raise ValueError("F_Z quantile must be positive")
    kappa = (quantile / (math.pi * budget.distance_d ** 2)) * (
        budget.bandwidth_W / budget.rate_R
    )
    b_star, residual = solve_fixed_point(eb, budget.pathloss_alpha)
    n_star = integer_partition_of_b(budget, b_star)
    obj = DensityObjective(eb_n0=eb, alpha=budget.pathloss_alpha)
    density_constant = density_of_b(obj, b_star)
    return PartitionSolution(
        b_star=b_star,
        n_star=n_star,
        beta_star=beta_of_b(b_star),
        density_constant=density_constant,
        density_per_m2=kappa * density_constant,
        regime=_regime_label(eb),
        fixed_point_residual=residual,
    )
