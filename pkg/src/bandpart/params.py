"""Physical scenario description and the b <-> N <-> beta conversions.

All quantities are SI (Hz, bps, watts, meters).  Decibel values are views
computed on demand; the linear value is the stored truth.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

LN2 = math.log(2.0)

#: Spectral efficiency in bits/s/Hz.  Plain float; no wrapper type needed.
SpectralEfficiency = float


class InfeasibleError(ValueError):
    """Raised when a scenario cannot meet its rate target at any partition."""


@dataclass(frozen=True)
class LinkBudget:
    """Physical parameters of one network scenario.

    ``power_rho`` is the received-power reference: the energy per bit is
    ``power_rho * distance_d**-pathloss_alpha / (noise_density_N0 * rate_R)``.
    ``noise_density_N0 = 0`` selects the interference-limited regime.
    """

    rate_R: float            # bits/second
    bandwidth_W: float       # Hz
    power_rho: float         # watts
    noise_density_N0: float  # watts/Hz
    distance_d: float        # meters
    pathloss_alpha: float    # dimensionless, must exceed 2
    outage_eps: float        # target outage probability, in (0, 1)

    def __post_init__(self) -> None:
        if self.rate_R <= 0:
            raise ValueError("rate_R must be positive")
        if self.bandwidth_W <= 0:
            raise ValueError("bandwidth_W must be positive")
        if self.power_rho <= 0:
            raise ValueError("power_rho must be positive")
        if self.distance_d <= 0:
            raise ValueError("distance_d must be positive")
        if self.pathloss_alpha <= 2:
            raise ValueError("pathloss_alpha must exceed 2")
        if self.noise_density_N0 < 0:
            raise ValueError("noise_density_N0 must be nonnegative")
        if not 0 < self.outage_eps < 1:
            raise ValueError("outage_eps must lie in (0, 1)")

    @property
    def received_power(self) -> float:
        return self.power_rho * self.distance_d ** (-self.pathloss_alpha)


@dataclass(frozen=True)
class EbN0:
    """Received energy per information bit over noise spectral density.

    ``value_linear = math.inf`` is the sentinel for a noiseless (purely
    interference-limited) scenario; downstream formulas dispatch on it
    exactly instead of carrying a huge float through the arithmetic.
    """

    value_linear: float

    def __post_init__(self) -> None:
        if not self.value_linear > 0:
            raise ValueError("EbN0 must be positive")

    @property
    def value_db(self) -> float:
        return 10.0 * math.log10(self.value_linear)

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.value_linear)

    @classmethod
    def from_db(cls, db: float) -> "EbN0":
        return cls(10.0 ** (db / 10.0))

    def require_feasible(self) -> None:
        """A finite Eb/N0 at or below ln 2 (-1.59 dB) admits no partition."""
        if not self.is_infinite and self.value_linear <= LN2:
            raise InfeasibleError(
                f"Eb/N0 = {self.value_db:.2f} dB is at or below the "
                f"-1.59 dB minimum; no spectral efficiency is feasible"
            )


EBN0_INFINITE = EbN0(math.inf)


def eb_n0_of(budget: LinkBudget) -> EbN0:
    """Energy per information bit, rho * d^-alpha / (N0 * R)."""
    if budget.noise_density_N0 == 0.0:
        return EBN0_INFINITE
    return EbN0(budget.received_power / (budget.noise_density_N0 * budget.rate_R))


def beta_of_b(b: SpectralEfficiency) -> float:
    """SINR threshold 2^b - 1 required to sustain spectral efficiency b."""
    if b <= 0:
        raise ValueError("spectral efficiency must be positive")
    return math.expm1(b * LN2)


def b_of_partition(budget: LinkBudget, n_subbands: int) -> SpectralEfficiency:
    """Operating spectral efficiency N*R/W when the band is split N ways."""
    if n_subbands < 1:
        raise ValueError("n_subbands must be >= 1")
    return n_subbands * budget.rate_R / budget.bandwidth_W


def integer_partition_of_b(budget: LinkBudget, b_star: SpectralEfficiency) -> int:
    """Best integer sub-band count for a continuous optimum b_star.

    Evaluates the density objective at floor and ceiling of b_star*W/R
    (clamped to >= 1) and keeps the denser one; ties go to the smaller N.
    """
    if b_star <= 0:
        raise ValueError("b_star must be positive")
    from .optimizer import DensityObjective, density_of_b

    n_real = b_star * budget.bandwidth_W / budget.rate_R
    lo = max(1, math.floor(n_real))
    hi = max(1, math.ceil(n_real))
    if lo == hi:
        return lo
    obj = DensityObjective(eb_n0=eb_n0_of(budget), alpha=budget.pathloss_alpha)

    def objective(n: int) -> float:
        try:
            return density_of_b(obj, b_of_partition(budget, n))
        except InfeasibleError:
            return 0.0

    return hi if objective(hi) > objective(lo) else lo
