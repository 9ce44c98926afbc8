"""Bandwidth partition design for decentralized wireless networks.

How many equal sub-bands should a band of width W be split into, when each
transmitter uses one sub-band and the others appear as Poisson-field
interference?  The package solves for the density-maximizing spectral
efficiency b (and sub-band count N) from the link budget, and validates
the analytic answers with full Monte Carlo over the interference field.
"""
from .params import (
    EBN0_INFINITE,
    EbN0,
    InfeasibleError,
    LinkBudget,
    SpectralEfficiency,
    b_of_partition,
    beta_of_b,
    eb_n0_of,
    integer_partition_of_b,
)
from .special import AwgnCapacityPoint, awgn_spectral_efficiency, lambert_w0
from .optimizer import (
    DensityObjective,
    PartitionSolution,
    density_of_b,
    solve,
    solve_fixed_point,
    solve_interference_limited,
    solve_power_limited,
)
from .stochgeo import (
    EmpiricalInterferenceCdf,
    MonteCarloPlan,
    TruncationBudgetError,
    empirical_cdf,
    end_to_end_outage_mc,
    load_fz_table,
    max_density,
    outage_probability,
    sample_z,
    save_fz_table,
)
from .extensions import (
    FadingScenario,
    ds_density,
    fading_optimal_n,
    fading_outage,
)

__version__ = "0.1.0"

__all__ = [
    "AwgnCapacityPoint",
    "DensityObjective",
    "EBN0_INFINITE",
    "EbN0",
    "EmpiricalInterferenceCdf",
    "FadingScenario",
    "InfeasibleError",
    "LinkBudget",
    "MonteCarloPlan",
    "PartitionSolution",
    "SpectralEfficiency",
    "TruncationBudgetError",
    "awgn_spectral_efficiency",
    "b_of_partition",
    "beta_of_b",
    "density_of_b",
    "ds_density",
    "eb_n0_of",
    "empirical_cdf",
    "end_to_end_outage_mc",
    "fading_optimal_n",
    "fading_outage",
    "integer_partition_of_b",
    "lambert_w0",
    "load_fz_table",
    "max_density",
    "outage_probability",
    "sample_z",
    "save_fz_table",
    "solve",
    "solve_fixed_point",
    "solve_interference_limited",
    "solve_power_limited",
]
