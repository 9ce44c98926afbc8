"""Stochastic-geometry engine.

Samples the normalized interference variable Z for a planar Poisson field
of interferers, builds empirical CDFs/quantiles of Z, and evaluates outage
probability and maximum transmitter density both analytically and by full
Monte Carlo.

Sampling is radial: the squared distances of a planar PPP of intensity
1/pi, ordered outward from the receiver, are the arrival times of a
unit-rate 1-D Poisson process (cumulative iid standard exponentials).
Each replication accumulates r^-alpha terms outward until the analytic
mean of the neglected far field,

    s^(1 - alpha/2) / (alpha/2 - 1),

drops below ``truncation_rel_tol`` times the accumulated sum.  The tail
mean is then added to the sum, so the only neglected part is the
(much smaller) fluctuation of the far field about its mean.

Replications are grouped in fixed-size chunks, each driven by its own
counter-based Philox stream keyed on (seed, chunk index); results are
therefore bit-identical for a given seed no matter how the chunks are
scheduled across workers.
"""
from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .params import InfeasibleError, LinkBudget, b_of_partition, beta_of_b

_CHUNK = 1 << 16          # replications per RNG stream; fixed, never tune
_MAX_DRAW = 1 << 25       # cap on rows x cols per exponential draw
FZ_FORMAT_VERSION = 1
FZ_GRID_POINTS = 4096


class TruncationBudgetError(RuntimeError):
    """A replication hit max_terms before meeting the truncation tolerance."""


@dataclass(frozen=True)
class MonteCarloPlan:
    seed: int
    replications: int
    truncation_rel_tol: float = 1e-3
    max_terms: int = 200_000

    def __post_init__(self) -> None:
        if self.replications < 1:
            raise ValueError("replications must be >= 1")
        if not 0.0 < self.truncation_rel_tol < 1.0:
            raise ValueError("truncation_rel_tol must lie in (0, 1)")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")


@dataclass
class EmpiricalInterferenceCdf:
    """Sorted Monte Carlo sample of Z with order-statistic quantile lookup.

    ``samples`` may be the full sorted draw or the fixed quantile grid read
    back from a cache file; ``n_samples`` always records the original
    replication count.
    """

    alpha: float
    samples: np.ndarray
    n_samples: int
    seed: int
    truncation_rel_tol: float
    fading_tag: str = "none"
    _positions: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.samples = np.asarray(self.samples, dtype=float)
        if self.samples.ndim != 1 or self.samples.size < 2:
            raise ValueError("samples must be a 1-D array with >= 2 entries")
        if np.any(np.diff(self.samples) < 0):
            raise ValueError("samples must be sorted ascending")
        if self.samples[0] <= 0:
            raise ValueError("Z samples must be positive")
        # type-7 plotting positions: order statistic i sits at i/(m-1)
        self._positions = np.linspace(0.0, 1.0, self.samples.size)

    def quantile(self, p: float) -> float:
        """Linear interpolation between adjacent order statistics (type 7)."""
        if not 0.0 < p < 1.0:
            raise ValueError("p must lie in (0, 1)")
        if self.n_samples < 1000:
            raise ValueError("need at least 1000 samples for quantile lookup")
        return float(np.interp(p, self._positions, self.samples))

    def cdf(self, z) -> float | np.ndarray:
        """Piecewise-linear empirical CDF (inverse of ``quantile``)."""
        return np.interp(z, self.samples, self._positions, left=0.0, right=1.0)


def fz_quantile(cdf: EmpiricalInterferenceCdf, p: float) -> float:
    return cdf.quantile(p)


def _chunk_rng(seed: int, chunk_index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence((seed, 0, chunk_index))))


def _sum_chunk(
    alpha: float,
    rel_tol: float,
    max_terms: int,
    seed: int,
    chunk_index: int,
    m: int,
    weight_law: str = "none",
    weight_param: float = 1.0,
) -> tuple[np.ndarray, int, float]:
    """One chunk of interference sums Sum_i h_i * s_i^(-alpha/2).

    Returns (sums, n_budget_exceeded, worst_rel_tail).  Weights h_i are iid
    unit-mean fading powers; the tail bound uses the unit weight mean.
    """
    rng = _chunk_rng(seed, chunk_index)
    half = alpha / 2.0
    c_tail = 1.0 / (half - 1.0)

    s_last = np.zeros(m)
    sums = np.zeros(m)
    terms = np.zeros(m, dtype=np.int64)
    active = np.arange(m)
    exceeded = 0
    worst_rel_tail = 0.0
    k = 64
    while active.size:
        k_eff = max(64, min(k, _MAX_DRAW // active.size))
        e = rng.standard_exponential((active.size, k_eff))
        s = np.cumsum(e, axis=1)
        s += s_last[active][:, None]
        contrib = s ** (-half)
        if weight_law == "rayleigh":
            contrib *= rng.standard_exponential(contrib.shape)
        elif weight_law == "nakagami":
            m_shape = weight_param
            contrib *= rng.gamma(m_shape, 1.0 / m_shape, size=contrib.shape)
        sums[active] += contrib.sum(axis=1)
        s_last[active] = s[:, -1]
        terms[active] += k_eff

        tail = c_tail * s_last[active] ** (1.0 - half)
        converged = tail <= rel_tol * sums[active]
        budget = terms[active] >= max_terms
        done = converged | budget
        if np.any(done):
            idx = active[done]
            # far-field mean compensation; bias left is only the fluctuation
            sums[idx] += c_tail * s_last[idx] ** (1.0 - half)
            over = done & ~converged
            if np.any(over):
                exceeded += int(np.count_nonzero(over))
                rel = tail[over] / sums[active[over]]
                worst_rel_tail = max(worst_rel_tail, float(rel.max()))
            active = active[~done]
        k = min(2 * k, 4096)
    return sums, exceeded, worst_rel_tail


def _interference_sums(
    alpha: float,
    plan: MonteCarloPlan,
    weight_law: str = "none",
    weight_param: float = 1.0,
    threads: int = 1,
    on_budget: str = "raise",
) -> np.ndarray:
    """All interference sums for a plan, chunk-parallel and seed-stable."""
    if alpha <= 2:
        raise ValueError("alpha must exceed 2")
    n = plan.replications
    n_chunks = (n + _CHUNK - 1) // _CHUNK
    jobs = [
        (alpha, plan.truncation_rel_tol, plan.max_terms, plan.seed, ci,
         min(_CHUNK, n - ci * _CHUNK), weight_law, weight_param)
        for ci in range(n_chunks)
    ]
    if threads > 1 and n_chunks > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_sum_chunk_star, jobs))
    else:
        results = [_sum_chunk(*job) for job in jobs]

    exceeded = sum(r[1] for r in results)
    if exceeded:
        worst = max(r[2] for r in results)
        msg = (
            f"{exceeded}/{n} replications hit max_terms={plan.max_terms} before "
            f"reaching truncation_rel_tol={plan.truncation_rel_tol:g} "
            f"(worst achieved relative tail bound {worst:.3g}); "
            f"tail means were substituted for the unsimulated far field"
        )
        if on_budget == "raise":
            raise TruncationBudgetError(msg)
        warnings.warn(msg, stacklevel=2)
    return np.concatenate([r[0] for r in results])


def _sum_chunk_star(job):
    return _sum_chunk(*job)


def sample_z(
    alpha: float,
    plan: MonteCarloPlan,
    threads: int = 1,
    on_budget: str = "raise",
) -> np.ndarray:
    """Replications of Z = (sum_i s_i^(-alpha/2))^(-2/alpha), unit-normalized.

    Deterministic given (seed, plan) for any thread count.
    """
    sums = _interference_sums(alpha, plan, threads=threads, on_budget=on_budget)
    return sums ** (-2.0 / alpha)


def empirical_cdf(
    alpha: float,
    plan: MonteCarloPlan,
    threads: int = 1,
    on_budget: str = "raise",
) -> EmpiricalInterferenceCdf:
    """Sorted empirical CDF of Z for quantile/outage lookups."""
    z = np.sort(sample_z(alpha, plan, threads=threads, on_budget=on_budget))
    return EmpiricalInterferenceCdf(
        alpha=alpha,
        samples=z,
        n_samples=plan.replications,
        seed=plan.seed,
        truncation_rel_tol=plan.truncation_rel_tol,
    )


def _per_band_bracket(budget: LinkBudget, n_subbands: int) -> float:
    """1/beta(N) - eta/(rho d^-alpha) with eta = N0 W / N."""
    beta = beta_of_b(b_of_partition(budget, n_subbands))
    eta = budget.noise_density_N0 * budget.bandwidth_W / n_subbands
    return 1.0 / beta - eta / budget.received_power


def outage_probability(
    budget: LinkBudget,
    lambda_per_band: float,
    n_subbands: int,
    cdf: EmpiricalInterferenceCdf,
) -> float:
    """Outage for one sub-band at per-band intensity lambda_per_band.

    Returns exactly 1 when the SINR threshold is unreachable even without
    interference.
    """
    if cdf.alpha != budget.pathloss_alpha:
        raise ValueError("CDF path-loss exponent does not match the budget")
    if lambda_per_band < 0:
        raise ValueError("lambda_per_band must be nonnegative")
    br = _per_band_bracket(budget, n_subbands)
    if br <= 0.0:
        return 1.0
    if lambda_per_band == 0.0:
        return 0.0
    d = budget.distance_d
    arg = lambda_per_band * math.pi * d * d * br ** (-2.0 / budget.pathloss_alpha)
    return float(cdf.cdf(arg))


def max_density(
    budget: LinkBudget,
    n_subbands: int,
    cdf: EmpiricalInterferenceCdf,
) -> tuple[float, float]:
    """(per-band, total) maximum intensity meeting the outage target."""
    if cdf.alpha != budget.pathloss_alpha:
        raise ValueError("CDF path-loss exponent does not match the budget")
    br = _per_band_bracket(budget, n_subbands)
    if br <= 0.0:
        raise InfeasibleError(
            f"N = {n_subbands} needs an SINR threshold beyond the "
            f"interference-free SNR"
        )
    q = cdf.quantile(budget.outage_eps)
    d = budget.distance_d
    per_band = (q / (math.pi * d * d)) * br ** (2.0 / budget.pathloss_alpha)
    return per_band, n_subbands * per_band


def bandwidth_area_product(
    budget: LinkBudget,
    n_subbands: int,
    cdf: EmpiricalInterferenceCdf,
) -> float:
    """Sub-band width times outage-padded interferer-free area, Hz m^2.

    Equals W / (total max density) exactly; minimized at the optimal N.
    """
    if cdf.alpha != budget.pathloss_alpha:
        raise ValueError("CDF path-loss exponent does not match the budget")
    br = _per_band_bracket(budget, n_subbands)
    if br <= 0.0:
        raise InfeasibleError(f"N = {n_subbands} is infeasible for this budget")
    q = cdf.quantile(budget.outage_eps)
    d = budget.distance_d
    area = math.pi * d * d * br ** (-2.0 / budget.pathloss_alpha)
    return (1.0 / q) * (budget.bandwidth_W / n_subbands) * area


def end_to_end_outage_mc(
    budget: LinkBudget,
    lambda_total: float,
    n_subbands: int,
    plan: MonteCarloPlan,
    threads: int = 1,
) -> float:
    """Fraction of simulated links with SINR at or below threshold.

    Interferers on the reference sub-band form a PPP of intensity
    lambda_total / N (random band choice thins the field); their aggregate
    power is computed per replication and compared against beta(N) with
    per-band noise N0 W / N.
    """
    if lambda_total < 0:
        raise ValueError("lambda_total must be nonnegative")
    if lambda_total == 0.0:
        return 0.0
    z = sample_z(budget.pathloss_alpha, plan, threads=threads)
    return _outage_fraction_from_z(budget, lambda_total, n_subbands, z)


def _outage_fraction_from_z(
    budget: LinkBudget,
    lambda_total: float,
    n_subbands: int,
    z: np.ndarray,
) -> float:
    alpha = budget.pathloss_alpha
    lam_band = lambda_total / n_subbands
    # squared distances scale as u/(pi lam): interference = rho (pi lam)^(a/2) Z^(-a/2)
    interference = budget.power_rho * (math.pi * lam_band) ** (alpha / 2.0) * z ** (-alpha / 2.0)
    eta = budget.noise_density_N0 * budget.bandwidth_W / n_subbands
    sinr = budget.received_power / (eta + interference)
    beta = beta_of_b(b_of_partition(budget, n_subbands))
    return float(np.mean(sinr <= beta))


def calibrated_max_density(
    budget: LinkBudget,
    n_subbands: int,
    z: np.ndarray,
) -> tuple[float, float]:
    """Monte-Carlo-calibrated (per-band, total) density from fresh Z draws.

    Per replication the critical per-band intensity at which the link drops
    into outage is computed; the outage target's order statistic of those
    critical intensities is the calibrated maximum density.
    """
    br = _per_band_bracket(budget, n_subbands)
    if br <= 0.0:
        raise InfeasibleError(f"N = {n_subbands} is infeasible for this budget")
    d = budget.distance_d
    # critical lambda per replication: outage iff Z <= lam pi d^2 br^(-2/a)
    crit = z * br ** (2.0 / budget.pathloss_alpha) / (math.pi * d * d)
    per_band = float(np.quantile(crit, budget.outage_eps))
    return per_band, n_subbands * per_band


# ---------------------------------------------------------------------------
# F_Z cache files: plain-text, versioned, byte-identical for identical keys.

def fz_cache_name(
    alpha: float,
    n_samples: int,
    seed: int,
    truncation_rel_tol: float,
    fading_tag: str = "none",
) -> str:
    return (
        f"fz_v{FZ_FORMAT_VERSION}_a{alpha:g}_n{n_samples}_s{seed}"
        f"_t{truncation_rel_tol:g}_{fading_tag}.txt"
    )


def save_fz_table(path: str, cdf: EmpiricalInterferenceCdf) -> None:
    """Write the versioned quantile-grid table; atomic, lock-protected."""
    grid = np.interp(
        np.linspace(0.0, 1.0, FZ_GRID_POINTS), cdf._positions, cdf.samples
    )
    header = (
        f"bandpart-fz v{FZ_FORMAT_VERSION}\n"
        f"alpha={cdf.alpha!r} n_samples={cdf.n_samples} seed={cdf.seed} "
        f"truncation_rel_tol={cdf.truncation_rel_tol!r} "
        f"fading_tag={cdf.fading_tag} grid_points={FZ_GRID_POINTS}\n"
    )
    body = "".join(f"{float(v)!r}\n" for v in grid)
    lock = path + ".lock"
    fd = os.open(lock, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    try:
        tmp = path + ".tmp"
        with open(tmp, "w") as fh:
            fh.write(header)
            fh.write(body)
        os.replace(tmp, path)
    finally:
        os.close(fd)
        os.unlink(lock)


def load_fz_table(path: str) -> EmpiricalInterferenceCdf:
    with open(path) as fh:
        magic = fh.readline().strip()
        if magic != f"bandpart-fz v{FZ_FORMAT_VERSION}":
            raise ValueError(f"unsupported F_Z table header: {magic!r}")
        meta = dict(item.split("=", 1) for item in fh.readline().split())
        grid = np.array([float(line) for line in fh])
    if grid.size != int(meta["grid_points"]):
        raise ValueError("truncated F_Z table")
    return EmpiricalInterferenceCdf(
        alpha=float(meta["alpha"]),
        samples=grid,
        n_samples=int(meta["n_samples"]),
        seed=int(meta["seed"]),
        truncation_rel_tol=float(meta["truncation_rel_tol"]),
        fading_tag=meta["fading_tag"],
    )
