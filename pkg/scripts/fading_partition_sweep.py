#!/usr/bin/env python3
"""Optimal sub-band count versus Eb/N0 under fading.

Monte Carlo search for the outage-minimizing N on a 5 MHz / 1 Mbps
scenario at fixed transmitter intensity 0.01/pi, comparing no fading,
Rayleigh, and Nakagami-5.  As Eb/N0 grows the optimum converges to the
interference-limited partition (N = 11-12 here) for every law.
"""
import argparse
import math

from bandpart import FadingScenario, MonteCarloPlan, fading_optimal_n, fading_outage
from bandpart.params import LinkBudget


def budget_at(db: float) -> LinkBudget:
    n0, rate, d, alpha = 1e-6, 1e6, 10.0, 4.0
    rho = 10.0 ** (db / 10.0) * n0 * rate * d ** alpha
    return LinkBudget(
        rate_R=rate, bandwidth_W=5e6, power_rho=rho, noise_density_N0=n0,
        distance_d=d, pathloss_alpha=alpha, outage_eps=0.1,
    )


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--replications", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--db-grid", type=float, nargs="+",
                    default=[0, 5, 10, 15, 20, 25, 30])
    args = ap.parse_args()

    lam = 0.01 / math.pi
    plan = MonteCarloPlan(seed=args.seed, replications=args.replications)
    laws = [("none", 1.0), ("rayleigh", 1.0), ("nakagami", 5.0)]

    print("eb_n0_db " + " ".join(f"n_{law}{'' if m == 1 else int(m)}" for law, m in laws))
    for db in args.db_grid:
        row = [f"{db:g}"]
        for law, m in laws:
            scenario = FadingScenario(
                budget=budget_at(db), fading_law=law, nakagami_m=m)
            n = fading_optimal_n(scenario, lam, range(1, 21), plan,
                                 threads=args.threads)
            row.append(str(n))
        print(" ".join(row))


if __name__ == "__main__":
    main()
