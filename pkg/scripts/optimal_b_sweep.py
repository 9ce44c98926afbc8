#!/usr/bin/env python3
"""Sweep the optimal spectral efficiency b* over Eb/N0 and path loss.

Prints, for each (alpha, Eb/N0) pair, the exact fixed-point optimum, the
AWGN boundary C, and both limiting approximations (interference-limited
and wideband).  Useful for eyeballing where each regime takes over.
"""
import argparse
import math

from bandpart import (
    EbN0,
    InfeasibleError,
    awgn_spectral_efficiency,
    solve_fixed_point,
    solve_interference_limited,
    solve_power_limited,
)


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--alphas", type=float, nargs="+", default=[3.0, 4.0])
    ap.add_argument("--db-min", type=float, default=-1.5)
    ap.add_argument("--db-max", type=float, default=40.0)
    ap.add_argument("--db-step", type=float, default=0.5)
    args = ap.parse_args()

    print("alpha eb_n0_db b_star c_awgn wideband_b interference_limited_b")
    for alpha in args.alphas:
        b_inf = solve_interference_limited(alpha)
        db = args.db_min
        while db <= args.db_max + 1e-9:
            eb = EbN0.from_db(db)
            try:
                b, _ = solve_fixed_point(eb, alpha)
            except InfeasibleError:
                db += args.db_step
                continue
            c = awgn_spectral_efficiency(eb).c_bps_hz
            b_wide, _ = solve_power_limited(eb, alpha)
            print(f"{alpha:g} {db:.1f} {b:.5f} {c:.5f} {b_wide:.5f} {b_inf:.5f}")
            db += args.db_step


if __name__ == "__main__":
    main()
