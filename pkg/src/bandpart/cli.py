"""Command-line front end.

Verbs: solve, sweep, simulate, fz, compare-ds, fading.  Configuration is a
flat key=value file with one section per command (INI syntax); decibel
inputs are accepted only through keys ending in ``_db``.  Outputs are CSV
(default) or JSON rows; identical config + seed reproduces byte-identical
output.

Exit codes: 0 success, 2 infeasible scenario, 3 I/O error, 4 config error.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import math
import os
import sys
import warnings
from dataclasses import dataclass, field

from . import extensions, optimizer, stochgeo
from .params import (
    EbN0, InfeasibleError, LinkBudget, b_of_partition, beta_of_b, eb_n0_of,
)
from .special import awgn_spectral_efficiency

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_IO = 3
EXIT_CONFIG = 4


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    """Parsed configuration: a link budget plus per-command option maps."""

    budget: LinkBudget
    sections: dict[str, dict[str, str]] = field(default_factory=dict)

    def get(self, section: str, key: str, default: str | None = None) -> str | None:
        return self.sections.get(section, {}).get(key, default)

    def get_float(self, section: str, key: str, default: float | None = None) -> float | None:
        raw = self.get(section, key)
        if raw is None:
            return default
        try:
            return float(raw)
        except ValueError as exc:
            raise ConfigError(f"[{section}] {key}: not a number: {raw!r}") from exc

    def get_int(self, section: str, key: str, default: int | None = None) -> int | None:
        raw = self.get(section, key)
        if raw is None:
            return default
        try:
            return int(raw)
        except ValueError as exc:
            raise ConfigError(f"[{section}] {key}: not an integer: {raw!r}") from exc

    def get_list(self, section: str, key: str, default: str | None = None) -> list[float]:
        raw = self.get(section, key, default)
        if raw is None:
            return []
        try:
            return [float(tok) for tok in raw.replace(",", " ").split()]
        except ValueError as exc:
            raise ConfigError(f"[{section}] {key}: bad list: {raw!r}") from exc


_BUDGET_KEYS = (
    "rate_r", "bandwidth_w", "power_rho", "noise_density_n0",
    "distance_d", "pathloss_alpha", "outage_eps",
)


def parse_config(text: str) -> RunConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from exc
    if "budget" not in parser:
        raise ConfigError("missing [budget] section")
    try:
        budget = LinkBudget(
            rate_R=parser.getfloat("budget", "rate_r"),
            bandwidth_W=parser.getfloat("budget", "bandwidth_w"),
            power_rho=parser.getfloat("budget", "power_rho"),
            noise_density_N0=parser.getfloat("budget", "noise_density_n0"),
            distance_d=parser.getfloat("budget", "distance_d"),
            pathloss_alpha=parser.getfloat("budget", "pathloss_alpha"),
            outage_eps=parser.getfloat("budget", "outage_eps"),
        )
    except (configparser.Error, ValueError) as exc:
        raise ConfigError(f"bad [budget] section: {exc}") from exc
    sections = {
        name: dict(parser.items(name))
        for name in parser.sections()
        if name != "budget"
    }
    return RunConfig(budget=budget, sections=sections)


def parse_config_file(path: str) -> RunConfig:
    with open(path) as fh:
        return parse_config(fh.read())


def serialize_config(cfg: RunConfig) -> str:
    """Canonical round-trippable text form of a parsed config."""
    b = cfg.budget
    lines = ["[budget]"]
    for key, value in zip(
        _BUDGET_KEYS,
        (b.rate_R, b.bandwidth_W, b.power_rho, b.noise_density_N0,
         b.distance_d, b.pathloss_alpha, b.outage_eps),
    ):
        lines.append(f"{key} = {value!r}")
    for name in sorted(cfg.sections):
        lines.append("")
        lines.append(f"[{name}]")
        for key in sorted(cfg.sections[name]):
            lines.append(f"{key} = {cfg.sections[name][key]}")
    return "\n".join(lines) + "\n"


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(float(value))  # strips numpy scalar wrappers
    return str(value)


def write_rows(header: list[str], rows: list[list], out, fmt: str) -> None:
    if fmt == "json":
        payload = [dict(zip(header, row)) for row in rows]
        out.write(json.dumps(payload, indent=2, default=_fmt))
        out.write("\n")
    else:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _load_fz(cfg: RunConfig, section: str):
    """F_Z source for a command: explicit quantile value or a cached table."""
    quantile = cfg.get_float(section, "fz_quantile")
    if quantile is not None:
        return quantile
    table = cfg.get(section, "fz_table")
    if table is not None:
        return stochgeo.load_fz_table(table)
    raise ConfigError(f"[{section}] needs fz_quantile or fz_table")


def _plan_from(cfg: RunConfig, section: str, seed_override: int | None) -> stochgeo.MonteCarloPlan:
    seed = seed_override if seed_override is not None else cfg.get_int(section, "seed", 1)
    return stochgeo.MonteCarloPlan(
        seed=seed,
        replications=cfg.get_int(section, "replications", 100_000),
        truncation_rel_tol=cfg.get_float(section, "truncation_rel_tol", 1e-3),
        max_terms=cfg.get_int(section, "max_terms", 200_000),
    )


def _budget_at_eb_n0_db(budget: LinkBudget, db: float) -> LinkBudget:
    """Scale power_rho so the budget hits the requested Eb/N0 (dB)."""
    if budget.noise_density_N0 == 0:
        raise ConfigError("cannot set eb_n0_db on a noiseless budget")
    rho = (
        10.0 ** (db / 10.0)
        * budget.noise_density_N0
        * budget.rate_R
        * budget.distance_d ** budget.pathloss_alpha
    )
    return LinkBudget(
        rate_R=budget.rate_R,
        bandwidth_W=budget.bandwidth_W,
        power_rho=rho,
        noise_density_N0=budget.noise_density_N0,
        distance_d=budget.distance_d,
        pathloss_alpha=budget.pathloss_alpha,
        outage_eps=budget.outage_eps,
    )


# ---------------------------------------------------------------------------
# commands

def cmd_solve(cfg: RunConfig, args) -> int:
    fz = _load_fz(cfg, "solve")
    sol = optimizer.solve(cfg.budget, fz)
    eb = eb_n0_of(cfg.budget)
    rows = [
        ("b_star_bps_hz", sol.b_star),
        ("n_star", sol.n_star),
        ("beta_star_linear", sol.beta_star),
        ("beta_star_db", 10.0 * math.log10(sol.beta_star)),
        ("density_constant", sol.density_constant),
        ("density_per_m2", sol.density_per_m2),
        ("regime", sol.regime),
        ("fixed_point_residual", sol.fixed_point_residual),
        ("eb_n0_db", "inf" if eb.is_infinite else eb.value_db),
    ]
    # regime-limit cross-checks on the reported optimum
    if eb.is_infinite:
        rows.append(("closed_form_b", optimizer.solve_interference_limited(cfg.budget.pathloss_alpha)))
    else:
        rows.append(("awgn_capacity_c", awgn_spectral_efficiency(eb).c_bps_hz))
        b_wide, dens_wide = optimizer.solve_power_limited(eb, cfg.budget.pathloss_alpha)
        rows.append(("power_limited_b_approx", b_wide))
        rows.append(("power_limited_density_approx", dens_wide))
    obj = optimizer.DensityObjective(eb_n0=eb, alpha=cfg.budget.pathloss_alpha)
    rows.append(("grid_oracle_b", optimizer.grid_oracle_argmax(obj, 1e-4)))

    with _open_out(args.out) as out:
        if args.format == "json":
            out.write(json.dumps({k: _fmt(v) for k, v in rows}, indent=2))
            out.write("\n")
        else:
            for key, value in rows:
                out.write(f"{key}={_fmt(value)}\n")
    return EXIT_OK


def cmd_sweep(cfg: RunConfig, args) -> int:
    db_grid = cfg.get_list("sweep", "eb_n0_db")
    alphas = cfg.get_list("sweep", "alpha")
    if not db_grid or not alphas:
        raise ConfigError("[sweep] needs eb_n0_db and alpha lists")
    header = ["eb_n0_db", "alpha", "b_star", "beta_db", "density_constant",
              "c_awgn", "wideband_approx", "status"]
    rows = []
    for alpha in alphas:
        for db in db_grid:
            eb = EbN0.from_db(db)
            try:
                b, _ = optimizer.solve_fixed_point(eb, alpha)
            except InfeasibleError:
                rows.append([db, alpha, "", "", "", "", "", "infeasible"])
                continue
            obj = optimizer.DensityObjective(eb_n0=eb, alpha=alpha)
            b_wide, _ = optimizer.solve_power_limited(eb, alpha)
            rows.append([
                db, alpha, b,
                10.0 * math.log10(beta_of_b(b)),
                optimizer.density_of_b(obj, b),
                awgn_spectral_efficiency(eb).c_bps_hz,
                b_wide, "ok",
            ])
    with _open_out(args.out) as out:
        write_rows(header, rows, out, args.format)
    return EXIT_OK


def cmd_simulate(cfg: RunConfig, args) -> int:
    fz = _load_fz(cfg, "simulate")
    if isinstance(fz, float):
        raise ConfigError("[simulate] needs fz_table (a quantile value is not enough)")
    n_min = cfg.get_int("simulate", "n_min", 1)
    n_max = cfg.get_int("simulate", "n_max", 40)
    plan = _plan_from(cfg, "simulate", args.seed)
    z = stochgeo.sample_z(cfg.budget.pathloss_alpha, plan, threads=args.threads)
    header = ["n", "b", "analytic_total_density", "mc_total_density", "status"]
    rows = []
    for n in range(n_min, n_max + 1):
        b = b_of_partition(cfg.budget, n)
        try:
            _, analytic = stochgeo.max_density(cfg.budget, n, fz)
            _, calibrated = stochgeo.calibrated_max_density(cfg.budget, n, z)
            rows.append([n, b, analytic, calibrated, "ok"])
        except InfeasibleError:
            rows.append([n, b, 0.0, 0.0, "infeasible"])
    with _open_out(args.out) as out:
        write_rows(header, rows, out, args.format)
    return EXIT_OK


def cmd_fz(cfg: RunConfig, args) -> int:
    alpha = cfg.get_float("fz", "alpha", cfg.budget.pathloss_alpha)
    if alpha is None or alpha <= 2:
        raise ConfigError("[fz] alpha must exceed 2")
    seed = args.seed if args.seed is not None else cfg.get_int("fz", "seed", 1)
    plan = stochgeo.MonteCarloPlan(
        seed=seed,
        replications=cfg.get_int("fz", "n_samples", 1_000_000),
        truncation_rel_tol=cfg.get_float("fz", "truncation_rel_tol", 1e-3),
        max_terms=cfg.get_int("fz", "max_terms", 200_000),
    )
    cache_dir = cfg.get("fz", "cache_dir", ".")
    os.makedirs(cache_dir, exist_ok=True)
    name = stochgeo.fz_cache_name(
        alpha, plan.replications, plan.seed, plan.truncation_rel_tol
    )
    path = args.out if args.out else os.path.join(cache_dir, name)
    if os.path.exists(path):
        stochgeo.load_fz_table(path)  # validate; identical key -> keep
        print(path)
        return EXIT_OK
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        cdf = stochgeo.empirical_cdf(alpha, plan, threads=args.threads, on_budget="warn")
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    stochgeo.save_fz_table(path, cdf)
    print(path)
    return EXIT_OK


def cmd_compare_ds(cfg: RunConfig, args) -> int:
    fz = _load_fz(cfg, "compare-ds")
    if isinstance(fz, float):
        raise ConfigError("[compare-ds] needs fz_table")
    n_min = cfg.get_int("compare-ds", "n_min", 1)
    n_max = cfg.get_int("compare-ds", "n_max", 50)
    header = ["n", "ds_density", "fdma_total_density", "status"]
    rows = []
    for n in range(n_min, n_max + 1):
        row = [n]
        try:
            row.append(extensions.ds_density(cfg.budget, n, fz))
        except InfeasibleError:
            row.append("")
        try:
            row.append(stochgeo.max_density(cfg.budget, n, fz)[1])
        except InfeasibleError:
            row.append("")
        row.append("ok" if row[1] != "" else "infeasible")
        rows.append(row)
    with _open_out(args.out) as out:
        write_rows(header, rows, out, args.format)
    return EXIT_OK


def cmd_fading(cfg: RunConfig, args) -> int:
    db_grid = cfg.get_list("fading", "eb_n0_db")
    if not db_grid:
        raise ConfigError("[fading] needs an eb_n0_db list")
    lambda_total = cfg.get_float("fading", "lambda_total")
    if lambda_total is None:
        raise ConfigError("[fading] needs lambda_total")
    n_min = cfg.get_int("fading", "n_min", 1)
    n_max = cfg.get_int("fading", "n_max", 40)
    plan = _plan_from(cfg, "fading", args.seed)
    law = cfg.get("fading", "fading_law", "none")
    nakagami_m = cfg.get_float("fading", "nakagami_m", 1.0)
    distance_law = cfg.get("fading", "distance_law", "fixed")
    d_lo = cfg.get_float("fading", "d_lo", 0.0)
    d_hi = cfg.get_float("fading", "d_hi", 0.0)

    header = ["eb_n0_db", "optimal_n", "outage_at_optimum"]
    rows = []
    for db in db_grid:
        scenario = extensions.FadingScenario(
            budget=_budget_at_eb_n0_db(cfg.budget, db),
            fading_law=law, nakagami_m=nakagami_m,
            distance_law=distance_law, d_lo=d_lo, d_hi=d_hi,
        )
        n_opt = extensions.fading_optimal_n(
            scenario, lambda_total, range(n_min, n_max + 1), plan,
            threads=args.threads,
        )
        outage = extensions.fading_outage(scenario, lambda_total, n_opt, plan)
        rows.append([db, n_opt, outage])
    with _open_out(args.out) as out:
        write_rows(header, rows, out, args.format)
    return EXIT_OK


# ---------------------------------------------------------------------------

class _open_out:
    def __init__(self, path: str | None):
        self.path = path
        self.fh = None

    def __enter__(self):
        if self.path is None:
            return sys.stdout
        self.fh = open(self.path, "w")
        return self.fh

    def __exit__(self, *exc):
        if self.fh is not None:
            self.fh.close()
        return False


_COMMANDS = {
    "solve": cmd_solve,
    "sweep": cmd_sweep,
    "simulate": cmd_simulate,
    "fz": cmd_fz,
    "compare-ds": cmd_compare_ds,
    "fading": cmd_fading,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bandpart",
        description="Bandwidth partition design for decentralized wireless networks",
    )
    parser.add_argument("command", choices=sorted(_COMMANDS))
    parser.add_argument("--config", required=True, help="path to key=value config")
    parser.add_argument("--out", default=None, help="output path (default stdout)")
    parser.add_argument("--seed", type=int, default=None, help="override config seed")
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = parse_config_file(args.config)
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return _COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InfeasibleError as exc:
        print(
            f"error: infeasible scenario: {exc} "
            f"(Eb/N0 must exceed ln 2 = -1.59 dB)",
            file=sys.stderr,
        )
        return EXIT_INFEASIBLE
    except OSError as exc:
        print(f"error: I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
