"""Experiment driver: every module behind a reproducible subcommand.

Each command reads an optional INI config ([environment], [walk],
[experiment] sections), runs its experiment, prints one PASS/FAIL line per
check, and writes plot-ready CSV artifacts plus one JSON summary into the
output directory.  Exit codes: 0 all checks passed, 1 a check failed,
2 configuration error, 3 resource exhaustion (scan, memory, or solver
iteration budget).  Reruns with identical settings produce byte-identical
artifacts except for the timestamp field in the JSON summary.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import replace
from datetime import datetime, timezone

import numpy as np

from . import __version__, corrector, isoper, kernel, network, stats
from . import walk as walk_mod
from .env import Environment, EnvironmentConfig, environment_from_section, \
    read_config_file
from .errors import ConfigError, MemoryBudgetExceeded, NoConvergence, \
    ScanExceeded

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_RESOURCE = 3

_RESOURCE_ERRORS = (ScanExceeded, MemoryBudgetExceeded, NoConvergence,
                    MemoryError)

_WALK_KEYS = {"steps", "replicas", "alpha", "rng_seed"}

# default environment / walk / experiment settings per command
_DEFAULTS = {
    "simulate": (
        {"dimension": 2, "kind": "bernoulli", "density": 0.5, "seed": 1},
        {"steps": 1000, "replicas": 1, "alpha": 0.0, "rng_seed": None},
        {"mode": "quenched"},
    ),
    "lln": (
        {"dimension": 2, "kind": "full", "seed": 1},
        {"steps": 10_000, "replicas": 2000, "alpha": 0.0, "rng_seed": None},
        {},
    ),
    "clt1d": (
        {"dimension": 1, "kind": "full", "seed": 1},
        {"steps": 10_000, "replicas": 2000, "alpha": 0.0, "rng_seed": None},
        {},
    ),
    "clt-hd": (
        {"dimension": 2, "kind": "bernoulli", "density": 0.5, "seed": 2},
        {"steps": 1000, "replicas": 2000, "alpha": 0.0, "rng_seed": None},
        {"side": 64},
    ),
    "recurrence2d": (
        {"dimension": 2, "kind": "bernoulli", "density": 0.5, "seed": 1},
        None,
        {"radius": 300, "cutsets": 200},
    ),
    "transience": (
        {"dimension": 3, "kind": "bernoulli", "density": 0.7, "seed": 2},
        None,
        {"steps": 60},
    ),
    "isoperimetry": (
        {"dimension": 2, "kind": "bernoulli", "density": 0.7, "seed": 1},
        None,
        {"samples": 2000, "box": 12, "profile_side": 12},
    ),
    "corrector": (
        {"dimension": 2, "kind": "bernoulli", "density": 0.5, "seed": 0},
        None,
        {"side": 32, "epsilon_frac": 0.05},
    ),
    "entropy": (
        {"dimension": 2, "kind": "bernoulli", "density": 0.5, "seed": 1},
        None,
        {"steps": 60},
    ),
    "expsum": (
        {"dimension": 2, "kind": "full", "seed": 0},
        None,
        {"kmax": 10},
    ),
}

_EXPERIMENT_TYPES = {
    "mode": str, "side": int, "radius": int, "cutsets": int, "steps": int,
    "samples": int, "box": int, "profile_side": int, "epsilon_frac": float,
    "kmax": int,
}


class ExperimentSpec:
    """Fully resolved inputs of one command invocation."""

    def __init__(self, command, env_cfg, walk_cfg, experiment, out_dir, seeds):
        self.command = command
        self.env_cfg = env_cfg
        self.walk_cfg = walk_cfg
        self.experiment = experiment
        self.out_dir = out_dir
        self.seeds = seeds
        self.threads = 1


def _parse_walk_section(section, defaults):
    out = dict(defaults)
    unknown = set(section.keys()) - _WALK_KEYS
    if unknown:
        raise ConfigError(f"unknown [walk] keys: {sorted(unknown)}")
    for key in section:
        if key in ("steps", "replicas"):
            out[key] = section.getint(key)
        elif key == "alpha":
            out[key] = section.getfloat(key)
        elif key == "rng_seed":
            out[key] = int(section.get(key), 0)
    return out


def _parse_experiment_section(section, defaults):
    out = dict(defaults)
    unknown = set(section.keys()) - set(defaults)
    if unknown:
        raise ConfigError(
            f"unknown [experiment] keys for this command: {sorted(unknown)}"
        )
    for key in section:
        caster = _EXPERIMENT_TYPES[key]
        try:
            out[key] = caster(section.get(key))
        except ValueError as exc:
            raise ConfigError(f"bad [experiment] value for {key}") from exc
    return out


def build_spec(command: str, args) -> ExperimentSpec:
    env_defaults, walk_defaults, exp_defaults = _DEFAULTS[command]
    env_cfg = EnvironmentConfig(**env_defaults)
    walk_kv = dict(walk_defaults) if walk_defaults is not None else None
    experiment = dict(exp_defaults)

    if args.config is not None:
        parser = read_config_file(args.config)
        if parser.has_section("environment"):
            env_cfg = environment_from_section(parser["environment"])
        if parser.has_section("walk"):
            if walk_kv is None:
                raise ConfigError(f"command {command} takes no [walk] section")
            walk_kv = _parse_walk_section(parser["walk"], walk_kv)
        if parser.has_section("experiment"):
            experiment = _parse_experiment_section(parser["experiment"],
                                                   experiment)
        known = {"environment", "walk", "experiment"}
        extra = set(parser.sections()) - known
        if extra:
            raise ConfigError(f"unknown config sections: {sorted(extra)}")

    if args.seed is not None:
        env_cfg = replace(env_cfg, seed=args.seed)
        if walk_kv is not None and walk_kv.get("rng_seed") is None:
            walk_kv["rng_seed"] = args.seed

    walk_cfg = None
    seeds = {"environment": env_cfg.seed}
    if walk_kv is not None:
        if walk_kv.get("rng_seed") is None:
            walk_kv["rng_seed"] = env_cfg.seed
        walk_cfg = walk_mod.WalkConfig(
            steps=walk_kv["steps"], replicas=walk_kv["replicas"],
            alpha=walk_kv["alpha"], rng_seed=walk_kv["rng_seed"],
        )
        seeds["walk_rng"] = walk_cfg.rng_seed

    out_dir = args.out or os.environ.get("PPWALK_OUT") or "."
    spec = ExperimentSpec(command, env_cfg, walk_cfg, experiment, out_dir,
                          seeds)
    spec.threads = args.threads
    return spec


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(x) for x in row])
    return buf.getvalue()


def _report_csv(entries) -> str:
    """entries: (metric, value, threshold, passed-or-empty)."""
    return _csv_text(["metric", "value", "threshold", "passed"], entries)


# ---------------------------------------------------------------------------
# command implementations: each returns (results, checks, files) where files
# is a list of (filename, text or writer-callable)

def _cmd_simulate(spec: ExperimentSpec):
    env_cfg, wc = spec.env_cfg, spec.walk_cfg
    mode = spec.experiment["mode"]
    if mode not in ("quenched", "annealed"):
        raise ConfigError(f"mode must be quenched or annealed, got {mode!r}")
    if mode == "quenched":
        trajs = walk_mod.run_quenched(Environment(env_cfg), wc)
    else:
        trajs = walk_mod.run_annealed(wc, env_cfg)
    ends = walk_mod.endpoint_matrix(trajs)
    summary = stats.summarize(ends)
    results = {
        "mode": mode,
        "steps": wc.steps,
        "replicas": wc.replicas,
        "endpoint_mean": summary.mean.tolist(),
        "endpoint_min": summary.minimum.tolist(),
        "endpoint_max": summary.maximum.tolist(),
    }
    files = []
    meta = {"kind": env_cfg.kind, "steps": wc.steps, "mode": mode}
    for r, traj in enumerate(trajs):
        name = f"walk_r{r:04d}.csv"
        files.append((name, lambda path, t=traj: walk_mod.write_trajectory_csv(
            path, t, meta=meta)))
    return results, {}, files


def _cmd_lln(spec: ExperimentSpec):
    env_cfg, wc = spec.env_cfg, spec.walk_cfg
    ends = walk_mod.sample_endpoints_annealed(
        env_cfg, wc.steps, wc.replicas, wc.rng_seed, threads=spec.threads)
    summary = stats.velocity_from_endpoints(ends, wc.steps)
    std = np.sqrt(np.diag(summary.covariance))
    bound = 4.0 * std / math.sqrt(wc.replicas)
    ok = bool(np.all(np.abs(summary.mean) <= bound))
    results = {
        "velocity_mean": summary.mean.tolist(),
        "velocity_std": std.tolist(),
        "band": bound.tolist(),
    }
    checks = {"velocity_within_band": ok}
    entries = [
        (f"velocity_mean_{j + 1}", summary.mean[j], bound[j],
         abs(summary.mean[j]) <= bound[j])
        for j in range(env_cfg.dimension)
    ]
    return results, checks, [("lln.csv", _report_csv(entries))]


def _cmd_clt1d(spec: ExperimentSpec):
    env_cfg, wc = spec.env_cfg, spec.walk_cfg
    if env_cfg.dimension != 1:
        raise ConfigError("clt1d needs a one-dimensional environment")
    sigma = env_cfg.mean_gap()
    ends = walk_mod.sample_endpoints_annealed(
        env_cfg, wc.steps, wc.replicas, wc.rng_seed, threads=spec.threads)
    z = ends[:, 0] / math.sqrt(wc.steps)
    var = float(z.var(ddof=1))
    ratio = var / sigma**2
    ks = stats.ks_normal_test(z, sigma)
    checks = {
        "variance_within_10pct": abs(ratio - 1.0) <= 0.10,
        "ks_normal_at_1pct": not ks.reject_at_1pct,
    }
    results = {
        "sigma_null": sigma,
        "variance": var,
        "variance_ratio": ratio,
        "ks_statistic": ks.statistic,
        "ks_p_value": ks.p_value,
    }
    entries = [
        ("variance_ratio", ratio, "within 0.1 of 1",
         checks["variance_within_10pct"]),
        ("ks_p_value", ks.p_value, "> 0.01", checks["ks_normal_at_1pct"]),
    ]
    return results, checks, [("clt1d.csv", _report_csv(entries))]


def _cmd_clt_hd(spec: ExperimentSpec):
    env_cfg, wc = spec.env_cfg, spec.walk_cfg
    if env_cfg.dimension < 2:
        raise ConfigError("clt-hd needs dimension >= 2")
    torus = corrector.TorusEnvironment.from_config(env_cfg,
                                                   spec.experiment["side"])
    field = corrector.corrector_field_extrapolated(torus)
    dhat = corrector.estimate_one_step_covariance(field)
    M = corrector.martingale_endpoints(field, wc.steps, wc.replicas,
                                       wc.rng_seed, threads=spec.threads)
    Z = M / math.sqrt(wc.steps)
    emp = np.atleast_2d(np.cov(Z.T))
    dcorr = np.sqrt(np.outer(np.diag(emp), np.diag(emp)))
    corr = emp / dcorr
    off = corr[~np.eye(len(corr), dtype=bool)]
    rho = float(np.abs(off).max())
    frob = float(np.linalg.norm(emp - dhat) / np.linalg.norm(dhat))
    ks_ps = []
    for ax in range(env_cfg.dimension):
        ks = stats.ks_normal_test(Z[:, ax], math.sqrt(dhat[ax, ax]))
        ks_ps.append(ks.p_value)
    checks = {
        "off_diagonal_rho": rho < 0.03,
        "per_axis_ks_at_1pct": all(p > 0.01 for p in ks_ps),
        "covariance_matches_dhat": frob <= 0.10,
    }
    results = {
        "side": spec.experiment["side"],
        "dhat": dhat.tolist(),
        "empirical_covariance": emp.tolist(),
        "max_abs_rho": rho,
        "frobenius_rel_err": frob,
        "ks_p_values": ks_ps,
    }
    entries = [
        ("max_abs_rho", rho, "< 0.03", checks["off_diagonal_rho"]),
        ("frobenius_rel_err", frob, "<= 0.1",
         checks["covariance_matches_dhat"]),
    ] + [
        (f"ks_p_axis_{ax + 1}", p, "> 0.01", p > 0.01)
        for ax, p in enumerate(ks_ps)
    ]
    return results, checks, [("clt-hd.csv", _report_csv(entries))]


def _cmd_recurrence2d(spec: ExperimentSpec):
    env_cfg = spec.env_cfg
    if env_cfg.dimension != 2:
        raise ConfigError("recurrence2d needs dimension 2")
    R, N = spec.experiment["radius"], spec.experiment["cutsets"]
    if R < N + 1:
        raise ConfigError(f"radius {R} too small for {N} cutsets")
    net = network.build_cut_network(Environment(env_cfg), R)
    rep = network.cutset_conductances(net, N)
    lo = max(10, N // 10)
    win = rep.n >= lo
    slope = float(np.polyfit(np.log(rep.n[win]),
                             rep.partial_sum[win], 1)[0])
    checks = {"divergence_slope_positive": slope > 0.0}
    results = {
        "radius": R,
        "cutsets": N,
        "slope_vs_log_n": slope,
        "nash_williams_sum": float(rep.partial_sum[-1]),
        "fit_window": [int(lo), int(N)],
    }
    rows = zip(rep.n.tolist(), rep.conductance.tolist(),
               rep.partial_sum.tolist())
    return results, checks, [
        ("recurrence2d.csv", _csv_text(["n", "C_Pi_n", "partial_sum"], rows)),
    ]


def _cmd_transience(spec: ExperimentSpec):
    env_cfg = spec.env_cfg
    N = spec.experiment["steps"]
    if N < 8:
        raise ConfigError("transience needs at least 8 steps")
    series = kernel.displacement_entropy_series(Environment(env_cfg), N)
    diag = series.diagonal
    half = np.arange(N // 2 + 1)
    even_diag = diag[2 * half]
    green = np.cumsum(even_diag)
    lo, hi = N // 4, N // 2
    ks = np.arange(lo, hi + 1)
    slope = float(np.polyfit(np.log(ks), np.log(diag[2 * ks]), 1)[0])
    increment = float(diag[2 * (N // 2)])
    inc_ratio = increment / float(green[-1])
    checks = {
        "diagonal_slope_in_range": -1.65 <= slope <= -1.35,
        "green_increment_small": inc_ratio < 1e-2,
    }
    results = {
        "steps": N,
        "slope_log_diag_vs_log_n": slope,
        "fit_window_half_steps": [int(lo), int(hi)],
        "green_partial_sum": float(green[-1]),
        "green_increment_ratio": inc_ratio,
    }
    rows = zip(range(N + 1), diag.tolist(), series.M.tolist(),
               series.Q.tolist(), series.S.tolist())
    return results, checks, [
        ("transience.csv", _csv_text(["n", "p_n_00", "M", "Q", "S"], rows)),
    ]


def _cmd_isoperimetry(spec: ExperimentSpec):
    env_cfg = spec.env_cfg
    d = env_cfg.dimension
    n_samples = spec.experiment["samples"]
    box = spec.experiment["box"]
    rng = np.random.default_rng(env_cfg.seed)
    bad_cardinality = bad_projection = bad_energy = bad_fixed = 0
    bad_bound = 0
    for _ in range(n_samples):
        A = isoper.random_finite_set(rng, box, d)
        B = isoper.compress(A)
        if len(B) != len(A):
            bad_cardinality += 1
        pa, pb = isoper.projection_sizes(A), isoper.projection_sizes(B)
        if any(b > a for a, b in zip(pa, pb)):
            bad_projection += 1
        if isoper.energy(B) > isoper.energy(A):
            bad_energy += 1
        if isoper.compress(B) != B:
            bad_fixed += 1
        if d == 2 and not isoper.projection_bound_check(A).ok:
            bad_bound += 1
    checks = {
        "cardinality_preserved": bad_cardinality == 0,
        "projections_never_grow": bad_projection == 0,
        "energy_never_grows": bad_energy == 0,
        "fixed_point_reached": bad_fixed == 0,
    }
    if d == 2:
        checks["max_projection_at_least_sqrt"] = bad_bound == 0
    side = spec.experiment["profile_side"]
    env = Environment(env_cfg)
    volumes = [m**d for m in range(1, side + 1)]
    profile = isoper.profile_upper_envelope(env, side, volumes)
    results = {
        "samples": n_samples,
        "box": box,
        "violations": {
            "cardinality": bad_cardinality, "projection": bad_projection,
            "energy": bad_energy, "fixed_point": bad_fixed,
            "sqrt_bound": bad_bound,
        },
    }
    rows = [(p.u, p.phi, p.u ** (1.0 / d) * p.phi) for p in profile]
    return results, checks, [
        ("isoperimetry.csv", _csv_text(["u", "phi", "u^(1/d)*phi"], rows)),
    ]


def _cmd_corrector(spec: ExperimentSpec):
    env_cfg = spec.env_cfg
    L = spec.experiment["side"]
    eps_frac = spec.experiment["epsilon_frac"]
    torus = corrector.TorusEnvironment.from_config(env_cfg, L)
    field = corrector.corrector_field_extrapolated(torus)
    ladder = field.meta["ladder"]
    harm_ok = all(
        rung["harm_residual"] <= rung["epsilon"] * (1.0 + rung["psi_inf"])
        for rung in ladder
    )
    shift_dev = 0.0
    for col in range(2 * torus.d):
        dev = np.abs((field.chi[torus.nbr[:, col]] - field.chi)
                     .mean(axis=0)).max()
        shift_dev = max(shift_dev, float(dev))
    scan = corrector.sublinearity_scan(field, torus, eps_frac)
    dhat = corrector.estimate_one_step_covariance(field)
    checks = {
        "harmonicity_bound_every_solve": harm_ok,
        "shift_mean_zero": shift_dev <= 1e-10,
    }
    results = {
        "side": L,
        "occupied_sites": torus.n_sites,
        "axis_max": [float(a) for a in scan.axis_max],
        "large_chi_density": scan.density,
        "box_radius": scan.box_radius,
        "epsilon_frac": eps_frac,
        "shift_mean_deviation": shift_dev,
        "dhat": dhat.tolist(),
        "solve_log": [
            {"epsilon": r["epsilon"], "iterations": r["iterations"],
             "residual": r["residual"]} for r in ladder
        ],
    }
    field_rows = [
        list(map(int, torus.sites[i])) + [float(c) for c in field.chi[i]]
        for i in range(torus.n_sites)
    ]
    head = [f"x_{j + 1}" for j in range(torus.d)] + \
           [f"chi_{j + 1}" for j in range(torus.d)]
    solve_rows = [(r["epsilon"], r["iterations"], r["residual"])
                  for r in ladder]
    return results, checks, [
        ("corrector_field.csv", _csv_text(head, field_rows)),
        ("corrector_solves.csv",
         _csv_text(["epsilon", "iterations", "residual"], solve_rows)),
    ]


def _cmd_entropy(spec: ExperimentSpec):
    env_cfg = spec.env_cfg
    N = spec.experiment["steps"]
    if N < 50:
        raise ConfigError("entropy needs at least 50 steps for the checks")
    series = kernel.displacement_entropy_series(Environment(env_cfg), N)
    rep = kernel.check_inequalities(series, raise_on_failure=False)
    checks = {
        "q_monotone": rep.q_monotone,
        "q_slope": rep.q_slope_ok,
        "ratio_floor_positive": rep.ratio_floor_ok,
        "increment_bound": rep.increment_ok,
        "diffusive_spread": rep.diffusive_ok,
    }
    results = {
        "steps": N,
        "q_slope": rep.q_slope,
        "ratio_floor": rep.ratio_floor,
        "diffusive_spread": rep.diffusive_spread,
        "final_support": int(series.support[-1]),
        "failures": [[name, int(idx)] for name, idx in rep.failures],
    }
    rows = zip(range(N + 1), series.diagonal.tolist(), series.M.tolist(),
               series.Q.tolist(), series.S.tolist())
    return results, checks, [
        ("entropy.csv", _csv_text(["n", "p_n_00", "M", "Q", "S"], rows)),
    ]


def _cmd_expsum(spec: ExperimentSpec):
    d = spec.env_cfg.dimension
    kmax = spec.experiment["kmax"]
    grid = 2.0 ** -np.arange(kmax + 1)
    rep = stats.exp_sum_bound_check(grid, d)
    checks = {
        "scaled_sum_stable": rep.stable,
        "sum_monotone_in_a": rep.monotone,
    }
    results = {
        "dimension": d,
        "kmax": kmax,
        "sup_product": rep.sup_product,
        "ratio_last_first": rep.ratio_last_first,
    }
    rows = zip(rep.a_grid.tolist(), rep.sums.tolist(), rep.products.tolist())
    return results, checks, [
        ("expsum.csv", _csv_text(["a", "sum", "product"], rows)),
    ]


_COMMANDS = {
    "simulate": _cmd_simulate,
    "lln": _cmd_lln,
    "clt1d": _cmd_clt1d,
    "clt-hd": _cmd_clt_hd,
    "recurrence2d": _cmd_recurrence2d,
    "transience": _cmd_transience,
    "isoperimetry": _cmd_isoperimetry,
    "corrector": _cmd_corrector,
    "entropy": _cmd_entropy,
    "expsum": _cmd_expsum,
}


def _parse_seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return value


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ppwalk",
        description="random walks on discrete point processes: experiments "
                    "with CSV/JSON artifacts",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", metavar="PATH", default=None,
                       help="INI file with [environment]/[walk]/[experiment]")
        p.add_argument("--seed", type=_parse_seed, default=None,
                       help="master seed; overrides the environment seed")
        p.add_argument("--threads", type=int, default=1,
                       help="replica-level worker threads")
        p.add_argument("--out", metavar="DIR", default=None,
                       help="output directory (default: $PPWALK_OUT or .)")
    return parser


def _spec_config_echo(spec: ExperimentSpec) -> dict:
    echo = {"environment": spec.env_cfg.describe(),
            "experiment": dict(spec.experiment)}
    if spec.walk_cfg is not None:
        echo["walk"] = {
            "steps": spec.walk_cfg.steps,
            "replicas": spec.walk_cfg.replicas,
            "alpha": spec.walk_cfg.alpha,
            "rng_seed": spec.walk_cfg.rng_seed,
        }
    return echo


def run(spec: ExperimentSpec) -> int:
    results, checks, files = _COMMANDS[spec.command](spec)
    passed = all(checks.values()) if checks else True
    summary = {
        "command": spec.command,
        "version": __version__,
        "seeds": spec.seeds,
        "config": _spec_config_echo(spec),
        "results": results,
        "checks": {k: bool(v) for k, v in checks.items()},
        "passed": passed,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    os.makedirs(spec.out_dir, exist_ok=True)
    for name, content in files:
        path = os.path.join(spec.out_dir, name)
        if callable(content):
            content(path)
        else:
            with open(path, "w", newline="") as fh:
                fh.write(content)
    json_path = os.path.join(spec.out_dir, f"{spec.command}.json")
    with open(json_path, "w") as fh:
        json.dump(summary, fh, sort_keys=True, indent=2)
        fh.write("\n")
    for name, ok in checks.items():
        print(("PASS " if ok else "FAIL ") + name)
    print(f"wrote {json_path}")
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        spec = build_spec(args.command, args)
        return run(spec)
    except ConfigError as exc:
        print(json.dumps({"error": "ConfigError", "message": str(exc)}),
              file=sys.stderr)
        return EXIT_CONFIG
    except _RESOURCE_ERRORS as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
