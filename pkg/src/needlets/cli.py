"""Command-line interface.

Subcommands: constants | variance | mc | excursion | report.
All state comes from a strict YAML config plus a few override flags; no
environment variables are consulted.  Exit codes: 0 success, 2 config or
validation error, 3 numerical failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys

import numpy as np
import yaml

from . import asymptotics, mcharness, polyspectra
from .mcharness import ExperimentConfig
from .model import NeedletWindow
from .polyspectra import PolyspectrumSample, ExcursionSample
from .specfun import indicator_hermite_coeff

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4

_SCHEMA = {
    "spectrum": {"alpha": float, "num_coeffs": list, "den_coeffs": list},
    "window": {"grid_size": int},
    "experiment": {"j": list, "q": list, "z": list,
                   "replicates": int, "master_seed": int},
    "output": {"dir": str, "formats": list},
}

_DEFAULTS = {
    "window": {"grid_size": 16384},
    "experiment": {"z": [-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0]},
    "output": {"dir": "out", "formats": ["csv"]},
}


class ConfigError(Exception):
    pass


def load_config(path) -> dict:
    """Parse and strictly validate the YAML run config."""
    try:
        with open(path) as fh:
            raw = yaml.safe_load(fh)
    except OSError as e:
        raise ConfigError(f"cannot read config: {e}")
    except yaml.YAMLError as e:
        raise ConfigError(f"malformed YAML: {e}")
    if not isinstance(raw, dict):
        raise ConfigError("config must be a mapping of sections")
    cfg = {}
    for section, value in raw.items():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown section '{section}'")
        if not isinstance(value, dict):
            raise ConfigError(f"section '{section}' must be a mapping")
        schema = _SCHEMA[section]
        out = {}
        for key, val in value.items():
            if key not in schema:
                raise ConfigError(f"unknown key '{section}.{key}'")
            want = schema[key]
            if want is float and isinstance(val, int):
                val = float(val)
            if not isinstance(val, want) or isinstance(val, bool):
                raise ConfigError(f"'{section}.{key}' must be {want.__name__}")
            out[key] = val
        cfg[section] = out
    for section in ("spectrum", "experiment"):
        if section not in cfg:
            raise ConfigError(f"missing section '{section}'")
    for section, defaults in _DEFAULTS.items():
        cfg.setdefault(section, {})
        for key, val in defaults.items():
            cfg[section].setdefault(key, val)
    for key in ("alpha", "num_coeffs", "den_coeffs"):
        if key not in cfg["spectrum"]:
            raise ConfigError(f"missing 'spectrum.{key}'")
    for key in ("j", "q", "replicates", "master_seed"):
        if key not in cfg["experiment"]:
            raise ConfigError(f"missing 'experiment.{key}'")
    exp = cfg["experiment"]
    if not exp["q"]:
        raise ConfigError("experiment.q must be nonempty")
    if any((not isinstance(q, int)) or q < 2 for q in exp["q"]):
        raise ConfigError("q must be >= 2")
    if not exp["j"] or any((not isinstance(j, int)) or j < 1 for j in exp["j"]):
        raise ConfigError("j must be a nonempty list of integers >= 1")
    fmts = set(cfg["output"]["formats"])
    if not fmts <= {"csv", "json"}:
        raise ConfigError("output.formats entries must be 'csv' or 'json'")
    return cfg


def experiment_config(cfg, args) -> ExperimentConfig:
    exp = cfg["experiment"]
    seed = args.seed if args.seed is not None else exp["master_seed"]
    threads = args.threads if args.threads is not None else 0
    try:
        return ExperimentConfig(
            alpha=cfg["spectrum"]["alpha"],
            num_coeffs=tuple(cfg["spectrum"]["num_coeffs"]),
            den_coeffs=tuple(cfg["spectrum"]["den_coeffs"]),
            window_grid_size=cfg["window"]["grid_size"],
            j_list=tuple(exp["j"]),
            q_list=tuple(exp["q"]),
            z_list=tuple(float(z) for z in exp["z"]),
            replicates=exp["replicates"],
            master_seed=seed,
            threads=threads,
        )
    except ValueError as e:
        raise ConfigError(str(e))


def _out_dir(cfg, args) -> str:
    return args.out if args.out else cfg["output"]["dir"]


def _mirror_json(csv_path, formats):
    if "json" not in formats:
        return
    with open(csv_path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    with open(os.path.splitext(csv_path)[0] + ".json", "w") as fh:
        json.dump(rows, fh, indent=1)


def _print_plan(ec: ExperimentConfig):
    qmax = max(ec.q_list)
    print("dry run; compute plan:")
    total_nodes = 0
    for j in ec.j_list:
        d = qmax * 2 ** (j + 1)
        n_theta = (d + 2) // 2
        n_phi = d + 1
        nodes = n_theta * n_phi
        total_nodes += nodes * ec.replicates
        print(f"  j={j}: rule degree {d}, grid {n_theta} x {n_phi} "
              f"({nodes} nodes, {nodes * 8 / 1e6:.1f} MB per field)")
    print(f"  replicates: {ec.replicates}, threads: {ec.effective_threads()}")
    print(f"  total node evaluations: {total_nodes:.3g}")


def _constant_for(q, w, alpha):
    if q == 2:
        return [asymptotics.c2(w, alpha)]
    if q == 3:
        return [asymptotics.c3_wigner(w, alpha), asymptotics.c3_bessel(w, alpha)]
    if q == 4:
        return [asymptotics.c4(w, alpha)]
    return [asymptotics.cq_bessel(q, w, alpha)]


def cmd_constants(cfg, args) -> int:
    ec = experiment_config(cfg, args)
    if args.dry_run:
        _print_plan(ec)
        return EXIT_OK
    out = _out_dir(cfg, args)
    os.makedirs(out, exist_ok=True)
    w = NeedletWindow(ec.window_grid_size)
    constants = []
    for q in sorted(set(ec.q_list)):
        constants.extend(_constant_for(q, w, ec.alpha))
    by_route = {(c.q, c.route): c for c in constants}
    for q in sorted(set(ec.q_list)):
        if q == 3:
            a = by_route[(3, "wigner_q3")]
            b = by_route[(3, "bessel_q3")]
            rel = abs(a.value - b.value) / max(abs(b.value), 1e-300)
            print(f"q=3 route agreement: wigner={a.value:.9g} "
                  f"bessel={b.value:.9g} rel gap={rel:.2e}")
    path = os.path.join(out, "constants.csv")
    asymptotics.write_constants_csv(constants, path)
    _mirror_json(path, cfg["output"]["formats"])
    for c in constants:
        print(f"c_{c.q} [{c.route}] = {c.value:.12g} +- {c.quadrature_error:.2g}"
              + ("  (flagged: not separated from zero)" if c.flagged_near_zero else ""))
    return EXIT_OK


def cmd_variance(cfg, args) -> int:
    ec = experiment_config(cfg, args)
    if args.dry_run:
        _print_plan(ec)
        return EXIT_OK
    out = _out_dir(cfg, args)
    os.makedirs(out, exist_ok=True)
    w = NeedletWindow(ec.window_grid_size)
    spec = ec.spectrum()
    cq = {}
    for q in sorted(set(ec.q_list)):
        cq[q] = _constant_for(q, w, ec.alpha)[0].value
    rows = []
    for q in sorted(set(ec.q_list)):
        for j in sorted(set(ec.j_list)):
            var = asymptotics.variance_exact(j, q, spec, w)
            scaled = 4.0 ** j * var / math.factorial(q)
            rows.append((j, q, var, scaled, scaled / cq[q]))
            print(f"j={j} q={q}: var={var:.9g} scaled={scaled:.9g} "
                  f"ratio_to_cq={scaled / cq[q]:.6f}")
    path = os.path.join(out, "variance_exact.csv")
    asymptotics.write_variance_csv(rows, path)
    _mirror_json(path, cfg["output"]["formats"])
    return EXIT_OK


def cmd_mc(cfg, args) -> int:
    ec = experiment_config(cfg, args)
    if args.dry_run:
        _print_plan(ec)
        return EXIT_OK
    out = _out_dir(cfg, args)
    os.makedirs(out, exist_ok=True)
    w = NeedletWindow(ec.window_grid_size)
    spec = ec.spectrum()
    result = mcharness.run_experiment(
        ec, checkpoint_dir=os.path.join(out, "checkpoints"))
    fmts = cfg["output"]["formats"]

    nu_rows = [PolyspectrumSample(j=j, q=q, value=float(v), replicate_id=rep)
               for (j, q), xs in sorted(result.nu_samples.items())
               for rep, v in enumerate(xs)]
    path = os.path.join(out, "nu_samples.csv")
    polyspectra.write_nu_csv(nu_rows, path)
    _mirror_json(path, fmts)

    var_rows = []
    cq_cache = {}
    for (j, q), xs in sorted(result.nu_samples.items()):
        if q not in cq_cache:
            cq_cache[q] = _constant_for(q, w, ec.alpha)[0].value
        s = next(s for s in result.summaries
                 if s.kind == "nu" and s.j == j and s.q == q)
        ve = asymptotics.variance_exact(j, q, spec, w)
        scaled = 4.0 ** j * ve / math.factorial(q)
        var_rows.append((j, q, s.variance, s.se_variance, ve, scaled,
                         cq_cache[q], scaled / cq_cache[q]))
        z = (s.variance - ve) / s.se_variance if s.se_variance else math.nan
        print(f"j={j} q={q}: var_mc={s.variance:.6g} (se {s.se_variance:.2g}) "
              f"var_exact={ve:.6g} [{z:+.2f} se]")
    path = os.path.join(out, "variance_mc.csv")
    mcharness.write_mc_variance_csv(var_rows, path)
    _mirror_json(path, fmts)

    cum_rows = []
    for (j, q), xs in sorted(result.nu_samples.items()):
        s = next(s for s in result.summaries
                 if s.kind == "nu" and s.j == j and s.q == q)
        cum_rows.append((j, q, s.k4, s.se_k4, s.k4 / s.variance ** 2))
    path = os.path.join(out, "cumulants.csv")
    mcharness.write_cumulant_csv(cum_rows, path)
    _mirror_json(path, fmts)

    dist_rows = []
    for s in result.summaries:
        label = f"nu_q{s.q}" if s.kind == "nu" else f"phi_z{s.z:g}"
        dist_rows.append((s.j, label, s.ks, s.w1, s.se_w1))
    path = os.path.join(out, "distances.csv")
    mcharness.write_distance_csv(dist_rows, path)
    _mirror_json(path, fmts)
    print(f"wrote tables to {out}")
    return EXIT_OK


def cmd_excursion(cfg, args) -> int:
    ec = experiment_config(cfg, args)
    if args.dry_run:
        _print_plan(ec)
        return EXIT_OK
    out = _out_dir(cfg, args)
    os.makedirs(out, exist_ok=True)
    result = mcharness.run_experiment(
        ec, checkpoint_dir=os.path.join(out, "checkpoints"))
    fmts = cfg["output"]["formats"]

    exc_rows = []
    for (j, z), xs in sorted(result.phi_samples.items()):
        defects = result.defect_samples[j]
        for rep, v in enumerate(xs):
            exc_rows.append(ExcursionSample(
                j=j, z=z, phi_value=float(v),
                defect=float(defects[rep]), replicate_id=rep))
    path = os.path.join(out, "excursion_samples.csv")
    polyspectra.write_excursion_csv(exc_rows, path)
    _mirror_json(path, fmts)

    # truncated chaos expansion per replicate from the nu samples, and the
    # variance ratio of the partial sum to the scaled excursion measure
    order = max(ec.q_list)
    ratio_path = os.path.join(out, "expansion_ratio.csv")
    with open(ratio_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["j", "z", "order", "var_ratio"])
        for (j, z), phis in sorted(result.phi_samples.items()):
            tilde = np.zeros(len(phis))
            for q in ec.q_list:
                coef = indicator_hermite_coeff(q, z) / math.factorial(q)
                tilde += coef * result.nu_samples[(j, q)]
            tilde *= 2.0 ** j
            var_phi = np.var(2.0 ** j * np.asarray(phis), ddof=1)
            ratio = float(np.var(tilde, ddof=1) / var_phi) if var_phi > 0 else math.nan
            writer.writerow([j, f"{z:.17g}", order, f"{ratio:.17g}"])
    _mirror_json(ratio_path, fmts)

    clt_rows = []
    for z in ec.z_list:
        by_j = {j: result.phi_samples[(j, float(z))] for j in ec.j_list}
        try:
            rows = mcharness.excursion_clt_table(by_j, z)
        except ValueError:
            continue
        for r in rows:
            clt_rows.append((r.j, f"phi_z{r.z:g}", r.ks, r.w1, r.se_w1))
            print(f"j={r.j} z={r.z:g}: ks={r.ks:.4f} w1={r.w1:.4f} "
                  f"(se {r.se_w1:.4f}) skew={r.skewness:+.3f}")
    path = os.path.join(out, "excursion_clt.csv")
    mcharness.write_distance_csv(clt_rows, path)
    _mirror_json(path, fmts)
    print(f"wrote excursion tables to {out}")
    return EXIT_OK


def cmd_report(cfg, args) -> int:
    out = _out_dir(cfg, args)
    tables = ["constants.csv", "variance_exact.csv", "variance_mc.csv",
              "cumulants.csv", "distances.csv", "excursion_clt.csv",
              "expansion_ratio.csv"]
    found = False
    for name in tables:
        path = os.path.join(out, name)
        if not os.path.exists(path):
            continue
        found = True
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        print(f"--- {name} ({len(rows) - 1} rows)")
        for row in rows[:11]:
            print("  " + ", ".join(row))
        if len(rows) > 11:
            print(f"  ... {len(rows) - 11} more")
    if not found:
        print(f"no result tables under '{out}'", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


_COMMANDS = {
    "constants": cmd_constants,
    "variance": cmd_variance,
    "mc": cmd_mc,
    "excursion": cmd_excursion,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="needlets",
        description="Needlet polyspectra: simulation, exact variances, "
                    "and high-frequency limit constants.")
    parser.add_argument("command", choices=sorted(_COMMANDS))
    parser.add_argument("--config", required=True, help="YAML run config")
    parser.add_argument("--out", default=None, help="output directory override")
    parser.add_argument("--threads", type=int, default=None)
    parser.add_argument("--seed", type=int, default=None,
                        help="master seed override")
    parser.add_argument("--dry-run", action="store_true",
                        help="validate and print the compute plan only")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return _COMMANDS[args.command](cfg, args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (ArithmeticError, RuntimeError, ValueError) as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
