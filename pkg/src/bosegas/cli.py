"""Batch command-line front end: config-driven runs with CSV outputs.

Configs are INI-style key-value text. Outputs are CSV tables with
'#'-prefixed metadata lines followed by a header row, plus a human-readable
summary per command. Runs are reproducible: identical configs produce
byte-identical outputs (no timestamps, deterministic reductions), and every
table records the tolerances and truncations used to produce it.

Exit codes: 0 all verdicts pass, 1 verdict failures, 2 usage/config errors.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import math
import sys
from pathlib import Path

import numpy as np

from . import free_energy as fe
from . import neumann
from . import regimes
from . import verify as verify_mod
from .potentials import potential_from_config, square_well
from .regularize import regularize, verify_certificate
from .scattering import (fourier_hat_many, solve_scattering,
                         square_well_scattering_length, variational_energy)

EXIT_OK, EXIT_VERDICT, EXIT_USAGE = 0, 1, 2


class ConfigError(Exception):
    pass


def _load_config(path: str) -> configparser.ConfigParser:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str  # keys like R and T are case-significant
    try:
        read = cp.read(path)
    except configparser.ParsingError as exc:
        raise ConfigError(f"config parse error:\n{exc}") from exc
    if not read:
        raise ConfigError(f"config file not found: {path}")
    return cp


def _section(cp: configparser.ConfigParser, name: str) -> dict:
    if not cp.has_section(name):
        raise ConfigError(f"missing [{name}] block in config")
    return dict(cp.items(name))


def _floats(text: str):
    return [float(tok) for tok in text.replace(",", " ").split()]


def _write_csv(path: Path, meta: dict, header, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        for key in sorted(meta):
            fh.write(f"# {key} = {meta[key]}\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([f"{v:.12g}" if isinstance(v, float) else v for v in row])


def _write_text(path: Path, lines):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")


def _tol(args, name: str, default: float) -> float:
    return float(args.tol.get(name, default))


# ---------------------------------------------------------------------------
# subcommands


def cmd_scatter(args) -> int:
    cp = _load_config(args.config)
    pot = potential_from_config(_section(cp, "potential"))
    run = dict(cp.items("scatter")) if cp.has_section("scatter") else {}
    sol = solve_scattering(pot,
                           r_out=float(run["r_out"]) if "r_out" in run else None,
                           grid_size=int(run.get("grid_size", 2048)))
    out = Path(args.out)
    meta = {"potential": pot.label, "grid_size": sol.grid.size,
            "fit_residual": f"{sol.fit_residual:.3e}", "r_out": sol.r_out}

    _write_csv(out / "phi_table.csv", meta, ["r", "phi"],
               list(zip(sol.grid.tolist(), sol.phi.tolist())))
    p_max = float(run.get("p_max", 20.0 / max(pot.support_radius, 1e-9)))
    p_grid = np.linspace(0.0, p_max, int(run.get("p_count", 257)))
    ghat = fourier_hat_many(sol, p_grid)
    _write_csv(out / "ghat_table.csv", meta, ["p", "ghat"],
               list(zip(p_grid.tolist(), ghat.tolist())))

    born_tol = _tol(args, "born", 1e-6)
    var_tol = _tol(args, "variational", 1e-6)
    born_rel = abs(ghat[0] - 8.0 * math.pi * sol.a) / (8.0 * math.pi * sol.a)
    var_rel = abs(variational_energy(sol) - sol.a) / sol.a
    verdicts = [("born-identity", born_rel < born_tol, born_rel, born_tol),
                ("variational-consistency", var_rel < var_tol, var_rel, var_tol)]
    lines = [f"scattering length a = {sol.a:.12g}",
             f"affine-fit residual = {sol.fit_residual:.3e}"]
    for name, ok, observed, tol in verdicts:
        lines.append(f"[{'pass' if ok else 'FAIL'}] {name}: {observed:.3e} vs {tol:g}")

    if cp.has_section("sweep"):
        rows = []
        for gamma in _floats(cp.get("sweep", "gammas")):
            height = 2.0 * gamma ** 2
            a_ode = solve_scattering(square_well(height, 1.0)).a
            a_ref = square_well_scattering_length(height, 1.0)
            rows.append((gamma, a_ode, a_ref, abs(a_ode - a_ref) / a_ref))
        _write_csv(out / "square_well_sweep.csv", meta,
                   ["gamma", "a_ode", "a_closed", "rel_diff"], rows)
        lines.append(f"square-well sweep written ({len(rows)} rows)")

    _write_text(out / "scatter_report.txt", lines)
    print("\n".join(lines))
    return EXIT_OK if all(ok for _, ok, _, _ in verdicts) else EXIT_VERDICT


def cmd_regularize(args) -> int:
    cp = _load_config(args.config)
    pot = potential_from_config(_section(cp, "potential"))
    run = _section(cp, "regularize")
    rho = float(run["rho"])
    eta = float(run["eta"])
    v, cert = regularize(pot, rho, eta)
    verdicts = verify_certificate(cert, rho, eta)
    out = Path(args.out)
    meta = {"potential": pot.label, "rho": rho, "eta": eta,
            "flags": ",".join(cert.flags) or "none"}
    _write_csv(out / "replacement_profile.csv", meta, ["r_lo", "r_hi", "value"],
               [tuple(p) for p in v.pieces])
    lines = [f"a(V) = {cert.a_original:.12g}",
             f"a(v) = {cert.a_replacement:.12g}",
             f"gap  = {cert.a_gap:.6g}",
             f"int v = {cert.integral:.6g}",
             f"sup v = {cert.sup_value:.6g}",
             f"dominance C = {cert.g_dominance_constant:.6g}",
             f"pipeline: {cert.pipeline}",
             f"flags: {meta['flags']}"]
    lines += [str(v) for v in verdicts]
    _write_text(out / "certificate.txt", lines)
    print("\n".join(lines))
    if "degenerate-shell" in cert.flags:
        return EXIT_VERDICT
    return EXIT_OK if all(v.passed for v in verdicts) else EXIT_VERDICT


def cmd_fbog(args) -> int:
    cp = _load_config(args.config)
    run = _section(cp, "fbog")
    a = float(run["a"])
    T = float(run["T"])
    rho = float(run["rho"])
    ells = _floats(run.get("ells", run.get("ell", "")))
    if not ells:
        raise ConfigError("fbog needs 'ell' or 'ells' in the [fbog] block")
    rows = []
    target = fe.f_thermo(rho, T, a)
    for ell in ells:
        rep = fe.f_bog(ell, rho * ell ** 3, a, T)
        rows.append((rho * a ** 3, T / (rho * a), ell, rep.mean_field, rep.lhy,
                     rep.thermal_sum, rep.total, rep.total / ell ** 3,
                     rep.total / ell ** 3 - target,
                     rep.truncation_diagnostics["tail_bound"]))
    out = Path(args.out)
    meta = {"a": a, "T": T, "rho": rho, "f_thermo": f"{target:.12g}"}
    _write_csv(out / "fbog_sweep.csv", meta,
               ["rho_a3", "T_over_rho_a", "ell", "mean_field", "lhy",
                "thermal_sum", "total", "density", "density_minus_f", "tail_bound"],
               rows)
    print(f"wrote fbog_sweep.csv ({len(rows)} rows); f_thermo = {target:.12g}")
    return EXIT_OK


def cmd_fthermo(args) -> int:
    cp = _load_config(args.config)
    run = _section(cp, "fthermo")
    a = float(run["a"])
    rhos = _floats(run.get("rhos", run.get("rho", "")))
    t_ratios = _floats(run.get("t_over_rho_a", "1.0"))
    if not rhos:
        raise ConfigError("fthermo needs 'rho' or 'rhos' in the [fthermo] block")
    rows = []
    for rho in rhos:
        for tr in t_ratios:
            T = tr * rho * a
            rep = fe.f_thermo_report(rho, T, a)
            beta = 16.0 * math.pi * rho * a / T if T > 0 else math.inf
            rows.append((rho * a ** 3, tr, rep.mean_field, rep.lhy,
                         rep.thermal_integral, rep.total, beta))
    out = Path(args.out)
    _write_csv(out / "fthermo_sweep.csv", {"a": a},
               ["rho_a3", "T_over_rho_a", "mean_field", "lhy",
                "thermal_integral", "total", "crossover_beta"], rows)
    print(f"wrote fthermo_sweep.csv ({len(rows)} rows)")
    return EXIT_OK


def cmd_assemble(args) -> int:
    cp = _load_config(args.config)
    run = _section(cp, "assemble")
    rep = fe.box_assembly_bound(float(run["L"]), int(run["N"]),
                                float(run["ell"]), float(run["a"]),
                                float(run["T"]),
                                n_cap=int(run["n_cap"]) if "n_cap" in run else None)
    lines = [f"boxes M = {rep.boxes}",
             f"mu = {rep.mu:.12g}",
             f"assembled bound = {rep.bound:.12g}",
             f"M * F(ell, rho ell^3) = {rep.reference:.12g}",
             f"entropy slack = {rep.entropy_slack:.6g}",
             f"termwise convexity min gap = {rep.termwise_min_gap:.6g} (n <= {rep.n_cap})"]
    _write_text(Path(args.out) / "assembly_report.txt", lines)
    print("\n".join(lines))
    return EXIT_OK if rep.termwise_min_gap >= -1e-12 * abs(rep.reference) else EXIT_VERDICT


def cmd_symcheck(args) -> int:
    run = {}
    if args.config:
        cp = _load_config(args.config)
        if cp.has_section("symcheck"):
            run = dict(cp.items("symcheck"))
    ell = float(run.get("ell", 4.0))
    radius = float(run.get("R", 0.375 * ell))
    n_gauss = int(run.get("n_gauss", 96))
    rep = neumann.verify_diagonalization(neumann.bump_kernel(radius), radius,
                                         ell, n_gauss=n_gauss)
    f0 = float(rep.fhat[0])
    off_tol = _tol(args, "offdiag", 1e-8)
    diag_tol = _tol(args, "diag", 1e-6)
    ok = rep.off_diagonal_max / f0 < off_tol and rep.diagonal_rel_err < diag_tol
    lines = [f"modes: {len(rep.modes)} (shells |p| ell/pi <= 3)",
             f"off-diagonal max / fhat(0) = {rep.off_diagonal_max / f0:.3e} (tol {off_tol:g})",
             f"diagonal rel err = {rep.diagonal_rel_err:.3e} (tol {diag_tol:g})",
             f"refinement shift = {rep.richardson:.3e}"]
    out = Path(args.out)
    rows = [(str(p), str(q), rep.matrix[i, j], rep.residual[i, j])
            for i, p in enumerate(rep.modes) for j, q in enumerate(rep.modes)]
    _write_csv(out / "symcheck_matrix.csv",
               {"ell": ell, "R": radius, "n_gauss": n_gauss},
               ["p", "q", "matrix", "residual"], rows)
    _write_text(out / "symcheck_report.txt", lines)
    print("\n".join(lines))
    return EXIT_OK if ok else EXIT_VERDICT


def cmd_regime(args) -> int:
    cp = _load_config(args.config)
    run = _section(cp, "regime")
    a = float(run.get("a", 1.0))
    xs = _floats(run.get("rho_a3", "1e-6"))
    etas = _floats(run.get("etas", run.get("eta", "")))
    nus = _floats(run.get("nus", run.get("nu", "")))
    if not etas or not nus:
        raise ConfigError("regime needs 'eta(s)' and 'nu(s)' in the [regime] block")
    rows = []
    any_fail = False
    for x in xs:
        rho = x / a ** 3
        for eta in etas:
            for nu in nus:
                T = float(run["T"]) if "T" in run else 0.9 * rho * a * x ** (-nu)
                params = regimes.derive(rho, a, T, eta, nu)
                for v in regimes.check_constraints(params):
                    any_fail |= not v.passed
                    rows.append((x, eta, nu, v.name, v.kind,
                                 "pass" if v.passed else "fail",
                                 v.observed, v.bound))
    out = Path(args.out)
    _write_csv(out / "regime_verdicts.csv", {"a": a},
               ["rho_a3", "eta", "nu", "constraint", "kind", "verdict",
                "observed", "bound"], rows)
    n_fail = sum(1 for r in rows if r[5] == "fail")
    print(f"wrote regime_verdicts.csv ({len(rows)} verdicts, {n_fail} failures)")
    return EXIT_VERDICT if any_fail else EXIT_OK


def cmd_verify(args) -> int:
    idents = args.criteria.split(",") if args.criteria else None
    results = verify_mod.run_all(idents)
    lines = []
    for res in results:
        lines.append(res.summary_line())
        for d in res.details:
            lines.append(f"    {d}")
    if args.out:
        _write_text(Path(args.out) / "verify_report.txt", lines)
    print("\n".join(lines))
    n_fail = sum(1 for r in results if not r.passed)
    print(f"{len(results) - n_fail}/{len(results)} criteria passed")
    return EXIT_OK if n_fail == 0 else EXIT_VERDICT


# ---------------------------------------------------------------------------


def _parse_tols(pairs):
    out = {}
    for item in pairs or []:
        if "=" not in item:
            raise ConfigError(f"--tol expects NAME=VALUE, got {item!r}")
        key, val = item.split("=", 1)
        out[key.strip()] = float(val)
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bosegas",
        description="Scattering, regularization and Bogoliubov free-energy numerics")
    sub = parser.add_subparsers(dest="command", required=True)
    commands = {
        "scatter": cmd_scatter, "regularize": cmd_regularize, "fbog": cmd_fbog,
        "fthermo": cmd_fthermo, "assemble": cmd_assemble,
        "symcheck": cmd_symcheck, "regime": cmd_regime, "verify": cmd_verify,
    }
    for name, func in commands.items():
        p = sub.add_parser(name)
        if name != "verify":
            p.add_argument("--config", required=name not in ("symcheck",),
                           default=None, help="INI-style run configuration")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--threads", type=int, default=0,
                       help="thread cap for array backends (results are "
                            "deterministic and independent of this value)")
        p.add_argument("--tol", action="append", metavar="NAME=VALUE",
                       help="tolerance overrides (e.g. born=1e-8)")
        if name == "verify":
            p.add_argument("--criteria", default="",
                           help="comma-separated criterion ids (default: all)")
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.tol = _parse_tols(args.tol)
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (KeyError, ValueError) as exc:
        print(f"config error: missing or invalid value: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
