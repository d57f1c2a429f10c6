"""Command-line harness: verify | family | obstructions | report.

Exit status 0 when every check passes, 1 when a check fails, 2 on a usage or
configuration error.  Output is deterministic for a fixed configuration.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import cp3core, family, hyper
from .halgebra import (
    FD_STEP,
    random_sp2,
    random_sphere_point,
    random_unit_quaternion,
    right_matrix8,
)

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    seed: int = 0
    fd_step: float = FD_STEP
    tol_algebraic: float = 1e-12
    tol_first_order: float = 1e-6
    tol_second_order: float = 1e-3
    samples: int = 100
    a_list: list = field(default_factory=lambda: [2.0])
    t_list: list = field(default_factory=lambda: list(family.T_GRID))
    output_format: str = "json"

    def validate(self):
        tols = (self.tol_algebraic, self.tol_first_order, self.tol_second_order)
        if min(tols) <= 0 or not tols[0] < tols[1] < tols[2]:
            raise ConfigError("tolerances must be positive and ordered algebraic < first < second")
        if self.fd_step <= 0:
            raise ConfigError("step must be positive")
        if self.samples < 1:
            raise ConfigError("samples must be at least 1")
        if any(not a > 0 for a in self.a_list):
            raise ConfigError("metric parameters must be positive")
        if self.output_format not in ("json", "csv", "text"):
            raise ConfigError("unknown format")
        return self


@dataclass
class Report:
    suite: str
    environment: dict
    checks: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)
    rows: list = field(default_factory=list)

    def check(self, name, value, threshold, passed=None):
        value = float(value)
        ok = value < threshold if passed is None else bool(passed)
        self.checks.append({"name": name, "value": value, "threshold": float(threshold), "pass": ok})

    def note(self, name, value):
        self.diagnostics.append({"name": name, "value": float(value)})

    @property
    def passed(self):
        return all(c["pass"] for c in self.checks)

    def to_dict(self):
        return {"suite": self.suite, "environment": self.environment, "checks": self.checks,
                "diagnostics": self.diagnostics, "rows": self.rows, "pass": self.passed}


def _env(cfg):
    return {"seed": cfg.seed, "fd_step": cfg.fd_step, "samples": cfg.samples}


# --------------------------------------------------------------------------
# suites
# --------------------------------------------------------------------------


def cmd_verify(cfg):
    """Identity suite, closed-form vs numeric curvature, gauge and isometry invariance."""
    rep = Report("verify", _env(cfg))
    tol = {"algebraic": cfg.tol_algebraic, "first": cfg.tol_first_order,
           "second": cfg.tol_second_order}
    for a in cfg.a_list:
        suite = cp3core.identity_suite(a, n=cfg.samples, seed=cfg.seed, fd_step=cfg.fd_step)
        for name in sorted(suite.residuals):
            order = suite.order[name]
            key = f"a={a:g}/{name}"
            if order in tol:
                rep.check(key, suite.residuals[name], tol[order])
            else:
                rep.note(key, suite.residuals[name])
        rep.check(f"a={a:g}/constant_type_fit", abs(suite.constant_type_fit - 1), cfg.tol_first_order)

        rng = np.random.default_rng([cfg.seed, 1])
        worst = 0.0
        for _ in range(min(cfg.samples, 5)):
            p = random_sphere_point(rng)
            ctx = cp3core.GeoContext(a, p)
            X, Y, Z = (cp3core.killing_extension(p, v) for v in cp3core.random_horizontal(rng, p, 3))
            R = cp3core.curvature_Ra(a, p, *(cp3core.killing_value(K, p) for K in (X, Y, Z)))
            Rn = cp3core.curvature_numeric(ctx, X, Y, Z)
            worst = max(worst, np.linalg.norm(R - Rn) / np.linalg.norm(R))
        rep.check(f"a={a:g}/curvature_closed_vs_numeric", worst, 1e-4)

        rng = np.random.default_rng([cfg.seed, 2])
        gauge = iso = 0.0
        for _ in range(min(cfg.samples, 10)):
            p = random_sphere_point(rng)
            x, y = cp3core.random_horizontal(rng, p, 2)
            phi = rng.uniform(0, 2 * np.pi)
            z = np.array([np.cos(phi), np.sin(phi), 0, 0])
            Rz = right_matrix8(z)
            k0 = cp3core.sectional_curvature(a, p, x, y)
            gauge = max(gauge, abs(cp3core.sectional_curvature(a, Rz @ p, Rz @ x, Rz @ y) - k0))
            M = random_sp2(rng)
            iso = max(iso, abs(cp3core.sectional_curvature(a, M @ p, M @ x, M @ y) - k0))
        rep.check(f"a={a:g}/gauge_invariance", gauge, 1e-8)
        rep.check(f"a={a:g}/isometry_invariance", iso, 1e-8)
    return rep


FAMILY_COLUMNS = ["t", "a", "theta_a", "lambda_closed", "lambda_numeric", "k1", "k2", "k3", "k4",
                  "k5", "mean_printed", "mean_trace", "scalar_printed", "scalar_numeric",
                  "twistor_radius", "twistor_height", "mirror_residual", "error"]


def _family_row(t, a, seed):
    row = dict.fromkeys(FAMILY_COLUMNS)
    row["t"], row["a"] = float(t), float(a)
    try:
        family._check_t(t)
    except ValueError as exc:
        row["error"] = str(exc)
        return row
    rng = np.random.default_rng([seed, int(round(t * 1e6)), int(round(a * 1e6))])
    sd = family.family_shape_data(a, t, random_unit_quaternion(rng), random_unit_quaternion(rng))
    vals, _ = hyper.principal_curvatures(sd)
    _, lam = hyper.is_hopf(sd, "J")
    scal = family.gauss_scalar_curvature(sd)
    r, h, _ = family.twistor_image(t)
    s = abs(t - np.pi / 4)
    row.update({
        "theta_a": sd.theta_a,
        "lambda_closed": family.hopf_eigen(t, "J", a),
        "lambda_numeric": np.nan if lam is None else lam,
        **{f"k{i + 1}": v for i, v in enumerate(vals)},
        "mean_printed": family.mean_curvature_printed(a, t),
        "mean_trace": hyper.mean_curvature(sd),
        "scalar_printed": family.scalar_curvature_printed(a, t),
        "scalar_numeric": scal,
        "twistor_radius": r,
        "twistor_height": h,
        "mirror_residual": family.mirror_isometry_check(s, a, samples=5, seed=seed) if 0 < s < np.pi / 4 else 0.0,
    })
    return {k: (float(v) if isinstance(v, (float, np.floating)) else v) for k, v in row.items()}


def cmd_family(cfg):
    rep = Report("family", _env(cfg))
    for t in cfg.t_list:
        for a in cfg.a_list:
            row = _family_row(t, a, cfg.seed)
            rep.rows.append(row)
            tag = f"t={t:.6g}/a={a:g}"
            if row["error"] is not None:
                rep.check(f"{tag}/row", 1.0, 0.0, passed=False)
                continue
            rep.check(f"{tag}/theta_a", row["theta_a"], 1e-10)
            rep.check(f"{tag}/lambda", abs(row["lambda_numeric"] - row["lambda_closed"]), cfg.tol_first_order)
            rep.check(f"{tag}/mean_trace_is_3_lambda",
                      abs(row["mean_trace"] - 3 * row["lambda_closed"]), cfg.tol_first_order)
            rep.check(f"{tag}/mirror", row["mirror_residual"], 1e-12)
            rep.note(f"{tag}/scalar_printed_gap", abs(row["scalar_printed"] - row["scalar_numeric"]))
    return rep


def cmd_obstructions(cfg, a_grid=None, theta_grid=None):
    rep = Report("obstructions", _env(cfg))
    a_grid = np.geomspace(0.01, 100, 41) if a_grid is None else a_grid
    theta_grid = np.linspace(0.05, np.pi / 2 - 0.05, 15) if theta_grid is None else theta_grid
    rng = np.random.default_rng(cfg.seed)
    hor_gap, hor_min = 0.0, np.inf
    nh_gap, nh_min = 0.0, np.inf
    tu_gap, tu_min, tu_printed_min, tu_printed_gap = 0.0, np.inf, np.inf, 0.0
    for a in a_grid:
        o = hyper.codazzi_obstruction(a, rng=rng)
        hor_gap = max(hor_gap, o.agreement)
        hor_min = min(hor_min, abs(o.numeric))
        for th in theta_grid:
            o = hyper.codazzi_obstruction(a, th, rng=rng)
            nh_gap = max(nh_gap, abs(o.numeric + o.closed_form))
            nh_min = min(nh_min, abs(o.numeric))
        o = hyper.tu_obstruction(a, rng=rng)
        tu_gap = max(tu_gap, abs(o.numeric - hyper.tu_obstruction_derived(a)))
        tu_min = min(tu_min, abs(o.numeric))
        tu_printed_min = min(tu_printed_min, abs(o.closed_form))
        tu_printed_gap = max(tu_printed_gap, o.agreement)
    rep.check("codazzi_horizontal/closed_vs_numeric", hor_gap, cfg.tol_first_order)
    rep.check("codazzi_horizontal/min_abs", hor_min, 0.0, passed=hor_min > 0)
    rep.check("codazzi_nonhorizontal/closed_vs_numeric_up_to_sign", nh_gap, cfg.tol_first_order)
    rep.check("codazzi_nonhorizontal/min_abs", nh_min, 0.0, passed=nh_min > 0)
    rep.check("tu/derived_vs_numeric", tu_gap, cfg.tol_first_order)
    rep.check("tu/min_abs_numeric", tu_min, 0.0, passed=tu_min > 0)
    rep.check("tu/min_abs_printed", tu_printed_min, 0.0, passed=tu_printed_min > 0)
    rep.note("tu/printed_vs_numeric_gap", tu_printed_gap)
    worst = 0.0
    for _ in range(cfg.samples):
        al = rng.standard_normal((5, 5))
        al = al + al.T
        U, X, Y, Z = rng.standard_normal((4, 5))
        worst = max(worst, abs(hyper.csc_rhs_cyclic(al, U, X, Y, Z)))
    rep.check("csc_rhs_cyclic", worst, cfg.tol_algebraic)
    return rep


def cmd_report(cfg):
    """All three suites in one report (verify restricted to first-order checks' defaults)."""
    parts = [cmd_verify(cfg), cmd_family(cfg), cmd_obstructions(cfg)]
    rep = Report("report", _env(cfg))
    for part in parts:
        for c in part.checks:
            rep.checks.append({**c, "name": f"{part.suite}/{c['name']}"})
        for d in part.diagnostics:
            rep.diagnostics.append({**d, "name": f"{part.suite}/{d['name']}"})
        rep.rows.extend(part.rows)
    return rep


# --------------------------------------------------------------------------
# output
# --------------------------------------------------------------------------


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.17g}"
    return "" if v is None else str(v)


def emit(rep, fmt):
    if fmt == "json":
        return json.dumps(rep.to_dict(), indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    if fmt == "csv":
        w = csv.writer(buf, lineterminator="\n")
        if rep.rows:
            w.writerow(FAMILY_COLUMNS)
            for row in rep.rows:
                w.writerow([_fmt(row[c]) for c in FAMILY_COLUMNS])
        else:
            w.writerow(["name", "value", "threshold", "pass"])
            for c in rep.checks:
                w.writerow([c["name"], _fmt(c["value"]), _fmt(c["threshold"]), c["pass"]])
            for d in rep.diagnostics:
                w.writerow([d["name"], _fmt(d["value"]), "", ""])
        return buf.getvalue()
    lines = [f"{rep.suite}: {'PASS' if rep.passed else 'FAIL'}  ({_env_text(rep.environment)})"]
    for c in rep.checks:
        lines.append(f"  [{'ok' if c['pass'] else 'FAIL'}] {c['name']} = {c['value']:.3e} "
                     f"(threshold {c['threshold']:.1e})")
    for d in rep.diagnostics:
        lines.append(f"  [info] {d['name']} = {d['value']:.6g}")
    return "\n".join(lines) + "\n"


def _env_text(env):
    return ", ".join(f"{k}={v}" for k, v in env.items())


def _floats(text):
    try:
        return [float(eval_number(s)) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def eval_number(s):
    """Parse a real number, allowing the forms 'pi/4' and '3pi/8'."""
    s = s.strip().lower()
    if "pi" in s:
        num, _, den = s.partition("/")
        coef = num.replace("pi", "").replace("*", "")
        value = (float(coef) if coef else 1.0) * np.pi
        return value / float(den) if den else value
    return float(s)


def build_parser():
    parser = argparse.ArgumentParser(prog="cp3geom", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("verify", "family", "obstructions", "report"):
        p = sub.add_parser(name)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--step", type=float, default=FD_STEP)
        p.add_argument("--tol-algebraic", type=float, default=1e-12)
        p.add_argument("--tol-first", type=float, default=1e-6)
        p.add_argument("--tol-second", type=float, default=1e-3)
        p.add_argument("--samples", type=int, default=100 if name != "report" else 10)
        p.add_argument("--a", type=_floats, default=None, help="comma-separated metric parameters")
        p.add_argument("--t", type=_floats, default=None, help="comma-separated t values, e.g. pi/8,0.6")
        p.add_argument("--format", choices=("json", "csv", "text"), default="json")
        p.add_argument("--out", default=None)
    return parser


def config_from_args(args):
    default_a = [1.0, 2.0] if args.command == "family" else [2.0]
    return RunConfig(
        seed=args.seed, fd_step=args.step, tol_algebraic=args.tol_algebraic,
        tol_first_order=args.tol_first, tol_second_order=args.tol_second,
        samples=args.samples, a_list=args.a or default_a,
        t_list=args.t or list(family.T_GRID), output_format=args.format,
    ).validate()


COMMANDS = {"verify": cmd_verify, "family": cmd_family,
            "obstructions": cmd_obstructions, "report": cmd_report}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    try:
        cfg = config_from_args(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    rep = COMMANDS[args.command](cfg)
    text = emit(rep, cfg.output_format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_PASS if rep.passed else EXIT_FAIL
