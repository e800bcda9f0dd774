"""Command-line front end.

    heckedirac verify --series A --rank 2
    heckedirac ctable --series A --rank 2 --format csv
    heckedirac dirac-report --series A --rank 1 --nu 0.5
    heckedirac bounds --series A --rank 2 --nu-grid default
    heckedirac orbits --series A --rank 3
    heckedirac zeta --series A --rank 2 --z cubic

Exit codes: 0 success, 1 a check failed, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import __version__
from .dirac import (build_dirac, dirac_cohomology, dirac_inequality_report, dirac_square_residual,
                    isotypic_report, vogan_check)
from .exact import qstr
from .hecke import HeckeAlgebra
from .hmod import one_dimensional, principal_series, validate_module
from .orbits import in_orbit, length_table, nu_regular
from .rootsys import ConfigurationError, build_root_system, parse_series
from .spincover import c_sigma_tilde, exact_value, generate_spin_cover
from .verify import SUITES, Setup, jsonable, run_suites
from .vogan import cubic_invariant, solve_zeta, zeta_vs_omega_wtilde

FORMATS = ("json", "csv", "text")
SUITE_NUMBERS = {str(k): name for k, name in enumerate(SUITES, start=2)}  # numeric aliases for --section


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    series: str = "A"
    rank: Optional[int] = None
    m: Optional[int] = None
    c: Dict[str, str] = field(default_factory=dict)
    degree: int = 3
    tol: float = 1e-9
    seed: int = 0
    format: str = "json"
    nu: Optional[List[str]] = None
    nu_grid: str = "default"
    chirality: int = 1
    z: str = "omega"
    suites: Optional[List[str]] = None

    def validate(self) -> "RunConfig":
        if self.tol <= 0:
            raise UsageError("--tol must be positive")
        if self.degree < 1:
            raise UsageError("--degree must be >= 1")
        if self.format not in FORMATS:
            raise UsageError(f"--format must be one of {FORMATS}")
        if self.chirality not in (1, -1):
            raise UsageError("--chirality must be + or -")
        if self.z not in ("omega", "cubic", "one"):
            raise UsageError("--z must be omega, cubic or one")
        for s in self.suites or []:
            if s not in SUITES:
                raise UsageError(f"unknown suite {s!r}; have {list(SUITES)}")
        try:
            parse_series(self.series, self.rank, self.m)
        except ConfigurationError as e:
            raise UsageError(str(e)) from e
        return self

    def echo(self) -> dict:
        d = asdict(self)
        d["c"] = dict(sorted(self.c.items()))
        return d


def parse_c(text: str) -> Dict[str, str]:
    out = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        if "=" not in part:
            raise UsageError(f"--c expects class=value pairs, got {part!r}")
        k, v = (s.strip() for s in part.split("=", 1))
        try:
            Fraction(v)
        except ValueError as e:
            raise UsageError(f"--c value {v!r} is not a number") from e
        out[k] = v
    return out


def _chirality(text: str) -> int:
    if text in ("+", "+1", "1"):
        return 1
    if text in ("-", "-1"):
        return -1
    raise UsageError(f"--chirality must be + or -, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with RunConfig fields; flags override it")
    common.add_argument("--series")
    common.add_argument("--rank", type=int)
    common.add_argument("--m", type=int, help="dihedral order for I2(m)")
    common.add_argument("--c", help="parameters per root class, e.g. long=1,short=2")
    common.add_argument("--degree", type=int, help="degree window / cap for the differential checks")
    common.add_argument("--tol", type=float)
    common.add_argument("--seed", type=int)
    common.add_argument("--format", choices=FORMATS)
    common.add_argument("--out", help="write the report here instead of stdout")
    p = argparse.ArgumentParser(prog="heckedirac", description="Dirac operators for graded Hecke algebras")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", parents=[common], help="run the identity suites")
    v.add_argument("--suite", "--section", action="append", dest="suites",
                   help=f"one of {', '.join(SUITES)} (or 2-5 in that order); repeatable")
    sub.add_parser("ctable", parents=[common], help="W~ character table with c(sigma~)")
    d = sub.add_parser("dirac-report", parents=[common], help="D, H^D and the inequality on a module")
    d.add_argument("--nu", help="central character in ambient coordinates, comma separated; "
                                "or 'trivial' / 'steinberg'")
    d.add_argument("--chirality", help="+ or - (odd rank)")
    b = sub.add_parser("bounds", parents=[common], help="Dirac-inequality screening over a nu grid")
    b.add_argument("--nu-grid", dest="nu_grid", help="'default' or lo:hi:step on Dynkin labels")
    sub.add_parser("orbits", parents=[common], help="nilpotent-orbit length table")
    z = sub.add_parser("zeta", parents=[common], help="solve for zeta(z)")
    z.add_argument("--z", help="omega, cubic or one")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    base: dict = {}
    if ns.config:
        try:
            with open(ns.config) as fh:
                base = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise UsageError(f"cannot read config {ns.config}: {e}") from e
        if not isinstance(base, dict):
            raise UsageError("config must be a JSON object")
        known = set(RunConfig.__dataclass_fields__)
        unknown = set(base) - known
        if unknown:
            raise UsageError(f"unknown config keys {sorted(unknown)}")
        if "c" in base:
            if not isinstance(base["c"], dict):
                raise UsageError("config 'c' must be an object")
            base["c"] = {k: str(v) for k, v in base["c"].items()}
        if "nu" in base and base["nu"] is not None:
            base["nu"] = [str(x) for x in base["nu"]] if isinstance(base["nu"], list) else str(base["nu"]).split(",")
        if "chirality" in base:
            base["chirality"] = _chirality(str(base["chirality"]))
    try:
        cfg = RunConfig(**base)
    except TypeError as e:
        raise UsageError(f"bad config: {e}") from e
    for name in ("series", "rank", "m", "degree", "tol", "seed", "format"):
        val = getattr(ns, name, None)
        if val is not None:
            setattr(cfg, name, val)
    if getattr(ns, "c", None):
        cfg.c = parse_c(ns.c)
    if getattr(ns, "nu", None):
        cfg.nu = [s.strip() for s in ns.nu.split(",")]
    if getattr(ns, "nu_grid", None):
        cfg.nu_grid = ns.nu_grid
    if getattr(ns, "chirality", None):
        cfg.chirality = _chirality(ns.chirality)
    if getattr(ns, "z", None):
        cfg.z = ns.z
    if getattr(ns, "suites", None):
        asked = {SUITE_NUMBERS.get(s, s) for s in ns.suites}
        cfg.suites = [s for s in SUITES if s in asked] + sorted(asked - set(SUITES))
    for name in ("rank", "m", "degree", "seed"):
        v = getattr(cfg, name)
        if v is not None and not isinstance(v, int):
            raise UsageError(f"{name} must be an integer")
    return cfg.validate()


def _root_system(cfg: RunConfig):
    try:
        rs = build_root_system(cfg.series, cfg.rank, cfg.m)
        c = rs.parameters(cfg.c)
    except (ConfigurationError, ValueError) as e:
        raise UsageError(str(e)) from e
    return rs, c


# ---------------------------------------------------------------------------
# commands; each returns (payload, rows for csv/text, ok)


def cmd_verify(cfg: RunConfig):
    rs, c = _root_system(cfg)
    st = Setup(rs, c, seed=cfg.seed, tol=cfg.tol, degree=cfg.degree)
    records = run_suites(st, cfg.suites)
    ok = all(r["status"] != "fail" for r in records)
    counts = {s: sum(r["status"] == s for r in records) for s in ("pass", "fail", "skipped")}
    payload = {"root_system": rs.label, "exact": rs.exact, "checks": records, "summary": counts,
               "all_pass": ok}
    rows = [{"suite": r["suite"], "name": r["name"], "status": r["status"],
             "residual": r["residual"], "anchor": r["anchor"]} for r in records]
    return payload, rows, ok


def _orbit_match(rs, c, value) -> Optional[str]:
    if not all(v == 1 for v in c.values.values()):
        return None
    try:
        table = length_table(rs, solvable_only=True)
    except ConfigurationError:
        return None
    hits = [o.label for o in table if abs(float(o.norm2) - float(value)) < 1e-9]
    return ",".join(hits) if hits else None


def cmd_ctable(cfg: RunConfig):
    rs, c = _root_system(cfg)
    cover = generate_spin_cover(rs)
    g = cover.group
    ct = g.character_table(cfg.seed)
    names = cover.character_names()
    rows = []
    ok = True
    for k, (d, gen) in enumerate(zip(ct.degrees, cover.genuine)):
        r = c_sigma_tilde(cover, c, k)
        ok &= r["agreement"] < 1e-8 and r["off_scalar_residual"] < 1e-8
        val = exact_value(r["formula"])
        rows.append({
            "name": names[k], "degree": d, "genuine": gen, "c_value": jsonable(val),
            "route_agreement": float(f"{r['agreement']:.3e}"),
            "orbit_match": _orbit_match(rs, c, val) if gen and rs.crystallographic else None,
        })
    payload = {"root_system": rs.label, "order": len(g), "classes": len(g.classes),
               "class_sizes": g.class_sizes,
               "class_representatives": ["".join(f"s{i + 1}" for i in g.words[r]) or "1" for r in g.class_reps],
               "characters": rows,
               "genuine_c_values": sorted((r["c_value"] for r in rows if r["genuine"]),
                                          key=lambda v: -float(Fraction(v)) if isinstance(v, str) else -v)}
    return payload, rows, ok


def _module(cfg: RunConfig, H, rs):
    if not cfg.nu:
        raise UsageError("dirac-report needs --nu")
    if len(cfg.nu) == 1 and cfg.nu[0] in ("trivial", "steinberg"):
        return one_dimensional(H, cfg.nu[0])
    try:
        amb = [Fraction(s) if rs.exact else float(s) for s in cfg.nu]
    except ValueError as e:
        raise UsageError(f"--nu: {e}") from e
    try:
        nu = rs.from_ambient(amb)
    except ConfigurationError as e:
        raise UsageError(str(e)) from e
    return principal_series(H, nu)


def cmd_dirac_report(cfg: RunConfig):
    rs, c = _root_system(cfg)
    cover = generate_spin_cover(rs)
    H = HeckeAlgebra(rs, c, W=cover.weyl)
    X = _module(cfg, H, rs)
    ctx = build_dirac(X, cover=cover, chirality=cfg.chirality)
    coh = dirac_cohomology(ctx)
    coh2 = dirac_cohomology(ctx, seed=cfg.seed + 1)
    iso = isotypic_report(ctx, coh.character)
    ineq = dirac_inequality_report(ctx)
    vc = vogan_check(ctx, coh)
    sq = dirac_square_residual(ctx)
    valid = validate_module(X)
    checks = {
        "module_valid": valid.passed,
        "dirac_square_residual": float(f"{sq:.3e}"),
        "dirac_square_ok": sq < cfg.tol,
        "basis_residual": float(f"{ctx.basis_residual():.3e}"),
        "sgn_equivariance_residual": float(f"{ctx.sgn_equivariance_residual():.3e}"),
        "section_independent": bool(np.abs(coh.character - coh2.character).max() < 1e-8),
        "vogan": vc["status"],
    }
    ok = checks["module_valid"] and checks["dirac_square_ok"] and checks["section_independent"] and vc["status"] != "fail"
    payload = {
        "root_system": rs.label,
        "module": X.name,
        "chirality": "+" if cfg.chirality == 1 else "-",
        "nu": [jsonable(v) for v in rs.to_ambient(X.nu)],
        "nu_norm2": jsonable(X.nu_norm2()),
        "dim": ctx.dim,
        "dim_kernel": coh.kernel.dim,
        "dim_intersection": coh.intersection.dim,
        "dim_HD": coh.dim,
        "isotypics": [{k: jsonable(r[k]) for k in ("name", "degree", "mult", "c_value")} for r in iso],
        "inequality": jsonable(ineq),
        "vogan_check": jsonable(vc),
        "checks": checks,
    }
    rows = payload["isotypics"]
    return payload, rows, ok


def _grid(spec: str, rank: int):
    if spec == "default":
        lo, hi, step = Fraction(-2), Fraction(2), Fraction(1, 2)
    else:
        try:
            lo, hi, step = (Fraction(s) for s in spec.split(":"))
        except ValueError as e:
            raise UsageError(f"--nu-grid expects 'default' or lo:hi:step, got {spec!r}") from e
        if step <= 0 or hi < lo:
            raise UsageError("--nu-grid needs step > 0 and lo <= hi")
    count = int((hi - lo) / step) + 1
    axis = [lo + k * step for k in range(count)]
    if len(axis) ** rank > 20000:
        raise UsageError("grid too large")
    return list(itertools.product(axis, repeat=rank))


def bounds_scan(rs, c, grid, tol: float = 1e-9) -> List[dict]:
    """Principal series X(nu) over a grid of Dynkin labels, each treated as if
    unitary: the Dirac-inequality verdict per point."""
    cover = generate_spin_cover(rs)
    H = HeckeAlgebra(rs, c, W=cover.weyl)
    reg = None
    if rs.crystallographic:
        reg = nu_regular(rs)
    rows = []
    for lam in grid:
        nu = rs.from_weight(lam)
        X = principal_series(H, nu)
        rep = dirac_inequality_report(build_dirac(X, cover=cover))
        nn = X.nu_norm2()
        genuine = [r for r in rep["isotypics"] if r["name"].startswith("gen")]
        max_c = max(float(r["c_value"]) for r in genuine)
        passes_all = not rep["summary"]["violated"]
        passes_top = float(nn) <= max_c + tol
        saturated = abs(float(nn) - max_c) <= tol
        rows.append({
            "lambda": [qstr(v) for v in lam],
            "nu": [jsonable(v) for v in rs.to_ambient(nu)],
            "nu_norm2": jsonable(nn),
            "violated_some": rep["summary"]["violated"],
            "violated_count": sum(r["violated"] for r in genuine),
            "passes_all": passes_all,
            "passes_top_bound": passes_top,
            "saturates_top_bound": saturated,
            "exceeds_regular_bound": rep["summary"]["exceeds_regular_bound"],
            "in_regular_orbit": None if reg is None else in_orbit(rs, cover.weyl, nu, reg.nu),
        })
    return rows


def cmd_bounds(cfg: RunConfig):
    rs, c = _root_system(cfg)
    grid = _grid(cfg.nu_grid, rs.rank)
    rows = bounds_scan(rs, c, grid, cfg.tol)
    over = [r for r in rows if r["exceeds_regular_bound"]]
    sat = [r for r in rows if r["passes_top_bound"] and r["saturates_top_bound"]]
    summary = {
        "points": len(rows),
        "exceed_regular": len(over),
        "exceed_regular_all_flagged": all(r["violated_some"] for r in over),
        "saturating_top_bound": len(sat),
        "saturating_points_in_regular_orbit": all(r["in_regular_orbit"] for r in sat) if sat else None,
    }
    ok = summary["exceed_regular_all_flagged"] and summary["saturating_points_in_regular_orbit"] is not False
    return {"root_system": rs.label, "grid": cfg.nu_grid, "summary": summary, "points": rows}, rows, ok


def cmd_orbits(cfg: RunConfig):
    rs, _ = _root_system(cfg)
    try:
        data = length_table(rs, solvable_only=False)
    except ConfigurationError as e:
        raise UsageError(str(e)) from e
    rows = [o.to_json(rs) for o in data]
    payload = {"root_system": rs.label, "orbits": rows,
               "solvable_lengths": [r["nu_norm2"] for r in rows if r["solvable_centralizer"]]}
    return payload, rows, True


def cmd_zeta(cfg: RunConfig):
    rs, c = _root_system(cfg)
    cover = generate_spin_cover(rs)
    H = HeckeAlgebra(rs, c, W=cover.weyl, degree_cap=max(cfg.degree + 1, 4))
    if cfg.z == "omega":
        z = H.casimir()
    elif cfg.z == "cubic":
        z = cubic_invariant(H)
    else:
        z = H.identity()
    res = solve_zeta(H, z, cover)
    g = cover.group
    rows = []
    for ci, coef in sorted(res.coefficients.items()):
        rep = g.classes[ci][0]
        rows.append({"class": ci, "representative": "".join(f"s{i + 1}" for i in g.words[rep]) or "1",
                     "size": len(g.classes[ci]), "coefficient": jsonable(coef)})
    payload = {"root_system": rs.label, "z": cfg.z, "exact": res.exact, "zeta": rows,
               "residual": float(f"{res.residual:.3e}"), "unique": res.unique,
               "b_equals_a_feasible": res.b_equals_a_feasible}
    ok = res.residual < 1e-8 and res.unique
    if cfg.z == "omega":
        cmp = zeta_vs_omega_wtilde(H, res, cover)
        payload["matches_omega_wtilde"] = jsonable(cmp)
        ok &= cmp["max_difference"] < 1e-8
    return payload, rows, ok


COMMANDS = {"verify": cmd_verify, "ctable": cmd_ctable, "dirac-report": cmd_dirac_report,
            "bounds": cmd_bounds, "orbits": cmd_orbits, "zeta": cmd_zeta}


def render(payload: dict, rows: List[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(jsonable(payload), sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        keys = sorted({k for r in rows for k in r})
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: json.dumps(jsonable(v)) if isinstance(v, (list, dict)) else v for k, v in r.items()})
        return buf.getvalue()
    lines = [f"{k}: {json.dumps(jsonable(v), sort_keys=True)}" for k, v in sorted(payload.items())
             if not isinstance(v, list) or len(v) <= 8]
    for r in rows:
        lines.append("  " + "  ".join(f"{k}={jsonable(r[k])}" for k in sorted(r)))
    return "\n".join(lines) + "\n"


def _attach_values(argv: Sequence[str]) -> List[str]:
    """Let --nu -0.5 and --nu-grid -2:2:1 through: argparse would read the
    value as an option."""
    out: List[str] = []
    it = iter(argv)
    for a in it:
        if a in VALUE_FLAGS:
            nxt = next(it, None)
            out.append(a if nxt is None else f"{a}={nxt}")
        else:
            out.append(a)
    return out


VALUE_FLAGS = ("--nu", "--nu-grid", "--c")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else argv
    try:
        ns = parser.parse_args(_attach_values(argv))
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else 2
    try:
        cfg = config_from_args(ns)
        payload, rows, ok = COMMANDS[ns.command](cfg)
    except UsageError as e:
        print(f"heckedirac: error: {e}", file=sys.stderr)
        return 2
    payload = {"version": __version__, "command": ns.command, "config": cfg.echo(), **payload}
    text = render(payload, rows, cfg.format)
    if ns.out:
        with open(ns.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
