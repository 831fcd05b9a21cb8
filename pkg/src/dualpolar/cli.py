"""Command-line interface.

Exit status: 0 on success, 1 when a checked invariant is falsified, 2 on a
usage error.  Big integers are written as decimal strings in JSON, fractions as
"p/q" strings.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Iterable

from . import qcore
from .bounds import (
    CSV_COLUMNS, bound_report, explicit_hoffman, hoffman_bound, report_csv_row,
)
from .cache import default_cache_dir, load_graph
from .lp import delsarte_lp, delsarte_problem
from .qcore import Family, PolarParams, num_generators
from .search import DEFAULT_BUDGET, EKRInstance, max_ekr, search_summary
from .spectra import SchemeSpectrum, verify_spectrum

SCHEMA_VERSION = 1
EXIT_OK, EXIT_FALSIFIED, EXIT_USAGE = 0, 1, 2
FAMILY_CHOICES = [f.value for f in Family]


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    family: list[Family]
    q: list[int]
    d: list[int]
    t: list[int] | None
    budget: int = DEFAULT_BUDGET
    fmt: str = "pretty"
    cache: Path | None = None
    workers: int = 1
    extra: dict = field(default_factory=dict)

    def params(self) -> list[PolarParams]:
        out = []
        for fam, q, d in product(self.family, self.q, self.d):
            try:
                out.append(PolarParams(fam, q, d))
            except ValueError:
                if len(self.family) * len(self.q) * len(self.d) == 1:
                    raise
        return out

    def instances(self, t_range=lambda p: range(p.d + 1)) -> list[tuple[PolarParams, int]]:
        out = []
        for p in self.params():
            ts = self.t if self.t is not None else list(t_range(p))
            out.extend((p, t) for t in ts if 0 <= t <= p.d)
        return out

    def single(self) -> PolarParams:
        ps = self.params()
        if len(ps) != 1:
            raise UsageError("this command needs exactly one --family/--q/--d selection")
        return ps[0]

    def single_t(self) -> int:
        if not self.t or len(self.t) != 1:
            raise UsageError("this command needs exactly one --t value")
        return self.t[0]


# -- parsing --------------------------------------------------------------------

def parse_range(spec: str, cast=int) -> list:
    """'2..8' -> [2..8], '2,3,5' -> [2,3,5]."""
    values = []
    for part in spec.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            values.extend(range(int(lo), int(hi) + 1))
        elif part:
            values.append(cast(part))
    if not values:
        raise UsageError(f"empty range {spec!r}")
    return values


def parse_grid(items: Iterable[str]) -> dict[str, list]:
    grid = {}
    for item in items:
        for chunk in item.split(";"):
            if "=" not in chunk:
                raise UsageError(f"grid entry {chunk!r} is not KEY=RANGE")
            key, spec = chunk.split("=", 1)
            key = key.strip()
            if key == "family":
                grid[key] = [Family.parse(s) for s in spec.split(",")]
            elif key in ("q", "d", "t"):
                grid[key] = parse_range(spec)
            else:
                raise UsageError(f"unknown grid key {key!r}")
    return grid


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--family", choices=FAMILY_CHOICES)
    common.add_argument("--q", type=int)
    common.add_argument("--d", type=int)
    common.add_argument("--t", type=int)
    common.add_argument("--grid", action="append", default=[],
                        help="KEY=RANGE with KEY in family,q,d,t, e.g. d=2..8 or q=3,4")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    common.add_argument("--format", dest="fmt", choices=["json", "csv", "pretty"], default=None)
    common.add_argument("--cache", type=Path, default=None)
    common.add_argument("--workers", type=int, default=1)

    ap = argparse.ArgumentParser(prog="dualpolar", description="Exact EKR computations on dual polar graphs.")
    sub = ap.add_subparsers(dest="command", required=True)
    g = sub.add_parser("gauss", parents=[common], help="Gaussian coefficient [n k]_q")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--k", type=int, required=True)
    c = sub.add_parser("count", parents=[common], help="generator, codimension and subspace counts")
    c.add_argument("--psi", choices=["even", "odd", "bar_odd"])
    s = sub.add_parser("spectrum", parents=[common], help="eigenmatrix and lambda tables")
    s.add_argument("--verify", action="store_true", help="check against the enumerated graph")
    sub.add_parser("hoffman", parents=[common], help="exact Hoffman bound")
    sub.add_parser("explicit", parents=[common], help="closed-form Hoffman estimate (q >= 3)")
    lp = sub.add_parser("lp", parents=[common], help="exact Delsarte LP bound")
    lp.add_argument("--dump", action="store_true", help="print the LP instance")
    b = sub.add_parser("bounds", parents=[common], help="full bound report")
    b.add_argument("--lp", action="store_true", help="include the LP bound")
    sub.add_parser("search", parents=[common], help="exact maximum EKR set")
    v = sub.add_parser("verify", parents=[common], help="run the oracle suites")
    v.add_argument("--suite", action="append", default=[])
    tb = sub.add_parser("table", parents=[common], help="grid scan of bound reports")
    tb.add_argument("--lp", action="store_true")
    return ap


def make_config(ns: argparse.Namespace) -> RunConfig:
    grid = parse_grid(ns.grid)
    fam = grid.get("family") or ([Family.parse(ns.family)] if ns.family else [])
    qs = grid.get("q") or ([ns.q] if ns.q is not None else [])
    ds = grid.get("d") or ([ns.d] if ns.d is not None else [])
    ts = grid.get("t") or ([ns.t] if ns.t is not None else None)
    default_fmt = "csv" if ns.command == "table" else "pretty"
    cache = ns.cache if ns.cache is not None else default_cache_dir()
    extra = {k: v for k, v in vars(ns).items()
             if k not in {"family", "q", "d", "t", "grid", "budget", "fmt", "cache", "workers", "command"}}
    if ns.workers < 1 or ns.budget < 1:
        raise UsageError("--workers and --budget must be positive")
    return RunConfig(ns.command, fam, qs, ds, ts, ns.budget, ns.fmt or default_fmt, cache, ns.workers, extra)


# -- output ---------------------------------------------------------------------

def jsonable(x):
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, (int, Fraction)):
        return str(x)
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    return str(x)


def emit(obj: dict, fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps({"schema_version": SCHEMA_VERSION, **jsonable(obj)}, indent=2) + "\n")
    elif fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        flat = {k: v for k, v in obj.items() if not isinstance(v, (dict, list))}
        w.writerow(flat.keys())
        w.writerow(str(v) for v in flat.values())
    else:
        for k, v in obj.items():
            if isinstance(v, (list, tuple)):
                v = " ".join(str(x) for x in v)
            elif isinstance(v, dict):
                v = json.dumps(v, default=str)
            out.write(f"{k}: {v}\n")


def _pinfo(p: PolarParams) -> dict:
    return {"family": p.family.value, "q": p.q, "d": p.d}


# -- commands ---------------------------------------------------------------------

def cmd_gauss(cfg: RunConfig) -> int:
    if len(cfg.q) != 1:
        raise UsageError("gauss needs one --q")
    n, k = cfg.extra["n"], cfg.extra["k"]
    emit({"n": n, "k": k, "q": cfg.q[0], "gauss": qcore.gauss(n, k, cfg.q[0])}, cfg.fmt)
    return EXIT_OK


def cmd_count(cfg: RunConfig) -> int:
    psi = cfg.extra.get("psi")
    if psi:
        if len(cfg.q) != 1 or len(cfg.d) != 1:
            raise UsageError("--psi needs one --q and one --d")
        q, d, t = cfg.q[0], cfg.d[0], cfg.single_t()
        fn = {"even": qcore.psi_even, "odd": qcore.psi_odd, "bar_odd": qcore.psi_bar_odd}[psi]
        emit({f"psi_{psi}": fn(d, t, q), "d": d, "t": t, "q": q}, cfg.fmt)
        return EXIT_OK
    p = cfg.single()
    emit({
        "num_generators": num_generators(p),
        "params": _pinfo(p),
        "count_codim": [qcore.count_codim(p, s) for s in range(p.d + 1)],
        "omega": [qcore.omega(p, r) for r in range(p.d + 1)],
    }, cfg.fmt)
    return EXIT_OK


def cmd_spectrum(cfg: RunConfig) -> int:
    p = cfg.single()
    spec = SchemeSpectrum.of(p)
    errs = spec.check()
    obj = spec.to_json()
    obj.pop("schema_version", None)
    status = EXIT_OK if not errs else EXIT_FALSIFIED
    if errs:
        obj["falsified"] = errs
    if cfg.extra.get("verify"):
        g = load_graph(p, cfg.cache)
        checks = []
        for t in range(p.d + 1):
            rep = verify_spectrum(g, t)
            checks.append({"t": t, "ok": rep.ok, "distinct": rep.distinct, "witness": rep.witness})
            if not rep.ok:
                status = EXIT_FALSIFIED
        obj["verify"] = checks
    if cfg.fmt == "pretty":
        out = {"params": p.label(), "multiplicities": spec.multiplicities}
        for r, row in enumerate(spec.P):
            out[f"P[{r}]"] = row
        for a, vals in obj["lambda_tables"].items():
            out[f"lambda a={a}"] = vals
        if "verify" in obj:
            out["verify"] = ["t=%d:%s" % (c["t"], "ok" if c["ok"] else "FAIL") for c in obj["verify"]]
        emit(out, "pretty")
    else:
        emit(obj, cfg.fmt)
    return status


def cmd_hoffman(cfg: RunConfig) -> int:
    p, t = cfg.single(), cfg.single_t()
    h = hoffman_bound(p, t)
    emit({"hoffman": h, "floor": h.numerator // h.denominator, "params": _pinfo(p), "t": t}, cfg.fmt)
    return EXIT_OK


def cmd_explicit(cfg: RunConfig) -> int:
    p, t = cfg.single(), cfg.single_t()
    emit({"explicit_bound": explicit_hoffman(p, t), "params": _pinfo(p), "t": t}, cfg.fmt)
    return EXIT_OK


def cmd_lp(cfg: RunConfig) -> int:
    p, t = cfg.single(), cfg.single_t()
    res = delsarte_lp(p, t)
    obj = {"lp_value": res.value, "floor": res.floor, "status": res.status,
           "iterations": res.iterations, "params": _pinfo(p), "t": t}
    emit(obj, cfg.fmt)
    if cfg.extra.get("dump"):
        sys.stdout.write(delsarte_problem(p, t).dump() + "\n")
    return EXIT_OK if res.status == "optimal" else EXIT_FALSIFIED


def _reports(cfg: RunConfig):
    insts = cfg.instances()
    if not insts:
        raise UsageError("no instances selected (give --family/--q/--d or --grid)")
    for p, t in insts:
        yield bound_report(p, t, with_lp=bool(cfg.extra.get("lp")))


def _sanity(r) -> bool:
    """Report-level invariants: floors below n, the example below the Hoffman floor."""
    ok = r.hoffman_floor is None or r.hoffman_floor <= r.n
    if ok and r.hoffman_floor is not None and r.example_size_exact is not None:
        ok = r.example_size_exact <= r.hoffman_floor
    if ok and r.lp_bound is not None and r.hoffman is not None:
        ok = r.lp_bound <= r.hoffman
    return ok


def cmd_bounds(cfg: RunConfig) -> int:
    reports = list(_reports(cfg))
    bad = [r for r in reports if not _sanity(r)]
    if len(reports) == 1 and cfg.fmt != "csv":
        obj = reports[0].to_json()
        obj.pop("schema_version", None)
        emit(obj, cfg.fmt)
    else:
        _emit_table(reports, cfg.fmt)
    for r in bad:
        sys.stderr.write(f"falsified: {r.params.label()} t={r.t}\n")
    return EXIT_FALSIFIED if bad else EXIT_OK


def _emit_table(reports, fmt: str) -> None:
    if fmt == "json":
        rows = []
        for r in reports:
            obj = r.to_json()
            obj.pop("schema_version", None)
            rows.append(obj)
        sys.stdout.write(json.dumps({"schema_version": SCHEMA_VERSION, "rows": rows}, indent=2) + "\n")
        return
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in reports:
        w.writerow(report_csv_row(r))
    sys.stdout.write(buf.getvalue())
    thr = sum(r.threshold_ok for r in reports)
    stab = sum(bool(r.stability_ok) for r in reports)
    sys.stdout.write(f"# rows={len(reports)} threshold_ok={thr} stability_ok={stab}\n")


def cmd_table(cfg: RunConfig) -> int:
    return cmd_bounds(cfg)


def cmd_search(cfg: RunConfig) -> int:
    p, t = cfg.single(), cfg.single_t()
    g = load_graph(p, cfg.cache)
    inst = EKRInstance.of(g, t)
    res = max_ekr(inst, budget=cfg.budget, workers=cfg.workers)
    obj = {"params": _pinfo(p), "t": t, **search_summary(inst, res)}
    status = EXIT_OK
    if res.optimal and 0 < t < p.d and res.size > hoffman_bound(p, t):
        obj["falsified"] = "clique exceeds the Hoffman bound"
        status = EXIT_FALSIFIED
    if cfg.fmt == "pretty":
        obj["witness"] = list(res.witness)
    emit(obj, cfg.fmt)
    return status


def cmd_verify(cfg: RunConfig) -> int:
    from .verify import SUITES, run_all

    names = cfg.extra.get("suite") or list(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise UsageError(f"unknown suite(s) {unknown}; choose from {sorted(SUITES)}")
    results = run_all(names, cache_dir=cfg.cache)
    rows = []
    for r in results:
        rows.append({"suite": r.name, "ok": r.ok, "checked": r.checked,
                     "failures": len(r.failures), "seconds": round(r.seconds, 2),
                     "first_witness": repr(r.failures[0]) if r.failures else None})
    if cfg.fmt == "json":
        emit({"suites": rows}, "json")
    else:
        for row in rows:
            mark = "PASS" if row["ok"] else "FAIL"
            line = f"{mark} {row['suite']}: {row['checked']} checks, {row['seconds']}s"
            if row["first_witness"]:
                line += f" (first failure: {row['first_witness']})"
            sys.stdout.write(line + "\n")
    return EXIT_OK if all(r.ok for r in results) else EXIT_FALSIFIED


COMMANDS = {
    "gauss": cmd_gauss, "count": cmd_count, "spectrum": cmd_spectrum, "hoffman": cmd_hoffman,
    "explicit": cmd_explicit, "lp": cmd_lp, "bounds": cmd_bounds, "search": cmd_search,
    "verify": cmd_verify, "table": cmd_table,
}


def dispatch(cfg: RunConfig) -> int:
    return COMMANDS[cfg.command](cfg)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return dispatch(make_config(ns))
    except (UsageError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
