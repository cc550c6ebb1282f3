"""hardyberg command line.

Exit status: 0 on success, 1 on a numeric failure or failed sweep (with a
JSON diagnostic on stdout), 2 on usage errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import replace
from typing import List, Optional, Sequence

from . import __version__
from .acceptance import run_all
from .experiments import (
    DEFAULT_A_GRID,
    DEFAULT_EPS_GRID,
    DEFAULT_FR_RADII,
    SCHEMA_VERSION,
    PreconditionError,
    SweepTable,
    _plain,
    admissible_sweep,
    carleson_boundary_check,
    contractivity_sweep,
    extremal_check,
    forelli_rudin_sweep,
    noncompactness_witness,
)
from .funcrep import DimensionMismatch, parse_function
from .geometry import MonteCarloError
from .integrate import QuadConfig, QuadratureError
from .norms import ConsistencyError, UnsupportedNorm, norm_result
from .params import (
    InvalidParameter,
    LogarithmicGrowth,
    classify,
    growth_envelope,
    parse_real,
    parse_space,
    tight_fitting,
)

NUMERIC_ERRORS = (QuadratureError, MonteCarloError, ConsistencyError)


class UsageError(Exception):
    pass


def _space(text: str):
    try:
        return parse_space(text)
    except InvalidParameter as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _real(text: str) -> float:
    try:
        return float(parse_real(text))
    except InvalidParameter as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _reals(text: str) -> List[float]:
    return [_real(x) for x in text.split(",") if x.strip()]


def _dim(text: str) -> int:
    try:
        n = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"dimension must be an integer, got {text!r}") from exc
    if n < 1:
        raise argparse.ArgumentTypeError("dimension must be at least 1")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "pretty"), default="json")
    common.add_argument("--seed", type=int, default=0)
    q = common.add_argument_group("quadrature overrides")
    q.add_argument("--angular-nodes", type=int)
    q.add_argument("--simplex-nodes", type=int)
    q.add_argument("--radial-nodes", type=int)
    q.add_argument("--mc-samples", type=int)
    q.add_argument("--rel-tol", type=float)
    q.add_argument("--max-refine", type=int)

    ap = argparse.ArgumentParser(prog="hardyberg", description="Embeddings between Hardy and weighted Bergman spaces on the unit ball.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, metavar="command")

    def cmd(name, help_):
        return sub.add_parser(name, help=help_, parents=[common])

    def pair(p):
        p.add_argument("--source", type=_space, required=True, help="H:p or A:p:alpha")
        p.add_argument("--target", type=_space, required=True)
        p.add_argument("--n", type=_dim, required=True)

    pair(cmd("classify", "decide containment, compactness and equality"))
    g = cmd("growth", "pointwise growth envelope of a space")
    g.add_argument("--space", type=_space, required=True)
    g.add_argument("--n", type=_dim, required=True)
    pair(cmd("tight", "tight-fitting status and extremal exponent"))
    nm = cmd("norm", "norm of a function in H^p or A^p_alpha")
    nm.add_argument("--space", type=_space, required=True)
    nm.add_argument("--n", type=_dim, required=True)
    nm.add_argument("--f", required=True, help="const:c | mono:m1,..,mn[:c] | kernel:s:a1,..,an | @file.json")
    w = cmd("witness", "non-compactness witness sweep")
    pair(w)
    w.add_argument("--a-grid", type=_reals, default=list(DEFAULT_A_GRID))
    w.add_argument("--directions", type=int, default=8)
    fr = cmd("fr-sweep", "Forelli-Rudin growth sweep")
    fr.add_argument("--alpha", type=_real, required=True)
    fr.add_argument("--t", type=_real, required=True)
    fr.add_argument("--n", type=_dim, required=True)
    fr.add_argument("--radii", type=_reals, default=list(DEFAULT_FR_RADII))
    rs = cmd("region-sweep", "truncated admissible-region integrals")
    rs.add_argument("--t", type=_real, required=True)
    rs.add_argument("--n", type=_dim, required=True)
    rs.add_argument("--eps-grid", type=_reals, default=list(DEFAULT_EPS_GRID))
    c = cmd("contract", "contractivity falsification sweep")
    pair(c)
    c.add_argument("--samples", type=int, default=1000)
    c.add_argument("--degree", type=int, default=10)
    e = cmd("extremal", "conjectured extremal equality check")
    pair(e)
    e.add_argument("--a-grid", type=_reals, default=[0.0, 0.3, 0.5, 0.7])
    cb = cmd("carleson", "area-function diagnostics for H^p into A^q_alpha")
    cb.add_argument("--p", type=_real, required=True)
    cb.add_argument("--q", type=_real, required=True)
    cb.add_argument("--alpha", type=_real, required=True)
    cb.add_argument("--n", type=_dim, default=1)
    va = cmd("verify-all", "run the acceptance suite")
    va.add_argument("--quick", action="store_true")
    va.add_argument("--only", type=lambda s: [int(x) for x in s.split(",")], help="comma-separated criterion numbers")
    return ap


def _cfg(args) -> QuadConfig:
    over = {
        "angular_nodes": args.angular_nodes,
        "simplex_nodes": args.simplex_nodes,
        "radial_nodes": args.radial_nodes,
        "mc_samples": args.mc_samples,
        "rel_tol": args.rel_tol,
        "max_refine": args.max_refine,
    }
    try:
        return replace(QuadConfig(seed=args.seed), **{k: v for k, v in over.items() if v is not None})
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


# -- output ------------------------------------------------------------------------

def _envelope(command: str, seed: int, body: dict) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": command, "seed": seed, **body}


def _flat_csv(rows: Sequence[dict]) -> str:
    keys: List[str] = []
    for r in rows:
        keys.extend(k for k in r if k not in keys)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(keys)
    for r in rows:
        w.writerow([_cell(r.get(k, "")) for k in keys])
    return buf.getvalue()


def _cell(v):
    v = _plain(v)
    if v is None:
        return ""
    if isinstance(v, (list, dict)):
        return json.dumps(v)
    return v


def _pretty(obj: dict) -> str:
    lines = []
    for k, v in obj.items():
        if k == "records":
            lines.append(f"records: {len(v)}")
            for r in v:
                lines.append("  " + json.dumps(r, default=_plain))
        elif isinstance(v, dict):
            lines.append(f"{k}:")
            lines.extend(f"  {kk}: {json.dumps(vv, default=_plain)}" for kk, vv in v.items())
        else:
            lines.append(f"{k}: {json.dumps(v, default=_plain)}")
    return "\n".join(lines) + "\n"


def _emit(obj: dict, fmt: str, table: Optional[SweepTable] = None, rows: Optional[Sequence[dict]] = None) -> str:
    if fmt == "json":
        return json.dumps(obj, default=_plain) + "\n"
    if fmt == "csv":
        if table is not None:
            return table.to_csv()
        return _flat_csv(rows if rows is not None else [{k: v for k, v in obj.items()}])
    return _pretty(obj)


# -- commands ------------------------------------------------------------------------

def _classify(args, cfg):
    v = classify(args.source, args.target, args.n)
    d = v.as_dict()
    body = {"source": str(args.source), "target": str(args.target), "n": args.n,
            "contains": d["contains"], "compact": d["compact"], "equal": d["equal"], "basis": d["basis"]}
    if args.format == "json":
        # the verdict itself is the documented payload
        return json.dumps({k: body[k] for k in ("contains", "compact", "equal", "basis")}) + "\n", 0
    return _emit(_envelope("classify", args.seed, body), args.format, rows=[body]), 0


def _growth(args, cfg):
    env = growth_envelope(args.space, args.n)
    if isinstance(env, LogarithmicGrowth):
        body = {"space": str(args.space), "n": args.n, "kind": "logarithmic", "exponent": None}
    else:
        body = {"space": str(args.space), "n": args.n, "kind": "power", "exponent": float(env.exponent)}
    body["basis"] = "Lemma3"
    return _emit(_envelope("growth", args.seed, body), args.format, rows=[body]), 0


def _tight(args, cfg):
    body = {"source": str(args.source), "target": str(args.target), "n": args.n, **tight_fitting(args.source, args.target, args.n).as_dict(), "basis": "Conj22"}
    return _emit(_envelope("tight", args.seed, body), args.format, rows=[body]), 0


def _norm(args, cfg):
    try:
        f = parse_function(args.f, args.n)
    except (ValueError, DimensionMismatch, OSError) as exc:
        raise UsageError(str(exc)) from exc
    res = norm_result(f, args.space, args.n, cfg)
    body = {"space": str(args.space), "n": args.n, "f": args.f, "value": res.value, "converged": bool(res.converged),
            "rel_error": float(res.rel_error), "nodes_used": res.nodes_used, "basis": "norm"}
    status = 0 if res.converged else 1
    return _emit(_envelope("norm", args.seed, body), args.format, rows=[body]), status


def _table(command: str, table: SweepTable, args):
    obj = _envelope(command, args.seed, table.as_dict())
    return _emit(obj, args.format, table=table), 0 if table.passed else 1


def _witness(args, cfg):
    return _table("witness", noncompactness_witness(args.source, args.target, args.n, cfg, args.a_grid, args.directions), args)


def _fr(args, cfg):
    return _table("fr-sweep", forelli_rudin_sweep(args.alpha, args.t, args.n, args.radii, cfg), args)


def _region(args, cfg):
    return _table("region-sweep", admissible_sweep(args.t, args.n, args.eps_grid, cfg), args)


def _contract(args, cfg):
    cfg = replace(cfg, rel_tol=args.rel_tol or 1e-6)
    return _table("contract", contractivity_sweep(args.source, args.target, args.n, args.samples, args.degree, args.seed, cfg), args)


def _extremal(args, cfg):
    return _table("extremal", extremal_check(args.source, args.target, args.n, args.a_grid, cfg), args)


def _carleson(args, cfg):
    return _table("carleson", carleson_boundary_check(args.p, args.q, args.alpha, args.n, cfg), args)


def _verify(args, cfg):
    results = run_all(quick=args.quick, only=args.only)
    ok = all(r.passed for r in results)
    if args.format == "pretty":
        text = "".join(r.line() + "\n" for r in results) + f"overall: {'pass' if ok else 'fail'}\n"
    else:
        rows = [{k: v for k, v in r.as_dict().items() if k != "data"} for r in results]
        obj = _envelope("verify-all", args.seed, {"quick": args.quick, "verdict": "pass" if ok else "fail", "criteria": rows})
        text = _emit(obj, args.format, rows=rows)
    return text, 0 if ok else 1


COMMANDS = {
    "classify": _classify,
    "growth": _growth,
    "tight": _tight,
    "norm": _norm,
    "witness": _witness,
    "fr-sweep": _fr,
    "region-sweep": _region,
    "contract": _contract,
    "extremal": _extremal,
    "carleson": _carleson,
    "verify-all": _verify,
}


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed usage
        return int(exc.code or 0)
    try:
        cfg = _cfg(args)
        text, status = COMMANDS[args.command](args, cfg)
    except (UsageError, InvalidParameter, PreconditionError, UnsupportedNorm, DimensionMismatch, ValueError) as exc:
        parser.print_usage(err)
        err.write(f"hardyberg {args.command}: error: {exc}\n")
        return 2
    except NUMERIC_ERRORS as exc:
        diag = {"schema_version": SCHEMA_VERSION, "command": args.command, "seed": args.seed,
                "error": type(exc).__name__, "message": str(exc)}
        res = getattr(exc, "result", None)
        if res is not None:
            diag["nodes_used"] = res.nodes_used
            diag["value"] = _plain(res.real)
        out.write(json.dumps(diag, default=_plain) + "\n")
        return 1
    out.write(text)
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
