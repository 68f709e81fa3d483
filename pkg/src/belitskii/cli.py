"""Command-line front end.

Exit codes: 0 ok, 1 not equivalent, 2 malformed input, 3 spectrum not split
over Q(i), 4 empty state space, 5 dimension mismatch.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import analysis, catalog
from .errors import (
    EigenvaluesNotInField,
    EmptyStateSpace,
    MalformedInput,
    MalformedScalar,
    SizeMismatch,
    Unsupported,
)
from .linalg import format_scalar
from .reduction import SystemTriple, canonicalize, connecting_element
from .serialize import (
    block_to_dict,
    canonical_report,
    dumps,
    group_to_dict,
    load_system,
    matrix_to_lists,
    system_to_dict,
    write_atomic,
)

EXIT_OK = 0
EXIT_NOT_EQUIVALENT = 1
EXIT_MALFORMED = 2
EXIT_NOT_SPLIT = 3
EXIT_EMPTY_STATE = 4
EXIT_SIZE_MISMATCH = 5

DEFAULT_MAX_DIM = 12


class _Failure(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _exit_code(e: Exception) -> int:
    if isinstance(e, _Failure):
        return e.code
    if isinstance(e, (MalformedInput, MalformedScalar, Unsupported)):
        return EXIT_MALFORMED
    if isinstance(e, EigenvaluesNotInField):
        return EXIT_NOT_SPLIT
    if isinstance(e, EmptyStateSpace):
        return EXIT_EMPTY_STATE
    if isinstance(e, SizeMismatch):
        return EXIT_SIZE_MISMATCH
    raise e


def max_dim() -> int:
    raw = os.environ.get("BELITSKII_MAX_DIM")
    if raw is None or raw.strip() == "":
        return DEFAULT_MAX_DIM
    try:
        value = int(raw)
    except ValueError:
        raise _Failure(EXIT_MALFORMED, f"BELITSKII_MAX_DIM must be an integer, got {raw!r}") from None
    return value


def read_system(path) -> SystemTriple:
    s = load_system(path)
    cap = max_dim()
    if s.total_dim > cap:
        raise MalformedInput(f"{path}: |d| = {s.total_dim} exceeds BELITSKII_MAX_DIM = {cap}")
    return s


# ---------------------------------------------------------------------------
# text rendering
# ---------------------------------------------------------------------------


def _fmt_matrix(M) -> str:
    if M.rows == 0 or M.cols == 0:
        return f"({M.rows}x{M.cols})"
    return "[" + "; ".join(" ".join(r) for r in matrix_to_lists(M)) + "]"


def _fmt_system(s: SystemTriple) -> list[str]:
    return [f"d = ({s.m}, {s.n}, {s.l})", f"A = {_fmt_matrix(s.A)}", f"B = {_fmt_matrix(s.B)}",
            f"C = {_fmt_matrix(s.C)}"]


def _fmt_group(g) -> list[str]:
    return [f"X = {_fmt_matrix(g.X)}", f"Y = {_fmt_matrix(g.Y)}", f"Z = {_fmt_matrix(g.Z)}"]


def _fmt_block(k: int, b) -> str:
    info = block_to_dict(b)
    r0, r1 = info["row_range"]
    c0, c1 = info["col_range"]
    line = f"{k:>3}  {b.location.region}[{r0}:{r1}, {c0}:{c1}]  {b.kind} {b.rows}x{b.cols}  sigma={b.sigma}"
    if "rank" in info:
        line += f"  rank={info['rank']}"
    if "eigenvalues" in info:
        line += "  " + ", ".join(f"{e['value']}:{e['jordan_blocks']}" for e in info["eigenvalues"])
    return line


# ---------------------------------------------------------------------------
# commands; each returns (exit code, text or JSON-able object)
# ---------------------------------------------------------------------------


def run_canon(path, trace=False, witness=False):
    c = canonicalize(read_system(path))
    report = canonical_report(c, witness=witness, trace=trace)
    lines = _fmt_system(c.canonical)
    if witness:
        lines += ["witness:"] + ["  " + x for x in _fmt_group(c.witness)]
    if trace:
        lines += ["trace:"] + [_fmt_block(k + 1, b) for k, b in enumerate(c.trace)]
        lines += ["sigma: " + " ".join(str(x) for x in c.sigmas), f"total: {sum(c.sigmas)}"]
    return EXIT_OK, report, lines


def run_equiv(path1, path2, witness=False):
    s1, s2 = read_system(path1), read_system(path2)
    if s1.d != s2.d:
        raise SizeMismatch(f"dimension vectors differ: {s1.d} vs {s2.d}")
    g = connecting_element(s1, s2)
    verdict = "EQUIVALENT" if g is not None else "NOT EQUIVALENT"
    report = {"equivalent": g is not None, "verdict": verdict}
    lines = [verdict]
    if witness and g is not None:
        report["witness"] = group_to_dict(g)
        lines += _fmt_group(g)
    return (EXIT_OK if g is not None else EXIT_NOT_EQUIVALENT), report, lines


def run_orbit_dim(path, oracle=False):
    s = read_system(path)
    c = canonicalize(s)
    info = analysis.orbit_dimension(c)
    report = {"d": list(s.d), "dim_G": info.dim_G, "dim_orbit": info.dim_orbit,
              "dim_stabilizer": info.dim_stabilizer, "dim_system_space": info.dim_system_space,
              "sigma": list(c.sigmas)}
    lines = [f"dim_orbit {info.dim_orbit}", f"dim_stabilizer {info.dim_stabilizer}", f"dim_G {info.dim_G}"]
    if oracle:
        value = analysis.orbit_dimension_oracle(s)
        flag = "AGREE" if value == info.dim_orbit else "DISAGREE"
        report["oracle"] = value
        report["oracle_agrees"] = flag == "AGREE"
        lines.append(f"oracle {value} {flag}")
    return EXIT_OK, report, lines


def run_decompose(path, out_dir=None):
    s = read_system(path)
    parts = analysis.decompose(s)
    if out_dir is not None:
        Path(out_dir).mkdir(parents=True, exist_ok=True)
    summands = []
    lines = [f"{len(parts)} summand(s)"]
    for k, p in enumerate(parts):
        entry = {"d": list(p.canonical.d), "system": system_to_dict(p.canonical), "template": None}
        label = "-"
        if catalog.in_table_scope(p.canonical):
            hit = catalog.match_template(p)
            if hit is not None:
                entry["template"] = hit[0]
                entry["params"] = {name: format_scalar(v) for name, v in sorted(hit[1].items())}
                label = hit[0] + "".join(f" {n}={v}" for n, v in entry["params"].items())
        summands.append(entry)
        if out_dir is not None:
            target = Path(out_dir) / f"{Path(path).stem}.summand{k + 1}.json"
            write_atomic(target, dumps(entry["system"]))
            entry["file"] = str(target)
        lines.append(f"  [{k + 1}] d={tuple(p.canonical.d)}  template {label}")
    multiset: dict[str, int] = {}
    for e in summands:
        key = e["template"] or "d{}{}{}".format(*e["d"])
        multiset[key] = multiset.get(key, 0) + 1
    report = {"summands": summands, "multiset": dict(sorted(multiset.items()))}
    lines.append("multiset: " + ", ".join(f"{k} x{v}" for k, v in sorted(multiset.items())))
    return EXIT_OK, report, lines


def run_catalog(dim=4, verify=None, seed=0):
    if verify is None:
        table = catalog.templates(dim)
        report = {"count": len(table), "templates": [t.to_dict() for t in table]}
        lines = [f"{t.id}  d={t.d}  {t.describe()}" for t in table] + [f"{len(table)} templates"]
        return EXIT_OK, report, lines
    rep = catalog.verify_catalog(verify, seed)
    report = rep.to_dict()
    lines = [f"instantiations checked: {rep.checked_instantiations}",
             f"fixed-point failures: {len(rep.fixed_point_failures)}",
             f"indecomposability failures: {len(rep.indecomposability_failures)}",
             f"trials: {rep.trials}  summands: {rep.summands}  outside table: {rep.out_of_scope}",
             f"unmatched summands: {len(rep.unmatched)}",
             "PASS" if rep.ok else "FAIL"]
    return (EXIT_OK if rep.ok else EXIT_NOT_EQUIVALENT), report, lines


# ---------------------------------------------------------------------------
# batch mode
# ---------------------------------------------------------------------------


def _batch_job(job):
    command, path, out_dir, opts = job
    try:
        if command == "canon":
            code, report, _ = run_canon(path, **opts)
        elif command == "orbit-dim":
            code, report, _ = run_orbit_dim(path, **opts)
        else:
            code, report, _ = run_decompose(path, out_dir=out_dir)
    except Exception as e:  # noqa: BLE001 - mapped to an exit code or re-raised
        return path.name, _exit_code(e), {"error": str(e)}
    target = Path(out_dir) / f"{path.stem}.{command}.json"
    write_atomic(target, dumps(report))
    return path.name, code, {"output": str(target)}


def run_batch(command, directory, out_dir=None, opts=None, workers=None):
    directory = Path(directory)
    if not directory.is_dir():
        raise MalformedInput(f"{directory} is not a directory")
    out_dir = Path(out_dir) if out_dir else directory
    out_dir.mkdir(parents=True, exist_ok=True)
    files = sorted(p for p in directory.glob("*.json")
                   if not any(p.name.endswith(f".{c}.json") for c in ("canon", "orbit-dim", "decompose"))
                   and ".summand" not in p.name)
    jobs = [(command, p, out_dir, opts or {}) for p in files]
    if workers == 1 or len(jobs) <= 1:
        results = [_batch_job(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_batch_job, jobs))
    results.sort(key=lambda r: r[0])
    report = {"files": {name: dict(info, exit=code) for name, code, info in results}}
    worst = max((code for _, code, _ in results), default=EXIT_OK)
    lines = [f"{name}: exit {code}  {info.get('output', info.get('error'))}" for name, code, info in results]
    return worst, report, lines


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="belitskii", description="Canonical forms of linear systems (A, B, C) over Q(i).")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--json", action="store_true", help="print one JSON document")

    sp = sub.add_parser("canon", help="reduce a system to canonical form")
    sp.add_argument("path", nargs="?")
    sp.add_argument("--trace", action="store_true", help="list reduced blocks and sigma values")
    sp.add_argument("--witness", action="store_true", help="print (X, Y, Z) taking the input to the output")
    sp.add_argument("--batch", metavar="DIR", help="process every *.json file in DIR")
    sp.add_argument("--out", metavar="DIR", help="output directory for --batch")
    common(sp)

    sp = sub.add_parser("equiv", help="decide whether two systems are equivalent")
    sp.add_argument("path1")
    sp.add_argument("path2")
    sp.add_argument("--witness", action="store_true", help="print a connecting group element")
    common(sp)

    sp = sub.add_parser("decompose", help="split a system into indecomposable summands")
    sp.add_argument("path", nargs="?")
    sp.add_argument("--out", metavar="DIR", help="write one system file per summand into DIR")
    sp.add_argument("--batch", metavar="DIR", help="process every *.json file in DIR")
    common(sp)

    sp = sub.add_parser("orbit-dim", help="dimension of the equivalence class")
    sp.add_argument("path", nargs="?")
    sp.add_argument("--oracle", action="store_true", help="also compute the tangent-map rank")
    sp.add_argument("--batch", metavar="DIR", help="process every *.json file in DIR")
    sp.add_argument("--out", metavar="DIR", help="output directory for --batch")
    common(sp)

    sp = sub.add_parser("catalog", help="list or verify the table of indecomposables")
    sp.add_argument("--dim", type=int, default=4, help="largest |d| to list (at most 4)")
    sp.add_argument("--verify", type=int, metavar="TRIALS", help="run the verification with TRIALS random systems")
    sp.add_argument("--seed", type=int, default=0)
    common(sp)
    return p


def _dispatch(args):
    if getattr(args, "batch", None):
        opts = {}
        if args.command == "canon":
            opts = {"trace": args.trace, "witness": args.witness}
        elif args.command == "orbit-dim":
            opts = {"oracle": args.oracle}
        return run_batch(args.command, args.batch, args.out, opts)
    if args.command in ("canon", "decompose", "orbit-dim") and not args.path:
        raise MalformedInput(f"{args.command}: an input file or --batch DIR is required")
    if args.command == "canon":
        return run_canon(args.path, trace=args.trace, witness=args.witness)
    if args.command == "equiv":
        return run_equiv(args.path1, args.path2, witness=args.witness)
    if args.command == "orbit-dim":
        return run_orbit_dim(args.path, oracle=args.oracle)
    if args.command == "decompose":
        return run_decompose(args.path, out_dir=args.out)
    return run_catalog(args.dim, args.verify, args.seed)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code, report, lines = _dispatch(args)
    except Exception as e:  # noqa: BLE001
        code = _exit_code(e)
        if args.json:
            sys.stdout.write(dumps({"error": type(e).__name__.lstrip("_"), "message": str(e), "exit": code}))
        print(f"error: {e}", file=sys.stderr)
        return code
    if args.json:
        sys.stdout.write(dumps(report))
    else:
        print("\n".join(lines))
    return code


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
