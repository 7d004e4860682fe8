"""Command line interface: ``pcrbds {solve,check,gen,encode,bench}``.

Exit codes: 0 solution found / checks pass, 1 usage or parse error,
2 infeasible / checks fail, 3 resource limit.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import astuple, dataclass, fields
from pathlib import Path

from . import encoders
from .estimators import SOLVERS, epsilon_str
from .generators import FAMILIES, generate
from .graphs import (ConnGraph, InstanceError, InternalConsistencyError, ResourceLimitError,
                     is_kdd_free, verify_solution)
from .io import dumps_instance, read_instance
from .oracle import OracleLimits, brute_force_best_coverage, brute_force_min_size
from .validation import check_epsilon

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_RESOURCE = 0, 1, 2, 3

log = logging.getLogger("pcrbds")


@dataclass
class RunRecord:
    algo: str
    epsilon: str
    d: str
    seed: int
    trials: str
    verdict: str
    size: str
    coverage: str
    wall_time_ms: str
    opt_coverage: str = ""
    opt_size: str = ""


CSV_HEADER = [f.name for f in fields(RunRecord)]


class UsageError(Exception):
    pass


def _parse_vertices(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"cannot parse vertex list {text!r}") from exc


def _make_solver(args, algo: str):
    cls = SOLVERS[algo]
    if algo == "brute":
        return cls(max_red=getattr(args, "oracle_max_red", 24))
    params = dict(mode=args.mode, trials=args.trials, seed=args.seed, n_jobs=args.n_jobs)
    if algo in ("epas", "pas"):
        if args.epsilon is None or args.d is None:
            raise UsageError(f"--epsilon and --d are required for --algo {algo}")
        try:
            check_epsilon(args.epsilon)
        except (ValueError, TypeError) as exc:
            raise UsageError(str(exc)) from exc
        params.update(epsilon=args.epsilon, d=args.d)
    return cls(**params)


def run_one(inst, algo: str, args) -> tuple[RunRecord, tuple | None]:
    """Solve and re-verify; never raises for solver-side resource limits."""
    solver = _make_solver(args, algo)
    eps = epsilon_str(args.epsilon) if algo in ("epas", "pas") else ""
    d = str(args.d) if algo in ("epas", "pas") else ""
    trials = "" if algo == "brute" or args.trials is None else str(args.trials)
    start = time.perf_counter()
    vertices = None
    try:
        solver.fit(inst)
    except ResourceLimitError:
        verdict = "resource_error"
    else:
        if solver.feasible_:
            vertices = solver.solution_.vertices
            report = solver.verify(inst, vertices)
            if not report.ok:
                raise InternalConsistencyError(f"{algo} returned unverified set {vertices}: {report}")
            verdict = "solution"
        else:
            verdict = "infeasible"
    wall = f"{(time.perf_counter() - start) * 1000:.3f}"
    size = str(len(vertices)) if vertices is not None else ""
    coverage = str(inst.cov.coverage(vertices)) if vertices is not None else ""
    rec = RunRecord(algo, eps, d, args.seed, trials, verdict, size, coverage, wall)
    return rec, vertices


def _write_csv(path, records) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for rec in records:
        writer.writerow(astuple(rec))
    if path == "-":
        sys.stdout.write(buf.getvalue())
    else:
        Path(path).write_text(buf.getvalue(), encoding="utf-8")


def cmd_solve(args) -> int:
    inst, _ = read_instance(args.file)
    if args.terminals is not None:
        inst = inst.replace(terminals=frozenset(_parse_vertices(args.terminals)))
    rec, vertices = run_one(inst, args.algo, args)
    print(f"verdict: {rec.verdict}")
    if vertices is not None:
        print(f"vertices: {','.join(map(str, vertices))}")
        print(f"size: {rec.size}")
        print(f"coverage: {rec.coverage}")
        print("connected: true")
    if args.csv:
        _write_csv(args.csv, [rec])
    return {"solution": EXIT_OK, "infeasible": EXIT_INFEASIBLE, "resource_error": EXIT_RESOURCE}[rec.verdict]


def cmd_check(args) -> int:
    inst, _ = read_instance(args.file)
    if args.kdd is not None:
        try:
            free = is_kdd_free(inst.cov, args.kdd)
        except ResourceLimitError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_RESOURCE
        print(f"K_{args.kdd},{args.kdd}-free: {'yes' if free else 'no'}")
        return EXIT_OK if free else EXIT_INFEASIBLE
    if args.solution is None:
        raise UsageError("check needs --solution or --kdd")
    report = verify_solution(inst, _parse_vertices(args.solution), args.target, args.budget)
    for name in ("size_ok", "terminals_ok", "connected", "coverage", "meets_target"):
        value = getattr(report, name)
        print(f"{name}: {str(value).lower() if isinstance(value, bool) else value}")
    print(f"result: {'pass' if report.ok else 'fail'}")
    return EXIT_OK if report.ok else EXIT_INFEASIBLE


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_gen(args) -> int:
    inst, meta = generate(args.family, args.nr, args.nb, k=args.k, t=args.t, max_red_degree=args.max_red_degree,
                          d_free=args.d_free, seed=args.seed)
    _emit(dumps_instance(inst, meta), args.out)
    return EXIT_OK


def _load_source(path):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InstanceError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def cmd_encode(args) -> int:
    src = _load_source(args.source)
    k = args.k if args.k is not None else src.get("k")
    t = args.t if args.t is not None else src.get("t")
    if k is None or t is None:
        raise UsageError("k and t must be given on the command line or in the source file")
    if args.source_kind in ("maxcov", "phs"):
        ss = encoders.SetSystem.of(src["universe_size"], src["sets"])
        if args.source_kind == "phs":
            inst = encoders.from_partial_hitting_set(ss, k, t)
        else:
            inst = encoders.from_max_coverage(ss, k, t, args.conn_mode or "clique")
    else:
        g = ConnGraph.from_edges(src["vertex_count"], src["edges"])
        if args.source_kind == "pds":
            inst = encoders.from_partial_dominating_set(g, k, t, args.conn_mode or "clique")
        elif args.source_kind == "bcds":
            inst = encoders.from_budgeted_cds(g, k, t)
        else:
            inst = encoders.from_partial_vertex_cover(g, k, t, args.conn_mode or "clique")
    meta = {"encoded_from": args.source_kind}
    if args.conn_mode:
        meta["conn_mode"] = args.conn_mode
    _emit(dumps_instance(inst, meta), args.out)
    return EXIT_OK


def _bench_cell(path, inst, algo, args, limits):
    try:
        rec, _ = run_one(inst, algo, args)
    except (InstanceError, ValueError) as exc:
        log.warning("%s on %s failed: %s", algo, path, exc)
        rec = RunRecord(algo, "", "", args.seed, "", "error", "", "", "0")
    try:
        best = brute_force_best_coverage(inst, inst.k, limits)
        rec.opt_coverage = "" if best is None else str(best[0])
        smallest = brute_force_min_size(inst, inst.t, limits)
        rec.opt_size = "" if smallest is None else str(smallest[0])
    except ResourceLimitError:
        pass
    return rec


def cmd_bench(args) -> int:
    corpus = sorted(Path(args.corpus).glob("*.json"))
    algos = [a.strip() for a in args.algos.split(",") if a.strip()]
    for a in algos:
        if a not in SOLVERS:
            raise UsageError(f"unknown algorithm {a!r}")
    limits = OracleLimits(max_red=args.oracle_max_red)
    cells = []
    for path in corpus:
        inst, _ = read_instance(path)
        cells += [(path, inst, a) for a in algos]
    # solver-internal parallelism stays at 1; cells run side by side instead
    cell_args = argparse.Namespace(**{**vars(args), "n_jobs": 1})
    if args.n_jobs > 1:
        with ThreadPoolExecutor(args.n_jobs) as pool:
            records = list(pool.map(lambda c: _bench_cell(*c, cell_args, limits), cells))
    else:
        records = [_bench_cell(*c, cell_args, limits) for c in cells]
    _write_csv(args.out, records)
    return EXIT_OK


def _solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--epsilon", help="rational N/D in (0,1); required for epas and pas")
    p.add_argument("--d", type=int, help="K_{d,d}-freeness parameter; required for epas and pas")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int)
    p.add_argument("--mode", choices=("randomized", "exhaustive"), default="randomized")
    p.add_argument("--n-jobs", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pcrbds", description="Partial connected red-blue dominating set solvers")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve an instance file")
    p.add_argument("file")
    p.add_argument("--algo", choices=sorted(SOLVERS), required=True)
    p.add_argument("--terminals", help="comma-separated red vertices forced into the solution")
    p.add_argument("--csv", help="write the run record as CSV to this path ('-' for stdout)")
    _solver_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check", help="verify a candidate solution or K_{d,d}-freeness")
    p.add_argument("file")
    p.add_argument("--solution")
    p.add_argument("--target", type=int, help="coverage target (default: the instance's t)")
    p.add_argument("--budget", type=int, help="size budget (default: the instance's k)")
    p.add_argument("--kdd", type=int)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("gen", help="generate a seeded random instance")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--nr", type=int, required=True)
    p.add_argument("--nb", type=int, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--max-red-degree", type=int, default=3)
    p.add_argument("--d-free", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("encode", help="encode a classical problem instance")
    p.add_argument("--from", dest="source_kind", choices=("maxcov", "pds", "bcds", "pvc", "phs"), required=True)
    p.add_argument("source", help="JSON: {universe_size, sets} or {vertex_count, edges}, optional k/t")
    p.add_argument("--k", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--conn-mode", choices=("clique", "star", "gadget"))
    p.add_argument("--out")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("bench", help="run algorithms over a directory of instance files")
    p.add_argument("--corpus", required=True)
    p.add_argument("--algos", default="exact-t,epas,pas,brute")
    p.add_argument("--out", default="-")
    p.add_argument("--oracle-max-red", type=int, default=16)
    _solver_flags(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (UsageError, InstanceError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InternalConsistencyError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
