"""Command-line entry point: ``minkpoly {sample|flow|gt|polytope|verify}``.

Exit codes: 0 success, 1 verification failure, 2 bad input or infeasible
spec, 3 unbounded polytope without --dmax, 4 non-real truncation spectrum.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__, bending, io, polygon as pg, pseudo_gt as gt, verification
from .errors import (
    EmptyPolytope,
    MinkpolyError,
    NonRealSpectrum,
    PolygonError,
    UnboundedNeedsDmax,
)
from .polytope import is_bounded, lattice_points
from .seeding import task_rng

EXIT_VERIFY = 1
EXIT_INPUT = 2
EXIT_UNBOUNDED = 3
EXIT_SPECTRUM = 4


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _threads() -> int:
    raw = os.environ.get("MINKPOLY_THREADS", "0")
    try:
        return max(0, int(raw))
    except ValueError:
        raise CliError(EXIT_INPUT, f"MINKPOLY_THREADS must be an integer, got {raw!r}")


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _read(path: str) -> str:
    try:
        return sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(EXIT_INPUT, f"cannot read {path}: {exc}")


def _load(path: str) -> list[pg.Polygon]:
    try:
        polys = io.load_polygons(_read(path))
    except (ValueError, PolygonError) as exc:
        raise CliError(EXIT_INPUT, f"invalid polygon input: {exc}")
    if not polys:
        raise CliError(EXIT_INPUT, "input holds no polygons")
    return polys


def _spec(args) -> pg.PolygonSpec:
    try:
        spec = pg.PolygonSpec(args.p, args.q, tuple(args.r))
        return spec.normalized() if args.normalize else spec
    except ValueError as exc:
        raise CliError(EXIT_INPUT, str(exc))


def _polytope(spec: pg.PolygonSpec):
    try:
        return spec.polytope()
    except EmptyPolytope as exc:
        raise CliError(EXIT_INPUT, f"infeasible spec: {exc}")


# --- subcommands ----------------------------------------------------------------


def cmd_sample(args) -> int:
    spec = _spec(args)
    pp = _polytope(spec)
    if args.dmax is None and not is_bounded(pp):
        raise CliError(EXIT_UNBOUNDED, "polytope is unbounded (q > 1); pass --dmax")
    if args.count < 0:
        raise CliError(EXIT_INPUT, "--count must be >= 0")

    def one(i: int) -> dict:
        P = pg.sample_polygon(spec, args.dmax, task_rng(args.seed, i), degauge=args.degauge)
        return io.polygon_to_dict(P)

    try:
        threads = _threads()
        if threads > 1 and args.count > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                polys = list(pool.map(one, range(args.count)))
        else:
            polys = [one(i) for i in range(args.count)]
    except EmptyPolytope as exc:
        raise CliError(EXIT_INPUT, f"cannot sample: {exc}")
    header = {
        "p": spec.p,
        "q": spec.q,
        "r": list(spec.r),
        "dmax": args.dmax,
        "count": args.count,
        "seed": args.seed,
        "normalized": bool(args.normalize),
        "degauge": bool(args.degauge),
    }
    _emit(io.dumps({"header": header, "polygons": polys}) + "\n", args.out)
    return 0


def _trace_row(k: int, t: float, P: pg.Polygon):
    d = pg.diagonals(P)[2 : P.n - 1]
    phi = pg.dihedral_angles(P, strict=False)
    res = float(np.max(np.abs(pg.closure_residual(P.edges))))
    return k, t, phi, d, res


def cmd_flow(args) -> int:
    P = _load(args.input)[args.index]
    if not 2 <= args.diag <= P.n - 2:
        raise CliError(EXIT_INPUT, f"--diag must lie in 2..{P.n - 2}")
    if args.steps < 1:
        raise CliError(EXIT_INPUT, "--steps must be >= 1")
    time = args.time
    if args.periods is not None:
        time = args.periods * 2.0 * np.pi / pg.diagonals(P)[args.diag]
    if time is None:
        raise CliError(EXIT_INPUT, "pass --time or --periods")
    states = bending.flow_trace(P, args.diag, time, args.steps, args.mode, args.integrator_steps)
    lines = [",".join(io.trace_header(P.n))]
    lines += io.trace_rows(_trace_row(k, t, Q) for k, t, Q in states)
    _emit("\n".join(lines) + "\n", args.out)
    final = args.final
    if final is None and args.out not in (None, "-"):
        final = args.out + ".final.json"
    if final is not None:
        record = io.polygon_to_dict(states[-1][2])
        record["time"] = float(states[-1][1])
        Path(final).write_text(io.dumps(record) + "\n", encoding="utf-8")
    return 0


def cmd_gt(args) -> int:
    polys = _load(args.input)
    out = []
    for i, P in enumerate(polys):
        mp = gt.lift_polygon(P, task_rng(args.seed, i))
        try:
            G = gt.gt_variables(mp)
        except NonRealSpectrum as exc:
            raise CliError(EXIT_SPECTRUM, f"polygon {i}: non-real spectrum at l = {exc.index}")
        d_geo = pg.diagonals(P)[1:]
        rec = G.to_dict()
        rec["p"], rec["q"] = P.spec.p, P.spec.q
        rec["d_geometric"] = d_geo.tolist()
        rec["residual_d"] = float(np.max(np.abs(G.d - d_geo)))
        rec["residual_trace"] = float(np.max(np.abs(G.trace_partial - np.cumsum(P.spec.r))))
        out.append(rec)
    _emit(io.dumps(out[0] if len(out) == 1 else out) + "\n", args.out)
    return 0


def cmd_polytope(args) -> int:
    spec = _spec(args)
    pp = _polytope(spec)
    lattice = None
    if args.lattice:
        try:
            lattice = lattice_points(pp, args.dmax)
        except UnboundedNeedsDmax:
            raise CliError(EXIT_UNBOUNDED, "polytope is unbounded (q > 1); --lattice needs --dmax")
    doc = {"p": spec.p, "q": spec.q, "r": list(spec.r)}
    doc.update(pp.to_dict(lattice))
    _emit(io.dumps(doc) + "\n", None)
    return 0


def _parse_tols(items: list[str]) -> dict[str, float]:
    tols = {}
    for item in items:
        name, sep, value = item.partition("=")
        try:
            if not sep:
                raise ValueError
            tols[name.strip()] = float(value)
        except ValueError:
            raise CliError(EXIT_INPUT, f"--tol expects name=value, got {item!r}")
    return tols


def cmd_verify(args) -> int:
    suites = verification.SUITES if args.suite == "all" else (args.suite,)
    report = verification.run(suites, args.samples, args.seed, _parse_tols(args.tol))
    lines = [r.line() for r in report.results]
    failed = [r for r in report.results if not r.passed]
    lines.append(
        f"{len(report.results) - len(failed)}/{len(report.results)} properties passed "
        f"in {report.seconds:.1f} s (suite={args.suite}, samples={args.samples}, seed={args.seed})"
    )
    if failed:
        lines.append(
            f"FAILED; reproduce with: minkpoly verify --suite {args.suite} "
            f"--samples {args.samples} --seed {args.seed}"
        )
    print("\n".join(lines))
    if args.json:
        _emit(io.dumps(report.to_dict()) + "\n", args.json)
    return EXIT_VERIFY if failed else 0


# --- argument parsing -----------------------------------------------------------


def _add_spec_args(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--p", type=int, required=True, help="number of future-pointing edges")
    sp.add_argument("--q", type=int, required=True, help="number of past-pointing edges")
    sp.add_argument("--r", type=float, nargs="+", required=True, help="side lengths r_1..r_n")
    sp.add_argument("--normalize", action="store_true", help="rescale r to perimeter 2")
    sp.add_argument("--dmax", type=float, default=None, help="cap on every diagonal length")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="minkpoly", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("sample", help="sample random closed polygons")
    _add_spec_args(sp)
    sp.add_argument("--count", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--degauge", action="store_true", help="apply a random SU(1,1) element to each sample")
    sp.add_argument("--out", default=None, help="output file (default stdout)")
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("flow", help="trace a bending flow")
    sp.add_argument("--in", dest="input", required=True, help="polygon JSON ('-' for stdin)")
    sp.add_argument("--index", type=int, default=0, help="which polygon of the input to use")
    sp.add_argument("--diag", type=int, required=True, help="diagonal index l, 2 <= l <= n-2")
    sp.add_argument("--time", type=float, default=None)
    sp.add_argument("--periods", type=float, default=None, help="flow time in units of 2 pi / d_l")
    sp.add_argument("--steps", type=int, default=100, help="number of trace rows")
    sp.add_argument("--mode", choices=("exact", "numeric"), default="exact")
    sp.add_argument("--integrator-steps", type=int, default=None, help="total RK4 steps (numeric mode)")
    sp.add_argument("--out", default=None, help="CSV trace file (default stdout)")
    sp.add_argument("--final", default=None, help="final-state JSON (default <out>.final.json)")
    sp.set_defaults(func=cmd_flow)

    sp = sub.add_parser("gt", help="lift polygons and extract Gelfand-Tsetlin variables")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--seed", type=int, default=0, help="seed of the random circle phases of the lift")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_gt)

    sp = sub.add_parser("polytope", help="print the moment polytope")
    _add_spec_args(sp)
    sp.add_argument("--lattice", action="store_true", help="also list the integer points")
    sp.set_defaults(func=cmd_polytope)

    sp = sub.add_parser("verify", help="run the property-verification suite")
    sp.add_argument("--suite", choices=verification.SUITES + ("all",), default="all")
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=1)
    sp.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE", help="tolerance override")
    sp.add_argument("--json", default=None, help="also write the JSON report here ('-' for stdout)")
    sp.set_defaults(func=cmd_verify)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"minkpoly: error: {exc}", file=sys.stderr)
        return exc.code
    except IndexError as exc:
        print(f"minkpoly: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except MinkpolyError as exc:
        print(f"minkpoly: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
