"""
Командная строка SharkTower.

Коды выхода: 0 - успех, 1 - есть проваленные проверки,
2 - ошибка ввода, 3 - превышен лимит кусков.
"""
import argparse
import csv
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from app.acceptance import run_acceptance
from app.construct import base_context, guard_report, layer1, remark3_points
from app.errors import InvalidInput, PieceCapExceeded, SharkTowerError
from app.exact import Interval, format_rat, parse_rat
from app.logger import get_logger, setup_logging
from app.periodic import orbit_from_points, orbits_of_period, smallest_diameter_orbit
from app.plotdata import PLOT_KINDS, emit_plot_data
from app.pwl import CATALOG, PwlMap, catalog, constant_map, is_unimodal
from app.sharkovsky import Precedence, compare, minimal_witness_map, power2_map_approx, verify_closure
from app.solve import SolveStrategy, solve_iter_eq_const, solve_iter_fixed
from app.towers import assemble_tower
from app.validators import (
    AcceptanceDocument,
    ClosureReportDocument,
    CompareDocument,
    ContextDocument,
    CriterionDocument,
    MapDocument,
    OrbitListDocument,
    Power2Document,
    RootSetDocument,
    TowerDocument,
    load_map,
)

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_CAP = 3

FORMATS = ("table", "json", "csv")
RELATION_SYMBOLS = {Precedence.PRECEDES: "≺", Precedence.EQUALS: "=", Precedence.FOLLOWS: "≻"}


def parse_map_spec(spec: str) -> PwlMap:
    """
    Отображение по строке: имя из каталога с параметрами через ':' и ','
    ("tent", "truncate_tent:6/7", "doubly_truncate:2/7,6/7"), "witness:k",
    "constant:c" или путь к JSON-документу.
    """
    path = Path(spec)
    if spec.endswith(".json") or path.is_file():
        if not path.is_file():
            raise InvalidInput(f"Map file {spec} not found")
        return load_map(path.read_text(encoding="utf-8"))
    name, _, params = spec.partition(":")
    values = [p for p in params.split(",") if p.strip()] if params else []
    if name == "witness":
        if len(values) != 1:
            raise InvalidInput("witness takes one integer parameter")
        try:
            k = int(values[0])
        except ValueError as e:
            raise InvalidInput(f"Invalid witness period {values[0]!r}") from e
        return minimal_witness_map(k)
    if name == "constant":
        if len(values) != 1:
            raise InvalidInput("constant takes one rational parameter")
        return constant_map(parse_rat(values[0]))
    return catalog(name, *(parse_rat(v) for v in values))


def parse_points(text: str) -> List:
    return [parse_rat(p) for p in text.split(",") if p.strip()]


def parse_window(text: Optional[str]) -> Optional[Interval]:
    if not text:
        return None
    values = parse_points(text)
    if len(values) != 2:
        raise InvalidInput(f"A window needs two endpoints, got {text!r}")
    return Interval(values[0], values[1])


def _print_table(headers: Sequence[str], rows: Sequence[Sequence[str]]) -> None:
    widths = [len(h) for h in headers]
    for row in rows:
        widths = [max(w, len(str(c))) for w, c in zip(widths, row)]
    print("  ".join(h.ljust(w) for h, w in zip(headers, widths)))
    for row in rows:
        print("  ".join(str(c).ljust(w) for c, w in zip(row, widths)))


def _print_csv(headers: Sequence[str], rows: Sequence[Sequence[str]]) -> None:
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(headers)
    writer.writerows(rows)


def _emit(args, document, headers: Sequence[str], rows: Sequence[Sequence[str]]) -> None:
    if args.format == "json":
        print(document.dump())
    elif args.format == "csv":
        _print_csv(headers, rows)
    else:
        _print_table(headers, rows)


def _orbit_rows(orbits) -> List[List[str]]:
    return [[str(o.least_period), format_rat(o.diameter), " ".join(format_rat(p) for p in o.points)] for o in orbits]


def _context(args):
    f = parse_map_spec(args.map)
    if args.orbit:
        P = orbit_from_points(f, parse_points(args.orbit))
    else:
        P = smallest_diameter_orbit(f, 3)
    return base_context(f, P)


def cmd_map(args) -> int:
    f = parse_map_spec(args.map)
    doc = MapDocument.from_map(f)
    rows = [[format_rat(x), format_rat(y)] for x, y in f.nodes]
    _emit(args, doc, ["x", "y"], rows)
    if args.format == "table" and f.domain == Interval(0, 1):
        print(f"unimodality: {is_unimodal(f).value}")
    return EXIT_OK


def cmd_solve(args) -> int:
    f = parse_map_spec(args.map)
    window = parse_window(args.window)
    if args.fixed:
        rs = solve_iter_fixed(f, args.k, window)
    elif args.value is not None:
        rs = solve_iter_eq_const(f, args.k, parse_rat(args.value), window, strategy=SolveStrategy(args.strategy))
    else:
        raise InvalidInput("solve needs --value C or --fixed")
    rows = [[format_rat(c.lo), format_rat(c.hi)] for c in rs]
    _emit(args, RootSetDocument.from_rootset(rs), ["lo", "hi"], rows)
    return EXIT_OK


def cmd_orbits(args) -> int:
    f = parse_map_spec(args.map)
    if args.period:
        orbits = list(orbits_of_period(f, args.period))
    elif args.upto:
        orbits = [o for n in range(1, args.upto + 1) for o in orbits_of_period(f, n)]
    else:
        raise InvalidInput("orbits needs --period N or --upto N")
    _emit(args, OrbitListDocument.from_orbits(orbits), ["period", "diameter", "points"], _orbit_rows(orbits))
    return EXIT_OK


def cmd_sharkovsky(args) -> int:
    if args.action == "compare":
        relation = compare(args.m, args.n)
        if args.format == "json":
            print(CompareDocument(m=args.m, n=args.n, relation=relation).dump())
        else:
            print(f"{args.m} {RELATION_SYMBOLS[relation]} {args.n}")
        return EXIT_OK
    if args.action == "closure":
        report = verify_closure(parse_map_spec(args.map), args.upto)
        rows = [[str(a), str(b)] for a, b in report.violations]
        if args.format == "table":
            print(f"period set up to {args.upto}: {sorted(report.period_set)}")
        _emit(args, ClosureReportDocument.from_report(report), ["have", "missing"], rows)
        return EXIT_OK if report.passed else EXIT_FAILED
    if args.action == "witness":
        f = minimal_witness_map(args.k)
        orbits = orbits_of_period(f, args.k)
        if args.format == "json":
            print(MapDocument.from_map(f).dump())
        else:
            _emit(args, None, ["x", "y"], [[format_rat(x), format_rat(y)] for x, y in f.nodes])
            if args.format == "table":
                print(f"period-{args.k} orbits: {', '.join(str(o) for o in orbits)}")
        return EXIT_OK
    approx = power2_map_approx(args.levels)
    rows = _orbit_rows(approx.chain)
    if args.format == "table":
        print(f"q0 = {format_rat(approx.q0)}, q1 = {format_rat(approx.q1)}")
    _emit(args, Power2Document.from_approx(approx), ["period", "diameter", "points"], rows)
    return EXIT_OK


def _point_rows(points) -> List[List[str]]:
    return [[str(p.label), format_rat(p.value), str(p.claimed_least_period or ""),
             str(p.actual_least_period or ""), "yes" if p.claim_guaranteed else "no",
             "ok" if p.verified else "FAIL"] for p in points]


POINT_HEADERS = ["label", "value", "claimed", "actual", "guaranteed", "status"]


def cmd_construct(args) -> int:
    ctx = _context(args)
    layer = layer1(ctx, args.layer)
    remark = remark3_points(ctx, args.layer)
    guards = guard_report(ctx, args.layer)
    doc = ContextDocument.from_layer(ctx, layer, tuple(remark.checks) + guards)
    points = sorted(list(layer.points) + list(remark.points), key=lambda p: (p.value, str(p.label)))
    rows = [["anchor.d", format_rat(ctx.d), "", "", "", ""], ["anchor.v", format_rat(ctx.v), "", "", "", ""],
            ["anchor.z0", format_rat(ctx.z0), "", "", "", ""]] + _point_rows(points)
    _emit(args, doc, POINT_HEADERS, rows)
    passed = doc.passed and remark.passed
    return EXIT_OK if passed else EXIT_FAILED


def cmd_tower(args) -> int:
    ctx = _context(args)
    tower = assemble_tower(ctx, args.layer2, args.layer3)
    doc = TowerDocument.from_tower(tower)
    _emit(args, doc, POINT_HEADERS, _point_rows(tower.listing()))
    if args.format == "table":
        failed = [c for c in tower.all_checks() if not c.passed]
        print(f"checks: {len(tower.all_checks()) - len(failed)} passed, {len(failed)} failed")
        for c in failed:
            print(f"  FAILED {c.name}: {c.detail}")
    return EXIT_OK if tower.passed else EXIT_FAILED


def cmd_verify(args) -> int:
    only = [int(x) for x in args.only.split(",")] if args.only else None
    report = run_acceptance(quick=args.quick, only=only)
    doc = AcceptanceDocument(
        quick=report.quick,
        criteria=[CriterionDocument(number=r.number, title=r.title, passed=r.passed, detail=r.detail,
                                    seconds=round(r.seconds, 3)) for r in report.results],
        passed=report.passed,
    )
    rows = [[str(r.number), r.title, "PASS" if r.passed else "FAIL", f"{r.seconds:.2f}", r.detail]
            for r in report.results]
    _emit(args, doc, ["#", "criterion", "result", "seconds", "detail"], rows)
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_plot_data(args) -> int:
    f = parse_map_spec(args.map)
    start = parse_rat(args.start) if args.start else None
    emit_plot_data(args.kind, f, sys.stdout, start=start, steps=args.steps, upto=args.upto)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sharktower",
                                     description="Exact periodic-point toolkit for piecewise-linear interval maps")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING, ERROR")
    sub = parser.add_subparsers(dest="command", required=True)

    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=FORMATS, default="table")
    common = argparse.ArgumentParser(add_help=False, parents=[fmt])
    common.add_argument("--map", default="tent",
                        help=f"catalog name ({', '.join(CATALOG)}, witness:k, constant:c) or JSON file")

    def add(name: str, handler, help_text: str, parents=(common,)) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text, parents=list(parents))
        p.set_defaults(handler=handler)
        return p

    add("map", cmd_map, "show and validate a map")

    p = add("solve", cmd_solve, "solve f^k(x) = c or f^k(x) = x")
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--value", help="right-hand side c")
    p.add_argument("--fixed", action="store_true", help="solve f^k(x) = x")
    p.add_argument("--window", help="lo,hi")
    p.add_argument("--strategy", choices=[s.value for s in SolveStrategy], default=SolveStrategy.AUTO.value)

    p = add("orbits", cmd_orbits, "enumerate periodic orbits")
    p.add_argument("--period", type=int)
    p.add_argument("--upto", type=int)

    p = add("sharkovsky", cmd_sharkovsky, "Sharkovsky order and statements", parents=())
    actions = p.add_subparsers(dest="action", required=True)
    a = actions.add_parser("compare", parents=[common])
    a.add_argument("m", type=int)
    a.add_argument("n", type=int)
    a = actions.add_parser("closure", parents=[common])
    a.add_argument("--upto", type=int, default=8)
    a = actions.add_parser("witness", parents=[common])
    a.add_argument("k", type=int)
    a = actions.add_parser("power2", parents=[common])
    a.add_argument("--levels", type=int, default=2)

    p = add("construct", cmd_construct, "base construction context and layer 1")
    p.add_argument("--orbit", help="comma-separated points of an odd-period orbit")
    p.add_argument("--layer", type=int, default=2, help="layer-1 size N")

    p = add("tower", cmd_tower, "assemble the tower up to layer 3")
    p.add_argument("--orbit", help="comma-separated points of an odd-period orbit")
    p.add_argument("--layer2", type=int, default=1)
    p.add_argument("--layer3", type=int, default=1)

    p = add("verify", cmd_verify, "run the acceptance suite", parents=(fmt,))
    p.add_argument("--quick", action="store_true")
    p.add_argument("--only", help="comma-separated criterion numbers")

    p = add("plot-data", cmd_plot_data, "emit CSV for plotting")
    p.add_argument("--kind", choices=PLOT_KINDS, default="graph")
    p.add_argument("--start")
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--upto", type=int, default=3)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    if args.log_level:
        setup_logging(log_level=args.log_level)

    try:
        return args.handler(args)
    except InvalidInput as e:
        logger.error(f"Invalid input: {e}")
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_USAGE
    except PieceCapExceeded as e:
        logger.error(f"Piece cap exceeded: {e}")
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_CAP
    except SharkTowerError as e:
        logger.error(f"Command {args.command} failed: {e}", exc_info=True)
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_FAILED
