"""Command-line front end.

Exit codes: 0 success, 1 law violation, 2 parse or usage error, 3 size guard.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
import time
from dataclasses import asdict, dataclass, field

from . import circulant as xc
from .dynamics import attractors, attractors_csv, build_graph, to_dot
from .formula import classify_monotony, render, table_formula
from .netfile import NetworkFileError, load_network
from .network import SizeGuardError, format_config, interaction_graph, parse_config
from .sensitivity import (
    classify_sensitivity,
    find_minimal_level2,
    networks_isomorphic,
    sweep_rows,
)

EXIT_OK, EXIT_LAW, EXIT_PARSE, EXIT_GUARD = 0, 1, 2, 3


class UsageError(ValueError):
    pass


@dataclass
class RunReport:
    command: str
    inputs_digest: str
    outputs: list[str] = field(default_factory=list)
    laws: list[dict] = field(default_factory=list)
    seconds: float = 0.0


def _digest(args: argparse.Namespace) -> str:
    h = hashlib.sha256()
    path = getattr(args, "file", None)
    if path:
        with open(path, "rb") as fh:
            h.update(fh.read())
    h.update(json.dumps(
        {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "report")},
        default=str,
    ).encode())
    return h.hexdigest()


def _write(path: str, text: str, report: RunReport) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    report.outputs.append(path)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_analyze(args, report: RunReport) -> int:
    loaded = load_network(args.file)
    net = loaded.require_network()
    graph = interaction_graph(net)
    print(f"size: {net.n}")
    if loaded.circulant is not None:
        print(f"circulant row: {loaded.circulant.row_string()} (k = {loaded.circulant.k})")
    for i, t in enumerate(net.tables):
        text = render(net.formulas[i]) if net.formulas else render(table_formula(t))
        print(f"f_{i} = {text}")
    arcs = sorted(graph.arcs, key=lambda a: (a[1], a[0]))
    print(f"interaction graph ({len(arcs)} arcs): " + " ".join(f"{j}->{i}" for j, i in arcs))
    print(f"monotony: {classify_monotony(net).value}")
    return EXIT_OK


def cmd_graph(args, report: RunReport) -> int:
    net = load_network(args.file).require_network()
    tg = build_graph(net, args.mode)
    attrs = attractors(tg)
    count = sum(len(labels) for _, _, labels in tg.arcs())
    print(f"mode: {tg.mode.value}")
    print(f"labelled transitions: {count}")
    for a in attrs:
        members = " ".join(format_config(x, net.n) for x in a.members)
        period = f" period {a.period}" if a.period is not None else ""
        print(f"attractor {format_config(a.id, net.n)}: {a.kind.value} size {a.size}{period}: {members}")
    if args.dot:
        _write(args.dot, to_dot(tg, attrs), report)
    if args.csv:
        _write(args.csv, attractors_csv(attrs), report)
    return EXIT_OK


def cmd_classify(args, report: RunReport) -> int:
    if args.parallel_only:
        raise UsageError("classification compares the asynchronous and general graphs; "
                         "it is undefined under parallel updating only")
    net = load_network(args.file).require_network()
    result = classify_sensitivity(net)
    print(f"level: {result.level.value}")
    for name, value in result.flags.items():
        print(f"  {name}: {str(value).lower()}")
    print(f"non-sequentialisable transitions: {result.non_sequentialisable}")
    if args.json:
        _write(args.json, json.dumps(result.to_json(), indent=2, ensure_ascii=False) + "\n", report)
    return EXIT_OK


def cmd_enumerate_minimal(args, report: RunReport) -> int:
    found = find_minimal_level2(args.max_size, jobs=args.jobs)
    if not found:
        print(f"no level-2 network of size <= {args.max_size}")
        return EXIT_OK
    n = found[0][0]
    print(f"{len(found)} level-2 networks of size {n}")
    nets = [net for _, net in found]
    for idx, net in enumerate(nets):
        funcs = "; ".join(f"f_{i} = {render(table_formula(t))}" for i, t in enumerate(net.tables))
        print(f"[{idx}] {funcs}  ({classify_monotony(net).value})")
    for a in range(len(nets)):
        for b in range(a + 1, len(nets)):
            if networks_isomorphic(nets[a], nets[b]):
                print(f"isomorphic: [{a}] ~ [{b}]")
    return EXIT_OK


def cmd_sweep(args, report: RunReport) -> int:
    rows = sweep_rows(args.size)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            writer = csv.DictWriter(fh, ["network_id", "level", "monotony"], lineterminator="\n")
            writer.writeheader()
            writer.writerows(rows)
        report.outputs.append(args.csv)
    else:
        for row in rows:
            print(json.dumps(row, ensure_ascii=False))
    return EXIT_OK


def _spec_from_args(args) -> xc.CirculantSpec:
    if args.row is not None:
        if len(args.row) != args.n:
            raise UsageError(f"--row has {len(args.row)} digits, expected {args.n}")
        spec, _ = xc.make_circulant(args.n, args.row)
        return spec
    return xc.two_xor(args.n, args.s)


def cmd_xor_diagram(args, report: RunReport) -> int:
    spec = _spec_from_args(args)
    x0 = parse_config(args.x0, spec.n) if args.x0 else 1
    diagram = xc.space_time(spec, x0, args.steps)
    if args.pbm:
        _write(args.pbm, diagram.to_pbm(), report)
    if args.ascii or not args.pbm:
        sys.stdout.write(diagram.to_ascii())
    return EXIT_OK


def cmd_xor_stats(args, report: RunReport) -> int:
    spec = _spec_from_args(args)
    print(f"n: {spec.n}")
    print(f"row: {spec.row_string()}")
    print(f"k: {spec.k}")
    print(f"reflection row: {xc.reflect_network(spec).row_string()}")
    if spec.k == 2:
        print(f"interaction-step: {xc.interaction_step(spec)}")
    if args.x0:
        stats = xc.convergence(spec, parse_config(args.x0, spec.n))
        print(f"x0 transient: {stats.transient}")
        print(f"x0 period: {stats.period}")
    try:
        t_star, p_star = xc.max_convergence_stats(spec, exhaustive=args.exhaustive)
    except xc.LawViolation as exc:
        report.laws.append({"law": exc.law, "passed": False, "counterexample": exc.counterexample})
        print(f"law violation: {exc}")
        return EXIT_LAW
    print(f"max transient (unit configuration): {t_star}")
    print(f"max period (unit configuration): {p_star}")
    return EXIT_OK


def cmd_xor_verify(args, report: RunReport) -> int:
    spec = _spec_from_args(args)
    exhaustive = True if args.exhaustive else None
    options = xc.LawOptions(exhaustive=exhaustive, samples=args.samples, seed=args.seed)
    result = xc.verify_law(spec, args.law, options)
    report.laws.append(result.to_json())
    print(json.dumps(result.to_json()))
    return EXIT_OK if result.passed else EXIT_LAW


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ban", description="Boolean automata network workbench")
    parser.add_argument("--report", help="write a JSON run report to this path")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="size, interaction graph and monotony class")
    p.add_argument("file")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("graph", help="build a transition graph")
    p.add_argument("file")
    p.add_argument("--mode", choices=["g", "a", "p"], default="a")
    p.add_argument("--dot", help="write the graph as DOT")
    p.add_argument("--csv", help="write the attractor table as CSV")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("classify", help="synchronism sensitivity level")
    p.add_argument("file")
    p.add_argument("--json", help="write the full report as JSON")
    p.add_argument("--parallel-only", action="store_true",
                   help="restrict to parallel updating (rejected: classification needs both graphs)")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("enumerate-minimal", help="smallest level-2 networks by exhaustive search")
    p.add_argument("--max-size", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_enumerate_minimal)

    p = sub.add_parser("sweep", help="level and monotony of every network of a size")
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--csv", help="write CSV instead of streaming JSON lines")
    p.set_defaults(func=cmd_sweep)

    xor = sub.add_parser("xor", help="XOR circulant networks")
    xsub = xor.add_subparsers(dest="xor_command", required=True)
    for name, func, helptext in (
        ("diagram", cmd_xor_diagram, "space-time diagram"),
        ("stats", cmd_xor_stats, "structure and convergence statistics"),
        ("verify", cmd_xor_verify, "check a convergence or symmetry law"),
    ):
        q = xsub.add_parser(name, help=helptext)
        q.add_argument("--n", type=int, required=True)
        q.add_argument("--row", help="first row c_0...c_{n-1}; default: 2-XOR with --s")
        q.add_argument("--s", type=int, default=0, help="interaction-step when --row is omitted")
        q.set_defaults(func=func)
        if name == "diagram":
            q.add_argument("--x0", help="initial configuration (default: unit at automaton 0)")
            q.add_argument("--steps", type=int, default=None)
            q.add_argument("--pbm", help="write the diagram as PBM")
            q.add_argument("--ascii", action="store_true", help="print an ASCII preview")
        elif name == "stats":
            q.add_argument("--x0", help="also report this configuration's trajectory")
            q.add_argument("--exhaustive", action="store_true")
        else:
            q.add_argument("--law", required=True,
                           help=f"one of {', '.join(list(xc.LAWS) + list(xc.LAW_ALIASES))}")
            q.add_argument("--exhaustive", action="store_true")
            q.add_argument("--samples", type=int, default=1000)
            q.add_argument("--seed", type=int, default=0)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    if getattr(args, "steps", 0) is None:
        args.steps = args.n
    report = RunReport(command=" ".join(argv if argv is not None else sys.argv[1:]), inputs_digest="")
    start = time.perf_counter()
    try:
        report.inputs_digest = _digest(args)
        code = args.func(args, report)
    except SizeGuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_GUARD
    except NetworkFileError as exc:
        print(f"error: {args.file}: {exc}", file=sys.stderr)
        code = EXIT_PARSE
    except (UsageError, xc.LawPreconditionError, xc.CirculantError, KeyError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_PARSE
    report.seconds = round(time.perf_counter() - start, 6)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(asdict(report), fh, indent=2)
    return code


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
