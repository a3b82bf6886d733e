"""Command line entry point.

Exit codes: 0 success, 1 validation failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import verify as suites
from .cfrac import (
    ContinuedFraction,
    FractionError,
    cf_evaluate,
    cf_expand,
    cf_reverse,
    compare_golden,
    derived_quantities,
    enumerate_table,
    is_isotropic,
    load_golden,
    short_morse_polynomial,
    table_csv,
)
from .connections import connection_graph, find_reversor
from .core import MeanderError, Permutation, count_noses, from_sigma, reverse_rho, rotate_kappa, suspend
from .invariants import morse_indices
from .three_nose import build_meander_pq, chafee_infante_sigma, detect_labels, sigma_rq_closed_form


def _read_sigma(arg: str) -> Permutation:
    text = sys.stdin.read() if arg == "-" else arg
    return Permutation.parse(text)


def _emit_sigma(sigma: Permutation, fmt: str) -> str:
    return sigma.to_json() if fmt == "json" else sigma.to_text()


def cmd_gen(args) -> int:
    if args.kind == "ci":
        if args.d is None:
            raise _Usage("gen ci needs --d")
        sigma = chafee_infante_sigma(args.d)
    elif args.kind == "threenose":
        if args.q is None or (args.r is None) == (args.p is None):
            raise _Usage("gen threenose needs --q and exactly one of --r, --p")
        sigma = sigma_rq_closed_form(args.r, args.q) if args.r is not None else build_meander_pq(args.p, args.q).sigma
    else:
        if not args.sigma:
            raise _Usage("gen sigma needs --sigma")
        sigma = Permutation.parse(args.sigma)
    if args.kappa:
        sigma = rotate_kappa(sigma)
    if args.rho:
        sigma = reverse_rho(sigma)
    if args.suspend:
        sigma = suspend(sigma, args.suspend)
    print(_emit_sigma(sigma, args.format))
    return 0


def check_report(sigma: Permutation) -> dict:
    m = from_sigma(sigma)
    report = {
        "n": sigma.n,
        "dissipative": m.dissipative,
        "jordan": m.jordan if m.dissipative else None,
        "noses": count_noses(m),
        "morse": None,
        "i_min": None,
        "morse_counts": None,
    }
    if m.dissipative and m.jordan:
        morse = morse_indices(sigma)
        report["morse"] = not morse.formal
        report["i_min"] = morse.i_min
        counts = {}
        for v in morse.values:
            counts[v] = counts.get(v, 0) + 1
        report["morse_counts"] = [counts.get(i, 0) for i in range(morse.i_min, morse.i_max + 1)]
    report["sturm"] = bool(report["morse"])
    return report


def cmd_check(args) -> int:
    report = check_report(_read_sigma(args.sigma))
    if args.format == "json":
        print(json.dumps(report))
    else:
        for key, value in report.items():
            if isinstance(value, list):
                value = "(" + ",".join(map(str, value)) + ")"
            elif value is None:
                value = "n/a"
            print(f"{key}: {value}")
    return 0 if report["sturm"] else 1


def cmd_graph(args) -> int:
    sigma = _read_sigma(args.sigma)
    graph = connection_graph(sigma, pointed=args.pointed or args.reversor)
    if args.labels:
        labeling = detect_labels(sigma)
        if labeling is None:
            print("no labeling known for this permutation", file=sys.stderr)
            return 1
        graph = labeling.relabel(graph)
    reversor = find_reversor(graph) if args.reversor else None
    rev_text = None
    if args.reversor:
        if reversor is None:
            rev_text = "none"
        else:
            pairs = sorted({tuple(sorted((u, v), key=str)) for u, v in reversor.mapping.items()}, key=str)
            rev_text = " ".join(f"{graph.vertex_name(u)}<->{graph.vertex_name(v)}" for u, v in pairs)
    if args.format == "json":
        data = graph.to_dict()
        if args.reversor:
            data["reversor"] = rev_text
        print(json.dumps(data))
    else:
        out = graph.to_dot()
        if args.reversor:
            out += f"// reversor: {rev_text}\n"
        sys.stdout.write(out)
    return 0


def cmd_verify(args) -> int:
    report = suites.SUITES[args.suite](args)
    print(report.to_json())
    return 0 if report.passed else 1


def cmd_table(args) -> int:
    rows = enumerate_table(args.n, jobs=args.jobs, with_lattice=args.lattice)
    sys.stdout.write(table_csv(rows, with_lattice=args.lattice))
    if args.golden:
        if args.n != 63:
            print("the stored fixture covers n = 63 only", file=sys.stderr)
            return 2
        diff = compare_golden(rows, load_golden())
        for line in diff:
            print(line, file=sys.stderr)
        return 1 if diff else 0
    return 0


def cmd_cfrac(args) -> int:
    if args.action == "expand":
        if len(args.values) != 2:
            raise _Usage("cfrac expand needs N0 D0")
        cf = cf_expand(int(args.values[0]), int(args.values[1]))
    else:
        if len(args.values) != 1:
            raise _Usage("cfrac info needs one continued fraction like [2,2,2]")
        cf = ContinuedFraction.parse(args.values[0])
    n0, q1 = cf_evaluate(cf)
    info = {"b": str(cf), "n0": n0, "q+1": q1}
    if cf[0] != 0:
        info["b*"] = str(cf_reverse(cf))
        info["iso"] = is_isotropic(cf)
        info.update(derived_quantities(cf).to_dict())
        if cf.m == 2:
            info["morse_counts"] = list(short_morse_polynomial(*cf.terms).coefficients())
    print(json.dumps(info))
    return 0


class _Usage(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="meanders", description="Sturm meanders and 3-nose connection graphs")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a meander permutation")
    gen.add_argument("kind", choices=["ci", "threenose", "sigma"])
    gen.add_argument("--d", type=int)
    gen.add_argument("--r", type=int)
    gen.add_argument("--q", type=int)
    gen.add_argument("--p", type=int)
    gen.add_argument("--sigma")
    gen.add_argument("--kappa", action="store_true", help="rotate by 180 degrees")
    gen.add_argument("--rho", action="store_true", help="reverse space (invert)")
    gen.add_argument("--suspend", type=int, default=0, metavar="K")
    gen.add_argument("--format", choices=["text", "json"], default="text")
    gen.set_defaults(func=cmd_gen)

    check = sub.add_parser("check", help="validate a permutation; exit 0 iff Sturm")
    check.add_argument("sigma", help="permutation text or JSON, '-' for stdin")
    check.add_argument("--format", choices=["text", "json"], default="text")
    check.set_defaults(func=cmd_check)

    graph = sub.add_parser("graph", help="connection graph of a Sturm permutation")
    graph.add_argument("sigma", help="permutation text or JSON, '-' for stdin")
    graph.add_argument("--pointed", action="store_true")
    graph.add_argument("--format", choices=["dot", "json"], default="dot")
    graph.add_argument("--reversor", action="store_true", help="search a reversor (implies --pointed)")
    graph.add_argument("--labels", action="store_true", help="use A/B labels for known families")
    graph.set_defaults(func=cmd_graph)

    ver = sub.add_parser("verify", help="run a property suite")
    ver.add_argument("suite", choices=sorted(suites.SUITES))
    ver.add_argument("--rmax", type=int, default=6)
    ver.add_argument("--qmax", type=int, default=6)
    ver.add_argument("--max", type=int)
    ver.add_argument("--count", type=int, default=200)
    ver.add_argument("--set", choices=["standard", "table63"], default="standard")
    ver.set_defaults(func=cmd_verify)

    table = sub.add_parser("table", help="enumerate 3-nose meanders with n arcs above the axis")
    table.add_argument("n", type=int)
    table.add_argument("--golden", action="store_true", help="compare with the stored n=63 fixture")
    table.add_argument("--lattice", action="store_true", help="add a column naming an isomorphic lattice")
    table.add_argument("--jobs", type=int, default=1)
    table.set_defaults(func=cmd_table)

    cf = sub.add_parser("cfrac", help="continued fraction utilities")
    cf.add_argument("action", choices=["expand", "info"])
    cf.add_argument("values", nargs="+")
    cf.set_defaults(func=cmd_cfrac)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _Usage as exc:
        parser.error(str(exc))
    except (MeanderError, FractionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
