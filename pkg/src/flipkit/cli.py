"""Command-line front end.

Every command prints a deterministic report to stdout (wall time goes to
stderr so repeated runs with one seed are byte-identical) and exits 0 on
pass or witness, 1 on a property failure or an exhausted search, and 2 on
refusals and usage errors.  Output files are written in one shot after the
computation finishes, so a refusal never leaves a partial file behind.
"""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import fileio, generators
from .breaksep import (
    SearchBudget,
    WeightFn,
    breakability_search,
    sep_then_break,
    separability_search,
)
from .conversion import convert
from .errors import CapExceeded, DomainError
from .flips import default_max_parts
from .graphs import INF, Graph, diameter
from .metrics import SetFamily, dist_family_matrix, dist_partition_matrix
from .vc import vc_dimension
from .verify import LEMMA_SWEEPS, RunReport

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_REFUSED = 2


def _read_graph(path: str) -> Graph:
    return fileio.loads_graph(Path(path).read_text())


def _write(path: str, text: str) -> None:
    Path(path).write_text(text)


def _emit(report: RunReport, *, quiet_timing: bool = False) -> int:
    sys.stdout.write(report.serialize())
    if not quiet_timing:
        print(f"wall_time_s={report.wall_time:.3f}", file=sys.stderr)
    return report.exit_code


def _dist_cell(value: int) -> str:
    return "inf" if value < 0 else str(int(value))


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _cmd_gen(args) -> int:
    params = list(args.params)
    if args.kind == "gnp" and len(params) == 2:
        params.append(args.seed)
    g = generators.generate(args.kind, *params)
    text = fileio.dumps_graph(g)
    if args.output:
        _write(args.output, text)
    else:
        sys.stdout.write(text)
    return EXIT_PASS


def _cmd_diam(args) -> int:
    started = time.perf_counter()
    g = _read_graph(args.graph)
    value = diameter(g)
    report = RunReport(
        command="diam",
        parameters={"graph": args.graph},
        outcome="pass",
        counters={"n": g.n, "m": g.num_edges()},
        payload={"diameter": "inf" if value == INF else int(value)},
        wall_time=time.perf_counter() - started,
    )
    return _emit(report)


def _cmd_vcdim(args) -> int:
    g = _read_graph(args.graph)
    rep = vc_dimension(g, cap=args.cap)
    lines = [
        f"vcdim,{rep.vcdim}",
        "witness," + " ".join(map(str, rep.witness)),
        "n,traces",
    ]
    lines.extend(f"{n},{rep.traces_by_size[n]}" for n in sorted(rep.traces_by_size))
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if args.output:
        _write(args.output, text)
    return EXIT_PASS


def _parse_vertex_set(raw: str) -> list[int]:
    return [int(tok) for tok in raw.replace(",", " ").split()]


def _cmd_dist(args) -> int:
    g = _read_graph(args.graph)
    modes = [m for m in (args.partition, args.set, args.family) if m is not None]
    if len(modes) != 1:
        raise DomainError("pass exactly one of --partition, --set, --family")
    cap = args.max_parts if args.max_parts else default_max_parts()
    if args.partition:
        p = fileio.loads_partition(Path(args.partition).read_text(), g.n)
        dist = dist_partition_matrix(g, p, max_parts=cap)
    elif args.set is not None:
        fam = SetFamily([_parse_vertex_set(args.set)])
        dist = dist_family_matrix(g, fam, max_parts=cap)
    else:
        fam = SetFamily(fileio.loads_family(Path(args.family).read_text()))
        dist = dist_family_matrix(g, fam, max_parts=cap)
    rows = []
    if args.all_pairs:
        for u in range(g.n):
            for v in range(g.n):
                rows.append({"u": u, "v": v, "dist": _dist_cell(dist[u, v])})
    else:
        if len(args.pair) != 2:
            raise DomainError("pass a vertex pair `u v`, or --all-pairs")
        u, v = args.pair
        rows.append({"u": u, "v": v, "dist": _dist_cell(dist[u, v])})
    text = fileio.export_csv(rows, ["u", "v", "dist"])
    sys.stdout.write(text)
    if args.output:
        _write(args.output, text)
    return EXIT_PASS


def _certificate_rows(result) -> list[dict]:
    rows = []
    for cert in result.part_certificates:
        rows.append(
            {
                "kind": "part",
                "indices": str(cert.part),
                "case_tag": cert.branch,
                "flipped": str(cert.flipped).lower(),
            }
        )
    for cert in result.pair_certificates:
        blocks = "".join(
            "1" if (i, j) in cert.flipped_blocks else "0"
            for i in (1, 2)
            for j in (1, 2)
        )
        rows.append(
            {
                "kind": "pair",
                "indices": f"{cert.parts[0]} {cert.parts[1]}",
                "case_tag": cert.case.tag.value,
                "flipped": blocks,
            }
        )
    return rows


def _cmd_convert(args) -> int:
    started = time.perf_counter()
    g = _read_graph(args.graph)
    p = fileio.loads_partition(Path(args.partition).read_text(), g.n)
    result = convert(g, p)
    report = RunReport(
        command="convert",
        parameters={"graph": args.graph, "partition": args.partition},
        outcome="pass",
        counters={
            "input_parts": len(p.parts),
            "refined_parts": len(result.refined.parts),
            "flipped_pairs": len(result.refined_spec),
        },
        payload={
            "refined": [list(part) for part in result.refined.parts],
            "spec": sorted(list(pair) for pair in result.refined_spec.pairs),
        },
        wall_time=time.perf_counter() - started,
    )
    if args.emit_certificates:
        _write(
            args.emit_certificates,
            fileio.export_csv(
                _certificate_rows(result), ["kind", "indices", "case_tag", "flipped"]
            ),
        )
    if args.emit_dot:
        _write(args.emit_dot, fileio.export_dot(result.flipped, result.refined))
    if args.output:
        _write(args.output, fileio.dumps_graph(result.flipped))
    return _emit(report)


def _witness_payload(w) -> dict:
    return {
        "partition": [list(part) for part in w.partition.parts],
        "spec": sorted(list(pair) for pair in w.spec.pairs),
        "defining_set": list(w.defining_set) if w.defining_set is not None else None,
        "a1": list(w.a1),
        "a2": list(w.a2),
        "radius": w.radius,
        "m": w.m,
    }


def _cmd_break(args) -> int:
    started = time.perf_counter()
    g = _read_graph(args.graph)
    w_set = _parse_vertex_set(Path(args.probes).read_text())
    budget = SearchBudget(
        s_max=args.s_max,
        part_cap=args.part_cap if args.part_cap else default_max_parts(),
        raw_partitions=args.raw_partitions,
    )
    w2 = _parse_vertex_set(Path(args.probes2).read_text()) if args.probes2 else None
    result = breakability_search(g, w_set, args.radius, args.m, budget, w2_set=w2)
    report = RunReport(
        command="break",
        parameters={
            "graph": args.graph,
            "r": args.radius,
            "m": args.m,
            "s_max": args.s_max,
            "raw_partitions": args.raw_partitions,
        },
        outcome="witness" if result else "fail",
        counters={
            "flips_tried": result.flips_tried,
            "sets_tried": result.sets_tried,
            "sets_skipped": result.sets_skipped,
        },
        payload=_witness_payload(result.witness) if result else None,
        wall_time=time.perf_counter() - started,
    )
    if args.output and result:
        _write(args.output, report.serialize())
    return _emit(report)


def _cmd_separate(args) -> int:
    started = time.perf_counter()
    g = _read_graph(args.graph)
    weights = WeightFn(fileio.loads_weights(Path(args.weights).read_text(), g.n))
    eps = Fraction(args.eps)
    result = separability_search(
        g, weights, args.radius, eps, args.k_max, n_cap=args.n_cap
    )
    payload = None
    if result:
        payload = {
            "partition": [list(part) for part in result.partition.parts],
            "spec": sorted(list(pair) for pair in result.spec.pairs),
        }
    report = RunReport(
        command="separate",
        parameters={
            "graph": args.graph,
            "r": args.radius,
            "eps": str(eps),
            "k_max": args.k_max,
        },
        outcome="witness" if result else "fail",
        counters={
            "partitions_tried": result.partitions_tried,
            "flips_tried": result.flips_tried,
        },
        payload=payload,
        wall_time=time.perf_counter() - started,
    )
    if args.output and result:
        _write(args.output, report.serialize())
    return _emit(report)


def _cmd_sep2break(args) -> int:
    started = time.perf_counter()
    g = _read_graph(args.graph)
    w_set = _parse_vertex_set(Path(args.probes).read_text())
    result = sep_then_break(g, w_set, args.radius, k_max=args.k_max)
    report = RunReport(
        command="sep2break",
        parameters={
            "graph": args.graph,
            "r": args.radius,
            "k_max": args.k_max,
            "probes": sorted(set(w_set)),
        },
        outcome="witness" if result else "fail",
        counters={
            "partitions_tried": result.separability.partitions_tried,
            "flips_tried": result.separability.flips_tried,
        },
        payload=_witness_payload(result.witness) if result else None,
        wall_time=time.perf_counter() - started,
    )
    if args.output and result:
        _write(args.output, report.serialize())
    return _emit(report)


def _cmd_verify(args) -> int:
    mode, func = LEMMA_SWEEPS[args.lemma]
    if mode == "exhaustive":
        if args.exhaustive is None:
            raise DomainError(f"{args.lemma} is an exhaustive sweep: pass --exhaustive N")
        report = func(args.exhaustive)
    else:
        if args.random is None:
            raise DomainError(f"{args.lemma} is a randomized sweep: pass --random COUNT")
        report = func(args.random, args.seed)
    return _emit(report)


def _cmd_export(args) -> int:
    g = _read_graph(args.graph)
    p = (
        fileio.loads_partition(Path(args.partition).read_text(), g.n)
        if args.partition
        else None
    )
    wrote = False
    if args.dot:
        _write(args.dot, fileio.export_dot(g, p))
        wrote = True
    if args.csv:
        rows = [{"u": u, "v": v} for u, v in g.edges()]
        _write(args.csv, fileio.export_csv(rows, ["u", "v"]))
        wrote = True
    if not wrote:
        raise DomainError("pass --dot and/or --csv")
    return EXIT_PASS


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flipkit",
        description="Graph flips, flip metrics, and desk-scale verification.",
    )
    parser.add_argument("--seed", type=int, default=0, help="global RNG seed")
    # accepted after the subcommand too; SUPPRESS keeps a pre-subcommand
    # --seed from being clobbered by a subparser default
    seed_opt = argparse.ArgumentParser(add_help=False)
    seed_opt.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a graph", parents=[seed_opt])
    p.add_argument("kind", choices=sorted(generators.KINDS))
    p.add_argument("params", nargs="*", help="kind parameters, e.g. n [p]")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("diam", help="diameter of a graph", parents=[seed_opt])
    p.add_argument("graph")
    p.set_defaults(func=_cmd_diam)

    p = sub.add_parser("vcdim", help="exact VC-dimension and trace table", parents=[seed_opt])
    p.add_argument("graph")
    p.add_argument("--cap", type=int, default=16)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_vcdim)

    p = sub.add_parser("dist", help="flip-metric distances as CSV", parents=[seed_opt])
    p.add_argument("graph")
    p.add_argument("pair", nargs="*", type=int, help="vertex pair u v")
    p.add_argument("--partition")
    p.add_argument("--set")
    p.add_argument("--family")
    p.add_argument("--all-pairs", action="store_true")
    p.add_argument("--max-parts", type=int, default=0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_dist)

    p = sub.add_parser("convert", help="metric conversion: refine and flip", parents=[seed_opt])
    p.add_argument("graph")
    p.add_argument("--partition", required=True)
    p.add_argument("--emit-certificates")
    p.add_argument("--emit-dot")
    p.add_argument("-o", "--output", help="write the flipped graph")
    p.set_defaults(func=_cmd_convert)

    p = sub.add_parser("break", help="budgeted flip-breakability search", parents=[seed_opt])
    p.add_argument("graph")
    p.add_argument("--W", dest="probes", required=True, help="probe-set file")
    p.add_argument("--W2", dest="probes2", help="second probe-set file")
    p.add_argument("-r", "--radius", type=int, required=True)
    p.add_argument("-m", type=int, required=True)
    p.add_argument("--s-max", type=int, default=1)
    p.add_argument("--part-cap", type=int, default=0)
    p.add_argument("--raw-partitions", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_break)

    p = sub.add_parser("separate", help="brute-force flip-separability search", parents=[seed_opt])
    p.add_argument("graph")
    p.add_argument("--weights", required=True)
    p.add_argument("-r", "--radius", type=int, required=True)
    p.add_argument("--eps", required=True, help="fraction, e.g. 0.4 or 2/5")
    p.add_argument("--k-max", type=int, required=True)
    p.add_argument("--n-cap", type=int, default=10)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_separate)

    p = sub.add_parser("sep2break", help="separability then witness construction", parents=[seed_opt])
    p.add_argument("graph")
    p.add_argument("--W", dest="probes", required=True, help="probe-set file (size 4m^2)")
    p.add_argument("-r", "--radius", type=int, required=True)
    p.add_argument("--k-max", type=int, default=1)
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_sep2break)

    p = sub.add_parser("verify", help="run a verification sweep", parents=[seed_opt])
    p.add_argument("lemma", choices=sorted(LEMMA_SWEEPS))
    p.add_argument("--exhaustive", type=int)
    p.add_argument("--random", type=int)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("export", help="DOT / CSV export", parents=[seed_opt])
    p.add_argument("graph")
    p.add_argument("--partition")
    p.add_argument("--dot")
    p.add_argument("--csv")
    p.set_defaults(func=_cmd_export)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CapExceeded as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REFUSED


if __name__ == "__main__":
    sys.exit(main())
