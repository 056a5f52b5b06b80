"""Command-line entry point: ``coretruss <subcommand> ...``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import asdict

from . import __version__
from .anomaly import DDOptions, core_truss_dd
from .decomposition import core_decompose, truss_decompose
from .graph import EdgeListParseError, load_edge_list, write_edge_list, write_label_map
from .interplay import MeasureSelection, ei_table, vi_table
from .randgen import GeneratorSpec, extract_reference_stats, generate

DEFAULT_SEED = 0

VI_FIELDS = ["value", "population", "min_mean", "min_q1", "min_q3",
             "max_mean", "max_q1", "max_q3"]
EI_FIELDS = ["value_lo", "value_hi", "population", "mean"]


class UsageError(Exception):
    pass


def _load(path, args):
    if not os.path.isfile(path):
        raise UsageError(f"input file not found: {path}")
    prefixes = tuple(args.comment_prefix)
    return load_edge_list(path, comment_prefix=prefixes, delimiter=args.delimiter,
                          extra_columns="ignore" if args.ignore_extra_columns else "error")


def _write_text(text: str, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _emit_table(fields, records, fmt, out):
    if fmt == "json":
        _write_text(_json_text(records), out)
        return
    _write_text(_csv_text(fields, [[r[f] for f in fields] for r in records]), out)


def cmd_stats(args):
    g = _load(args.input, args)
    core = core_decompose(g)
    truss = truss_decompose(g)
    summary = {"V": g.num_vertices, "E": g.num_edges,
               "core_degen": core.core_degeneracy, "truss_degen": truss.truss_degeneracy}
    _write_text(_json_text(summary), args.out)
    return summary


def cmd_decompose(args):
    g = _load(args.input, args)
    lab = g.labels
    if args.table == "core":
        k = core_decompose(g).core_numbers
        fields = ["vertex_label", "core"]
        records = [{"vertex_label": str(lab[v]), "core": int(k[v])} for v in range(g.num_vertices)]
    else:
        t = truss_decompose(g)
        fields = ["label_u", "label_v", "truss", "support"]
        records = [{"label_u": str(lab[u]), "label_v": str(lab[v]),
                    "truss": int(t.truss_numbers[e]), "support": int(t.triangle_support[e])}
                   for e, (u, v) in enumerate(g.edges.tolist())]
    _emit_table(fields, records, args.format, args.out)


def _interplay(args, table_fn, fields):
    g = _load(args.input, args)
    sel = MeasureSelection(args.vertex_measure, args.edge_measure)
    core = core_decompose(g) if sel.vertex_measure == "core" else None
    truss = truss_decompose(g)
    rows = [asdict(r) for r in table_fn(g, core, truss, sel)]
    _emit_table(fields, rows, args.format, args.out)


def cmd_vi(args):
    _interplay(args, vi_table, VI_FIELDS)


def cmd_ei(args):
    _interplay(args, ei_table, EI_FIELDS)


def cmd_generate(args):
    spec = GeneratorSpec(args.model, args.seed, n=args.n, m=args.m)
    if args.model == "er":
        if args.n is None or args.m is None:
            raise UsageError("--model er requires --n and --m")
    else:
        if args.reference is None:
            raise UsageError(f"--model {args.model} requires --reference")
        ref = _load(args.reference, args)
        spec.degree_sequence, spec.ccd = extract_reference_stats(ref)
    try:
        spec.validate()
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    g = generate(spec)
    if args.out in (None, "-"):
        write_edge_list(g, sys.stdout)
    else:
        write_edge_list(g, args.out)
    if args.labels_out:
        write_label_map(g, args.labels_out)


def cmd_anomaly(args):
    g = _load(args.input, args)
    if args.clusters is not None and args.clusters < 1:
        raise UsageError("--clusters must be positive")
    if not 0.0 <= args.threshold_fraction < 1.0:
        raise UsageError("--threshold-fraction must lie in [0, 1)")
    if args.kmax < 2:
        raise UsageError("--kmax must be at least 2")
    opts = DDOptions(seed=args.seed, clusters=args.clusters, kmax=args.kmax,
                     threshold_fraction=args.threshold_fraction, z_cutoff=args.z_cutoff)
    report = core_truss_dd(g, opts).to_dict()
    if args.format == "csv":
        fields = ["label", "cluster", "core", "z", "max_truss", "class"]
        _emit_table(fields, report["outliers"], "csv", args.out)
    else:
        _write_text(_json_text(report), args.out)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=None, help="output path (default: stdout)")
    common.add_argument("--format", choices=["csv", "json"], default=None,
                        help="csv (default) or json; anomaly defaults to json")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--comment-prefix", default="#",
                        help="each character starts a comment line (e.g. '#%%')")
    common.add_argument("--ignore-extra-columns", action="store_true",
                        help="use the first two tokens of lines with more columns")
    common.add_argument("--delimiter", default=None, help="field separator (default: whitespace)")

    with_input = argparse.ArgumentParser(add_help=False, parents=[common])
    with_input.add_argument("--input", required=True, help="edge-list file")

    p = argparse.ArgumentParser(prog="coretruss", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("stats", parents=[with_input], help="|V|, |E| and degeneracies as JSON")
    s.set_defaults(func=cmd_stats)

    s = sub.add_parser("decompose", parents=[with_input], help="core or truss numbers")
    s.add_argument("--table", choices=["core", "truss"], default="core")
    s.set_defaults(func=cmd_decompose)

    for name, fn, help_ in (("vi", cmd_vi, "vertex interplay table"),
                            ("ei", cmd_ei, "edge interplay table")):
        s = sub.add_parser(name, parents=[with_input], help=help_)
        s.add_argument("--vertex-measure", choices=["core", "degree"], default="core")
        s.add_argument("--edge-measure", choices=["truss", "triangles"], default="truss")
        s.set_defaults(func=fn)

    s = sub.add_parser("generate", parents=[common], help="random null-model graph")
    s.add_argument("--model", choices=["er", "config", "bter"], required=True)
    s.add_argument("--n", type=int)
    s.add_argument("--m", type=int)
    s.add_argument("--reference", help="edge list supplying degrees and clustering")
    s.add_argument("--labels-out", help="also write the id<TAB>label sidecar here")
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("anomaly", parents=[with_input], help="core-truss discrepancy report")
    s.add_argument("--clusters", type=int, default=None, help="skip the elbow rule")
    s.add_argument("--kmax", type=int, default=30)
    s.add_argument("--threshold-fraction", type=float, default=0.25)
    s.add_argument("--z-cutoff", type=float, default=2.0)
    s.set_defaults(func=cmd_anomaly)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"coretruss: error: {exc}", file=sys.stderr)
        return 2
    except (EdgeListParseError, ValueError, OSError) as exc:
        print(f"coretruss: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
