"""Command line entry point: ``pinvdb compute|serve|export|import|bench``."""

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import bench, formats
from .errors import PinvError
from .pipeline import OperationRequest, TestRef, execute
from .store import OPERATIONS, MatrixStore

logger = logging.getLogger("pinvdb")


def _number(text):
    value = float(text)
    return int(value) if value.is_integer() else value


def _store_path(args):
    return os.environ.get("PINV_STORE") or args.store


def load_operand(text):
    """``test:NAME``, a stored integer id, or a path to a matrix text file."""
    if text.startswith("test:"):
        return TestRef(text[5:])
    if text.isdigit():
        return int(text)
    path = Path(text)
    if not path.is_file():
        raise argparse.ArgumentTypeError(f"{text}: not a file, id or test:NAME")
    return formats.parse_matrix_text(path.read_bytes())


def cmd_compute(args):
    operands = [load_operand(s) for s in (args.a, args.b, args.c) if s is not None]
    req = OperationRequest(args.op, tuple(operands), r=args.r, s=args.s, p=args.p, q=args.q)
    with MatrixStore(_store_path(args)) as store:
        resp = execute(store, req)
    if args.json:
        print(json.dumps(resp.to_json(args.places)))
    else:
        print(formats.format_grid(formats.render_result(resp.elements, args.places)))
    return 0


def cmd_serve(args):
    from .service import serve

    with MatrixStore(_store_path(args)) as store:
        serve(store, args.host, args.port)
    return 0


def cmd_export(args):
    with MatrixStore(_store_path(args)) as store:
        store.export(args.out)
    print(f"exported to {args.out}")
    return 0


def cmd_import(args):
    with MatrixStore(_store_path(args)) as store:
        counts = store.import_dump(args.out)
    print(f"imported {counts}")
    return 0


def cmd_bench(args):
    size = bench.parse_size(args.size) if args.size else None
    backends = (args.backend,) if args.backend else ("flat", "nested")
    if args.experiment == "search":
        dim = size or (70, 70)
        if args.layout:
            report = bench.bench_search(args.layout, args.count, dim, args.samples, args.seed)
        else:
            report = bench.compare_search(args.count, dim, args.samples, args.seed)
    elif args.experiment == "pinv":
        sizes = [size] if size else None
        report = bench.bench_pinv_representation(sizes, backends, args.samples, args.seed)
    elif args.experiment == "hitmiss":
        if args.clients:
            report = bench.bench_concurrent(size or (20, 20), args.clients, args.samples, args.seed)
        else:
            report = bench.bench_hit_miss(size or (80, 80), None, args.samples, args.seed, args.populate)
    elif args.experiment == "fundamental":
        sizes = None
        if size:
            sizes = {"multiply": [(size, (size[1], size[1]))], "add": [(size, size)],
                     "subtract": [(size, size)]}
        report = bench.bench_fundamental(backends=backends, sizes=sizes,
                                         samples=args.samples, seed=args.seed)
    else:
        sizes = (size[0],) if size else (10, 40, 80)
        report = bench.bench_kernels(sizes, args.samples, args.seed)
    print(report.format_table())
    if args.json:
        report.to_json(args.json)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="pinvdb", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="compute an operation or fetch it from the store")
    p.add_argument("--op", required=True, choices=OPERATIONS)
    p.add_argument("--a", required=True)
    p.add_argument("--b")
    p.add_argument("--c")
    for name in ("r", "s"):
        p.add_argument(f"--{name}", type=_number, default=0)
    for name in ("p", "q"):
        p.add_argument(f"--{name}", type=int, default=0)
    p.add_argument("--store", default="pinvdb.sqlite")
    p.add_argument("--places", type=int, default=3)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("serve", help="run the HTTP JSON service")
    p.add_argument("--store", default="pinvdb.sqlite")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    for name, func in (("export", cmd_export), ("import", cmd_import)):
        p = sub.add_parser(name, help=f"{name} a tab-separated store dump")
        p.add_argument("--store", default="pinvdb.sqlite")
        p.add_argument("--out", required=True)
        p.set_defaults(func=func)

    p = sub.add_parser("bench", help="run a benchmark experiment")
    p.add_argument("experiment", choices=("search", "pinv", "hitmiss", "fundamental", "kernels"))
    p.add_argument("--layout", choices=("R", "mR"))
    p.add_argument("--backend", choices=("flat", "nested"))
    p.add_argument("--size", help="MxN")
    p.add_argument("--count", type=int, default=1000, help="stored matrices for search")
    p.add_argument("--populate", type=int, default=0, help="pre-filled matrices for hitmiss")
    p.add_argument("--clients", type=int, default=0, help="concurrent clients for hitmiss")
    p.add_argument("--samples", type=int, default=bench.MIN_SAMPLES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", metavar="OUT", help="write the report as JSON")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (PinvError, ValueError, argparse.ArgumentTypeError) as exc:
        code = exc.code if isinstance(exc, PinvError) else type(exc).__name__
        print(f"error: {code}: {exc}", file=sys.stderr)
        return 2
