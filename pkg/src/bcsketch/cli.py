"""``bcsketch`` command line: synth, ingest, compress, bench, params.

Every output file gets a ``<output>.manifest`` next to it holding the
command, all parameters, the seed, paths and the tool version as flat
``key=value`` lines.
"""
from __future__ import annotations

import argparse
import logging
import math
import secrets
import sys
from pathlib import Path

from bcsketch import __version__
from bcsketch.datagen import gen_allpairs_dataset, gen_knn_dataset
from bcsketch.estimators import SKETCHERS, make_sketcher
from bcsketch.ingest import (
    FormatError,
    ensure_parent,
    load_docword,
    read_dataset,
    sample_dataset,
    write_dataset,
    write_sketches,
)
from bcsketch.params import CompressionParams, corruption_bound, required_length
from bcsketch.search import run_benchmark
from bcsketch.vectors import SparseDataset

DEFAULT_SEED = 20171

log = logging.getLogger("bcsketch")


def manifest_path(out_path) -> Path:
    return Path(str(out_path) + ".manifest")


def write_manifest(out_path, command, params: dict, extra: dict | None = None) -> Path:
    entries = {"command": command, "version": __version__}
    entries.update(params)
    entries.update(extra or {})
    path = manifest_path(out_path)
    lines = [f"{k}={_fmt(v)}" for k, v in entries.items()]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    return path


def read_manifest(path) -> dict:
    out = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.strip():
            key, _, value = line.partition("=")
            out[key] = value
    return out


def _fmt(value):
    if isinstance(value, (list, tuple)):
        return ",".join(map(str, value))
    return "" if value is None else str(value)


def _int_list(text):
    try:
        values = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("list must not be empty")
    return values


def _float_list(text):
    try:
        values = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("list must not be empty")
    return values


def _method_list(text):
    methods = [t.strip().lower() for t in text.split(",") if t.strip()]
    unknown = sorted(set(methods) - set(SKETCHERS))
    if not methods or unknown:
        raise argparse.ArgumentTypeError(f"methods must be drawn from {sorted(SKETCHERS)}")
    return methods


def _resolve_seed(args):
    if args.random_seed:
        return secrets.randbits(63)
    return args.seed


def _add_seed(p):
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="master seed (default %(default)s)")
    p.add_argument("--random-seed", action="store_true", help="draw a fresh seed; it is recorded in the manifest")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bcsketch", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic dataset")
    p.add_argument("--kind", choices=("allpairs", "knn"), required=True)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--d", type=int, default=100000)
    p.add_argument("--psi", type=int, default=200)
    p.add_argument("--pairs", type=int, default=200, help="planted pairs (allpairs)")
    p.add_argument("--neighbors", type=int, default=249, help="planted neighbours (knn)")
    p.add_argument("--out", required=True)
    p.add_argument("--query-out", help="query vector file (knn; default <out>.query)")
    _add_seed(p)

    p = sub.add_parser("ingest", help="binarize a UCI docword file")
    p.add_argument("--input", required=True)
    p.add_argument("--sample-size", type=int)
    p.add_argument("--out", required=True)
    _add_seed(p)

    p = sub.add_parser("compress", help="compress a dataset to a sketch file")
    p.add_argument("--dataset", required=True)
    p.add_argument("--method", type=str.lower, choices=sorted(SKETCHERS), required=True)
    p.add_argument("--length", type=int, required=True, help="compression length N")
    p.add_argument("--out", required=True)
    _add_seed(p)

    p = sub.add_parser("bench", help="accuracy / time sweep against exact search")
    p.add_argument("--dataset", required=True)
    p.add_argument("--methods", type=_method_list, default=["bcs", "minhash"])
    p.add_argument("--lengths", type=_int_list, required=True)
    p.add_argument("--thresholds", type=_float_list, default=[round(0.1 * k, 1) for k in range(1, 10)])
    p.add_argument("--repeats", type=int, default=10)
    p.add_argument("--mode", choices=("allpairs", "query"), default="allpairs")
    p.add_argument("--queries", help="query dataset file (query mode); otherwise the dataset is split")
    p.add_argument("--query-fraction", type=float, default=0.1)
    p.add_argument("--csv-out", required=True)
    _add_seed(p)

    p = sub.add_parser("params", help="theoretical compression length and corruption bound")
    p.add_argument("--psi", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--r", type=int, required=True)
    return parser


def cmd_synth(args):
    seed = _resolve_seed(args)
    ensure_parent(args.out)
    params = {"kind": args.kind, "n": args.n, "d": args.d, "psi": args.psi, "seed": seed, "out": args.out}
    if args.kind == "allpairs":
        ds = gen_allpairs_dataset(args.n, args.d, args.psi, args.pairs, seed)
        params["pairs"] = args.pairs
    else:
        query, ds = gen_knn_dataset(args.n, args.d, args.psi, args.neighbors, seed)
        query_out = args.query_out or args.out + ".query"
        ensure_parent(query_out)
        write_dataset(SparseDataset(args.d, (query,)), query_out)
        params.update(neighbors=args.neighbors, query_out=query_out)
    write_dataset(ds, args.out)
    write_manifest(args.out, "synth", params, {"vectors": ds.n, "sparsity": ds.sparsity})
    log.info("wrote %d vectors to %s", ds.n, args.out)


def cmd_ingest(args):
    seed = _resolve_seed(args)
    ds = load_docword(args.input)
    if args.sample_size is not None:
        ds = sample_dataset(ds, args.sample_size, seed)
    ensure_parent(args.out)
    write_dataset(ds, args.out)
    params = {"input": args.input, "sample_size": args.sample_size, "seed": seed, "out": args.out}
    write_manifest(args.out, "ingest", params, {"n": ds.n, "d": ds.dim, "psi": ds.sparsity})
    log.info("n=%d d=%d psi=%d", ds.n, ds.dim, ds.sparsity)


def cmd_compress(args):
    seed = _resolve_seed(args)
    ds = read_dataset(args.dataset)
    est = make_sketcher(args.method, n_components=args.length, random_state=seed).fit(ds)
    if args.method == "bcs":
        rows = [row.nonzero()[0] + 1 for row in est.transform(ds)]
    else:
        rows = est.transform(ds)
    ensure_parent(args.out)
    write_sketches(args.out, args.method, args.length, seed, rows)
    params = {"dataset": args.dataset, "method": args.method, "N": args.length, "seed": seed, "out": args.out}
    write_manifest(args.out, "compress", params, {"n": ds.n, "d": ds.dim})


def cmd_bench(args):
    seed = _resolve_seed(args)
    if args.repeats < 1:
        raise ValueError("--repeats must be >= 1")
    ds = read_dataset(args.dataset)
    queries = read_dataset(args.queries) if args.queries else None
    report = run_benchmark(
        ds, args.methods, args.lengths, args.thresholds, args.repeats, seed,
        mode=args.mode, queries=queries, query_fraction=args.query_fraction,
    )
    ensure_parent(args.csv_out)
    with open(args.csv_out, "w", encoding="utf-8", newline="") as fh:
        report.to_csv(fh)
    params = {
        "dataset": args.dataset, "methods": args.methods, "lengths": args.lengths,
        "thresholds": args.thresholds, "repeats": args.repeats, "mode": args.mode,
        "queries": args.queries, "query_fraction": args.query_fraction, "seed": seed,
        "csv_out": args.csv_out,
    }
    write_manifest(args.csv_out, "bench", params)
    print(report.format_summary())


def cmd_params(args):
    p = CompressionParams(args.psi, args.n, args.epsilon, args.r)
    N = required_length(p)
    bound = corruption_bound(p.psi, N, p.epsilon, p.r)
    print(f"N={N}")
    print(f"branch={p.branch}")
    print("log_base=2")
    print(f"epsilon_tilde={p.epsilon_tilde:.6g}")
    print(f"corruption_bound={bound:.6g}")
    print(f"log2(n)={math.log2(p.n):.6g}")


COMMANDS = {"synth": cmd_synth, "ingest": cmd_ingest, "compress": cmd_compress,
            "bench": cmd_bench, "params": cmd_params}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        COMMANDS[args.command](args)
    except FormatError as exc:
        print(f"bcsketch: error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"bcsketch: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
