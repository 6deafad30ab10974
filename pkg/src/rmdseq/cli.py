"""Command-line front end.

    rmdseq build   values.txt -o seq.rmda --codec rmd24inf --l1 16 --l2 8
    rmdseq build   --text corpus.txt --scheme word -o corpus.rmda
    rmdseq get     seq.rmda 1060
    rmdseq decode  seq.rmda --verify
    rmdseq bench   seq.rmda --queries 1000000 --seed 7
    rmdseq stats   seq.rmda

Exit codes: 0 ok, 1 usage/bounds, 2 I/O, 3 capacity, 4 corruption.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from . import code as _code
from . import container as _container
from . import corpus as _corpus
from . import elias as _elias
from . import index as _index
from . import stream as _stream
from .engine import get_engine
from .errors import (
    BoundsError,
    CapacityError,
    ConfigurationError,
    CorruptionError,
    RmdError,
)
from .tables import DEFAULT_CHUNK_SIZE, build_tables

RMD_CODECS = ("rmd2inf", "rmd24inf", "rmd245")


def _read_values(path):
    vals = []
    with open(path, "rb") as fh:
        for ln, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                v = int(line)
            except ValueError:
                raise ConfigurationError(f"{path}:{ln}: not an unsigned integer")
            if v < 0:
                raise ConfigurationError(f"{path}:{ln}: negative value")
            vals.append(v)
    return vals


def _indexable(spec):
    return spec.lookahead_bits <= 4


def cmd_build(args):
    if (args.values is None) == (args.text is None):
        raise ConfigurationError("give exactly one of: a values file, or --text")
    model = None
    if args.text is not None:
        with open(args.text, "rb") as fh:
            text = fh.read()
        model = _corpus.build_model(text, args.scheme)
        values = model.sequence
    else:
        values = _read_values(args.values)

    if args.codec == "elias":
        st = _elias.elias_encode(values, sample_interval=args.sample_interval)
        store = _container.Store(codec="elias", stream=st, model=model)
        size = _container.save_container(args.output, store)
        print(f"codec elias  n={st.n}  payload={len(st.data)}B  "
              f"samples={st.samples.nbytes}B  container={size}B")
        return 0

    spec = _code.get_code(args.codec)
    counts = _code.CountTables(spec)
    st = _stream.encode_sequence(spec, counts, values)
    idx = None
    if _indexable(spec):
        tables = build_tables(spec, args.chunk_size)
        idx = _index.build_index(spec, st, tables, l1=args.l1, l2=args.l2)
        report = _index.index_overhead(idx, tables, st.payload_bits)
    else:
        print(f"note: {args.codec} decodes sequentially; no random-access index",
              file=sys.stderr)
    store = _container.Store(
        codec=args.codec, stream=st, index=idx, model=model,
        chunk_size=args.chunk_size,
    )
    size = _container.save_container(args.output, store)
    payload = (st.payload_bits + 7) // 8
    print(f"codec {args.codec}  n={st.n}  payload={payload}B  container={size}B")
    if idx is not None:
        print(f"index {report['index_bytes']}B ({report['index_pct']:.2f}% of payload), "
              f"tables {report['table_bytes']}B, "
              f"total overhead {report['overhead_pct']:.2f}%")
    if model is not None:
        ratio0 = st.payload_bits / model.h0_bits if model.h0_bits else float("inf")
        line = (f"H0 {model.h0_bits / 8:.0f}B  payload/H0 {ratio0:.4f}")
        if model.h1_bits:
            line += f"  H1 {model.h1_bits / 8:.0f}B  payload/H1 {st.payload_bits / model.h1_bits:.4f}"
        print(line)
    return 0


def _open_rmd(store, engine):
    spec = _container.spec_for(store)
    tables = build_tables(spec, store.chunk_size) if _indexable(spec) else None
    acc = None
    if store.index is not None:
        acc = _index.Accessor(
            spec, store.stream, tables=tables, index=store.index, engine=engine
        )
    return spec, tables, acc


def cmd_get(args):
    store = _container.load_container(args.container)
    if store.codec == "elias":
        acc = _elias.EliasAccessor(store.stream, engine=args.engine)
        print(acc.extract(args.t))
        return 0
    spec, tables, acc = _open_rmd(store, args.engine)
    if acc is not None:
        print(acc.extract(args.t))
        return 0
    # no index: walk the stream
    if not 0 <= args.t < store.stream.n:
        raise BoundsError(f"element {args.t} outside [0, {store.stream.n})")
    counts = _code.CountTables(spec)
    vals = _stream.decode_sequence_reference(spec, counts, store.stream)
    print(vals[args.t])
    return 0


def cmd_decode(args):
    store = _container.load_container(args.container)
    if store.codec == "elias":
        vals = _elias.elias_decode(store.stream)
        if args.verify:
            acc = _elias.EliasAccessor(store.stream, engine=args.engine)
            bad = sum(acc.extract(t) != v for t, v in enumerate(vals))
            print(f"verify: {len(vals)} elements, {bad} mismatches", file=sys.stderr)
            if bad:
                raise CorruptionError("sampled extraction disagrees with full decode")
    else:
        spec, tables, acc = _open_rmd(store, args.engine)
        counts = _code.CountTables(spec)
        vals = _stream.decode_sequence_reference(spec, counts, store.stream)
        if args.verify and acc is not None:
            got = acc.extract_many(np.arange(len(vals), dtype=np.int64))
            bad = int(np.count_nonzero(got != np.asarray(vals, dtype=np.uint64)))
            print(f"verify: {len(vals)} elements, {bad} mismatches", file=sys.stderr)
            if bad:
                raise CorruptionError("indexed extraction disagrees with reference decode")
    out = sys.stdout if args.output is None else open(args.output, "w")
    try:
        out.write("\n".join(map(str, vals)))
        if vals:
            out.write("\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def _parse_range(text):
    out = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def _time_queries(extract_many, n, queries, seed):
    ts = np.random.default_rng(seed).integers(0, n, size=queries, dtype=np.int64)
    out = np.zeros(queries, dtype=np.uint64)
    t0 = time.perf_counter()
    extract_many(ts, out)
    dt = time.perf_counter() - t0
    return dt / queries * 1e9


def cmd_bench(args):
    store = _container.load_container(args.container)
    n = store.stream.n
    if n == 0:
        raise ConfigurationError("cannot benchmark an empty sequence")
    print("codec,l1,l2,payload_bytes,index_bytes,overhead_pct,ns_per_query")
    payload = (store.stream.payload_bits + 7) // 8

    if store.codec == "elias":
        acc = _elias.EliasAccessor(store.stream, engine=args.engine)
        eng, h = acc._engine, acc._h

        def run(ts, out):
            for k in range(len(ts)):
                out[k] = eng.elias_extract(h, int(ts[k]))

        ns = _time_queries(run, n, args.queries, args.seed)
        ib = store.stream.samples.nbytes
        s = store.stream.sample_interval
        print(f"elias_s{s},0,0,{payload},{ib},{100.0 * ib / payload:.3f},{ns:.1f}")
        return 0

    spec = _container.spec_for(store)
    if not _indexable(spec):
        raise ConfigurationError(f"{store.codec} has no random-access path to time")
    tables = build_tables(spec, store.chunk_size)
    grid = [(store.index.l1, store.index.l2)] if store.index is not None else []
    if args.grid_l1:
        grid = [(a, b) for a in _parse_range(args.grid_l1)
                for b in _parse_range(args.grid_l2 or "8")]
    if not grid:
        raise ConfigurationError("container has no index; give --grid-l1/--grid-l2")
    for l1, l2 in grid:
        if store.index is not None and (l1, l2) == (store.index.l1, store.index.l2):
            idx = store.index
        else:
            idx = _index.build_index(spec, store.stream, tables, l1=l1, l2=l2)
        acc = _index.Accessor(spec, store.stream, tables=tables, index=idx,
                              engine=args.engine)
        eng, h = acc._engine, acc._h
        ns = _time_queries(lambda ts, out: eng.extract_many(h, ts, out),
                           n, args.queries, args.seed)
        rep = _index.index_overhead(idx, tables, store.stream.payload_bits)
        print(f"{store.codec},{l1},{l2},{rep['payload_bytes']},"
              f"{rep['index_bytes']},{rep['overhead_pct']:.3f},{ns:.1f}")
    return 0


def cmd_stats(args):
    store = _container.load_container(args.container)
    with open(args.container, "rb") as fh:
        blob = fh.read()
    st = store.stream
    print(f"codec          {store.codec}")
    print(f"elements       {st.n}")
    print(f"payload_bits   {st.payload_bits}")
    if store.codec == "elias":
        print(f"sample_every   {st.sample_interval}")
    elif store.index is not None:
        print(f"l1/l2          {store.index.l1}/{store.index.l2}")
        print(f"chunk_size     {store.chunk_size}")
    print("sections:")
    total = 0
    for tag, off, ln in _container.iter_sections(blob):
        print(f"  {tag.decode()}  offset={off:<10} {ln} bytes")
        total += ln
    print(f"file {len(blob)} bytes, sections {total} bytes")
    if store.index is not None:
        idx = store.index
        parts = {
            "block_byte": idx.block_byte.nbytes,
            "sub_avg": idx.sub_avg_fp.nbytes,
            "corr_width": idx.corr_width.nbytes,
            "corr_offset": idx.corr_offset.nbytes,
            "corr_bits": len(idx.corr_bits),
            "phase_bits": len(idx.phase_bits),
        }
        width = max(len(k) for k in parts)
        print("index components:")
        for k, v in parts.items():
            print(f"  {k:<{width}}  {v} bytes")
    if store.model is not None and store.codec in RMD_CODECS:
        spec = _container.spec_for(store)
        counts = _code.CountTables(spec)
        vals = _stream.decode_sequence_reference(spec, counts, st)
        freq = np.bincount(np.asarray(vals, dtype=np.int64))
        h0 = _corpus.zero_order_entropy(freq)
        print(f"H0(ranks)      {h0 / 8:.0f} bytes; payload/H0 = {st.payload_bits / h0:.4f}")
        model = store.model
        model.sequence = np.asarray(vals, dtype=np.int64)
        text = model.reconstruct()
        if len(text) >= 2:
            h1 = _corpus.first_order_entropy(text)
            print(f"H1(text)       {h1 / 8:.0f} bytes; payload/H1 = {st.payload_bits / h1:.4f}")
    return 0


def make_parser():
    p = argparse.ArgumentParser(prog="rmdseq",
                                description="Compressed integer sequences with "
                                            "near-constant-time random access")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="encode values or text into a container")
    b.add_argument("values", nargs="?", help="file of unsigned decimals, one per line")
    b.add_argument("--text", help="treat input as text through a tokenizer")
    b.add_argument("--scheme", choices=_corpus.SCHEMES, default="word")
    b.add_argument("--codec", choices=RMD_CODECS + ("elias",), default="rmd24inf")
    b.add_argument("--l1", type=int, default=16)
    b.add_argument("--l2", type=int, default=8)
    b.add_argument("--chunk-size", type=int, default=DEFAULT_CHUNK_SIZE)
    b.add_argument("--sample-interval", type=int, default=512,
                   help="sampling step for the elias codec")
    b.add_argument("-o", "--output", required=True)
    b.set_defaults(fn=cmd_build)

    g = sub.add_parser("get", help="print one element")
    g.add_argument("container")
    g.add_argument("t", type=int)
    g.add_argument("--engine", choices=("auto", "c", "py"), default="auto")
    g.set_defaults(fn=cmd_get)

    d = sub.add_parser("decode", help="print or write all elements")
    d.add_argument("container")
    d.add_argument("--output")
    d.add_argument("--verify", action="store_true",
                   help="cross-check random access against the reference decode")
    d.add_argument("--engine", choices=("auto", "c", "py"), default="auto")
    d.set_defaults(fn=cmd_decode)

    n = sub.add_parser("bench", help="time random extractions, CSV to stdout")
    n.add_argument("container")
    n.add_argument("--queries", type=int, default=10 ** 7)
    n.add_argument("--seed", type=int, default=0)
    n.add_argument("--grid-l1", help="comma/dash list, e.g. 10,12,14-16")
    n.add_argument("--grid-l2", help="comma/dash list, e.g. 4,6,8")
    n.add_argument("--engine", choices=("auto", "c", "py"), default="auto")
    n.set_defaults(fn=cmd_bench)

    s = sub.add_parser("stats", help="describe a container")
    s.add_argument("container")
    s.set_defaults(fn=cmd_stats)
    return p


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigurationError, BoundsError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except CapacityError as e:
        print(f"capacity error: {e}", file=sys.stderr)
        return 3
    except CorruptionError as e:
        print(f"corruption: {e}", file=sys.stderr)
        return 4
    except OSError as e:
        print(f"io error: {e}", file=sys.stderr)
        return 2
    except RmdError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
