#!/usr/bin/env python3
"""Compare the compiled and pure-Python engines on identical workloads.

    python3 benchmarks/compare_engines.py --n 200000 --queries 200000

Reports ns/query for indexed extraction on each available engine and for
the delta-code baseline at its two standard sampling intervals.  The
pure-Python engine answers the same queries and must return identical
values -- this doubles as a parity check at scale.
"""

import argparse
import time

import numpy as np

from rmdseq import (
    Accessor,
    EliasAccessor,
    elias_encode,
    encode_sequence,
)
from rmdseq.code import CountTables, get_code
from rmdseq.elias import SAMPLE_INTERVALS
from rmdseq.engine import available_engines
from rmdseq.tables import build_tables


def _time(fn, reps=3):
    best = min(fn() for _ in range(reps))
    return best


def bench_rmd(spec_id, values, l1, l2, queries, seed):
    spec = get_code(spec_id)
    counts = CountTables(spec)
    stream = encode_sequence(spec, counts, values)
    tables = build_tables(spec)
    ts = np.random.default_rng(seed).integers(0, stream.n, size=queries,
                                              dtype=np.int64)
    rows = []
    outs = {}
    for engine in available_engines():
        acc = Accessor(spec, stream, tables=tables, engine=engine, l1=l1, l2=l2)
        eng, h = acc._engine, acc._h
        out = np.zeros(queries, dtype=np.uint64)

        def run():
            t0 = time.perf_counter()
            eng.extract_many(h, ts, out)
            return (time.perf_counter() - t0) / queries * 1e9

        # the slow engine gets a shorter run
        q = queries if engine == "c" else max(queries // 50, 1)
        if engine != "c":
            sub = ts[:q]
            subout = np.zeros(q, dtype=np.uint64)

            def run():
                t0 = time.perf_counter()
                eng.extract_many(h, sub, subout)
                return (time.perf_counter() - t0) / q * 1e9

        ns = _time(run)
        eng.extract_many(h, ts, out)
        outs[engine] = out.copy()
        rows.append((f"{spec_id} [{engine}]", ns, q))
    if len(outs) == 2 and not np.array_equal(outs["c"], outs["py"]):
        raise SystemExit("engine outputs disagree -- aborting")
    return rows


def bench_elias(values, queries, seed):
    rows = []
    for interval in SAMPLE_INTERVALS:
        stream = elias_encode(values, sample_interval=interval)
        q = max(queries // (2 if interval <= 16 else 20), 1)
        ts = np.random.default_rng(seed).integers(0, stream.n, size=q)
        for engine in available_engines():
            acc = EliasAccessor(stream, engine=engine)
            qe = q if engine == "c" else max(q // 50, 1)

            def run():
                t0 = time.perf_counter()
                for t in ts[:qe]:
                    acc.extract(int(t))
                return (time.perf_counter() - t0) / qe * 1e9

            rows.append((f"elias s={interval} [{engine}]", _time(run), qe))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=200000)
    ap.add_argument("--queries", type=int, default=200000)
    ap.add_argument("--codec", default="rmd24inf",
                    choices=("rmd2inf", "rmd24inf"))
    ap.add_argument("--l1", type=int, default=16)
    ap.add_argument("--l2", type=int, default=8)
    ap.add_argument("--zipf", type=float, default=1.2)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    values = rng.zipf(args.zipf, size=args.n)
    while (values >= 1 << 32).any():
        bad = values >= 1 << 32
        values[bad] = rng.zipf(args.zipf, size=int(bad.sum()))
    values -= 1

    print(f"n={args.n}  queries={args.queries}  zipf={args.zipf}  "
          f"l1={args.l1} l2={args.l2}  engines={available_engines()}")
    rows = bench_rmd(args.codec, values, args.l1, args.l2, args.queries,
                     args.seed)
    rows += bench_elias(values, args.queries, args.seed)
    width = max(len(r[0]) for r in rows)
    print(f"{'setup':<{width}}  {'ns/query':>10}  queries")
    for name, ns, q in rows:
        print(f"{name:<{width}}  {ns:>10.1f}  {q}")


if __name__ == "__main__":
    main()
