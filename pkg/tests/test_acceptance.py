"""Acceptance gate: one test per shipping criterion, one verdict line each.

Each test prints ``criterion N: PASS/FAIL -- detail`` (collected into the
terminal summary by conftest).  Criterion 8 is informational -- timing on
shared hardware -- and never fails the suite; everything else asserts.
"""

import time

import numpy as np
import pytest

import rmdseq.code as rc
from rmdseq import (
    Accessor,
    EliasAccessor,
    build_index,
    build_model,
    build_tables,
    decode_sequence_reference,
    elias_encode,
    encode_sequence,
    index_overhead,
    locate_trace,
)
from rmdseq.engine import available_engines
from rmdseq.index import _read_corr, _read_phase
from rmdseq.tables import MAX_STARTS_PER_BYTE

import textgen
from oracles import (
    boundary_bytes_oracle,
    construction_order,
    definition_filter,
    window_start_count,
)

RESULTS = []


def _report(num, ok, detail):
    line = f"criterion {num}: {'PASS' if ok else 'FAIL'} -- {detail}"
    RESULTS.append(line)
    print(line)
    return ok


def _zipf_values(rng, n, a=1.1):
    v = rng.zipf(a, size=n)
    while (v >= 1 << 32).any():  # resample the tail the coder cannot hold
        bad = v >= 1 << 32
        v[bad] = rng.zipf(a, size=int(bad.sum()))
    return v - 1


def test_criterion_1_enumeration_and_bijection(specs, counts_of):
    """Filter-based and rule-based codeword lists agree with the library,
    and value -> codeword -> value is the identity, for every family."""
    t0 = time.perf_counter()
    checked = 0
    for sid in ("rmd2inf", "rmd24inf", "rmd245"):
        spec, counts = specs[sid], counts_of(sid)
        flat = rc.enumerate_codewords(spec, 16)
        assert flat == construction_order(spec, 16)
        by_len = definition_filter(spec, 16)
        grouped = {}
        for w in flat:
            grouped.setdefault(len(w), []).append(w)
        for length in range(1, 17):
            assert sorted(grouped.get(length, [])) == sorted(by_len[length])
        for v, w in enumerate(flat):
            assert rc.encode_integer(spec, counts, v) == w
            assert rc.decode_codeword_reference(spec, counts, w) == v
        checked += len(flat)
    dt = time.perf_counter() - t0
    ok = dt < 10.0
    _report(1, ok, f"3 families, {checked} codewords <= 16 bits, {dt:.2f}s")
    assert ok


def test_criterion_2_anchor_codeword(specs, counts_of):
    spec, counts = specs["rmd24inf"], counts_of("rmd24inf")
    w = rc.encode_integer(spec, counts, 3)
    v = rc.decode_codeword_reference(spec, counts, "01101")
    ok = w == "01101" and v == 3
    _report(2, ok, f"encode(3) = {w}, decode('01101') = {v}")
    assert ok


def test_criterion_3_worked_lookup(specs, tables_of, counts_of):
    """A hand-built 2048-element sequence reproduces every intermediate of
    one sampled-index lookup, down to the visited bytes."""
    spec, tables = specs["rmd24inf"], tables_of("rmd24inf")
    values = (
        [37] * 640 + [68] * 384                       # block 0: 1024 elements
        + [68] * 26 + [122] * 4
        + [68, 0, 0, 0, 386, 1, 3]
        + [68] * 962 + [122] * 25                     # block 1: 1024 elements
    )
    stream = encode_sequence(spec, counts_of("rmd24inf"), values)
    index = build_index(spec, stream, tables, l1=10, l2=5)

    stored = (
        int(index.block_byte[1]) == 1200
        and int(index.sub_avg_fp[1]) == 40 << 16      # 40.0 bytes in 16.16
        and _read_corr(index, 1, 1) == -1
        and _read_phase(index, 1, 1) == 1
    )
    tr = locate_trace(index, tables, stream.data, 1060)
    walk = (
        (tr.n1, tr.e1, tr.n2, tr.e2) == (1, 36, 1, 5)
        and tr.entry_byte == 1239
        and [c for _, c in tr.steps] == [2, 2, 0, 2]
        and (tr.byte, tr.skip) == (1242, 1)
        and stream.data[1239] == 0xD8
    )
    acc = Accessor(spec, stream, tables=tables, index=index)
    served = (
        acc.locate(1060) == (1242, 1)
        and acc.extract(1060) == 3
        and acc.locate(0) == (0, 0)
        and acc.extract(0) == 37
    )
    ok = stored and walk and served
    _report(
        3, ok,
        f"stored (1200, 40.0, -1, +1); walk {[c for _, c in tr.steps]} -> "
        f"byte {tr.byte} skip {tr.skip}; value {acc.extract(1060)}",
    )
    assert ok


@pytest.mark.parametrize("spec_id", ["rmd2inf", "rmd24inf"])
def test_criterion_4_extraction_sweep(specs, tables_of, counts_of, spec_id):
    spec, tables = specs[spec_id], tables_of(spec_id)
    t0 = time.perf_counter()
    rng = np.random.default_rng(0x5EED + (spec_id == "rmd24inf"))
    values = _zipf_values(rng, 10 ** 5)
    stream = encode_sequence(spec, counts_of(spec_id), values)
    ref = np.array(
        decode_sequence_reference(spec, counts_of(spec_id), stream), dtype=np.uint64
    )
    assert np.array_equal(ref, values.astype(np.uint64))
    every = np.arange(stream.n, dtype=np.int64)
    mismatches = 0
    for l1 in (10, 12, 14, 16):
        for l2 in (4, 6, 8):
            index = build_index(spec, stream, tables, l1=l1, l2=l2)
            acc = Accessor(spec, stream, tables=tables, index=index)
            mismatches += int(np.count_nonzero(acc.extract_many(every) != ref))
    dt = time.perf_counter() - t0
    ok = mismatches == 0 and dt < 60.0
    _report(
        4, ok,
        f"{spec_id}: 12 grid points x {stream.n} elements, "
        f"{mismatches} mismatches, {dt:.1f}s",
    )
    assert ok


def test_criterion_5_fast_decode_equivalence(specs, tables_of, counts_of):
    spec, tables = specs["rmd24inf"], tables_of("rmd24inf")
    rng = np.random.default_rng(55)
    values = _zipf_values(rng, 10 ** 4, a=1.2)
    stream = encode_sequence(spec, counts_of("rmd24inf"), values)
    acc = Accessor(spec, stream, tables=tables, l1=10, l2=5)
    starts = boundary_bytes_oracle(spec, stream)[: stream.n]
    decode_bad = sum(
        acc.decode_at(byte, phase) != int(values[t])
        for t, (byte, phase) in enumerate(starts)
    )

    oracle_counts = np.array(
        [window_start_count(spec, w)[0] for w in range(4096)], dtype=np.uint8
    )
    table_counts = np.asarray(tables.start_counts)
    draws = rng.integers(0, 4096, size=10 ** 6)
    window_bad = int(np.count_nonzero(table_counts[draws] != oracle_counts[draws]))
    ok = (
        decode_bad == 0
        and window_bad == 0
        and int(table_counts.max()) <= MAX_STARTS_PER_BYTE
    )
    _report(
        5, ok,
        f"{stream.n} starts decoded, {decode_bad} wrong; 10^6 windows, "
        f"{window_bad} count mismatches, max {int(table_counts.max())}/byte",
    )
    assert ok


def test_criterion_6_space_overhead(specs, tables_of, counts_of):
    """On a multi-megabyte English-like corpus the coded ranks sit within
    10% of their zero-order entropy and the index adds at most 5%."""
    text = textgen.generate()
    assert len(text) >= 5 << 20
    model = build_model(text, "word")
    spec, tables = specs["rmd24inf"], tables_of("rmd24inf")
    stream = encode_sequence(spec, counts_of("rmd24inf"), model.sequence)
    index = build_index(spec, stream, tables, l1=16, l2=8)
    rep = index_overhead(index, tables, stream.payload_bits)
    ratio = stream.payload_bits / model.h0_bits
    ok = (
        model.h0_bits <= stream.payload_bits <= 1.10 * model.h0_bits
        and rep["overhead_pct"] <= 5.0
    )
    _report(
        6, ok,
        f"{len(text) >> 20} MiB, {model.n_tokens} tokens: payload/H0 = "
        f"{ratio:.4f} (need <= 1.10), overhead {rep['overhead_pct']:.2f}% (need <= 5)",
    )
    assert ok


def test_criterion_7_table_budget():
    spec = rc.rmd_24inf(max_len=45)
    tables = build_tables(spec, chunk_size=7)
    size = tables.chunk_table_bytes()
    ok = size <= 30720 and tables.n_states <= 5
    _report(7, ok, f"chunk tables {size} bytes ({tables.n_states} states), cap 30720")
    assert ok


def test_criterion_8_latency_vs_sampled_baseline(specs, tables_of, counts_of):
    """Informational only: indexed extraction vs delta codes sampled at 512."""
    rng = np.random.default_rng(88)
    values = _zipf_values(rng, 10 ** 5, a=1.2)
    spec, tables = specs["rmd24inf"], tables_of("rmd24inf")
    stream = encode_sequence(spec, counts_of("rmd24inf"), values)
    acc = Accessor(spec, stream, tables=tables, l1=16, l2=8)
    ebase = EliasAccessor(elias_encode(values, sample_interval=512))

    q = 10 ** 6 if "c" in available_engines() else 2 * 10 ** 4
    ts = rng.integers(0, stream.n, size=q, dtype=np.int64)
    out = np.zeros(q, dtype=np.uint64)
    t0 = time.perf_counter()
    acc._engine.extract_many(acc._h, ts, out)
    rmd_ns = (time.perf_counter() - t0) / q * 1e9

    t0 = time.perf_counter()
    for t in ts[: max(q // 10, 1)]:
        ebase.extract(int(t))
    elias_ns = (time.perf_counter() - t0) / max(q // 10, 1) * 1e9

    ok = rmd_ns <= 0.5 * elias_ns
    _report(
        8, ok,
        f"{rmd_ns:.0f} ns vs {elias_ns:.0f} ns per query "
        f"({elias_ns / rmd_ns:.1f}x, need >= 2x; informational, Q={q})",
    )
    if not ok:
        pytest.skip("timing criterion is informational; not gating")


def test_criterion_9_count_recurrence(specs):
    counts = rc.CountTables(specs["rmd2inf"])
    bad = [
        L for L in range(5, 41)
        if counts.W[L] != counts.W[L - 1] + counts.W[L - 2] + 1
    ]
    ok = not bad
    _report(9, ok, f"two-term-plus-one recurrence holds for L = 5..40 ({len(bad)} breaks)")
    assert ok
