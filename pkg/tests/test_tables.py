import random

import numpy as np
import pytest

from rmdseq import code as rc
from rmdseq import stream as rs
from rmdseq import tables as rt
from rmdseq import _kernels_py as kpy
from rmdseq.errors import ConfigurationError, CorruptionError, PhaseError

import oracles
from conftest import FAST_FAMILIES


@pytest.mark.parametrize("sid", FAST_FAMILIES)
def test_start_table_against_bit_scan(sid, specs, tables_of):
    spec = specs[sid]
    tab = tables_of(sid)
    assert tab.start_counts.max() <= 3
    rnd = random.Random(99)
    for _ in range(4000):
        idx = rnd.randrange(4096)
        cnt, pos = oracles.window_start_count(spec, idx)
        assert tab.start_counts[idx] == cnt
        got = [tab.start_offsets[idx * 3 + s] for s in range(3)]
        assert got[:cnt] == pos
        assert all(g == rt.NO_START for g in got[cnt:])


def test_start_table_full_sweep(specs, tables_of):
    spec = specs["rmd24inf"]
    tab = tables_of("rmd24inf")
    for idx in range(4096):
        cnt, _ = oracles.window_start_count(spec, idx)
        assert tab.start_counts[idx] == cnt


def test_finite_family_has_no_byte_tables(specs):
    with pytest.raises(ConfigurationError):
        rt.build_start_tables(specs["rmd245"])
    with pytest.raises(ConfigurationError):
        rt.build_chunk_tables(specs["rmd245"])


def test_chunk_table_sizing():
    spec = rc.get_code("rmd24inf", max_len=45)
    tab = rt.build_tables(spec, chunk_size=7)
    assert tab.max_chunks == (45 + spec.lookahead_bits) // 7 + 1
    assert tab.chunk_table_bytes() == tab.max_chunks * spec.n_states * 128 * 6
    with pytest.raises(ConfigurationError):
        rt.build_chunk_tables(rc.get_code("rmd2inf"), chunk_size=3)


@pytest.mark.parametrize("sid", FAST_FAMILIES)
@pytest.mark.parametrize("chunk_size", [4, 7, 8])
def test_decode_all_phases_matches_reference(sid, chunk_size, specs, counts_of):
    spec = specs[sid]
    counts = counts_of(sid)
    tab = rt.build_tables(spec, chunk_size)
    rnd = random.Random(2000 + chunk_size)
    vals = [rnd.randrange(1 << rnd.choice([2, 8, 16, 24, 31])) for _ in range(600)]
    st = rs.encode_sequence(spec, counts, vals)
    handle = (st.data, kpy.prepare_tables(tab))
    for k, (byte, phase) in enumerate(oracles.boundary_bytes_oracle(spec, st)[:-1]):
        assert kpy.decode_at(handle, byte, phase) == vals[k]


def test_decode_phase_error(specs, counts_of, tables_of):
    spec = specs["rmd2inf"]
    st = rs.encode_sequence(spec, counts_of("rmd2inf"), [5, 6])
    handle = (st.data, kpy.prepare_tables(tables_of("rmd2inf")))
    with pytest.raises(PhaseError):
        kpy.decode_at(handle, 0, 3)


def test_decode_runaway_guard(specs, tables_of):
    # 011 then 01 01 01 ... -- gap runs forever, no delimiter ever closes
    handle = (b"\x56" + b"\x55" * 64, kpy.prepare_tables(tables_of("rmd2inf")))
    with pytest.raises(CorruptionError):
        kpy.decode_at(handle, 0, 0)


@pytest.mark.parametrize("sid", FAST_FAMILIES)
def test_starts_in_byte_helper(sid, specs, counts_of, tables_of):
    spec = specs[sid]
    counts = counts_of(sid)
    tab = tables_of(sid)
    rnd = random.Random(7)
    vals = [rnd.randrange(1 << 20) for _ in range(200)]
    st = rs.encode_sequence(spec, counts, vals)
    per_byte = {}
    for byte, phase in oracles.boundary_bytes_oracle(spec, st):
        per_byte[byte] = phase + 1
    for i in range(len(st.data) - 8):
        assert rt.starts_in_byte(tab, st.data, i) == per_byte.get(i, 0)


def test_tables_deterministic(specs):
    a = rt.build_tables(specs["rmd24inf"])
    b = rt.build_tables(specs["rmd24inf"])
    assert np.array_equal(a.next_ptr, b.next_ptr)
    assert np.array_equal(a.add_out, b.add_out)
    assert np.array_equal(a.more, b.more)
    assert np.array_equal(a.start_counts, b.start_counts)
