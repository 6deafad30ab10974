import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rmdseq import code as rc
from rmdseq import stream as rs
from rmdseq.errors import BoundsError, CapacityError

import oracles
from conftest import FAMILIES


def enc(sid, values, **kw):
    spec = rc.get_code(sid)
    counts = rc.CountTables(spec)
    return spec, counts, rs.encode_sequence(spec, counts, values, **kw)


def test_three_codeword_layout():
    # 011 0110 0111 -> 11 payload bits, then the 0110 terminator
    spec, counts, st_ = enc("rmd2inf", [0, 1, 2])
    assert st_.payload_bits == 11
    assert st_.n == 3
    assert st_.data[0] == 0x36
    assert st_.data[1] == 0x37
    assert len(st_.data) == (11 + 7) // 8 + 8
    assert oracles.stream_bits(st_.data, 15) == "011" + "0110" + "0111" + "0110"


def test_empty_stream_is_just_terminator():
    _, _, st_ = enc("rmd24inf", [])
    assert st_.payload_bits == 0
    assert st_.n == 0
    assert st_.data[0] == 0x06
    assert len(st_.data) == 8
    assert st_.max_cw_bits == 0


def test_max_cw_tracking():
    _, counts, st_ = enc("rmd24inf", [0, 3, 10 ** 6])
    assert st_.max_cw_bits == rc.codeword_length(counts, 10 ** 6)


def test_read_window64():
    data = bytes([0xFF, 0x0F] + [0] * 7)
    assert rs.read_window64(data, 1) == 0x0F
    assert rs.read_window64(data, 0) == 0xFFF
    with pytest.raises(BoundsError):
        rs.read_window64(data, 2)
    with pytest.raises(BoundsError):
        rs.read_window64(data, -1)


def test_value_limit_enforced():
    spec = rc.get_code("rmd2inf")
    counts = rc.CountTables(spec)
    with pytest.raises(CapacityError):
        rs.encode_sequence(spec, counts, [1 << 32])
    # explicit limit opens the full range of the family
    big = counts.value_range() - 1
    st_ = rs.encode_sequence(spec, counts, [big], value_limit=counts.value_range())
    assert rs.decode_sequence_reference(spec, counts, st_) == [big]


def test_negative_rejected():
    spec = rc.get_code("rmd2inf")
    counts = rc.CountTables(spec)
    with pytest.raises(ValueError):
        rs.encode_sequence(spec, counts, [-1])


@pytest.mark.parametrize("sid", FAMILIES)
def test_start_positions_count(sid):
    random.seed(hash(sid) & 0xFFFF)
    vals = [random.randrange(1 << 24) for _ in range(300)]
    spec, counts, st_ = enc(sid, vals)
    starts = list(rs.iter_start_positions(spec, st_))
    assert len(starts) == len(vals) + 1
    assert starts[0] == 0
    assert starts[-1] == st_.payload_bits
    # gaps between starts are the codeword lengths
    lens = [b - a for a, b in zip(starts, starts[1:])]
    assert lens == [rc.codeword_length(counts, v) for v in vals]


@pytest.mark.parametrize("sid", FAMILIES)
def test_round_trip_small(sid):
    for vals in ([], [0], [0, 0, 0], list(range(40))):
        spec, counts, st_ = enc(sid, vals)
        assert rs.decode_sequence_reference(spec, counts, st_) == vals


values_lists = st.lists(
    st.integers(min_value=0, max_value=(1 << 32) - 1), min_size=0, max_size=120
)


@given(st.sampled_from(FAMILIES), values_lists)
@settings(max_examples=120, deadline=None)
def test_round_trip_random(sid, vals):
    spec, counts, st_ = enc(sid, vals)
    assert rs.decode_sequence_reference(spec, counts, st_) == vals


def test_spec_mismatch_detected():
    spec, counts, st_ = enc("rmd2inf", [1, 2, 3])
    other = rc.get_code("rmd24inf")
    with pytest.raises(Exception):
        rs.decode_sequence_reference(other, rc.CountTables(other), st_)
