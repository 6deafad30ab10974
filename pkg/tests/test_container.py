"""Container format: round-trips, determinism, and damage detection."""

import struct
import zlib

import numpy as np
import pytest

from rmdseq import (
    Accessor,
    ConfigurationError,
    CorruptionError,
    EliasAccessor,
    Store,
    build_index,
    build_model,
    elias_encode,
    encode_sequence,
    load_container,
    save_container,
)
from rmdseq.container import iter_sections, pack_store, spec_for, unpack_store


@pytest.fixture
def indexed_store(specs, tables_of, counts_of):
    rng = np.random.default_rng(99)
    values = rng.integers(0, 1 << 16, size=1200)
    spec = specs["rmd24inf"]
    stream = encode_sequence(spec, counts_of("rmd24inf"), values)
    index = build_index(spec, stream, tables_of("rmd24inf"), l1=8, l2=4)
    model = build_model(b"some backing text, twice the text", "word")
    return values, Store(codec="rmd24inf", stream=stream, index=index, model=model)


def test_roundtrip_indexed(indexed_store, specs, tables_of):
    values, store = indexed_store
    back = unpack_store(pack_store(store))
    assert back.codec == "rmd24inf"
    assert back.chunk_size == store.chunk_size
    s0, s1 = store.stream, back.stream
    assert (s1.data, s1.n, s1.payload_bits) == (s0.data, s0.n, s0.payload_bits)
    assert (s1.spec_id, s1.max_cw_bits) == (s0.spec_id, s0.max_cw_bits)
    i0, i1 = store.index, back.index
    assert (i1.l1, i1.l2, i1.n, i1.spec_id) == (i0.l1, i0.l2, i0.n, i0.spec_id)
    for f in ("block_byte", "sub_avg_fp", "corr_width", "corr_offset"):
        assert np.array_equal(getattr(i1, f), getattr(i0, f))
    assert (i1.corr_bits, i1.phase_bits) == (i0.corr_bits, i0.phase_bits)
    m0, m1 = store.model, back.model
    assert (m1.scheme, m1.text_length, m1.dictionary) == (
        m0.scheme, m0.text_length, m0.dictionary,
    )
    # the loaded index serves lookups without a rebuild
    acc = Accessor(specs["rmd24inf"], s1, tables=tables_of("rmd24inf"), index=i1)
    assert np.array_equal(
        acc.extract_many(np.arange(len(values))), values.astype(np.uint64)
    )


def test_write_read_write_identical(indexed_store):
    _, store = indexed_store
    blob = pack_store(store)
    assert pack_store(unpack_store(blob)) == blob


def test_sections_aligned_and_in_bounds(indexed_store):
    _, store = indexed_store
    blob = pack_store(store)
    tags = []
    for tag, off, ln in iter_sections(blob):
        assert off % 8 == 0
        assert off + ln <= len(blob)
        tags.append(tag)
    assert tags[0] == b"STRM"
    assert set(tags) > {b"BLKB", b"CBIT", b"PHAS", b"DICT"}


def test_known_payload_bytes(specs, counts_of, tmp_path):
    # 0,1,0 in the base family: 10 payload bits, then the end marker
    spec = specs["rmd2inf"]
    stream = encode_sequence(spec, counts_of("rmd2inf"), [0, 1, 0])
    assert stream.payload_bits == 10
    assert stream.data[0] == 0x36 and stream.data[1] == 0x1B
    store = Store(codec="rmd2inf", stream=stream)
    n = save_container(tmp_path / "t.rmd", store)
    assert n == (tmp_path / "t.rmd").stat().st_size
    back = load_container(tmp_path / "t.rmd")
    blob = (tmp_path / "t.rmd").read_bytes()
    _, off, ln = next(iter_sections(blob))
    assert blob[off : off + ln] == stream.data
    assert back.index is None and back.model is None
    assert spec_for(back).spec_id == "rmd2inf"


def test_streamonly_widest_family(specs, counts_of):
    stream = encode_sequence(specs["rmd245"], counts_of("rmd245"), [9, 8, 7])
    back = unpack_store(pack_store(Store(codec="rmd245", stream=stream)))
    assert back.codec == "rmd245" and back.index is None
    assert back.stream.data == stream.data


def test_elias_container(tmp_path):
    values = np.arange(500, dtype=np.uint64)
    stream = elias_encode(values, sample_interval=32)
    save_container(tmp_path / "e.rmd", Store(codec="elias", stream=stream))
    back = load_container(tmp_path / "e.rmd")
    assert back.codec == "elias"
    assert back.stream.sample_interval == 32
    assert np.array_equal(back.stream.samples, stream.samples)
    acc = EliasAccessor(back.stream)
    assert [acc[t] for t in (0, 31, 32, 499)] == [0, 31, 32, 499]
    with pytest.raises(ConfigurationError):
        spec_for(back)


def test_corruption_detected(indexed_store):
    _, store = indexed_store
    blob = bytearray(pack_store(store))
    blob[len(blob) // 2] ^= 0xFF
    with pytest.raises(CorruptionError, match="checksum"):
        unpack_store(bytes(blob))


def test_bad_magic_version_truncation(indexed_store):
    _, store = indexed_store
    blob = pack_store(store)
    with pytest.raises(CorruptionError, match="magic"):
        unpack_store(b"XXXX" + blob[4:])
    with pytest.raises(CorruptionError, match="version"):
        unpack_store(blob[:4] + struct.pack("<H", 9) + blob[6:])
    with pytest.raises(CorruptionError, match="header"):
        unpack_store(blob[:20])


def test_flag_without_section(indexed_store):
    _, store = indexed_store
    store.model = None
    blob = bytearray(pack_store(store))
    blob[11] |= 2  # claim a dictionary that is not there
    blob[36:40] = b"\x00\x00\x00\x00"
    blob[36:40] = struct.pack("<I", zlib.crc32(bytes(blob)))
    with pytest.raises(CorruptionError, match="DICT"):
        unpack_store(bytes(blob))


def test_unknown_codec_rejected(specs, counts_of):
    stream = encode_sequence(specs["rmd2inf"], counts_of("rmd2inf"), [1])
    with pytest.raises(ConfigurationError):
        pack_store(Store(codec="rmd9", stream=stream))
