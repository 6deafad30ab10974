"""On-disk container: header + tagged, 8-byte-aligned sections.

Layout (all integers little-endian):

    offset  size  field
    0       4     magic "RMDA"
    4       2     format version (1)
    6       2     codec id (1 rmd2inf, 2 rmd24inf, 3 rmd245, 4 elias)
    8       1     l1          (0 when no index)
    9       1     l2
    10      1     chunk_size
    11      1     flags       (1 has index, 2 has dictionary)
    12      8     n
    20      8     payload_bits
    28      4     sample_interval (elias only, else 0)
    32      2     max codeword bits
    34      2     section count
    36      4     crc32 of the whole file with this field zeroed
    40      ...   section table: (tag 4s, offset u64, length u64) each
    ...           sections, each starting on an 8-byte boundary

Sections: STRM always; BLKB/SUBL/CWID/COFF/CBIT/PHAS for an index;
SMPL for positional samples; DICT for a token dictionary.  Derived lookup
tables (start counts, chunk automaton) are never stored -- they rebuild
deterministically from (codec, chunk_size) on load.

Writing is deterministic, so write -> read -> write is byte-identical.
"""

from __future__ import annotations

import struct
import zlib
from dataclasses import dataclass

import numpy as np

from .code import get_code
from .corpus import CorpusModel
from .elias import EliasStream
from .errors import ConfigurationError, CorruptionError
from .index import DirectAccessIndex
from .stream import RmdStream
from .tables import DEFAULT_CHUNK_SIZE

MAGIC = b"RMDA"
VERSION = 1
_HEADER = struct.Struct("<4sHHBBBBQQIHHI")
_SECTION = struct.Struct("<4sQQ")

CODEC_IDS = {"rmd2inf": 1, "rmd24inf": 2, "rmd245": 3, "elias": 4}
CODEC_NAMES = {v: k for k, v in CODEC_IDS.items()}

FLAG_INDEX = 1
FLAG_DICT = 2

_INDEX_TAGS = (b"BLKB", b"SUBL", b"CWID", b"COFF", b"CBIT", b"PHAS")


@dataclass
class Store:
    """Everything one container holds, in memory."""

    codec: str
    stream: object  # RmdStream | EliasStream
    index: DirectAccessIndex = None
    model: CorpusModel = None
    chunk_size: int = DEFAULT_CHUNK_SIZE


def _pack_dict(model):
    parts = [
        struct.pack(
            "<BxxxxxxxQI",
            0 if model.scheme == "word" else 1,
            model.text_length,
            len(model.dictionary),
        )
    ]
    for tok in model.dictionary:
        parts.append(struct.pack("<I", len(tok)))
        parts.append(tok)
    return b"".join(parts)


def _unpack_dict(blob, sequence):
    scheme_id, text_length, count = struct.unpack_from("<BxxxxxxxQI", blob, 0)
    off = struct.calcsize("<BxxxxxxxQI")
    toks = []
    for _ in range(count):
        (ln,) = struct.unpack_from("<I", blob, off)
        off += 4
        toks.append(bytes(blob[off : off + ln]))
        off += ln
    return CorpusModel(
        scheme="word" if scheme_id == 0 else "block2",
        dictionary=toks,
        sequence=sequence,
        text_length=text_length,
        h0_bits=0.0,
    )


def pack_store(store):
    codec_id = CODEC_IDS.get(store.codec)
    if codec_id is None:
        raise ConfigurationError(f"unknown codec {store.codec!r}")
    st = store.stream
    sections = [(b"STRM", st.data)]
    flags = 0
    l1 = l2 = 0
    interval = 0
    max_cw = getattr(st, "max_cw_bits", 0)
    if store.codec == "elias":
        if not isinstance(st, EliasStream):
            raise ConfigurationError("elias codec needs an EliasStream")
        interval = st.sample_interval
        sections.append((b"SMPL", st.samples.astype("<u8").tobytes()))
    elif store.index is not None:
        idx = store.index
        flags |= FLAG_INDEX
        l1, l2 = idx.l1, idx.l2
        sections += [
            (b"BLKB", idx.block_byte.astype("<u4").tobytes()),
            (b"SUBL", idx.sub_avg_fp.astype("<u4").tobytes()),
            (b"CWID", idx.corr_width.astype("<u2").tobytes()),
            (b"COFF", idx.corr_offset.astype("<u4").tobytes()),
            (b"CBIT", idx.corr_bits),
            (b"PHAS", idx.phase_bits),
        ]
    if store.model is not None:
        flags |= FLAG_DICT
        sections.append((b"DICT", _pack_dict(store.model)))

    table_at = _HEADER.size
    data_at = table_at + len(sections) * _SECTION.size
    data_at += -data_at % 8
    table = []
    body = bytearray()
    for tag, payload in sections:
        off = data_at + len(body)
        table.append(_SECTION.pack(tag, off, len(payload)))
        body += payload
        body += b"\x00" * (-len(body) % 8)
    header = _HEADER.pack(
        MAGIC,
        VERSION,
        codec_id,
        l1,
        l2,
        store.chunk_size,
        flags,
        st.n,
        st.payload_bits,
        interval,
        max_cw,
        len(sections),
        0,
    )
    blob = bytearray(header)
    blob += b"".join(table)
    blob += b"\x00" * (data_at - len(blob))
    blob += body
    crc = zlib.crc32(blob)
    blob[36:40] = struct.pack("<I", crc)
    return bytes(blob)


def unpack_store(blob):
    if len(blob) < _HEADER.size:
        raise CorruptionError("container shorter than its header")
    (
        magic,
        version,
        codec_id,
        l1,
        l2,
        chunk_size,
        flags,
        n,
        payload_bits,
        interval,
        max_cw,
        nsections,
        crc,
    ) = _HEADER.unpack_from(blob, 0)
    if magic != MAGIC:
        raise CorruptionError("not a container (bad magic)")
    if version != VERSION:
        raise CorruptionError(f"unsupported container version {version}")
    codec = CODEC_NAMES.get(codec_id)
    if codec is None:
        raise CorruptionError(f"unknown codec id {codec_id}")
    checked = bytearray(blob)
    checked[36:40] = b"\x00\x00\x00\x00"
    if zlib.crc32(checked) != crc:
        raise CorruptionError("checksum mismatch")
    secs = {}
    for k in range(nsections):
        tag, off, ln = _SECTION.unpack_from(blob, _HEADER.size + k * _SECTION.size)
        if off % 8 or off + ln > len(blob):
            raise CorruptionError(f"section {tag!r} is misplaced")
        secs[tag] = blob[off : off + ln]
    if b"STRM" not in secs:
        raise CorruptionError("container lacks a stream section")
    raw = bytes(secs[b"STRM"])

    model = None
    index = None
    if codec == "elias":
        samples = np.frombuffer(secs.get(b"SMPL", b""), dtype="<u8").astype(np.uint64)
        stream = EliasStream(
            data=raw,
            n=n,
            payload_bits=payload_bits,
            sample_interval=interval,
            samples=samples,
        )
    else:
        stream = RmdStream(
            data=raw,
            n=n,
            payload_bits=payload_bits,
            spec_id=codec,
            max_cw_bits=max_cw,
        )
        if flags & FLAG_INDEX:
            missing = [t for t in _INDEX_TAGS if t not in secs]
            if missing:
                raise CorruptionError(f"index sections missing: {missing}")
            index = DirectAccessIndex(
                spec_id=codec,
                l1=l1,
                l2=l2,
                n=n,
                block_byte=np.frombuffer(secs[b"BLKB"], dtype="<u4").astype(np.uint32),
                sub_avg_fp=np.frombuffer(secs[b"SUBL"], dtype="<u4").astype(np.uint32),
                corr_width=np.frombuffer(secs[b"CWID"], dtype="<u2").astype(np.uint16),
                corr_offset=np.frombuffer(secs[b"COFF"], dtype="<u4").astype(np.uint32),
                corr_bits=bytes(secs[b"CBIT"]),
                phase_bits=bytes(secs[b"PHAS"]),
            )
    if flags & FLAG_DICT:
        if b"DICT" not in secs:
            raise CorruptionError("dictionary flag set but no DICT section")
        model = _unpack_dict(secs[b"DICT"], None)
    return Store(
        codec=codec, stream=stream, index=index, model=model, chunk_size=chunk_size
    )


def iter_sections(blob):
    """(tag, offset, length) triples from a raw container, header-checked."""
    if len(blob) < _HEADER.size or blob[:4] != MAGIC:
        raise CorruptionError("not a container")
    nsections = struct.unpack_from("<H", blob, 34)[0]
    for k in range(nsections):
        yield _SECTION.unpack_from(blob, _HEADER.size + k * _SECTION.size)


def save_container(path, store):
    blob = pack_store(store)
    with open(path, "wb") as fh:
        fh.write(blob)
    return len(blob)


def load_container(path):
    with open(path, "rb") as fh:
        return unpack_store(fh.read())


def spec_for(store):
    if store.codec == "elias":
        raise ConfigurationError("elias containers have no code family")
    return get_code(store.codec)
