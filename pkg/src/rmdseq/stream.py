"""Packing codewords into a byte stream.

Bit convention, used everywhere in this package:

    stream bit position p  <->  bit (p & 7) of byte (p >> 3)

i.e. bit 0 of a byte is the earliest position (LSB-first). An 8-byte
little-endian load therefore presents 64 consecutive stream bits as an
integer whose low bits are the earliest -- shifting right walks forward
through the stream, and a codeword "aligned" in a register sits at the low
end.

Layout of an encoded stream:

    [codeword 0][codeword 1]...[codeword n-1][0110][zero padding]

The 0110 terminator opens a delimiter run in every supported family, so a
scanner walking off the last codeword always meets a start boundary; the
padding (at least 8 spare bytes overall) lets the decoder load full 64-bit
windows near the end without bounds checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import code as _code
from .errors import BoundsError, CapacityError, CorruptionError

MAX_STREAM_BYTES = 1 << 32

_TERMINATOR = (0b0110, 4)  # bit 0 first => pattern 0,1,1,0


@dataclass
class RmdStream:
    """An encoded sequence: raw bytes plus the frame data."""

    data: bytes
    n: int
    payload_bits: int
    spec_id: str
    max_cw_bits: int = 0  # longest codeword; bounds the decode window

    def __len__(self):
        return self.n


@lru_cache(maxsize=None)
def _packed_codeword(spec, counts, value):
    """(lsb-first integer form, bit length) of one codeword."""
    bits = _code.encode_integer(spec, counts, value)
    v = 0
    for i, b in enumerate(bits):
        if b == "1":
            v |= 1 << i
    return v, len(bits)


def encode_sequence(spec, counts, values, value_limit=None):
    """Pack ``values`` into an RmdStream.

    ``value_limit`` (default: the fast-access cap) bounds each value; pass
    None explicitly via encode for plain sequential streams if larger
    values are needed -- they still must fit max_len bits.
    """
    limit = _code.VALUE_LIMIT if value_limit is None else value_limit
    out = bytearray()
    acc = 0  # bits not yet flushed, low bit = earliest
    fill = 0
    pos = 0
    n = 0
    widest = 0
    for value in values:
        v = int(value)
        if v < 0:
            raise ValueError("values are non-negative")
        if v >= limit:
            raise CapacityError(f"value {v} exceeds the stream value limit {limit}")
        cw, ln = _packed_codeword(spec, counts, v)
        acc |= cw << fill
        fill += ln
        pos += ln
        n += 1
        if ln > widest:
            widest = ln
        while fill >= 8:
            out.append(acc & 0xFF)
            acc >>= 8
            fill -= 8
    term, tlen = _TERMINATOR
    acc |= term << fill
    fill += tlen
    while fill > 0:
        out.append(acc & 0xFF)
        acc >>= 8
        fill -= 8
    target = (pos + 7) // 8 + 8
    out.extend(b"\x00" * (target - len(out)))
    if len(out) > MAX_STREAM_BYTES:
        raise CapacityError("stream exceeds the 2^32-byte ceiling")
    return RmdStream(
        data=bytes(out),
        n=n,
        payload_bits=pos,
        spec_id=spec.spec_id,
        max_cw_bits=widest,
    )


def read_window64(data, i):
    """64 stream bits starting at byte i, as a little-endian integer."""
    if i < 0 or i + 8 > len(data):
        raise BoundsError(f"window at byte {i} runs past the stream")
    return int.from_bytes(data[i : i + 8], "little")


def bit_at(data, pos):
    return (data[pos >> 3] >> (pos & 7)) & 1


def _starts_at(spec, data, pos, bit_limit):
    """starts_codeword against packed bytes; padding supplies the context."""
    if bit_at(data, pos):
        return False
    limit = spec.lookahead_bits
    run = 0
    p = pos + 1
    while p < bit_limit:
        if bit_at(data, p):
            run += 1
            if run >= limit:
                return spec.is_delim_run(run)
        else:
            return spec.is_delim_run(run)
        p += 1
    return spec.is_delim_run(run)


def iter_start_positions(spec, stream):
    """Bit positions of every codeword start, terminator included.

    Bit-serial oracle scan -- this is the slow, obviously-correct path the
    table-driven machinery is tested against.
    """
    data = stream.data
    end = stream.payload_bits
    bit_limit = len(data) * 8
    pos = 0
    while pos <= end:
        if _starts_at(spec, data, pos, bit_limit):
            yield pos
            if pos == end:
                return
            pos += spec.min_len  # a codeword is never shorter than this
        else:
            pos += 1
    raise CorruptionError("stream ends without a terminator boundary")


def decode_sequence_reference(spec, counts, stream):
    """Decode every element by scanning boundaries bit-serially."""
    if stream.spec_id != spec.spec_id:
        raise CorruptionError(
            f"stream was encoded with {stream.spec_id}, not {spec.spec_id}"
        )
    data = stream.data
    out = []
    prev = None
    for pos in iter_start_positions(spec, stream):
        if prev is not None:
            word = "".join("01"[bit_at(data, p)] for p in range(prev, pos))
            out.append(_code.decode_codeword_reference(spec, counts, word))
        prev = pos
    if len(out) != stream.n:
        raise CorruptionError(f"stream holds {len(out)} codewords, frame says {stream.n}")
    return out
