"""Elias delta baseline with positional sampling.

The comparison point for the byte-granular machinery: plain delta codes
plus a table of 64-bit bit offsets of every ``interval``-th codeword.
Extraction jumps to the nearest sample and decodes forward bit by bit, so
its cost grows with the interval while its space shrinks -- the classic
trade-off the main codec is built to avoid.

Values are shifted by +1 (delta is defined on positive integers): 0 maps
to "1", 1 to "0100".  Bits go into bytes with the package-wide LSB-first
convention; within one delta codeword the length prefix and value bits are
laid out most-significant-first, which is what the decoder unwinds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import get_engine
from .errors import BoundsError, ConfigurationError

SAMPLE_INTERVALS = (4, 512)  # the two standard benchmark settings


@dataclass
class EliasStream:
    data: bytes
    n: int
    payload_bits: int
    sample_interval: int
    samples: np.ndarray  # uint64 bit offsets, samples[k] = offset of codeword k*s

    def __len__(self):
        return self.n


def _delta_bits(v):
    """(msb-first bit string value, bit count) of delta(v+1)."""
    x = v + 1
    m = x.bit_length()
    z = m.bit_length() - 1
    # z zeros, m in z+1 bits, then x without its leading 1
    word = (m << (m - 1)) | (x & ((1 << (m - 1)) - 1))
    return word, z + z + 1 + m - 1


def elias_encode(values, sample_interval=512):
    if sample_interval < 1:
        raise ConfigurationError("sample interval must be positive")
    out = bytearray()
    acc = 0
    fill = 0
    pos = 0
    n = 0
    samples = []
    for value in values:
        v = int(value)
        if v < 0:
            raise ValueError("values are non-negative")
        if n % sample_interval == 0:
            samples.append(pos)
        word, ln = _delta_bits(v)
        # append msb-first: stream bit order = word's bits from the top
        for k in range(ln - 1, -1, -1):
            acc |= ((word >> k) & 1) << fill
            fill += 1
        pos += ln
        n += 1
        while fill >= 8:
            out.append(acc & 0xFF)
            acc >>= 8
            fill -= 8
    if fill:
        out.append(acc & 0xFF)
    out.extend(b"\x00" * 8)
    return EliasStream(
        data=bytes(out),
        n=n,
        payload_bits=pos,
        sample_interval=sample_interval,
        samples=np.asarray(samples, dtype=np.uint64),
    )


def elias_decode(stream):
    data = stream.data
    pos = 0
    out = []
    for _ in range(stream.n):
        z = 0
        while not (data[pos >> 3] >> (pos & 7)) & 1:
            z += 1
            pos += 1
        pos += 1
        m = 1
        for _ in range(z):
            m = (m << 1) | (data[pos >> 3] >> (pos & 7)) & 1
            pos += 1
        x = 1
        for _ in range(m - 1):
            x = (x << 1) | (data[pos >> 3] >> (pos & 7)) & 1
            pos += 1
        out.append(x - 1)
    if pos != stream.payload_bits:  # decoding must land exactly on the end
        raise ConfigurationError("stream length disagrees with its frame")
    return out


class EliasAccessor:
    """Sample-and-scan extraction, engine-selectable like the main codec."""

    def __init__(self, stream, engine="auto"):
        self.stream = stream
        self._engine = get_engine(engine)
        self._h = self._engine.prepare_elias(
            stream.data, stream.samples, stream.sample_interval
        )

    @property
    def engine_name(self):
        return self._engine.ENGINE

    def __len__(self):
        return self.stream.n

    def extract(self, t):
        if not 0 <= t < self.stream.n:
            raise BoundsError(f"element {t} outside [0, {self.stream.n})")
        return self._engine.elias_extract(self._h, t)

    __getitem__ = extract
