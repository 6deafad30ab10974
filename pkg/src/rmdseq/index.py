"""Two-level sampled index for element-rank -> byte lookup.

The stream is cut into blocks of 2^l1 elements and sub-blocks of 2^l2
elements.  Per block the index keeps the absolute byte of its first
codeword, a 16.16 fixed-point average sub-block span, and per sub-block
boundary a narrow signed correction against the interpolated byte plus a
2-bit phase (codeword starts in the boundary byte that precede the
boundary codeword).  Each block also carries a sentinel boundary -- the
next block's first byte, or the terminator byte for the last block -- so a
lookup can approach its target from the right.

A lookup lands on the nearer sub-block boundary, then walks whole bytes
using the per-byte start-count table until the running element count
passes the target.  The walk covers at most half a sub-block of elements
and never inspects bits, which is what keeps access latency flat in the
stream length.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BoundsError, CapacityError, ConfigurationError, CorruptionError
from . import code as _code
from .tables import FastTables, build_tables
from .engine import get_engine

MIN_L2 = 4
MAX_L1 = 24
WINDOW_BITS = 64


@dataclass
class DirectAccessIndex:
    spec_id: str
    l1: int
    l2: int
    n: int
    block_byte: np.ndarray  # uint32 per block
    sub_avg_fp: np.ndarray  # uint32, 16.16 average sub-block bytes
    corr_width: np.ndarray  # uint16 bits per correction entry
    corr_offset: np.ndarray  # uint32 bit offset of each block's corrections
    corr_bits: bytes  # packed corrections, offset-binary
    phase_bits: bytes  # packed 2-bit phases, phase_stride per block

    @property
    def phase_stride(self):
        return ((1 << self.l1) >> self.l2) + 1

    def nbytes(self):
        return (
            self.block_byte.nbytes
            + self.sub_avg_fp.nbytes
            + self.corr_width.nbytes
            + self.corr_offset.nbytes
            + len(self.corr_bits)
            + len(self.phase_bits)
        )


def _put_bits(buf, pos, value, width):
    end = (pos + width + 7) >> 3
    if end > len(buf):
        buf.extend(b"\x00" * (end - len(buf)))
    value <<= pos & 7
    bi = pos >> 3
    while value:
        buf[bi] |= value & 0xFF
        value >>= 8
        bi += 1
    return pos + width


def _corr_width_for(lo, hi):
    if lo == 0 and hi == 0:
        return 0
    w = 1
    while lo < -(1 << (w - 1)) or hi > (1 << (w - 1)) - 1:
        w += 1
    return w


def check_window_fit(spec, max_cw_bits):
    need = 7 + max_cw_bits + spec.lookahead_bits
    if need > WINDOW_BITS:
        raise CapacityError(
            f"codewords up to {max_cw_bits} bits need {need}-bit windows; "
            f"byte-granular decoding reads {WINDOW_BITS}"
        )


def build_index(spec, stream, tables, l1=16, l2=8):
    """Index ``stream`` for random access.  O(stream bytes) build."""
    if not (MIN_L2 <= l2 < l1 <= MAX_L1):
        raise ConfigurationError(
            f"need {MIN_L2} <= l2 < l1 <= {MAX_L1}, got l1={l1} l2={l2}"
        )
    if stream.spec_id != spec.spec_id:
        raise ConfigurationError(
            f"stream carries {stream.spec_id}, index build got {spec.spec_id}"
        )
    if stream.max_cw_bits:
        check_window_fit(spec, stream.max_cw_bits)

    data = stream.data
    n = stream.n
    arr = np.frombuffer(data, dtype=np.uint8)
    idx12 = arr[:-1].astype(np.int32) | ((arr[1:].astype(np.int32) & 15) << 8)
    per_byte = tables.start_counts[idx12]
    cum = np.zeros(len(per_byte) + 1, dtype=np.int64)
    np.cumsum(per_byte, out=cum[1:])
    if cum[-1] != n + 1:  # every codeword plus the terminator
        raise CorruptionError(
            f"stream shows {int(cum[-1])} codeword starts, frame implies {n + 1}"
        )

    L1, L2 = 1 << l1, 1 << l2
    nblocks = (n + L1 - 1) >> l1
    block_byte = np.zeros(nblocks, dtype=np.uint32)
    sub_avg = np.zeros(nblocks, dtype=np.uint32)
    widths = np.zeros(nblocks, dtype=np.uint16)
    offsets = np.zeros(nblocks, dtype=np.uint32)
    stride = (L1 >> l2) + 1
    phase_buf = bytearray((nblocks * stride * 2 + 7) // 8 + 8)
    corr_buf = bytearray()
    bitpos = 0

    for i in range(nblocks):
        first = i << l1
        sb = (min(L1, n - first) + L2 - 1) >> l2
        gs = np.minimum(first + (np.arange(sb + 1, dtype=np.int64) << l2), n)
        bs = np.searchsorted(cum, gs, side="right") - 1
        phases = gs - cum[bs]
        base = int(bs[0])
        span = int(bs[-1]) - base
        avg = round(span * 65536 / sb)
        if avg >= 1 << 32:
            raise CapacityError(
                "sub-block spans overflow the 16.16 average; lower l2"
            )
        pred = base + ((np.arange(sb + 1, dtype=np.int64) * avg) >> 16)
        deltas = bs - pred
        w = _corr_width_for(int(deltas.min()), int(deltas.max()))
        block_byte[i] = base
        sub_avg[i] = avg
        widths[i] = w
        offsets[i] = bitpos
        if w:
            bias = 1 << (w - 1)
            for d in deltas.tolist():
                bitpos = _put_bits(corr_buf, bitpos, d + bias, w)
        pbase = i * stride * 2
        for j, dc in enumerate(phases.tolist()):
            if not 0 <= dc <= 2:
                raise CorruptionError(f"boundary phase {dc} out of range")
            p = pbase + 2 * j
            phase_buf[p >> 3] |= dc << (p & 7)

    corr_buf.extend(b"\x00" * 8)  # slack for 8-byte window reads
    return DirectAccessIndex(
        spec_id=spec.spec_id,
        l1=l1,
        l2=l2,
        n=n,
        block_byte=block_byte,
        sub_avg_fp=sub_avg,
        corr_width=widths,
        corr_offset=offsets,
        corr_bits=bytes(corr_buf),
        phase_bits=bytes(phase_buf),
    )


@dataclass
class LocateTrace:
    """Step-by-step record of one lookup, for tests and debugging."""

    t: int
    n1: int
    e1: int
    n2: int
    e2: int
    from_right: bool
    entry_byte: int
    entry_count: int
    steps: list  # (byte, starts in byte) visited by the byte walk
    byte: int
    skip: int


def _read_corr(index, n1, j):
    w = int(index.corr_width[n1])
    if w == 0:
        return 0
    p = int(index.corr_offset[n1]) + j * w
    raw = (
        int.from_bytes(index.corr_bits[p >> 3 : (p >> 3) + 8], "little") >> (p & 7)
    ) & ((1 << w) - 1)
    return raw - (1 << (w - 1))


def _read_phase(index, n1, j):
    p = (n1 * index.phase_stride + j) * 2
    return (index.phase_bits[p >> 3] >> (p & 7)) & 3


def locate_trace(index, tables, data, t):
    """Pure-Python lookup that records its path.  Mirrors the kernels."""
    l1, l2, n = index.l1, index.l2, index.n
    counts = tables.start_counts

    def cnt(i):
        return int(counts[data[i] | ((data[i + 1] & 15) << 8)])

    n1 = t >> l1
    e1 = t & ((1 << l1) - 1)
    n2 = e1 >> l2
    dc0 = _read_phase(index, n1, n2)
    e2 = (e1 & ((1 << l2) - 1)) + dc0
    base = int(index.block_byte[n1])
    avg = int(index.sub_avg_fp[n1])
    steps = []
    from_right = e2 >= (1 << (l2 - 1))
    if not from_right:
        i = base + ((n2 * avg) >> 16) + _read_corr(index, n1, n2)
        e = 0
    else:
        nb = n2 + 1
        i = base + ((nb * avg) >> 16) + _read_corr(index, n1, nb)
        first = (n1 << l1) + (n2 << l2)
        e = min(1 << l2, n - first) + dc0 - _read_phase(index, n1, nb)
        while e > e2:
            i -= 1
            e -= cnt(i)
            steps.append((i, cnt(i)))
    entry_byte, entry_count = i, e
    w = 0
    while e <= e2:
        w = cnt(i)
        steps.append((i, w))
        e += w
        i += 1
    return LocateTrace(
        t=t,
        n1=n1,
        e1=e1,
        n2=n2,
        e2=e2,
        from_right=from_right,
        entry_byte=entry_byte,
        entry_count=entry_count,
        steps=steps,
        byte=i - 1,
        skip=e2 - (e - w),
    )


class Accessor:
    """Bundles stream + tables + index behind one random-access handle."""

    def __init__(self, spec, stream, tables=None, index=None, engine="auto", l1=16, l2=8):
        if spec.spec_id != stream.spec_id:
            raise ConfigurationError(
                f"stream carries {stream.spec_id}, accessor got {spec.spec_id}"
            )
        self.spec = spec
        self.stream = stream
        self.tables = tables if tables is not None else build_tables(spec)
        self.index = (
            index
            if index is not None
            else build_index(spec, stream, self.tables, l1=l1, l2=l2)
        )
        self._engine = get_engine(engine)
        self._h = self._engine.prepare_access(stream.data, self.tables, self.index)

    @property
    def engine_name(self):
        return self._engine.ENGINE

    def __len__(self):
        return self.stream.n

    def _check(self, t):
        if not 0 <= t < self.stream.n:
            raise BoundsError(f"element {t} outside [0, {self.stream.n})")

    def locate(self, t):
        self._check(t)
        return self._engine.locate(self._h, t)

    def decode_at(self, i, s):
        return self._engine.decode_at(self._h, i, s)

    def extract(self, t):
        self._check(t)
        return self._engine.extract(self._h, t)

    __getitem__ = extract

    def extract_many(self, ts):
        ts = np.asarray(ts, dtype=np.int64)
        if len(ts) and (ts.min() < 0 or ts.max() >= self.stream.n):
            raise BoundsError("element rank outside the sequence")
        out = np.zeros(len(ts), dtype=np.uint64)
        self._engine.extract_many(self._h, ts, out)
        return out


def index_overhead(index, tables, payload_bits):
    """Byte budget of everything random access adds on top of the payload."""
    payload = (payload_bits + 7) // 8
    sampled = index.nbytes()
    lut = tables.start_table_bytes() + tables.chunk_table_bytes()
    return {
        "payload_bytes": payload,
        "index_bytes": sampled,
        "table_bytes": lut,
        "total_overhead_bytes": sampled + lut,
        "overhead_pct": 100.0 * (sampled + lut) / payload if payload else float("inf"),
        "index_pct": 100.0 * sampled / payload if payload else float("inf"),
    }
