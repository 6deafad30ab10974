# cython: language_level=3, boundscheck=False, wraparound=False
# cython: cdivision=True, initializedcheck=False
"""Compiled decode/locate kernels; interface twin of ``_kernels_py``."""

from libc.stdint cimport int64_t, uint8_t, uint16_t, uint32_t, uint64_t

import numpy as np

from .errors import BoundsError, CorruptionError, PhaseError

ENGINE = "c"

cdef enum:
    ERR_PHASE = -1
    ERR_RUNAWAY = -2
    ERR_BOUNDS = -3


cdef class AccessHandle:
    cdef const uint8_t[::1] data
    cdef const uint8_t[::1] counts
    cdef const uint8_t[::1] offsets
    cdef const uint8_t[::1] nxt
    cdef const uint32_t[::1] out_tab
    cdef const uint8_t[::1] more
    cdef int chunk_size
    cdef int max_chunks
    cdef int l1
    cdef int l2
    cdef int64_t n
    cdef const uint32_t[::1] block_byte
    cdef const uint32_t[::1] sub_avg
    cdef const uint16_t[::1] widths
    cdef const uint32_t[::1] offs
    cdef const uint8_t[::1] corr_bits
    cdef const uint8_t[::1] phase_bits
    cdef int64_t stride
    cdef int64_t dlen


def prepare_access(data, tables, index):
    cdef AccessHandle h = AccessHandle()
    if not isinstance(data, (bytes, bytearray)):
        data = bytes(data)
    h.data = data
    h.dlen = len(data)
    h.counts = np.ascontiguousarray(tables.start_counts, dtype=np.uint8)
    h.offsets = np.ascontiguousarray(tables.start_offsets, dtype=np.uint8)
    h.nxt = np.ascontiguousarray(tables.next_ptr, dtype=np.uint8)
    h.out_tab = np.ascontiguousarray(tables.add_out, dtype=np.uint32)
    h.more = np.ascontiguousarray(tables.more, dtype=np.uint8)
    h.chunk_size = tables.chunk_size
    h.max_chunks = tables.max_chunks
    h.l1 = index.l1
    h.l2 = index.l2
    h.n = index.n
    h.block_byte = np.ascontiguousarray(index.block_byte, dtype=np.uint32)
    h.sub_avg = np.ascontiguousarray(index.sub_avg_fp, dtype=np.uint32)
    h.widths = np.ascontiguousarray(index.corr_width, dtype=np.uint16)
    h.offs = np.ascontiguousarray(index.corr_offset, dtype=np.uint32)
    h.corr_bits = index.corr_bits
    h.phase_bits = index.phase_bits
    h.stride = index.phase_stride
    return h


cdef inline uint64_t _load64(const uint8_t* p) nogil:
    cdef uint64_t w = 0
    cdef int b
    for b in range(8):
        w |= (<uint64_t> p[b]) << (8 * b)
    return w


cdef int64_t _decode(AccessHandle h, int64_t i, int s) nogil:
    cdef int idx, c
    cdef uint64_t w, value
    cdef int64_t v
    cdef int ptr, it
    if i < 0 or i + 8 > h.dlen:
        return ERR_BOUNDS
    idx = h.data[i] | ((h.data[i + 1] & 15) << 8)
    c = h.counts[idx]
    if s >= c or s < 0:
        return ERR_PHASE
    w = _load64(&h.data[i]) >> h.offsets[idx * 3 + s]
    cdef uint64_t mask = (<uint64_t> 1 << h.chunk_size) - 1
    ptr = 0
    value = 0
    for it in range(h.max_chunks):
        v = (<int64_t> ptr << h.chunk_size) | <int64_t> (w & mask)
        value += h.out_tab[v]
        if not h.more[v]:
            return <int64_t> value
        ptr = h.nxt[v]
        w >>= h.chunk_size
    return ERR_RUNAWAY


cdef inline int _corr(AccessHandle h, int64_t n1, int64_t j) nogil:
    cdef int w = h.widths[n1]
    if w == 0:
        return 0
    cdef int64_t p = <int64_t> h.offs[n1] + j * w
    cdef uint64_t raw = (_load64(&h.corr_bits[p >> 3]) >> (p & 7)) & (
        (<uint64_t> 1 << w) - 1
    )
    return <int> raw - (1 << (w - 1))


cdef inline int _phase(AccessHandle h, int64_t n1, int64_t j) nogil:
    cdef int64_t p = (n1 * h.stride + j) * 2
    return (h.phase_bits[p >> 3] >> (p & 7)) & 3


cdef int64_t _locate(AccessHandle h, int64_t t) nogil:
    cdef int64_t n1 = t >> h.l1
    cdef int64_t e1 = t & ((<int64_t> 1 << h.l1) - 1)
    cdef int64_t n2 = e1 >> h.l2
    cdef int dc0 = _phase(h, n1, n2)
    cdef int64_t e2 = (e1 & ((<int64_t> 1 << h.l2) - 1)) + dc0
    cdef int64_t base = h.block_byte[n1]
    cdef uint64_t avg = h.sub_avg[n1]
    cdef int64_t i, e, first, cnt, nb
    cdef int64_t guard = (8 << h.l2) + 128
    cdef int w = 0
    if e2 < (<int64_t> 1 << (h.l2 - 1)):
        i = base + <int64_t> ((<uint64_t> n2 * avg) >> 16) + _corr(h, n1, n2)
        e = 0
    else:
        nb = n2 + 1
        i = base + <int64_t> ((<uint64_t> nb * avg) >> 16) + _corr(h, n1, nb)
        first = (n1 << h.l1) + (n2 << h.l2)
        cnt = h.n - first
        if cnt > (<int64_t> 1 << h.l2):
            cnt = <int64_t> 1 << h.l2
        e = cnt + dc0 - _phase(h, n1, nb)
        while e > e2:
            i -= 1
            if i < 0 or guard == 0:
                return ERR_BOUNDS
            guard -= 1
            e -= h.counts[h.data[i] | ((h.data[i + 1] & 15) << 8)]
    while e <= e2:
        if i + 1 >= h.dlen or guard == 0:
            return ERR_BOUNDS
        guard -= 1
        w = h.counts[h.data[i] | ((h.data[i + 1] & 15) << 8)]
        e += w
        i += 1
    return ((i - 1) << 2) | (e2 - (e - w))


cdef inline object _raise(int64_t code, int64_t where):
    if code == ERR_PHASE:
        raise PhaseError(f"no codeword with that phase at byte {where}")
    if code == ERR_RUNAWAY:
        raise CorruptionError(f"no codeword boundary within the window at byte {where}")
    raise CorruptionError(f"byte walk left the stream near {where}")


def decode_at(AccessHandle h, i, s):
    cdef int64_t r = _decode(h, i, s)
    if r < 0:
        _raise(r, i)
    return r


def locate(AccessHandle h, t):
    cdef int64_t r = _locate(h, t)
    if r < 0:
        _raise(r, t)
    return (r >> 2, r & 3)


def extract(AccessHandle h, t):
    cdef int64_t r = _locate(h, t)
    if r < 0:
        _raise(r, t)
    cdef int64_t v = _decode(h, r >> 2, r & 3)
    if v < 0:
        _raise(v, r >> 2)
    return v


def extract_many(AccessHandle h, ts, out):
    cdef const int64_t[::1] tv = np.ascontiguousarray(ts, dtype=np.int64)
    cdef uint64_t[::1] ov = out
    cdef int64_t k, r, v
    cdef int64_t bad = -1
    cdef int64_t code = 0
    with nogil:
        for k in range(tv.shape[0]):
            r = _locate(h, tv[k])
            if r < 0:
                bad = tv[k]
                code = r
                break
            v = _decode(h, r >> 2, r & 3)
            if v < 0:
                bad = r >> 2
                code = v
                break
            ov[k] = <uint64_t> v
    if bad >= 0:
        _raise(code, bad)


cdef class EliasHandle:
    cdef const uint8_t[::1] data
    cdef const uint64_t[::1] samples
    cdef int64_t interval


def prepare_elias(data, samples, interval):
    cdef EliasHandle h = EliasHandle()
    if not isinstance(data, (bytes, bytearray)):
        data = bytes(data)
    h.data = data
    h.samples = np.ascontiguousarray(samples, dtype=np.uint64)
    h.interval = interval
    return h


cdef uint64_t _elias_at(EliasHandle h, int64_t t) nogil:
    cdef int64_t pos = <int64_t> h.samples[t // h.interval]
    cdef int64_t k
    cdef int z, b
    cdef uint64_t m, x = 0
    for k in range(t % h.interval + 1):
        z = 0
        while not (h.data[pos >> 3] >> (pos & 7)) & 1:
            z += 1
            pos += 1
        pos += 1
        m = 1
        for b in range(z):
            m = (m << 1) | ((h.data[pos >> 3] >> (pos & 7)) & 1)
            pos += 1
        x = 1
        for b in range(<int> m - 1):
            x = (x << 1) | ((h.data[pos >> 3] >> (pos & 7)) & 1)
            pos += 1
    return x - 1


def elias_extract(EliasHandle h, t):
    return _elias_at(h, t)
