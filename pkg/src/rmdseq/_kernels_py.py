"""Pure-Python decode/locate kernels.

Fallback twins of the compiled kernels in ``_kernels_c``.  Handles are
plain tuples of scalars, lists and bytes objects so the hot loops touch no
numpy scalars and no attribute lookups.  Interface contract (shared with
the compiled module):

    prepare_access(data, tables, index)   -> handle
    decode_at(handle, i, s)               -> value
    locate(handle, t)                     -> (byte, skip)
    extract(handle, t)                    -> value
    extract_many(handle, ts, out)         -> fills out
    prepare_elias(data, samples, s)       -> handle
    elias_extract(handle, t)              -> value
"""

from __future__ import annotations

from .errors import CorruptionError, PhaseError

ENGINE = "py"


def prepare_tables(tables):
    counts, offsets, nxt, out, more = tables.py_mirror()
    return (counts, offsets, nxt, out, more, tables.chunk_size, tables.max_chunks)


def prepare_access(data, tables, index):
    if not isinstance(data, bytes):
        data = bytes(data)
    return (
        data,
        prepare_tables(tables),
        index.l1,
        index.l2,
        index.n,
        index.block_byte.tolist(),
        index.sub_avg_fp.tolist(),
        index.corr_width.tolist(),
        index.corr_offset.tolist(),
        bytes(index.corr_bits),
        bytes(index.phase_bits),
        index.phase_stride,
    )


def decode_at(handle, i, s):
    """Value of the (s+1)-th codeword starting inside byte i."""
    data, tab = handle[0], handle[1]
    counts, offsets, nxt, out_tab, more, chunk_size, max_chunks = tab
    idx = data[i] | ((data[i + 1] & 15) << 8)
    if s >= counts[idx]:
        raise PhaseError(f"byte {i} holds {counts[idx]} starts, phase {s} requested")
    w = int.from_bytes(data[i : i + 8], "little") >> offsets[idx * 3 + s]
    mask = (1 << chunk_size) - 1
    ptr = 0
    value = 0
    for _ in range(max_chunks):
        v = (ptr << chunk_size) | (w & mask)
        value += out_tab[v]
        if not more[v]:
            return value
        ptr = nxt[v]
        w >>= chunk_size
    raise CorruptionError(f"no codeword boundary within the window at byte {i}")


def _corr(counts_b, offsets_b, widths, offs, bits, n1, j):
    w = widths[n1]
    if w == 0:
        return 0
    p = offs[n1] + j * w
    raw = (int.from_bytes(bits[p >> 3 : (p >> 3) + 8], "little") >> (p & 7)) & (
        (1 << w) - 1
    )
    return raw - (1 << (w - 1))


def _phase(phase_bits, stride, n1, j):
    p = (n1 * stride + j) * 2
    return (phase_bits[p >> 3] >> (p & 7)) & 3


def locate(handle, t):
    """(byte, skip) of element t: its codeword is the (skip+1)-th start in byte."""
    (
        data,
        tab,
        l1,
        l2,
        n,
        block_byte,
        sub_avg,
        widths,
        offs,
        corr_bits,
        phase_bits,
        stride,
    ) = handle
    counts = tab[0]
    n1 = t >> l1
    e1 = t & ((1 << l1) - 1)
    n2 = e1 >> l2
    dc0 = _phase(phase_bits, stride, n1, n2)
    e2 = (e1 & ((1 << l2) - 1)) + dc0
    base = block_byte[n1]
    avg = sub_avg[n1]
    if e2 < (1 << (l2 - 1)):
        i = base + ((n2 * avg) >> 16) + _corr(None, None, widths, offs, corr_bits, n1, n2)
        e = 0
    else:
        nb = n2 + 1
        i = base + ((nb * avg) >> 16) + _corr(None, None, widths, offs, corr_bits, n1, nb)
        first = (n1 << l1) + (n2 << l2)
        cnt = n - first
        if cnt > 1 << l2:
            cnt = 1 << l2
        e = cnt + dc0 - _phase(phase_bits, stride, n1, nb)
        while e > e2:
            i -= 1
            e -= counts[data[i] | ((data[i + 1] & 15) << 8)]
    w = 0
    while e <= e2:
        w = counts[data[i] | ((data[i + 1] & 15) << 8)]
        e += w
        i += 1
    return i - 1, e2 - (e - w)


def extract(handle, t):
    i, s = locate(handle, t)
    return decode_at(handle, i, s)


def extract_many(handle, ts, out):
    for k, t in enumerate(ts):
        i, s = locate(handle, int(t))
        out[k] = decode_at(handle, i, s)


def prepare_elias(data, samples, interval):
    if not isinstance(data, bytes):
        data = bytes(data)
    return (data, list(samples), interval)


def elias_extract(handle, t):
    data, samples, interval = handle
    pos = samples[t // interval]
    x = 0
    for _ in range(t % interval + 1):
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
    return x - 1
