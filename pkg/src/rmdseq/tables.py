"""Byte-granular lookup tables.

Two independent structures make random access byte-cheap:

* start tables: for every (byte value, 4 following bits) pair -- a 12-bit
  index -- the number of codeword starts inside that byte and the bit
  offset of each.  With the shortest codeword at 3 bits a byte holds at
  most 3 starts, and 4 lookahead bits settle every boundary decision for
  the families whose lookahead is <= 4.

* chunk tables: a table-driven automaton that decodes one aligned codeword
  from a 64-bit window, ``chunk_size`` bits per step.  The automaton state
  between chunks is (chunk index, scanning state); the scanning state is
  either "inside the leading delimiter run" or "j ones into a possibly
  terminating run", so a family with lookahead B needs B+1 states.  Each
  table entry carries the next state, an additive output contribution and
  a continue flag; summing the contributions along the chunk path yields
  exactly the codeword's value.

The output decomposition: a codeword of length L with leading run d and
interior groups 0 1^(r_1) ... 0 1^(r_g) ending at in-word bit positions
p_1 < ... < p_g has

    value = (W[d+1] - 1) + sum_j sum_{k in K, k < r_j} W[p_j - k - 1] + C[L]

where the first term is booked when the leading run closes, each group
term when its run closes, and C[L] when the following delimiter run
confirms the end of the word.  Every term only needs the bit position and
a bounded run counter, which is what lets the automaton stay this small.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .code import CountTables
from .errors import ConfigurationError

START_TABLE_SIZE = 4096  # byte value | 4 lookahead bits << 8
MAX_STARTS_PER_BYTE = 3
NO_START = 8  # offset sentinel for absent phases

DEFAULT_CHUNK_SIZE = 7


@dataclass
class FastTables:
    """Start tables + chunk tables for one (family, chunk_size) pair.

    Rebuilt deterministically from the family parameters; never
    serialized.
    """

    spec_id: str
    chunk_size: int
    n_states: int
    max_chunks: int
    start_counts: np.ndarray  # uint8[4096]
    start_offsets: np.ndarray  # uint8[4096 * 3]
    next_ptr: np.ndarray  # uint8[entries]
    add_out: np.ndarray  # uint32[entries]
    more: np.ndarray  # uint8[entries], 0 = codeword complete
    _py: tuple = field(default=None, repr=False)

    def chunk_table_bytes(self):
        return self.next_ptr.nbytes + self.add_out.nbytes + self.more.nbytes

    def start_table_bytes(self):
        return self.start_counts.nbytes + self.start_offsets.nbytes

    def py_mirror(self):
        """Plain-Python views used by the fallback kernels."""
        if self._py is None:
            self._py = (
                bytes(self.start_counts),
                bytes(self.start_offsets),
                bytes(self.next_ptr),
                self.add_out.tolist(),
                bytes(self.more),
            )
        return self._py


def _window_start(spec, window, p, nbits):
    """Start decision on bit p of an integer window of nbits stream bits."""
    if (window >> p) & 1:
        return False
    run = 0
    q = p + 1
    while q < nbits and run < spec.lookahead_bits:
        if (window >> q) & 1:
            run += 1
        else:
            return spec.is_delim_run(run)
        q += 1
    return spec.is_delim_run(run)


def build_start_tables(spec):
    """12-bit-indexed start counts and per-phase bit offsets."""
    if spec.lookahead_bits > 4:
        raise ConfigurationError(
            f"{spec.spec_id} needs {spec.lookahead_bits} lookahead bits; "
            "the byte-granular tables support at most 4"
        )
    counts = np.zeros(START_TABLE_SIZE, dtype=np.uint8)
    offsets = np.full(START_TABLE_SIZE * MAX_STARTS_PER_BYTE, NO_START, dtype=np.uint8)
    for idx in range(START_TABLE_SIZE):
        c = 0
        for p in range(8):
            if _window_start(spec, idx, p, 12):
                offsets[idx * MAX_STARTS_PER_BYTE + c] = p
                c += 1
        assert c <= MAX_STARTS_PER_BYTE
        counts[idx] = c
    return counts, offsets


# scanning-automaton states
_PREFIX = 0  # inside the leading delimiter run


def _simulate_bit(spec, counts, state, p, bit):
    """One bit of the aligned-codeword scanner.

    Returns (new_state, contribution, done, dead); ``contribution`` is a
    plain int (possibly huge -- callers mask it).
    """
    w, c = counts.W, counts.C
    if state == _PREFIX:
        if p == 0:
            return (_PREFIX, 0, False, bit == 1)
        if bit:
            return (_PREFIX, 0, False, False)
        if not spec.is_delim_run(p - 1):
            return (0, 0, True, True)
        return (1, w[p] - 1 if p < len(w) else 0, False, False)
    j = state - 1  # ones seen in the pending run
    if bit:
        j += 1
        if j >= spec.lookahead_bits:
            # run can only be a delimiter from here on: word ended at the
            # pending zero
            end = p - j
            if end < spec.min_len:
                return (0, 0, True, True)
            return (0, c[end] if end < len(c) else 0, True, False)
        return (1 + j, 0, False, False)
    if spec.is_delim_run(j):
        end = p - j - 1
        if end < spec.min_len:
            return (0, 0, True, True)
        return (0, c[end] if end < len(c) else 0, True, False)
    # gap run: group closed, book its bucket offsets
    contrib = 0
    for k in spec.gap_runs:
        if k >= j:
            break
        rest = p - k - 1
        contrib += w[rest] if 0 <= rest < len(w) else 0
    return (1, contrib, False, False)


def build_chunk_tables(spec, chunk_size=DEFAULT_CHUNK_SIZE):
    """Tabulate the scanner over (chunk index, state, chunk bits)."""
    if not 4 <= chunk_size <= 8:
        raise ConfigurationError("chunk_size must be in [4, 8]")
    if spec.allow_long_groups or not spec.is_delim_run(spec.lookahead_bits):
        raise ConfigurationError(
            f"{spec.spec_id}: chunk decoding requires a family where every "
            "run of lookahead_bits ones delimits"
        )
    n_states = spec.n_states
    # a codeword of max_len bits is confirmed at most lookahead_bits past
    # its end by the next delimiter run
    max_chunks = (spec.max_len + spec.lookahead_bits) // chunk_size + 1
    counts = CountTables(spec, upto=max_chunks * chunk_size + 1)
    entries = max_chunks * n_states << chunk_size
    next_ptr = np.zeros(entries, dtype=np.uint8)
    add_out = np.zeros(entries, dtype=np.uint32)
    more = np.zeros(entries, dtype=np.uint8)
    if max_chunks * n_states > 256:
        raise ConfigurationError("chunk table pointer would overflow a byte")
    for ci in range(max_chunks):
        for state in range(n_states):
            ptr = ci * n_states + state
            for bits in range(1 << chunk_size):
                v = (ptr << chunk_size) | bits
                st = state
                total = 0
                done = False
                for b in range(chunk_size):
                    st, contrib, done, dead = _simulate_bit(
                        spec, counts, st, ci * chunk_size + b, (bits >> b) & 1
                    )
                    if dead:
                        total = 0
                        done = True
                        break
                    total += contrib
                    if done:
                        break
                add_out[v] = total & 0xFFFFFFFF
                if not done:
                    if ci + 1 >= max_chunks:
                        # falling off the table is reported by the decoder
                        more[v] = 1
                        next_ptr[v] = 0
                    else:
                        more[v] = 1
                        next_ptr[v] = (ci + 1) * n_states + st
    return next_ptr, add_out, more, max_chunks


def build_tables(spec, chunk_size=DEFAULT_CHUNK_SIZE):
    start_counts, start_offsets = build_start_tables(spec)
    next_ptr, add_out, more, max_chunks = build_chunk_tables(spec, chunk_size)
    return FastTables(
        spec_id=spec.spec_id,
        chunk_size=chunk_size,
        n_states=spec.n_states,
        max_chunks=max_chunks,
        start_counts=start_counts,
        start_offsets=start_offsets,
        next_ptr=next_ptr,
        add_out=add_out,
        more=more,
    )


def starts_in_byte(tables, data, i):
    """Number of codeword starts inside byte i (needs one lookahead byte)."""
    return int(tables.start_counts[data[i] | ((data[i + 1] & 15) << 8)])
