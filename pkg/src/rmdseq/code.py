"""Reverse multi-delimiter code families and the integer <-> codeword bijection.

A family is described by the set of "delimiter" run lengths D.  A word is a
codeword iff it is

  * a bare delimiter ``0 1^d`` with d in D, or
  * starts with ``0 1^d 0`` for some d in D, never ends with ``0 1^d``, and
    contains ``0 1^d 0`` only as its prefix.

Equivalently: every codeword is a delimiter prefix ``0 1^d`` followed by
groups ``0 1^s`` whose run s is *not* a delimiter length.  The runs legal
inside a codeword come from the complement of D -- the finite "gap" runs K
below the largest delimiter plus, for families whose delimiter set is
finite, arbitrarily long runs above it.

Codewords are ordered by length and, within one length L, by the recursive
construction below; the integer encoded by a codeword is its position in
that order (0-based):

  1. for each gap run k in K ascending: every codeword of length L-k-1, in
     order, extended by the group ``0 1^k``;
  2. (finite families only) every length-(L-1) codeword whose trailing run
     is at least max(K), in order, extended by a single 1 bit -- this is
     what builds the long trailing groups;
  3. the bare delimiter ``0 1^(L-1)``, if L-1 is a delimiter length.

The counting tables W (codewords of exactly L bits) and C (codewords
shorter than L bits) follow the same recursion and drive both directions of
the bijection.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, replace

from .errors import (
    CapacityError,
    ConfigurationError,
    InsufficientContextError,
    InvalidCodewordError,
)

VALUE_LIMIT = 1 << 32  # fast-access streams keep every value below this


def derive_gap_runs(delim_runs, infinite_from):
    """Ascending run lengths that may appear inside a codeword.

    For a finite delimiter set the complement is taken over [0, max(D)+1];
    when every run >= ``infinite_from`` delimits, the complement is finite
    on its own.
    """
    if infinite_from is not None:
        top = infinite_from - 1
    else:
        top = max(delim_runs) + 1
    return tuple(r for r in range(top + 1) if r not in delim_runs)


@dataclass(frozen=True)
class CodeSpec:
    """One concrete code family plus the limits the fast path relies on."""

    spec_id: str
    delim_runs: frozenset  # finite delimiter run lengths
    infinite_from: int | None  # every run >= this also delimits (or None)
    gap_runs: tuple  # K, ascending
    allow_long_groups: bool  # groups longer than max(K) legal inside words
    lookahead_bits: int  # bits after a 0 that settle "delimiter or not"
    n_states: int  # scanning automaton states (lookahead_bits + 1)
    max_len: int  # longest codeword; sized to cover VALUE_LIMIT by default

    def is_delim_run(self, r):
        if r in self.delim_runs:
            return True
        return self.infinite_from is not None and r >= self.infinite_from

    @property
    def min_len(self):
        d = set(self.delim_runs)
        if self.infinite_from is not None:
            d.add(self.infinite_from)
        return min(d) + 1


def make_code(spec_id, delim_runs=(), infinite_from=None, max_len=None):
    delims = frozenset(delim_runs)
    if infinite_from is not None:
        delims = frozenset(d for d in delims if d < infinite_from)
    elif not delims:
        raise ConfigurationError("a family needs at least one delimiter run")
    shortest = min(set(delims) | ({infinite_from} if infinite_from is not None else set()))
    if shortest < 2:
        raise ConfigurationError("delimiter runs must be >= 2 (a 1-run cannot delimit)")
    if max_len is not None and not shortest + 1 <= max_len <= 64:
        raise ConfigurationError("max_len out of range")
    if infinite_from is not None:
        lookahead = infinite_from  # seeing that many 1s settles "delimiter"
        allow_long = False
    else:
        lookahead = max(delims) + 1  # that many 1s settles "not a delimiter"
        allow_long = True
    spec = CodeSpec(
        spec_id=spec_id,
        delim_runs=delims,
        infinite_from=infinite_from,
        gap_runs=derive_gap_runs(delims, infinite_from),
        allow_long_groups=allow_long,
        lookahead_bits=lookahead,
        n_states=lookahead + 1,
        max_len=64 if max_len is None else max_len,
    )
    if max_len is None:
        # shortest horizon that still reaches the fast-access value cap
        c = CountTables(spec, upto=64).C
        fit = next(L for L in range(spec.min_len, 65) if c[L + 1] >= VALUE_LIMIT)
        spec = replace(spec, max_len=fit)
    return spec


def rmd_2inf(max_len=None):
    """Every run of two or more 1s delimits."""
    return make_code("rmd2inf", infinite_from=2, max_len=max_len)


def rmd_24inf(max_len=None):
    """Runs of exactly 2, or of 4 and more, delimit (3 stays available)."""
    return make_code("rmd24inf", delim_runs=(2,), infinite_from=4, max_len=max_len)


def rmd_245(max_len=None):
    """The finite family with delimiter runs {2, 4, 5}."""
    return make_code("rmd245", delim_runs=(2, 4, 5), max_len=max_len)


_FAMILIES = {"rmd2inf": rmd_2inf, "rmd24inf": rmd_24inf, "rmd245": rmd_245}


def get_code(spec_id, max_len=None):
    try:
        return _FAMILIES[spec_id](max_len=max_len)
    except KeyError:
        raise ConfigurationError(f"unknown code family {spec_id!r}") from None


class CountTables:
    """Codeword counts per length.

    W[L]: codewords of exactly L bits.  C[L]: codewords shorter than L bits,
    so C[L] is also the value encoded by the first length-L codeword.
    E[L] counts length-L codewords whose trailing run is >= max(K) -- the
    ones rule 2 may extend; identically zero for the infinite families,
    where any such run would already delimit.

    Entries are plain Python ints, so lengths beyond 64 bits cannot
    overflow anything.
    """

    def __init__(self, spec, upto=None):
        self.spec = spec
        upto = spec.max_len if upto is None else upto
        w = [0] * (upto + 2)
        e = [0] * (upto + 2)
        kq = spec.gap_runs[-1]
        for length in range(spec.min_len, upto + 1):
            total = 0
            for k in spec.gap_runs:
                rest = length - k - 1
                if rest >= 0:
                    total += w[rest]
            if spec.allow_long_groups:
                total += e[length - 1]
                rest = length - kq - 1
                e[length] = (w[rest] if rest >= 0 else 0) + e[length - 1]
            if spec.is_delim_run(length - 1):
                total += 1
            w[length] = total
        c = [0] * (upto + 2)
        for length in range(upto + 1):
            c[length + 1] = c[length] + w[length]
        self.W = w
        self.C = c
        self._E = e
        self.upto = upto

    def value_range(self):
        """Number of distinct values encodable within max_len bits."""
        return self.C[self.spec.max_len + 1]


def is_codeword(spec, bits):
    """Literal membership test; ``bits`` is a '0'/'1' string.

    Reference predicate -- clarity over speed.
    """
    n = len(bits)
    if n < 2 or bits[0] != "0":
        return False
    i = 1
    while i < n and bits[i] == "1":
        i += 1
    lead = i - 1
    if not spec.is_delim_run(lead):
        return False
    if i == n:
        return True  # bare delimiter word
    # prefix 0 1^d 0 established; no later run may delimit (an inner one
    # would repeat the 0 1^d 0 pattern, a trailing one would end the word
    # with 0 1^d)
    while i < n:
        j = i + 1
        while j < n and bits[j] == "1":
            j += 1
        if spec.is_delim_run(j - i - 1):
            return False
        i = j
    return True


def starts_codeword(spec, window):
    """Does a codeword start at window[0]?

    Needs at most 1 + lookahead_bits of ``window``; raises
    InsufficientContextError when the given bits do not settle the answer.
    """
    if len(window) == 0:
        raise InsufficientContextError("empty window")
    if window[0] != "0":
        return False
    limit = spec.lookahead_bits
    run = 0
    for i in range(1, len(window)):
        if window[i] == "1":
            run += 1
            if run >= limit:
                return spec.is_delim_run(run)
        else:
            return spec.is_delim_run(run)
    raise InsufficientContextError(
        f"need up to {limit + 1} bits to decide a start, got {len(window)}"
    )


def enumerate_codewords(spec, max_length):
    """All codewords of at most ``max_length`` bits, in value order."""
    memo = {}
    out = []
    for length in range(max_length + 1):
        out.extend(_ordered_words(spec, length, memo))
    return out


def _ordered_words(spec, length, memo):
    """Construction-ordered codewords of exactly ``length`` bits."""
    if length in memo:
        return memo[length]
    words = []
    if length >= spec.min_len:
        for k in spec.gap_runs:
            rest = length - k - 1
            if rest >= 0:
                words.extend(w + "0" + "1" * k for w in _ordered_words(spec, rest, memo))
        if spec.allow_long_groups:
            kq = spec.gap_runs[-1]
            words.extend(
                w + "1"
                for w in _ordered_words(spec, length - 1, memo)
                if _trailing_ones(w) >= kq
            )
        if spec.is_delim_run(length - 1):
            words.append("0" + "1" * (length - 1))
    memo[length] = words
    return words


def _trailing_ones(bits):
    n = len(bits)
    i = n
    while i > 0 and bits[i - 1] == "1":
        i -= 1
    return n - i


def codeword_length(counts, value):
    """Bits the codeword for ``value`` takes, without building it."""
    if value < 0:
        raise ValueError("values are non-negative")
    if value >= counts.value_range():
        raise CapacityError(
            f"value {value} needs more than max_len={counts.spec.max_len} bits"
        )
    return bisect_right(counts.C, value) - 1  # C[length] <= value < C[length+1]


def encode_integer(spec, counts, value):
    """Codeword (as a bit string) for a non-negative integer."""
    length = codeword_length(counts, value)
    return _unrank(spec, counts, length, value - counts.C[length])


def _unrank(spec, counts, length, r):
    """r-th codeword (construction order) of exactly ``length`` bits."""
    w = counts.W
    suffix = []
    while True:
        peeled = False
        for k in spec.gap_runs:
            rest = length - k - 1
            cnt = w[rest] if rest >= 0 else 0
            if r < cnt:
                suffix.append("0" + "1" * k)
                length = rest
                peeled = True
                break
            r -= cnt
        if peeled:
            continue
        tail = "".join(reversed(suffix))
        if spec.allow_long_groups:
            e = counts._E[length - 1]
            if r < e:
                return _unrank2(spec, counts, length - 1, r) + "1" + tail
            r -= e
        assert spec.is_delim_run(length - 1) and r == 0
        return "0" + "1" * (length - 1) + tail


def _unrank2(spec, counts, length, r):
    """r-th length-``length`` codeword with trailing run >= max(K)."""
    kq = spec.gap_runs[-1]
    ones = 0
    while True:
        rest = length - kq - 1
        cnt = counts.W[rest] if rest >= 0 else 0
        if r < cnt:
            return _unrank(spec, counts, rest, r) + "0" + "1" * kq + "1" * ones
        r -= cnt
        length -= 1
        ones += 1


def decode_codeword_reference(spec, counts, bits):
    """Inverse of encode_integer; validates membership on the way."""
    if not is_codeword(spec, bits):
        raise InvalidCodewordError(f"{bits!r} is not a codeword of {spec.spec_id}")
    if len(bits) > counts.upto:
        raise CapacityError("codeword longer than the counting tables")
    return counts.C[len(bits)] + _rank(spec, counts, bits)


def _rank(spec, counts, bits):
    """Position of ``bits`` within the ordered set of its own length."""
    w = counts.W
    gaps = set(spec.gap_runs)
    rank = 0
    while True:
        length = len(bits)
        t = _trailing_ones(bits)
        if t == length - 1:  # bare delimiter word: last of its length
            return rank + w[length] - 1
        if t in gaps:
            for k in spec.gap_runs:
                if k == t:
                    break
                rest = length - k - 1
                rank += w[rest] if rest >= 0 else 0
            bits = bits[: length - t - 1]
            continue
        # long trailing group: every gap-run bucket precedes the rule-2 block
        for k in spec.gap_runs:
            rest = length - k - 1
            rank += w[rest] if rest >= 0 else 0
        return rank + _rank2(spec, counts, bits[:-1])


def _rank2(spec, counts, bits):
    """Rank within the rule-2 eligible words of one length."""
    kq = spec.gap_runs[-1]
    rank = 0
    while True:
        length = len(bits)
        if _trailing_ones(bits) == kq:
            return rank + _rank(spec, counts, bits[: length - kq - 1])
        rest = length - kq - 1
        rank += counts.W[rest] if rest >= 0 else 0
        bits = bits[:-1]
