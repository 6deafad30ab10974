"""Text -> frequency-ranked integer sequences, plus entropy baselines.

Two tokenization schemes:

* ``word``: alternating maximal alphanumeric and non-alphanumeric runs.
  Every run (separators included) enters one dictionary, so concatenating
  the tokens back reproduces the text byte-exactly.
* ``block2``: consecutive 2-byte blocks; an odd tail is zero-padded and
  the true length kept, so reconstruction truncates.

Tokens are ranked by descending frequency (ties: first occurrence), the
most frequent mapping to 0 -- smaller rank, shorter codeword.  H0 is the
zero-order entropy of the rank sequence in bits; H1 conditions each byte
on its predecessor and is the usual tighter target for the block scheme.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from math import log2

import numpy as np

from .errors import ConfigurationError

_TOKEN_RE = re.compile(rb"[A-Za-z0-9]+|[^A-Za-z0-9]+")

SCHEMES = ("word", "block2")


def tokenize_words(text):
    return _TOKEN_RE.findall(text)


def tokenize_blocks(text, block_bytes=2):
    if len(text) % block_bytes:
        text = text + b"\x00" * (block_bytes - len(text) % block_bytes)
    return [text[i : i + block_bytes] for i in range(0, len(text), block_bytes)]


@dataclass
class CorpusModel:
    scheme: str
    dictionary: list  # tokens, descending frequency
    sequence: np.ndarray  # int64 ranks
    text_length: int
    h0_bits: float
    h1_bits: float = None
    counts: np.ndarray = field(default=None, repr=False)  # per-rank frequencies

    @property
    def n_tokens(self):
        return len(self.sequence)

    @property
    def n_distinct(self):
        return len(self.dictionary)

    def reconstruct(self):
        joined = b"".join(self.dictionary[r] for r in self.sequence)
        return joined[: self.text_length]


def rank_by_frequency(tokens):
    """Dictionary in descending-frequency order and the token ranks."""
    first = {}
    counts = {}
    for i, tok in enumerate(tokens):
        if tok in counts:
            counts[tok] += 1
        else:
            counts[tok] = 1
            first[tok] = i
    order = sorted(counts, key=lambda tok: (-counts[tok], first[tok]))
    rank = {tok: r for r, tok in enumerate(order)}
    seq = np.fromiter((rank[tok] for tok in tokens), dtype=np.int64, count=len(tokens))
    freqs = np.asarray([counts[tok] for tok in order], dtype=np.int64)
    return order, seq, freqs


def zero_order_entropy(freqs):
    """H0 in bits of a sequence with the given symbol frequencies."""
    f = np.asarray(freqs, dtype=np.float64)
    f = f[f > 0]
    if f.size == 0:
        raise ConfigurationError("entropy of an empty sequence is undefined")
    n = f.sum()
    return float(np.sum(f * (np.log2(n) - np.log2(f))))


def first_order_entropy(text):
    """H1 in bits: each byte conditioned on its predecessor."""
    if len(text) < 2:
        raise ConfigurationError("first-order entropy needs at least two bytes")
    arr = np.frombuffer(text, dtype=np.uint8)
    pairs = arr[:-1].astype(np.int32) * 256 + arr[1:]
    table = np.bincount(pairs, minlength=65536).reshape(256, 256).astype(np.float64)
    row_n = table.sum(axis=1)
    total = 0.0
    for c in np.nonzero(row_n)[0]:
        row = table[c]
        row = row[row > 0]
        total += float(np.sum(row * (log2(row_n[c]) - np.log2(row))))
    return total


def build_model(text, scheme="word"):
    if scheme not in SCHEMES:
        raise ConfigurationError(f"unknown scheme {scheme!r}; pick one of {SCHEMES}")
    if not text:
        raise ConfigurationError("cannot model empty text")
    tokens = tokenize_words(text) if scheme == "word" else tokenize_blocks(text)
    dictionary, seq, freqs = rank_by_frequency(tokens)
    return CorpusModel(
        scheme=scheme,
        dictionary=dictionary,
        sequence=seq,
        text_length=len(text),
        h0_bits=zero_order_entropy(freqs),
        h1_bits=first_order_entropy(text) if len(text) >= 2 else None,
        counts=freqs,
    )
