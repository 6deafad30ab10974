"""rmdseq: compressed integer sequences with byte-granular random access.

Unordered sequences of non-negative integers are stored as self-delimiting
variable-length codewords packed LSB-first into bytes.  A small two-level
sampled index plus per-byte lookup tables then answer "give me element t"
by touching a handful of bytes, without decoding the stream up to t.
"""

from .code import (
    CodeSpec,
    CountTables,
    codeword_length,
    decode_codeword_reference,
    derive_gap_runs,
    encode_integer,
    enumerate_codewords,
    get_code,
    is_codeword,
    make_code,
    rmd_2inf,
    rmd_24inf,
    rmd_245,
    starts_codeword,
    VALUE_LIMIT,
)
from .errors import (
    BoundsError,
    CapacityError,
    ConfigurationError,
    CorruptionError,
    InsufficientContextError,
    InvalidCodewordError,
    PhaseError,
    RmdError,
)
from .stream import RmdStream, decode_sequence_reference, encode_sequence
from .tables import FastTables, build_tables
from .index import Accessor, DirectAccessIndex, build_index, index_overhead, locate_trace
from .elias import EliasAccessor, EliasStream, elias_decode, elias_encode
from .corpus import CorpusModel, build_model, first_order_entropy, zero_order_entropy
from .container import Store, load_container, save_container
from .engine import active_engine_name, available_engines, get_engine

__version__ = "0.1.0"
