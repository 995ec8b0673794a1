"""Sliding-window Lempel-Ziv (SWLZ) with greedy longest-match parsing.

Every phrase is ``flag + gamma(length) + payload``. Flag 1 means a window
copy and the payload is the ``ceil(log2 n_w)``-bit start offset; flag 0
means the payload is ``length`` raw symbols. The length code is carried in
both branches so a literal run stays decodable; the encoder picks whichever
branch is cheaper, preferring the copy on a tie.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bitio import (
    HEADER_BITS,
    Bitstream,
    FrameHeader,
    MalformedCodeError,
    OffsetRangeError,
    check_padding,
    gamma_length,
    read_symbols,
    symbols_to_bits,
)
from .matching import MatchFinder, longest_match, longest_match_naive, overlap_copy, return_times
from .sources import Alphabet, SymbolSequence

MAGIC = b"SWLZ"

__all__ = [
    "SwlzParams",
    "Phrase",
    "SwlzStats",
    "longest_match",
    "longest_match_naive",
    "MatchFinder",
    "phrase_cost",
    "swlz_encode",
    "swlz_decode",
    "bad_interval_fraction",
]


@dataclass(frozen=True)
class SwlzParams:
    n_w: int
    alphabet: Alphabet

    def __post_init__(self):
        if self.n_w < 2:
            raise ValueError("window size must be >= 2")

    @property
    def offset_bits(self) -> int:
        return (self.n_w - 1).bit_length()


@dataclass(frozen=True)
class Phrase:
    """One parsed phrase; ``s_j`` is the window offset, None for literals."""

    s_j: int | None
    l_j: int
    mode: str
    cost: int

    @property
    def is_match(self) -> bool:
        return self.mode == "match"


@dataclass
class SwlzStats:
    n_total: int
    n_w: int
    beta: int
    phrase_costs: list[int] = field(repr=False, default_factory=list)
    bits_total: int = 0

    @property
    def c_n(self) -> int:
        return len(self.phrase_costs)

    @property
    def ratio(self) -> float:
        return self.bits_total / (self.beta * self.n_total)

    def expected_bits(self) -> int:
        """Header + raw window + sum over phrases of (cost + flag)."""
        return HEADER_BITS + self.n_w * self.beta + sum(self.phrase_costs) + self.c_n


def phrase_cost(l_j: int, n_w: int, beta: int, can_match: bool = True) -> tuple[int, str]:
    """Cheaper of the copy branch and the literal branch, flag excluded.

    Copy: ``gamma(l_j) + ceil(log2 n_w)``. Literal: ``gamma(l_j) + beta * l_j``.
    """
    g = gamma_length(l_j)
    literal = g + beta * l_j
    if not can_match:
        return literal, "literal"
    match = g + (n_w - 1).bit_length()
    return (match, "match") if match <= literal else (literal, "literal")


def swlz_encode(x: SymbolSequence, params: SwlzParams) -> tuple[Bitstream, SwlzStats, list[Phrase]]:
    data = x.symbols
    n_total, n_w = len(data), params.n_w
    if n_total < n_w:
        raise ValueError(f"sequence of {n_total} symbols is shorter than the window {n_w}")
    if x.alphabet != params.alphabet:
        raise ValueError("sequence alphabet differs from codec parameters")
    beta = params.alphabet.beta
    width = params.offset_bits

    out = Bitstream()
    FrameHeader(MAGIC, params.alphabet.size, n_w, 0, n_total).write(out)
    out.write_bits(symbols_to_bits(data[:n_w], beta))

    stats = SwlzStats(n_total, n_w, beta)
    finder = MatchFinder(data, beta)
    phrases: list[Phrase] = []
    pos = n_w
    while pos < n_total:
        off, length = finder.longest(pos, n_w, n_total - pos)
        if length == 0:
            length = 1
        cost, mode = phrase_cost(length, n_w, beta, can_match=off is not None)
        gamma = "0" * (length.bit_length() - 1) + bin(length)[2:]
        if mode == "match":
            out.write_bits("1" + gamma + format(off, f"0{width}b"))
        else:
            out.write_bits("0" + gamma + symbols_to_bits(data[pos:pos + length], beta))
            off = None
        stats.phrase_costs.append(cost)
        phrases.append(Phrase(off, length, mode, cost))
        pos += length
    stats.bits_total = out.bit_length
    return out, stats, phrases


def swlz_decode(frame: bytes | Bitstream) -> SymbolSequence:
    stream = Bitstream.from_bytes(frame) if isinstance(frame, (bytes, bytearray)) else frame
    header = FrameHeader.read(stream, MAGIC)
    n_w, n_total = header.n_w, header.n_total
    if n_w < 2:
        raise MalformedCodeError("SWLZ window must be >= 2")
    if header.l_o != 0:
        raise MalformedCodeError("SWLZ frames carry l_o = 0")
    alphabet = Alphabet(header.alphabet_size)
    beta = alphabet.beta
    width = (n_w - 1).bit_length()

    buf = bytearray(read_symbols(stream, n_w, beta, alphabet.size))
    while len(buf) < n_total:
        is_match = stream.read_bit()
        length = stream.read_gamma()
        if len(buf) + length > n_total:
            raise MalformedCodeError("phrase runs past the declared sequence length")
        if is_match:
            off = stream.read_fixed(width)
            if off >= n_w:
                raise OffsetRangeError(f"offset {off} outside window of {n_w}")
            overlap_copy(buf, len(buf) - n_w + off, length)
        else:
            buf += read_symbols(stream, length, beta, alphabet.size)
    check_padding(stream)
    return SymbolSequence(alphabet, bytes(buf))


def bad_interval_fraction(x, l_o: int, n_w: int) -> float:
    """Fraction of length-``l_o`` intervals after the first window that have
    no copy beginning in the ``n_w - l_o`` symbols before them.

    Intervals start at ``n_w, n_w + 1, ..., N - l_o``.
    """
    data = x.symbols if isinstance(x, SymbolSequence) else bytes(x)
    if l_o < 1 or n_w < 1:
        raise ValueError("l_o and n_w must be >= 1")
    if len(data) < n_w + l_o:
        raise ValueError(f"need at least {n_w + l_o} symbols, got {len(data)}")
    reach = n_w - l_o
    count = len(data) - l_o - n_w + 1
    if reach <= 0:
        return 1.0
    r = return_times(data, l_o)[n_w:n_w + count]
    bad = (r == 0) | (r > reach)
    return float(np.count_nonzero(bad)) / count
