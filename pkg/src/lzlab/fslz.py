"""Fixed-shift Lempel-Ziv (FSLZ).

The window advances by a constant block length ``l_o``. Each block is sent
either as a pointer to a full copy starting in the previous ``n_w`` symbols
(flag 1 + ``ceil(log2 n_w)``-bit offset) or as ``l_o`` raw symbols (flag 0).
The first ``n_w`` symbols and the final partial block go out raw.

Frame body layout after the 23-byte header::

    raw[n_w * beta] (flag offset | flag literal[l_o * beta])* raw[tail * beta]
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .bitio import (
    HEADER_BITS,
    Bitstream,
    FrameHeader,
    MalformedCodeError,
    OffsetRangeError,
    check_padding,
    read_symbols,
    write_symbols,
)
from .matching import find_block_match, overlap_copy
from .recurrence import ReturnLaw
from .sources import Alphabet, SymbolSequence

MAGIC = b"FSLZ"


@dataclass(frozen=True)
class FslzParams:
    n_w: int
    l_o: int
    alphabet: Alphabet

    def __post_init__(self):
        if self.n_w < 2:
            raise ValueError("window size must be >= 2")
        if not 1 <= self.l_o < self.n_w:
            raise ValueError(f"block length must satisfy 1 <= l_o < n_w, got l_o={self.l_o}")

    @property
    def offset_bits(self) -> int:
        return (self.n_w - 1).bit_length()


@dataclass(frozen=True)
class FslzStats:
    n_total: int
    m: int
    m1: int
    m2: int
    tail: int
    bits_total: int
    beta: int

    @property
    def ratio(self) -> float:
        return self.bits_total / (self.beta * self.n_total)


@dataclass(frozen=True)
class FslzRateReport:
    """Per-symbol rate split into the terms of the FSLZ bit budget."""

    raw_overhead: float
    matched_cost: float
    literal_cost: float
    flags: float
    block_bound_holds: bool

    @property
    def total(self) -> float:
        return self.raw_overhead + self.matched_cost + self.literal_cost + self.flags


def choose_match_length(law: ReturnLaw, n_w: int) -> int:
    """``floor(f^-1(log2(n_w) / (c + epsilon)))`` clamped to ``[1, n_w - 1]``."""
    if n_w < 2:
        raise ValueError("window size must be >= 2")
    value = law.f_inv(math.log2(n_w) / (law.c + law.epsilon))
    # Absorb float error when the exact value is an integer, e.g. 2 ** 8.0.
    l_o = math.floor(value + 1e-9)
    return max(1, min(n_w - 1, l_o))


def fslz_encode(x: SymbolSequence, params: FslzParams) -> tuple[Bitstream, FslzStats]:
    data = x.symbols
    n_total, n_w, l_o = len(data), params.n_w, params.l_o
    if n_total < n_w:
        raise ValueError(f"sequence of {n_total} symbols is shorter than the window {n_w}")
    if x.alphabet != params.alphabet:
        raise ValueError("sequence alphabet differs from codec parameters")
    beta = params.alphabet.beta
    width = params.offset_bits

    out = Bitstream()
    FrameHeader(MAGIC, params.alphabet.size, n_w, l_o, n_total).write(out)
    write_symbols(out, data[:n_w], beta)

    m = (n_total - n_w) // l_o
    m1 = 0
    pos = n_w
    for _ in range(m):
        off = find_block_match(data, pos, n_w, l_o)
        if off >= 0:
            out.write_bits("1" + format(off, f"0{width}b"))
            m1 += 1
        else:
            out.write_bits("0")
            write_symbols(out, data[pos:pos + l_o], beta)
        pos += l_o
    tail = n_total - pos
    write_symbols(out, data[pos:], beta)

    stats = FslzStats(n_total, m, m1, m - m1, tail, out.bit_length, beta)
    return out, stats


def fslz_decode(frame: bytes | Bitstream) -> SymbolSequence:
    stream = Bitstream.from_bytes(frame) if isinstance(frame, (bytes, bytearray)) else frame
    header = FrameHeader.read(stream, MAGIC)
    n_w, l_o, n_total = header.n_w, header.l_o, header.n_total
    if n_w < 2 or not 1 <= l_o < n_w:
        raise MalformedCodeError(f"invalid FSLZ geometry n_w={n_w}, l_o={l_o}")
    alphabet = Alphabet(header.alphabet_size)
    beta = alphabet.beta
    width = (n_w - 1).bit_length()

    buf = bytearray(read_symbols(stream, n_w, beta, alphabet.size))
    m = (n_total - n_w) // l_o
    for _ in range(m):
        if stream.read_bit():
            off = stream.read_fixed(width)
            if off >= n_w:
                raise OffsetRangeError(f"offset {off} outside window of {n_w}")
            overlap_copy(buf, len(buf) - n_w + off, l_o)
        else:
            buf += read_symbols(stream, l_o, beta, alphabet.size)
    buf += read_symbols(stream, n_total - n_w - m * l_o, beta, alphabet.size)
    check_padding(stream)
    return SymbolSequence(alphabet, bytes(buf))


def fslz_rate_report(stats: FslzStats, params: FslzParams) -> FslzRateReport:
    n, beta, l_o = stats.n_total, stats.beta, params.l_o
    return FslzRateReport(
        raw_overhead=(n - stats.m * l_o) * beta / n,
        matched_cost=stats.m1 * params.offset_bits / n,
        literal_cost=stats.m2 * beta * l_o / n,
        flags=stats.m / n,
        block_bound_holds=stats.m1 <= stats.m and stats.m * l_o < n,
    )


def expected_bits(stats: FslzStats, params: FslzParams) -> int:
    """Closed-form frame size: header + raw window + flags + pointers + literals + tail."""
    beta = stats.beta
    return (HEADER_BITS + params.n_w * beta + stats.m + stats.m1 * params.offset_bits
            + stats.m2 * beta * params.l_o + stats.tail * beta)
