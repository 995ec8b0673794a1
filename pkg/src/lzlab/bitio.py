"""Bit-exact stream I/O, frame headers and the Elias-gamma integer code.

Bits are held as a string of ``'0'``/``'1'`` characters. Conversions to and
from bytes go through Python's base-2 integer parsing, which is linear time,
so multi-megabit frames stay cheap without a per-bit loop.

Packing is MSB-first within each byte; the final byte is zero padded.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

__all__ = [
    "CodecError",
    "TruncatedStreamError",
    "BadMagicError",
    "OffsetRangeError",
    "MalformedCodeError",
    "Bitstream",
    "FrameHeader",
    "HEADER_BITS",
    "gamma_length",
    "elias_gamma_encode",
    "elias_gamma_decode",
    "symbols_to_bits",
    "bits_to_symbols",
    "write_symbols",
    "read_symbols",
    "check_padding",
]


class CodecError(ValueError):
    """Base class for malformed or inconsistent encoded data."""


class TruncatedStreamError(CodecError):
    """A read ran past the end of the stream."""


class BadMagicError(CodecError):
    """Frame magic or version does not identify the expected codec."""


class OffsetRangeError(CodecError):
    """A decoded match offset points outside the current window."""


class MalformedCodeError(CodecError):
    """An integer codeword or header field cannot be valid."""


# Codewords encode lengths below 2**64 (the width of ``n_total``).
_MAX_GAMMA_ZEROS = 63


class Bitstream:
    """Append-only bit buffer with an independent read cursor."""

    def __init__(self, bits: str = ""):
        self._chunks = [bits] if bits else []
        self._joined: str | None = bits
        self._length = len(bits)
        self.pos = 0

    # -- writing ---------------------------------------------------------

    def write_bits(self, bits: str) -> None:
        """Append a raw ``'0'``/``'1'`` string."""
        if bits:
            self._chunks.append(bits)
            self._length += len(bits)
            self._joined = None

    def write_fixed(self, value: int, width: int) -> None:
        """Append ``value`` as a big-endian field of ``width`` bits."""
        if width < 1:
            raise ValueError(f"width must be >= 1, got {width}")
        if not 0 <= value < (1 << width):
            raise ValueError(f"value {value} does not fit in {width} bits")
        self.write_bits(format(value, f"0{width}b"))

    def write_bytes(self, data: bytes) -> None:
        if data:
            self.write_bits(_bytes_to_bits(data))

    def write_gamma(self, value: int) -> None:
        self.write_bits(elias_gamma_encode(value))

    # -- reading ---------------------------------------------------------

    @property
    def bits(self) -> str:
        if self._joined is None:
            self._joined = "".join(self._chunks)
            self._chunks = [self._joined]
        return self._joined

    @property
    def bit_length(self) -> int:
        return self._length

    @property
    def remaining(self) -> int:
        return self._length - self.pos

    def read_bits(self, count: int) -> str:
        if count < 0:
            raise ValueError("count must be non-negative")
        end = self.pos + count
        if end > self._length:
            raise TruncatedStreamError(
                f"read of {count} bits at {self.pos} exceeds stream length {self._length}"
            )
        out = self.bits[self.pos:end]
        self.pos = end
        return out

    def read_bit(self) -> int:
        return 1 if self.read_bits(1) == "1" else 0

    def read_fixed(self, width: int) -> int:
        if width < 1:
            raise ValueError(f"width must be >= 1, got {width}")
        return int(self.read_bits(width), 2)

    def read_bytes(self, count: int) -> bytes:
        if count == 0:
            return b""
        return int(self.read_bits(8 * count), 2).to_bytes(count, "big")

    def read_gamma(self) -> int:
        value, self.pos = elias_gamma_decode(self.bits, self.pos, self._length)
        return value

    # -- serialization ---------------------------------------------------

    def to_bytes(self) -> bytes:
        n = self._length
        if n == 0:
            return b""
        nbytes = (n + 7) // 8
        return (int(self.bits, 2) << (8 * nbytes - n)).to_bytes(nbytes, "big")

    @classmethod
    def from_bytes(cls, data: bytes) -> "Bitstream":
        return cls(_bytes_to_bits(data))

    def __len__(self) -> int:
        return self._length

    def __repr__(self) -> str:
        return f"Bitstream(bit_length={self._length}, pos={self.pos})"


def _bytes_to_bits(data: bytes) -> str:
    if not data:
        return ""
    return format(int.from_bytes(data, "big"), f"0{8 * len(data)}b")


def gamma_length(value: int) -> int:
    """Length in bits of the Elias-gamma codeword for ``value`` (>= 1)."""
    if value < 1:
        raise ValueError(f"Elias-gamma codes positive integers, got {value}")
    return 2 * value.bit_length() - 1


def elias_gamma_encode(value: int) -> str:
    """Return the Elias-gamma codeword of ``value`` as a bit string.

    ``floor(log2 value)`` zeros followed by the binary form of ``value``:
    1 -> ``1``, 2 -> ``010``, 5 -> ``00101``.
    """
    if value < 1:
        raise ValueError(f"Elias-gamma codes positive integers, got {value}")
    b = bin(value)[2:]
    return "0" * (len(b) - 1) + b


def elias_gamma_decode(bits: str, pos: int = 0, end: int | None = None) -> tuple[int, int]:
    """Decode one codeword from ``bits`` starting at ``pos``.

    Returns ``(value, new_pos)``.
    """
    if end is None:
        end = len(bits)
    one = bits.find("1", pos, end)
    if one < 0:
        if end - pos > _MAX_GAMMA_ZEROS:
            raise MalformedCodeError("Elias-gamma prefix longer than 63 zeros")
        raise TruncatedStreamError("stream ended inside an Elias-gamma prefix")
    zeros = one - pos
    if zeros > _MAX_GAMMA_ZEROS:
        raise MalformedCodeError(f"Elias-gamma prefix of {zeros} zeros")
    stop = one + zeros + 1
    if stop > end:
        raise TruncatedStreamError("stream ended inside an Elias-gamma codeword")
    return int(bits[one:stop], 2), stop


_HEADER = struct.Struct(">4sBHIIQ")
HEADER_BITS = 8 * _HEADER.size
FORMAT_VERSION = 1


@dataclass(frozen=True)
class FrameHeader:
    """Fixed 23-byte big-endian frame prefix shared by both codecs."""

    magic: bytes
    alphabet_size: int
    n_w: int
    l_o: int
    n_total: int
    version: int = FORMAT_VERSION

    def pack(self) -> bytes:
        try:
            return _HEADER.pack(
                self.magic, self.version, self.alphabet_size, self.n_w, self.l_o, self.n_total
            )
        except struct.error as exc:
            raise ValueError(f"header field out of range: {exc}") from None

    @classmethod
    def unpack(cls, data: bytes) -> "FrameHeader":
        if len(data) < _HEADER.size:
            raise TruncatedStreamError("frame shorter than its header")
        magic, version, alphabet_size, n_w, l_o, n_total = _HEADER.unpack_from(data)
        return cls(magic, alphabet_size, n_w, l_o, n_total, version)

    def write(self, stream: Bitstream) -> None:
        stream.write_bytes(self.pack())

    @classmethod
    def read(cls, stream: Bitstream, magic: bytes) -> "FrameHeader":
        """Read and validate a header expecting ``magic``."""
        if stream.remaining < HEADER_BITS:
            raise TruncatedStreamError("frame shorter than its header")
        header = cls.unpack(stream.read_bytes(_HEADER.size))
        if header.magic != magic:
            raise BadMagicError(f"expected magic {magic!r}, found {header.magic!r}")
        if header.version != FORMAT_VERSION:
            raise BadMagicError(f"unsupported frame version {header.version}")
        if not 2 <= header.alphabet_size <= 256:
            raise MalformedCodeError(f"alphabet size {header.alphabet_size} not in [2, 256]")
        if header.n_w < 1:
            raise MalformedCodeError("window size must be >= 1")
        if header.n_total < header.n_w:
            raise MalformedCodeError("n_total smaller than the window")
        return header


_BIT_CHARS = bytes.maketrans(b"\x00\x01", b"01")
_BIT_VALUES = bytes.maketrans(b"01", b"\x00\x01")


def symbols_to_bits(symbols: bytes, beta: int) -> str:
    """Raw fixed-width coding, ``beta`` bits per symbol, MSB first."""
    if not symbols:
        return ""
    if beta == 1:
        return symbols.translate(_BIT_CHARS).decode("ascii")
    if beta == 8:
        return format(int.from_bytes(symbols, "big"), f"0{8 * len(symbols)}b")
    table = [format(v, f"0{beta}b") for v in range(1 << beta)]
    return "".join([table[v] for v in symbols])


def bits_to_symbols(bits: str, beta: int) -> bytes:
    """Inverse of :func:`symbols_to_bits`."""
    if not bits:
        return b""
    if beta == 1:
        return bits.encode("ascii").translate(_BIT_VALUES)
    if beta == 8:
        return int(bits, 2).to_bytes(len(bits) // 8, "big")
    return bytes(int(bits[i:i + beta], 2) for i in range(0, len(bits), beta))


def write_symbols(stream: Bitstream, symbols: bytes, beta: int) -> None:
    stream.write_bits(symbols_to_bits(symbols, beta))


def read_symbols(stream: Bitstream, count: int, beta: int, alphabet_size: int) -> bytes:
    out = bits_to_symbols(stream.read_bits(count * beta), beta)
    if out and max(out) >= alphabet_size:
        raise MalformedCodeError("raw symbol outside the alphabet")
    return out


def check_padding(stream: Bitstream) -> None:
    """A complete frame leaves only the zero padding of its final byte."""
    rest = stream.remaining
    if rest >= 8 or stream.bits.find("1", stream.pos) >= 0:
        raise CodecError(f"{rest} unexpected trailing bits after the frame body")
