"""Symbol sources: irrational rotations in exact fixed point, periodic
patterns and i.i.d. baselines, plus continued-fraction diagnostics for the
rotation angle.

A rotation angle is stored as a 128-bit fraction ``theta_fp / 2**128``. The
orbit ``x0 + i*theta (mod 1)`` is then exact modular integer arithmetic, so
any prefix regenerates bit for bit. After ``n`` steps the quantized orbit
differs from the true irrational one by at most ``n * 2**-128``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import isqrt
from typing import BinaryIO, Sequence

import numpy as np

FRAC_BITS = 128
ONE = 1 << FRAC_BITS
MASK = ONE - 1
_M64 = (1 << 64) - 1

# floor(frac * 2**128) via 256-bit integer square roots.
GOLDEN_FP = (isqrt(5 << (2 * FRAC_BITS)) - ONE) >> 1
SQRT2_FP = isqrt(2 << (2 * FRAC_BITS)) - ONE
HALF_FP = ONE >> 1

PRESETS = {"golden": GOLDEN_FP, "sqrt2": SQRT2_FP}


@dataclass(frozen=True)
class Alphabet:
    size: int

    def __post_init__(self):
        if self.size < 2:
            raise ValueError(f"alphabet size must be >= 2, got {self.size}")

    @property
    def beta(self) -> int:
        """Bits per raw symbol, ceil(log2 size)."""
        return (self.size - 1).bit_length()


BINARY = Alphabet(2)


@dataclass(frozen=True)
class SymbolSequence:
    """Symbols over ``alphabet`` held as one byte per symbol."""

    alphabet: Alphabet
    symbols: bytes = field(repr=False)

    def __post_init__(self):
        if self.alphabet.size > 256:
            raise ValueError("byte-backed sequences support alphabets up to 256 symbols")
        if not isinstance(self.symbols, bytes):
            object.__setattr__(self, "symbols", bytes(self.symbols))
        if self.symbols and max(self.symbols) >= self.alphabet.size:
            raise ValueError("symbol outside the alphabet")

    def __len__(self) -> int:
        return len(self.symbols)

    def __getitem__(self, i):
        return self.symbols[i]

    @classmethod
    def from_string(cls, text: str, alphabet_size: int | None = None) -> "SymbolSequence":
        """Build from a digit string such as ``"0101"``."""
        syms = bytes(int(ch, 36) for ch in text)
        size = alphabet_size or max(2, max(syms, default=0) + 1)
        return cls(Alphabet(size), syms)

    def to_string(self) -> str:
        return "".join(np.base_repr(s, 36).lower() for s in self.symbols)


@dataclass(frozen=True)
class RotationConfig:
    """Rotation by ``theta_fp / 2**128`` started at ``x0_fp``.

    Symbol ``i`` is 0 when the orbit point lies in ``E = [0, threshold)``.
    """

    theta_fp: int
    x0_fp: int = 0
    threshold_fp: int = HALF_FP

    def __post_init__(self):
        if not 0 < self.theta_fp < ONE:
            raise ValueError("theta_fp must lie in (0, 2**128)")
        if not 0 <= self.x0_fp < ONE:
            raise ValueError("x0_fp must lie in [0, 2**128)")
        if not 0 < self.threshold_fp < ONE:
            raise ValueError("threshold_fp must lie strictly inside (0, 2**128)")

    @classmethod
    def preset(cls, name: str, x0_fp: int = 0, threshold_fp: int = HALF_FP) -> "RotationConfig":
        try:
            theta = PRESETS[name]
        except KeyError:
            raise ValueError(f"unknown rotation preset {name!r}; choose from {sorted(PRESETS)}") from None
        return cls(theta, x0_fp, threshold_fp)

    @classmethod
    def from_float(cls, theta: float, x0: float = 0.0, threshold: float = 0.5) -> "RotationConfig":
        def fp(v):
            return int(round(v * ONE)) & MASK
        return cls(fp(theta), fp(x0), fp(threshold))


def rotation_symbol(cfg: RotationConfig, i: int) -> int:
    if i < 0:
        raise ValueError("index must be non-negative")
    point = (cfg.x0_fp + i * cfg.theta_fp) & MASK
    return 0 if point < cfg.threshold_fp else 1


def generate_rotation(cfg: RotationConfig, n: int) -> SymbolSequence:
    """First ``n`` symbols of the rotation coding.

    The 128-bit orbit is carried as two uint64 limbs; wraps of the low limb
    are counted with a cumulative sum so the whole orbit is vectorized and
    still exact.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return SymbolSequence(BINARY, b"")
    th_hi, th_lo = np.uint64(cfg.theta_fp >> 64), np.uint64(cfg.theta_fp & _M64)
    x_hi, x_lo = np.uint64(cfg.x0_fp >> 64), np.uint64(cfg.x0_fp & _M64)
    t_hi, t_lo = np.uint64(cfg.threshold_fp >> 64), np.uint64(cfg.threshold_fp & _M64)

    idx = np.arange(n, dtype=np.uint64)
    with np.errstate(over="ignore"):
        lo = x_lo + idx * th_lo
        # lo[i] = lo[i-1] + th_lo (mod 2**64); the add wrapped iff the sum is smaller.
        wrapped = np.zeros(n, dtype=np.uint64)
        wrapped[1:] = lo[1:] < lo[:-1]
        hi = x_hi + idx * th_hi + np.cumsum(wrapped, dtype=np.uint64)
    in_e = (hi < t_hi) | ((hi == t_hi) & (lo < t_lo))
    return SymbolSequence(BINARY, (~in_e).astype(np.uint8).tobytes())


def generate_periodic(pattern: SymbolSequence, n: int) -> SymbolSequence:
    if len(pattern) == 0:
        raise ValueError("pattern must be non-empty")
    if n < 0:
        raise ValueError("n must be non-negative")
    reps = -(-n // len(pattern))
    return SymbolSequence(pattern.alphabet, (pattern.symbols * reps)[:n])


def generate_iid(p: Sequence[float], seed: int, n: int) -> SymbolSequence:
    """Draw ``n`` i.i.d. symbols with probabilities ``p``; deterministic in ``seed``."""
    probs = np.asarray(p, dtype=float)
    if probs.ndim != 1 or len(probs) < 2 or len(probs) > 256:
        raise ValueError("p must list between 2 and 256 probabilities")
    if np.any(probs < 0) or abs(probs.sum() - 1.0) > 1e-12:
        raise ValueError("p must be a probability vector summing to 1")
    rng = np.random.default_rng(seed)
    draws = rng.choice(len(probs), size=n, p=probs / probs.sum())
    return SymbolSequence(Alphabet(len(probs)), draws.astype(np.uint8).tobytes())


@dataclass
class DiophantineProfile:
    partial_quotients: list[int]
    convergent_denominators: list[int]
    distances: list[float]
    bounded_quotients_up_to_depth: bool
    truncated: bool = False
    trusted_depth: int = 0


def _dist_to_int(q: int, theta_fp: int) -> float:
    r = (q * theta_fp) & MASK
    return min(r, ONE - r) / ONE


def diophantine_profile(theta_fp: int, depth: int, max_quotient: int = 16) -> DiophantineProfile:
    """Continued-fraction expansion of the quantized angle.

    ``partial_quotients`` are ``a_1, a_2, ...`` of ``theta = [0; a_1, a_2, ...]``
    and ``convergent_denominators`` the matching ``q_1, q_2, ...`` (with
    ``q_0 = 1``). The expansion of the dyadic rational stops early when the
    Euclidean remainder hits zero, in which case ``truncated`` is set.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if not 0 < theta_fp < ONE:
        raise ValueError("theta_fp must lie in (0, 2**128)")
    num, den = ONE, theta_fp  # 1/theta = num/den
    quotients, denoms, dists = [], [], []
    q_prev, q = 0, 1
    for _ in range(depth):
        if den == 0:
            break
        a, rem = divmod(num, den)
        num, den = den, rem
        q_prev, q = q, a * q + q_prev
        quotients.append(a)
        denoms.append(q)
        dists.append(_dist_to_int(q, theta_fp))
    truncated = den == 0
    trusted = _trusted_depth(denoms)
    # Quotients past the trusted depth describe the dyadic rational, not the angle.
    probed = quotients[: max(trusted, 1)]
    bounded = max(probed) <= max_quotient
    return DiophantineProfile(quotients, denoms, dists, bounded, truncated, trusted)


def _trusted_depth(qs: list[int]) -> int:
    """Number of leading convergents unaffected by 128-bit quantization.

    The quantized angle is within ``2**-128`` of the true one, so a convergent
    ``p/q`` is shared while ``q * q_next`` stays well below ``2**128``.
    """
    for k in range(len(qs) - 1):
        if qs[k] * qs[k + 1] >= ONE >> 8:
            return k
    return len(qs)


# -- sequence files -----------------------------------------------------------

def write_sequence(seq: SymbolSequence, fh: BinaryIO) -> None:
    fh.write(f"alphabet_size={seq.alphabet.size}\n".encode("ascii"))
    fh.write(seq.symbols)


def read_sequence(fh: BinaryIO) -> SymbolSequence:
    line = fh.readline()
    key, sep, value = line.decode("ascii", errors="replace").strip().partition("=")
    if key != "alphabet_size" or not sep:
        raise ValueError("sequence file must start with 'alphabet_size=<k>'")
    return SymbolSequence(Alphabet(int(value)), fh.read())


def source_from_spec(spec: str, n: int, seed: int = 0) -> SymbolSequence:
    """Build a sequence from a short text spec.

    ``rotation:golden``, ``rotation:sqrt2``, ``rotation:<theta float>``,
    ``periodic:<digits>``, ``iid`` (fair bits) or ``iid:<p0>,<p1>,...``.
    """
    kind, _, arg = spec.partition(":")
    if kind == "rotation":
        arg = arg or "golden"
        cfg = RotationConfig.preset(arg) if arg in PRESETS else RotationConfig.from_float(float(arg))
        return generate_rotation(cfg, n)
    if kind == "periodic":
        return generate_periodic(SymbolSequence.from_string(arg or "01"), n)
    if kind == "iid":
        probs = [float(v) for v in arg.split(",")] if arg else [0.5, 0.5]
        return generate_iid(probs, seed, n)
    raise ValueError(f"unknown source spec {spec!r}")


def is_periodic_with(symbols: bytes, period: int) -> bool:
    """True if ``symbols[i] == symbols[i + period]`` for every valid ``i``."""
    return period >= 1 and symbols[period:] == symbols[: len(symbols) - period]


def smallest_period(symbols: bytes, limit: int) -> int | None:
    for p in range(1, min(limit, len(symbols) - 1) + 1):
        if is_periodic_with(symbols, p):
            return p
    return None
