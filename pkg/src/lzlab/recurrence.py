"""Return times, match lengths and the ergodic estimate of the miss set G.

Sequences are one-sided: every statistic is taken at an explicit reference
index ``t`` with history ``x[0:t)``. A return that does not occur inside the
available history is reported as ``None`` rather than guessed.

Logarithms are base 2 throughout.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from typing import Iterable

from .matching import find_block_match, longest_match, previous_occurrence
from .sources import SymbolSequence


def _data(x) -> bytes:
    return x.symbols if isinstance(x, SymbolSequence) else bytes(x)


FAMILIES = ("linear", "log", "power")


@dataclass(frozen=True)
class ReturnLaw:
    """Growth law ``log R_n ~ c * f(n)`` with a safety margin ``epsilon``.

    ``linear``: f(n) = n (positive entropy, c = H); ``log``: f(n) = log2 n
    (rotations); ``power``: f(n) = n**s with 0 < s < 1.
    """

    family: str
    c: float = 1.0
    epsilon: float = 0.25
    s: float | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown law family {self.family!r}")
        if not self.c > 0:
            raise ValueError("c must be positive")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.family == "power":
            if self.s is None or not 0 < self.s < 1:
                raise ValueError("power law needs 0 < s < 1")
        elif self.s is not None:
            raise ValueError("s only applies to the power family")

    @classmethod
    def parse(cls, text: str, c: float = 1.0, epsilon: float = 0.25) -> "ReturnLaw":
        """Parse ``linear``, ``log`` or ``power:<s>``."""
        family, _, arg = text.partition(":")
        if family == "power":
            return cls("power", c, epsilon, float(arg) if arg else 0.5)
        if arg:
            raise ValueError(f"law {family!r} takes no parameter")
        return cls(family, c, epsilon)

    def f(self, n: float) -> float:
        if self.family == "linear":
            return float(n)
        if self.family == "log":
            return math.log2(n)
        return float(n) ** self.s

    def f_inv(self, y: float) -> float:
        if self.family == "linear":
            return y
        if self.family == "log":
            return 2.0 ** y
        return y ** (1.0 / self.s)


@dataclass(frozen=True)
class RecurrenceSample:
    t: int
    n: int
    r_n: int | None = None
    l_n: int | None = None
    capped: bool = False


@dataclass(frozen=True)
class MuGEstimate:
    l_o: int
    n_w: int
    trials: int
    misses: int

    @property
    def mu_hat(self) -> float:
        return self.misses / self.trials


def first_return(x, t: int, n: int) -> int | None:
    """Smallest ``l >= 1`` with ``x[t:t+n] == x[t-l:t-l+n]``, or None."""
    data = _data(x)
    if t < 0 or n < 0 or t + n > len(data):
        raise IndexError(f"word [{t}, {t + n}) outside a sequence of length {len(data)}")
    return previous_occurrence(data, t, n)


def match_length(x, t: int, window: int, lookahead_cap: int) -> tuple[int, bool]:
    """Longest match of ``x[t:]`` against copies starting in ``[t-window, t)``.

    The lookahead is limited to ``min(lookahead_cap, len(x) - t)``; ``capped``
    reports that the match reached that limit, i.e. the true match length is
    unknown.
    """
    data = _data(x)
    if window < 1:
        raise ValueError("window must be >= 1")
    if t > len(data):
        raise IndexError(f"reference point {t} beyond sequence end {len(data)}")
    if t - window < 0:
        raise IndexError(f"window of {window} before t={t} runs off the start")
    limit = min(lookahead_cap, len(data) - t)
    if limit <= 0:
        return 0, True
    _, length = longest_match(data, t, window, limit)
    return length, length == limit


def sandwich_check(x, t: int, m: int, lookahead_cap: int | None = None) -> bool | None:
    """Check ``R_n <= m < R_{n+1}`` for ``n = L_m`` at reference ``t``.

    Returns None when the match length is capped (indeterminate).
    """
    data = _data(x)
    cap = len(data) - t if lookahead_cap is None else lookahead_cap
    n, capped = match_length(data, t, m, cap)
    if capped:
        return None
    r_n = first_return(data, t, n)
    r_next = first_return(data, t, n + 1)
    return r_n is not None and r_n <= m and (r_next is None or r_next > m)


def normalized_return(law: ReturnLaw, sample: RecurrenceSample) -> float:
    """``log2(R_n) / f(n)``."""
    if sample.r_n is None:
        raise ValueError("sample has no return time")
    denom = law.f(sample.n)
    if denom <= 0:
        raise ValueError(f"f({sample.n}) = {denom} is not positive")
    return math.log2(sample.r_n) / denom


def normalized_match(law: ReturnLaw, sample: RecurrenceSample) -> float:
    """``log2(n) / f(L_n)`` for an uncapped match length."""
    if sample.l_n is None or sample.capped:
        raise ValueError("match length missing or capped")
    if sample.l_n < 1:
        raise ValueError("match length must be >= 1")
    denom = law.f(sample.l_n)
    if denom <= 0:
        raise ValueError(f"f({sample.l_n}) = {denom} is not positive")
    return math.log2(sample.n) / denom


def sample_at(x, t: int, n: int, lookahead_cap: int | None = None) -> RecurrenceSample:
    """Both statistics at ``t``: return time of the length-``n`` word and the
    match length against the previous ``n`` symbols."""
    data = _data(x)
    r_n = first_return(data, t, n) if t + n <= len(data) else None
    l_n, capped = None, False
    if t >= n:
        cap = len(data) - t if lookahead_cap is None else lookahead_cap
        l_n, capped = match_length(data, t, n, cap)
    return RecurrenceSample(t, n, r_n, l_n, capped)


def scan(x, ts: Iterable[int], n: int, lookahead_cap: int | None = None) -> list[RecurrenceSample]:
    data = _data(x)
    return [sample_at(data, t, n, lookahead_cap) for t in ts]


def _safe(fn, law, sample):
    try:
        return fn(law, sample)
    except ValueError:
        return None


def median_normalized_return(law: ReturnLaw, samples: Iterable[RecurrenceSample]) -> float:
    """Median over samples whose return time exists."""
    vals = [v for s in samples if (v := _safe(normalized_return, law, s)) is not None]
    if not vals:
        raise ValueError("no sample has a return time")
    return statistics.median(vals)


def median_normalized_match(law: ReturnLaw, samples: Iterable[RecurrenceSample]) -> float:
    """Median over uncapped samples with a usable match length."""
    vals = [v for s in samples if (v := _safe(normalized_match, law, s)) is not None]
    if not vals:
        raise ValueError("no sample has a usable match length")
    return statistics.median(vals)


def mu_g_estimate(x, l_o: int, n_w: int, stride: int | None = None) -> MuGEstimate:
    """Fraction of reference points lacking a full ``l_o`` match in the
    previous ``n_w`` symbols, scanning ``t = n_w, n_w + stride, ...``."""
    data = _data(x)
    stride = l_o if stride is None else stride
    if l_o < 1 or n_w < 1 or stride < 1:
        raise ValueError("l_o, n_w and stride must be >= 1")
    if len(data) < n_w + l_o + stride:
        raise ValueError(f"need at least {n_w + l_o + stride} symbols, got {len(data)}")
    trials = misses = 0
    for t in range(n_w, len(data) - l_o + 1, stride):
        trials += 1
        if find_block_match(data, t, n_w, l_o) < 0:
            misses += 1
    return MuGEstimate(l_o, n_w, trials, misses)
