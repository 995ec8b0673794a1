"""Window match search shared by the recurrence scans and both codecs.

All searches work on the full ``bytes`` buffer, so a copy starting inside
the window may run on past the reference point (LZ77 overlap): comparing
``data[s:]`` against ``data[t:]`` is exactly the symbol-by-symbol copy rule.

Two routes exist for the longest match. ``longest_match_naive`` is the
quadratic reference scan. ``longest_match`` drives CPython's substring
search (``bytes.find``), which returns leftmost occurrences, and grows the
pattern one record at a time.
"""

from __future__ import annotations

import numpy as np

_LINEAR_PROBE = 32


def _common_prefix(data: bytes, s: int, t: int, known: int, cap: int) -> int:
    """Length of the common prefix of ``data[s:]`` and ``data[t:]``, at most ``cap``.

    The first ``known`` symbols are already known to agree.
    """
    n = known
    stop = min(cap, n + _LINEAR_PROBE)
    while n < stop and data[s + n] == data[t + n]:
        n += 1
    if n < stop or n == cap:
        return n
    # Gallop with slice compares, then bisect the failing block.
    step = _LINEAR_PROBE
    while n < cap:
        k = min(step, cap - n)
        if data[s + n:s + n + k] == data[t + n:t + n + k]:
            n += k
            step <<= 1
            continue
        lo, hi = 0, k
        while hi - lo > 1:
            mid = (lo + hi) >> 1
            if data[s + n:s + n + mid] == data[t + n:t + n + mid]:
                lo = mid
            else:
                hi = mid
        return n + lo
    return n


def longest_match(data: bytes, t: int, n_w: int, cap: int) -> tuple[int | None, int]:
    """Longest copy of ``data[t:]`` starting in ``[t - n_w, t)``.

    Returns ``(offset, length)`` where ``offset`` is the leftmost maximizing
    start measured from ``t - n_w``; ``(None, 0)`` when ``data[t]`` does not
    occur in the window. ``length`` never exceeds ``cap`` nor the data end.
    """
    if t < n_w:
        raise ValueError(f"reference point {t} precedes a full window of {n_w}")
    lo = t - n_w
    cap = min(cap, len(data) - t)
    if cap <= 0:
        return None, 0
    s = data.find(data[t:t + 1], lo, t)
    if s < 0:
        return None, 0
    length = _common_prefix(data, s, t, 1, cap)
    while length < cap:
        # Any longer match is also an occurrence of the current one, so it lies right of s.
        nxt = data.find(data[t:t + length + 1], s + 1, t + length)
        if nxt < 0:
            break
        s = nxt
        length = _common_prefix(data, s, t, length + 1, cap)
    return s - lo, length


class MatchFinder:
    """Longest-match search over a fixed buffer backed by a packed q-gram view.

    Position ``i`` of the view is one byte holding the ``q`` symbols
    ``data[i:i+q]`` (``q = 8 // bits_per_symbol``). A word of length
    ``L >= q`` occurs at ``s`` iff the ``L - q + 1`` view bytes starting at its
    first position occur at ``s``, so long patterns are searched over a
    256-letter alphabet where substring search skips efficiently even when
    the source alphabet is binary.
    """

    def __init__(self, data: bytes, bits_per_symbol: int | None = None):
        self.data = bytes(data)
        if bits_per_symbol is None:
            top = max(self.data, default=1)
            bits_per_symbol = max(1, int(top).bit_length())
        self.q = max(1, 8 // bits_per_symbol)
        self.view = self._pack(self.data, self.q, bits_per_symbol) if self.q > 1 else self.data

    @staticmethod
    def _pack(data: bytes, q: int, width: int) -> bytes:
        n = len(data) - q + 1
        if n <= 0:
            return b""
        arr = np.frombuffer(data, dtype=np.uint8)
        acc = np.zeros(n, dtype=np.uint8)
        for j in range(q):
            acc = (acc << np.uint8(width)) | arr[j:j + n]
        return acc.tobytes()

    def _find(self, t: int, length: int, start: int) -> int:
        """Leftmost ``s >= start``, ``s < t``, where ``data[t:t+length]`` recurs."""
        if length >= self.q:
            span = length - self.q + 1
            return self.view.find(self.view[t:t + span], start, t - 1 + span)
        return self.data.find(self.data[t:t + length], start, t - 1 + length)

    def longest(self, t: int, n_w: int, cap: int) -> tuple[int | None, int]:
        """Same contract as :func:`longest_match`."""
        data = self.data
        if t < n_w:
            raise ValueError(f"reference point {t} precedes a full window of {n_w}")
        lo = t - n_w
        cap = min(cap, len(data) - t)
        if cap <= 0:
            return None, 0
        s = data.find(data[t:t + 1], lo, t)
        if s < 0:
            return None, 0
        length = _common_prefix(data, s, t, 1, cap)
        while length < cap:
            nxt = self._find(t, length + 1, s + 1)
            if nxt < 0:
                break
            s = nxt
            length = _common_prefix(data, s, t, length + 1, cap)
        return s - lo, length


def longest_match_naive(data: bytes, t: int, n_w: int, cap: int) -> tuple[int | None, int]:
    """Reference O(n_w * length) scan with the same contract as ``longest_match``."""
    if t < n_w:
        raise ValueError(f"reference point {t} precedes a full window of {n_w}")
    cap = min(cap, len(data) - t)
    best, best_start = 0, None
    for start in range(t - n_w, t):
        n = 0
        while n < cap and data[start + n] == data[t + n]:
            n += 1
        if n > best:
            best, best_start = n, start
    if best == 0:
        return None, 0
    return best_start - (t - n_w), best


def find_block_match(data: bytes, t: int, n_w: int, length: int) -> int:
    """Leftmost start in ``[t - n_w, t)`` of a full copy of ``data[t:t+length]``,
    as an offset from ``t - n_w``; -1 when none exists."""
    lo = t - n_w
    pos = data.find(data[t:t + length], lo, t - 1 + length)
    return -1 if pos < 0 else pos - lo


def previous_occurrence(data: bytes, t: int, n: int) -> int | None:
    """Return time of the word ``data[t:t+n]``: smallest ``l >= 1`` with the
    word reappearing at ``t - l`` (overlap allowed), or None."""
    if t < 1:
        return None
    pos = data.rfind(data[t:t + n], 0, t - 1 + n)
    return None if pos < 0 else t - pos


def kgram_ids(data: bytes, k: int) -> np.ndarray:
    """Integer ids for every length-``k`` window, equal iff the windows are equal.

    Prefix doubling on exact ranks; a final pair of overlapping power-of-two
    windows covers any ``k``.
    """
    n = len(data) - k + 1
    if k < 1 or n <= 0:
        return np.zeros(0, dtype=np.int64)
    rank = np.frombuffer(data, dtype=np.uint8).astype(np.int64)
    span = 1
    while span * 2 <= k:
        m = len(rank) - span
        key = rank[:m] * (int(rank.max()) + 1) + rank[span:span + m]
        _, rank = np.unique(key, return_inverse=True)
        rank = rank.astype(np.int64).ravel()
        span *= 2
    if span == k:
        return rank[:n]
    key = rank[:n] * (int(rank.max()) + 1) + rank[k - span:k - span + n]
    _, ids = np.unique(key, return_inverse=True)
    return ids.astype(np.int64).ravel()


def return_times(data: bytes, k: int) -> np.ndarray:
    """Return time of the length-``k`` word at every position (0 where absent)."""
    ids = kgram_ids(data, k)
    n = len(ids)
    out = np.zeros(n, dtype=np.int64)
    if n == 0:
        return out
    order = np.lexsort((np.arange(n), ids))
    same = ids[order[1:]] == ids[order[:-1]]
    cur, prev = order[1:][same], order[:-1][same]
    out[cur] = cur - prev
    return out


def overlap_copy(buf: bytearray, start: int, length: int) -> None:
    """Append ``length`` symbols copied from ``buf[start:]``, resolving a
    copy that runs into its own output left to right."""
    avail = len(buf) - start
    if length <= avail:
        buf += buf[start:start + length]
        return
    chunk = bytes(buf[start:])
    reps = -(-length // avail)
    buf += (chunk * reps)[:length]
