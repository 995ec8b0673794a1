"""Independent brute-force references used to check the library."""

from fractions import Fraction


def first_return(x: bytes, t: int, n: int):
    word = x[t:t + n]
    for lag in range(1, t + 1):
        if x[t - lag:t - lag + n] == word:
            return lag
    return None


def match_length(x: bytes, t: int, window: int, cap: int):
    """(leftmost start offset, length) by comparing symbol by symbol."""
    cap = min(cap, len(x) - t)
    best, where = 0, None
    for k in range(t - window, t):
        j = 0
        while j < cap and x[k + j] == x[t + j]:
            j += 1
        if j > best:
            best, where = j, k - (t - window)
    return where, best


def lz78_phrases(x: bytes) -> int:
    """Incremental parse with a set of seen phrases (complete phrases only)."""
    seen, cur, count = set(), b"", 0
    for i in range(len(x)):
        cur += x[i:i + 1]
        if cur not in seen:
            seen.add(cur)
            count += 1
            cur = b""
    return count


def continued_fraction(value: Fraction, depth: int) -> list:
    out = []
    frac = value - (value.numerator // value.denominator)
    while frac and len(out) < depth:
        inv = 1 / frac
        a = inv.numerator // inv.denominator
        out.append(a)
        frac = inv - a
    return out


def gamma_code(n: int) -> str:
    width = n.bit_length()
    return "0" * (width - 1) + format(n, "b")


def bad_intervals(x: bytes, l_o: int, n_w: int) -> int:
    reach = n_w - l_o
    bad = 0
    for p in range(n_w, len(x) - l_o + 1):
        word = x[p:p + l_o]
        found = any(x[p - lag:p - lag + l_o] == word for lag in range(1, reach + 1))
        bad += not found
    return bad
