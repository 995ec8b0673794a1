import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lzlab.matching import (
    MatchFinder,
    find_block_match,
    kgram_ids,
    longest_match,
    longest_match_naive,
    overlap_copy,
    previous_occurrence,
    return_times,
)
import oracles


@settings(max_examples=500)
@given(st.binary(min_size=2, max_size=120), st.sampled_from([1, 2, 8]), st.data())
def test_three_routes_agree(raw, beta, data):
    x = bytes(b & ((1 << beta) - 1) for b in raw)
    t = data.draw(st.integers(1, len(x) - 1))
    n_w = data.draw(st.integers(1, t))
    cap = data.draw(st.integers(0, 200))
    want = longest_match_naive(x, t, n_w, cap)
    assert longest_match(x, t, n_w, cap) == want
    assert MatchFinder(x, beta).longest(t, n_w, cap) == want
    where, length = oracles.match_length(x, t, n_w, cap)
    assert want == (where, length) if length else want == (None, 0)


def test_long_periodic_match_gallops():
    x = b"\x00\x01" * 50_000
    assert longest_match(x, 2, 2, 10**6) == (0, len(x) - 2)
    assert MatchFinder(x, 1).longest(2, 2, 10**6) == (0, len(x) - 2)


def test_window_precondition():
    with pytest.raises(ValueError):
        longest_match(b"0101", 1, 2, 3)
    with pytest.raises(ValueError):
        MatchFinder(b"0101").longest(1, 2, 3)


def test_leftmost_tie_break():
    x = bytes([0, 1, 0, 1, 0, 1, 2])
    # Both starts 0 and 2 give a length-2 copy of "01" before the 2.
    assert longest_match_naive(x, 4, 4, 3) == (0, 2)
    assert MatchFinder(x, 2).longest(4, 4, 3) == (0, 2)


def test_find_block_match():
    x = b"\x00\x01\x01\x00\x01\x01"
    assert find_block_match(x, 3, 3, 3) == 0
    assert find_block_match(x, 3, 2, 3) == -1
    assert find_block_match(b"\x00" * 8, 4, 4, 4) == 0


def test_previous_occurrence_brute_force():
    rng = random.Random(1)
    x = bytes(rng.randrange(2) for _ in range(300))
    for t in range(0, 290, 7):
        for n in (0, 1, 3, 8):
            assert previous_occurrence(x, t, n) == oracles.first_return(x, t, n)


@pytest.mark.parametrize("k", [1, 2, 3, 5, 8, 13, 16])
def test_kgram_ids_and_return_times(k):
    rng = random.Random(k)
    x = bytes(rng.randrange(3) for _ in range(500))
    ids = kgram_ids(x, k)
    assert len(ids) == len(x) - k + 1
    words = [x[i:i + k] for i in range(len(ids))]
    for i in range(0, len(ids), 11):
        for j in range(0, len(ids), 13):
            assert (ids[i] == ids[j]) == (words[i] == words[j])
    r = return_times(x, k)
    expected = [oracles.first_return(x, t, k) or 0 for t in range(len(ids))]
    assert r.tolist() == expected


def test_return_times_short_input():
    assert return_times(b"\x00", 3).size == 0


def test_overlap_copy():
    buf = bytearray(b"ab")
    overlap_copy(buf, 1, 5)
    assert buf == b"abbbbbb"
    buf = bytearray(b"xyz")
    overlap_copy(buf, 0, 2)
    assert buf == b"xyzxy"
    buf = bytearray(b"xyz")
    overlap_copy(buf, 1, 5)
    assert buf == b"xyzyzyzy"
