import pytest

from lzlab.bitio import (
    HEADER_BITS,
    BadMagicError,
    Bitstream,
    CodecError,
    FrameHeader,
    OffsetRangeError,
    TruncatedStreamError,
)
from lzlab.fslz import (
    FslzParams,
    choose_match_length,
    expected_bits,
    fslz_decode,
    fslz_encode,
    fslz_rate_report,
)
from lzlab.recurrence import ReturnLaw
from lzlab.sources import BINARY, Alphabet, SymbolSequence, generate_iid, source_from_spec


def alternating():
    return SymbolSequence.from_string("01" * 6)


def test_all_blocks_match_on_alternating_input():
    x = alternating()
    stream, stats = fslz_encode(x, FslzParams(4, 2, BINARY))
    assert (stats.m, stats.m1, stats.m2, stats.tail) == (4, 4, 0, 0)
    assert stats.bits_total == HEADER_BITS + 16 == 200
    # raw window, then four (flag=1, offset=00) pointers
    assert stream.bits[HEADER_BITS:] == "0101" + "100" * 4
    assert fslz_decode(stream.to_bytes()) == x


def test_rate_report_terms():
    params = FslzParams(4, 2, BINARY)
    _, stats = fslz_encode(alternating(), params)
    rep = fslz_rate_report(stats, params)
    assert rep.raw_overhead == pytest.approx(4 / 12)
    assert rep.matched_cost == pytest.approx(8 / 12)
    assert rep.literal_cost == 0
    assert rep.flags == pytest.approx(4 / 12)
    assert rep.total == pytest.approx(16 / 12)
    assert rep.block_bound_holds


def test_literal_blocks_and_tail():
    x = SymbolSequence.from_string("0000" "11" "0" )
    params = FslzParams(4, 2, BINARY)
    stream, stats = fslz_encode(x, params)
    assert (stats.m, stats.m1, stats.m2, stats.tail) == (1, 0, 1, 1)
    assert stream.bits[HEADER_BITS:] == "0000" + "0" + "11" + "0"
    assert stats.bits_total == expected_bits(stats, params)
    assert fslz_decode(stream) == x


@pytest.mark.parametrize("law,n_w,expected", [
    (ReturnLaw("log"), 1 << 10, 256),
    (ReturnLaw("linear"), 1 << 10, 8),
    (ReturnLaw("power", s=0.5), 1 << 10, 64),
    (ReturnLaw("log"), 64, 27),
    (ReturnLaw("linear", c=100), 4, 1),
    (ReturnLaw("log", epsilon=0.001), 16, 15),
])
def test_choose_match_length(law, n_w, expected):
    assert choose_match_length(law, n_w) == expected


@pytest.mark.parametrize("n_w,l_o", [(1, 1), (4, 0), (4, 4)])
def test_params_validation(n_w, l_o):
    with pytest.raises(ValueError):
        FslzParams(n_w, l_o, BINARY)


def test_encoder_preconditions():
    with pytest.raises(ValueError):
        fslz_encode(SymbolSequence.from_string("01"), FslzParams(4, 2, BINARY))
    with pytest.raises(ValueError):
        fslz_encode(SymbolSequence.from_string("0120"), FslzParams(2, 1, BINARY))


@pytest.mark.parametrize("spec,alphabet_size", [("iid", 2), ("iid:0.25,0.25,0.25,0.25", 4),
                                                ("rotation:golden", 2), ("periodic:0112", 3)])
def test_round_trip_and_accounting(spec, alphabet_size):
    x = source_from_spec(spec, 1 << 16, seed=1)
    assert x.alphabet.size == alphabet_size
    for n_w in (16, 1024):
        params = FslzParams(n_w, choose_match_length(ReturnLaw("log"), n_w), x.alphabet)
        stream, stats = fslz_encode(x, params)
        assert stats.bits_total == expected_bits(stats, params)
        assert stats.m1 <= stats.m and stats.m * params.l_o < stats.n_total
        assert fslz_decode(stream.to_bytes()) == x


def test_byte_alphabet_round_trip():
    x = generate_iid([1 / 256] * 256, 0, 5000)
    stream, _ = fslz_encode(x, FslzParams(64, 3, x.alphabet))
    assert fslz_decode(stream.to_bytes()) == x


def frame():
    stream, _ = fslz_encode(alternating(), FslzParams(4, 2, BINARY))
    return stream.to_bytes()


def test_decoder_rejects_wrong_magic():
    data = bytearray(frame())
    data[:4] = b"SWLZ"
    with pytest.raises(BadMagicError):
        fslz_decode(bytes(data))


def test_decoder_rejects_truncation():
    data = frame()
    with pytest.raises(TruncatedStreamError):
        fslz_decode(data[:-1])
    with pytest.raises(TruncatedStreamError):
        fslz_decode(data[:10])


def test_decoder_rejects_trailing_bytes():
    with pytest.raises(CodecError):
        fslz_decode(frame() + b"\x00")


def test_decoder_rejects_out_of_window_offset():
    # n_w = 3 gives 2-bit offsets, so offset 3 is encodable but invalid.
    s = Bitstream()
    FrameHeader(b"FSLZ", 2, 3, 1, 4).write(s)
    s.write_bits("010" + "1" + "11")
    with pytest.raises(OffsetRangeError):
        fslz_decode(s.to_bytes())


def test_decoder_rejects_symbols_outside_alphabet():
    s = Bitstream()
    FrameHeader(b"FSLZ", 3, 2, 1, 2).write(s)
    s.write_bits("0011")
    with pytest.raises(CodecError):
        fslz_decode(s.to_bytes())
