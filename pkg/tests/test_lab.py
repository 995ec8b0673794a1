import io
import math

import pytest

from lzlab.lab import (
    SWEEP_COLUMNS,
    FitResult,
    SweepRow,
    default_n_total,
    fit_rate,
    inversions,
    lz78_phrase_count,
    lz78_ratio_proxy,
    read_sweep_csv,
    sweep,
    sweep_to_string,
    write_plot_data,
)
from lzlab.recurrence import ReturnLaw
from lzlab.sources import generate_iid, source_from_spec
import oracles


def test_lz78_empty():
    assert lz78_phrase_count(b"") == [0]


def test_lz78_matches_reference_parser():
    x = bytes(int(c) for c in "0101010101")
    assert lz78_phrase_count(x) == [oracles.lz78_phrases(x)] == [5]
    y = generate_iid([0.3, 0.3, 0.4], 2, 5000).symbols
    prefixes = [0, 1, 17, 1000, 5000]
    assert lz78_phrase_count(y, prefixes) == [oracles.lz78_phrases(y[:p]) for p in prefixes]


def test_lz78_alternating_grows_like_sqrt():
    ns = [1 << k for k in range(10, 17)]
    x = bytes([0, 1]) * (ns[-1] // 2)
    ratios = [c / math.sqrt(n) for c, n in zip(lz78_phrase_count(x, ns), ns)]
    assert max(ratios) / min(ratios) < 1.5


def test_lz78_prefix_validation():
    with pytest.raises(ValueError):
        lz78_phrase_count(b"\x00", [2])


def test_lz78_proxy():
    assert lz78_ratio_proxy(0, 10) == 0.0
    assert lz78_ratio_proxy(4, 12) == 1.0


def test_fit_powerlog_exact():
    rows = [(1 << k, 3 * k / (1 << k) ** 0.8) for k in range(8, 17)]
    res = fit_rate(rows, "powerlog")
    assert res.c_coef == pytest.approx(3, rel=1e-9)
    assert res.a_exp == pytest.approx(0.8, rel=1e-9)
    assert res.residual < 1e-9 and not res.is_poor()


def test_fit_logpower_exact():
    rows = [(1 << k, 2.5 / k ** 1.7) for k in range(4, 20, 3)]
    res = fit_rate(rows, "logpower")
    assert (res.c_coef, res.a_exp) == (pytest.approx(2.5, rel=1e-9), pytest.approx(1.7, rel=1e-9))


def test_power_law_rate_is_a_poor_powerlog_fit():
    c, eps = 1.0, 0.25
    rows = [(1 << k, (c + eps) ** 2 / k) for k in range(8, 17)]
    assert fit_rate(rows, "powerlog").is_poor()
    assert not fit_rate(rows, "logpower").is_poor()


@pytest.mark.parametrize("rows", [
    [(256, 0.1), (512, 0.05)],
    [(256, 0.1), (256, 0.05), (256, 0.02)],
    [(256, 0.1), (512, 0.0), (1024, 0.02)],
])
def test_fit_rejects_bad_input(rows):
    with pytest.raises(ValueError):
        fit_rate(rows)


def test_fit_rejects_unknown_model():
    with pytest.raises(ValueError):
        fit_rate([(4, 1), (8, 1), (16, 1)], "exp")


def test_inversions():
    assert inversions([5, 4, 3]) == 0
    assert inversions([5, 6, 3, 3]) == 2


def test_sweep_rows_and_csv_determinism():
    law = ReturnLaw("log")
    rows = sweep("rotation:golden", ["fslz", "swlz"], [16, 64], law, factor=64, minimum=1 << 12)
    assert [r.n_w for r in rows] == [16, 64]
    assert rows[1].n_total == 4096 and rows[1].l_o == 27
    for r in rows:
        assert r.ratio_fslz > 0 and r.ratio_swlz > 0
        assert 0 <= r.mu_hat <= 1 and 0 <= r.bad_fraction <= 1
    text = sweep_to_string(rows)
    again = sweep_to_string(sweep("rotation:golden", ["fslz", "swlz"], [16, 64], law,
                                  factor=64, minimum=1 << 12, jobs=2))
    assert text == again
    assert text.splitlines()[0] == ",".join(SWEEP_COLUMNS)
    back = read_sweep_csv(io.StringIO(text))
    assert [(r.n_w, r.ratio_swlz) for r in back] == [(r.n_w, r.ratio_swlz) for r in rows]
    assert all(r.wall_time is None for r in back)


def test_sweep_single_codec_leaves_other_blank():
    rows = sweep("iid", ["swlz"], [32], ReturnLaw("linear"), minimum=2048)
    assert rows[0].ratio_fslz is None and rows[0].ratio_swlz > 0.9


def test_periodic_sweep_tracks_log_over_n():
    for k in range(10, 17):
        n = 1 << k
        row = sweep("periodic:01", ["swlz"], [2], ReturnLaw("log"), factor=2, minimum=n)[0]
        assert row.ratio_swlz <= 4 * 2 * k / n + 184 / n


@pytest.mark.parametrize("kwargs", [dict(codecs=[]), dict(codecs=["lz4"]), dict(n_ws=[1]),
                                    dict(factor=1)])
def test_sweep_validation(kwargs):
    args = dict(source="iid", codecs=["swlz"], n_ws=[8], law=ReturnLaw("log"))
    args.update(kwargs)
    with pytest.raises(ValueError):
        sweep(**args)


def test_default_n_total():
    assert default_n_total(16) == 1 << 14
    assert default_n_total(1 << 10) == 1 << 16


def test_plot_data():
    buf = io.StringIO()
    write_plot_data([SweepRow("s", 8, 2, 100, None, 0.5, 0.0, 0.1)], buf)
    assert buf.getvalue().splitlines()[1] == "8 nan 0.5 0.0 0.1"
