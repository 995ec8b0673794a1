"""Experiment harness: window-size sweeps, rate-decay fits and the LZ78
phrase count used as the incremental-parsing comparison point."""

from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from typing import Iterable, Sequence

import numpy as np

from .fslz import FslzParams, choose_match_length, expected_bits, fslz_encode
from .recurrence import ReturnLaw, mu_g_estimate
from .sources import SymbolSequence, source_from_spec
from .swlz import SwlzParams, bad_interval_fraction, swlz_encode

CODECS = ("fslz", "swlz")
MODELS = ("powerlog", "logpower")
SWEEP_SCHEMA_VERSION = 1


def lz78_phrase_count(x, prefixes: Iterable[int] | None = None) -> list[int]:
    """Number of complete LZ78 phrases after each requested prefix length.

    The incremental parse keeps a trie of seen phrases; a phrase completes
    when the current path falls off the trie. ``prefixes`` defaults to the
    whole sequence.
    """
    data = x.symbols if isinstance(x, SymbolSequence) else bytes(x)
    wanted = [len(data)] if prefixes is None else list(prefixes)
    if any(not 0 <= p <= len(data) for p in wanted):
        raise ValueError("prefix length outside the sequence")
    marks = set(wanted)
    at: dict[int, int] = {}
    if 0 in marks:
        at[0] = 0
    children: dict[tuple[int, int], int] = {}
    node, count = 0, 0
    for i, sym in enumerate(data, 1):
        nxt = children.get((node, sym))
        if nxt is None:
            children[(node, sym)] = len(children) + 1
            count += 1
            node = 0
        else:
            node = nxt
        if i in marks:
            at[i] = count
    return [at[p] for p in wanted]


def lz78_ratio_proxy(count: int, n: int) -> float:
    """Per-symbol cost ``c (log2 c + 1) / n`` of an LZ78 parse with ``c`` phrases."""
    if count == 0:
        return 0.0
    return count * (math.log2(count) + 1) / n


@dataclass
class SweepRow:
    source_id: str
    n_w: int
    l_o: int
    n_total: int
    ratio_fslz: float | None
    ratio_swlz: float | None
    mu_hat: float
    bad_fraction: float
    wall_time: float | None = None


SWEEP_COLUMNS = [f.name for f in fields(SweepRow)]


def default_n_total(n_w: int, factor: int = 64, minimum: int = 1 << 14) -> int:
    return max(factor * n_w, minimum)


def _sweep_one(args) -> SweepRow:
    source, codecs, n_w, law, factor, minimum, seed = args
    start = time.perf_counter()
    n_total = default_n_total(n_w, factor, minimum)
    x = source_from_spec(source, n_total, seed)
    l_o = choose_match_length(law, n_w)
    ratio_fslz = ratio_swlz = None
    if "fslz" in codecs:
        params = FslzParams(n_w, l_o, x.alphabet)
        _, stats = fslz_encode(x, params)
        if stats.bits_total != expected_bits(stats, params):
            raise RuntimeError("FSLZ bit accounting mismatch")
        ratio_fslz = stats.ratio
    if "swlz" in codecs:
        _, stats, _ = swlz_encode(x, SwlzParams(n_w, x.alphabet))
        if stats.bits_total != stats.expected_bits():
            raise RuntimeError("SWLZ bit accounting mismatch")
        ratio_swlz = stats.ratio
    mu = mu_g_estimate(x, l_o, n_w).mu_hat
    bad = bad_interval_fraction(x, l_o, n_w)
    return SweepRow(source, n_w, l_o, n_total, ratio_fslz, ratio_swlz, mu, bad,
                    time.perf_counter() - start)


def sweep(
    source: str,
    codecs: Sequence[str],
    n_ws: Sequence[int],
    law: ReturnLaw,
    factor: int = 64,
    minimum: int = 1 << 14,
    seed: int = 0,
    jobs: int = 1,
) -> list[SweepRow]:
    """One row per window size, in grid order.

    Ratios are total frame bits over ``beta * N``, raw first window included.
    """
    codecs = tuple(codecs)
    if not codecs or any(c not in CODECS for c in codecs):
        raise ValueError(f"codecs must be a non-empty subset of {CODECS}")
    if not n_ws or any(n < 2 for n in n_ws):
        raise ValueError("window sizes must be >= 2")
    if factor < 2:
        raise ValueError("N must exceed the window by at least a factor of 2")
    jobs_args = [(source, codecs, n_w, law, factor, minimum, seed) for n_w in n_ws]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            return list(pool.map(_sweep_one, jobs_args))
    return [_sweep_one(a) for a in jobs_args]


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_sweep_csv(rows: Iterable[SweepRow], fh, timing: bool = False) -> None:
    """CSV with a fixed column order; ``wall_time`` is left blank unless
    ``timing`` is set so repeated runs stay byte-identical."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for row in rows:
        vals = [getattr(row, c) for c in SWEEP_COLUMNS]
        if not timing:
            vals[-1] = None
        writer.writerow([_fmt(v) for v in vals])


def read_sweep_csv(fh) -> list[SweepRow]:
    out = []
    for rec in csv.DictReader(fh):
        def opt(key):
            v = rec.get(key, "")
            return float(v) if v not in ("", None) else None
        out.append(SweepRow(
            source_id=rec["source_id"],
            n_w=int(rec["n_w"]),
            l_o=int(rec["l_o"]),
            n_total=int(rec["n_total"]),
            ratio_fslz=opt("ratio_fslz"),
            ratio_swlz=opt("ratio_swlz"),
            mu_hat=float(rec["mu_hat"]),
            bad_fraction=float(rec["bad_fraction"]),
            wall_time=opt("wall_time"),
        ))
    return out


def sweep_to_string(rows: Iterable[SweepRow], timing: bool = False) -> str:
    buf = io.StringIO()
    write_sweep_csv(rows, buf, timing)
    return buf.getvalue()


@dataclass(frozen=True)
class FitResult:
    """Fitted decay model. ``a_exp`` is the exponent ``a`` of
    ``C log2(n_w) / n_w**a`` or ``k`` of ``C / log2(n_w)**k``; ``residual``
    is the RMS misfit in log2 units."""

    c_coef: float
    a_exp: float
    residual: float
    model: str = "powerlog"

    def is_poor(self, tol: float = 0.01) -> bool:
        return self.residual > tol


def _points(rows, codec: str) -> tuple[np.ndarray, np.ndarray]:
    nw, ratio = [], []
    for row in rows:
        if isinstance(row, SweepRow):
            r = getattr(row, f"ratio_{codec}")
            n = row.n_w
        else:
            n, r = row
        if r is None:
            continue
        nw.append(float(n))
        ratio.append(float(r))
    return np.asarray(nw), np.asarray(ratio)


def fit_rate(rows, model: str = "powerlog", codec: str = "swlz") -> FitResult:
    """Least-squares fit of a decay law in log2 space.

    ``powerlog``: ``log2 r = log2 C + log2 log2 n_w - a log2 n_w``.
    ``logpower``: ``log2 r = log2 C - k log2 log2 n_w``.
    Rows are :class:`SweepRow` objects (``codec`` picks the ratio column) or
    ``(n_w, ratio)`` pairs.
    """
    if model not in MODELS:
        raise ValueError(f"model must be one of {MODELS}")
    nw, ratio = _points(rows, codec)
    if len(nw) < 3 or len(np.unique(nw)) < 3:
        raise ValueError("fit needs at least 3 rows with distinct window sizes")
    if np.any(ratio <= 0) or np.any(nw < 2):
        raise ValueError("fit needs positive ratios and window sizes of at least 2")
    ll = np.log2(np.log2(nw))
    if model == "powerlog":
        design = np.column_stack([np.ones_like(nw), -np.log2(nw)])
        y = np.log2(ratio) - ll
    else:
        design = np.column_stack([np.ones_like(nw), -ll])
        y = np.log2(ratio)
    if np.linalg.matrix_rank(design) < 2:
        raise ValueError("degenerate design matrix")
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ coef
    return FitResult(float(2.0 ** coef[0]), float(coef[1]),
                     float(np.sqrt(np.mean(resid ** 2))), model)


def inversions(values: Sequence[float]) -> int:
    """Adjacent pairs that fail to strictly decrease."""
    return sum(1 for a, b in zip(values, values[1:]) if not b < a)


def write_plot_data(rows: Iterable[SweepRow], fh) -> None:
    """Whitespace-separated columns for log-log plotting (gnuplot style)."""
    fh.write("# n_w ratio_fslz ratio_swlz mu_hat bad_fraction\n")
    for r in rows:
        vals = [r.n_w, r.ratio_fslz, r.ratio_swlz, r.mu_hat, r.bad_fraction]
        fh.write(" ".join("nan" if v is None else _fmt(v) for v in vals) + "\n")
