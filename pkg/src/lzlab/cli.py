"""Command-line entry point: ``lzlab <subcommand> ...``."""

from __future__ import annotations

import argparse
import csv
import os
import sys
from contextlib import contextmanager

from . import lab
from .bitio import CodecError
from .fslz import FslzParams, choose_match_length, fslz_decode, fslz_encode
from .recurrence import ReturnLaw, mu_g_estimate, normalized_match, normalized_return, scan
from .sources import (
    ONE,
    PRESETS,
    RotationConfig,
    generate_rotation,
    read_sequence,
    source_from_spec,
    write_sequence,
)
from .swlz import SwlzParams, swlz_decode, swlz_encode


def _int_list(text: str) -> list[int]:
    try:
        return [int(v, 0) for v in text.split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


@contextmanager
def _open_out(path, binary: bool):
    if path in (None, "-"):
        yield sys.stdout.buffer if binary else sys.stdout
    else:
        with open(path, "wb" if binary else "w", newline=None if binary else "") as fh:
            yield fh


def _read_input(path) -> bytes:
    if path in (None, "-"):
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def _load_sequence(args):
    if getattr(args, "source", None):
        if not args.n_total:
            raise ValueError("--source needs --n-total")
        return source_from_spec(args.source, args.n_total, args.seed)
    import io
    return read_sequence(io.BytesIO(_read_input(args.input)))


def _law(args) -> ReturnLaw:
    return ReturnLaw.parse(args.law, args.c, args.epsilon)


def _add_law(p, default="log"):
    p.add_argument("--law", default=default, help="linear, log or power:<s> (default %(default)s)")
    p.add_argument("--c", type=float, default=1.0, help="law constant c (default 1)")
    p.add_argument("--epsilon", type=float, default=0.25, help="margin epsilon (default 0.25)")


def _add_seq_input(p):
    p.add_argument("--in", dest="input", help="sequence file (default stdin)")
    p.add_argument("--source", help="generate instead of reading: rotation:golden, iid, periodic:01, ...")
    p.add_argument("--n-total", type=int, help="length when using --source")
    p.add_argument("--seed", type=int, default=0)


def cmd_generate(args) -> int:
    kind, _, arg = args.source.partition(":")
    if kind == "rotation" and (args.threshold is not None or args.x0 is not None):
        name = arg or "golden"
        theta = PRESETS[name] if name in PRESETS else RotationConfig.from_float(float(name)).theta_fp
        cfg = RotationConfig(
            theta,
            int((args.x0 or 0.0) * ONE) % ONE,
            int((args.threshold if args.threshold is not None else 0.5) * ONE),
        )
        seq = generate_rotation(cfg, args.n)
    else:
        seq = source_from_spec(args.source, args.n, args.seed)
    with _open_out(args.out, True) as fh:
        write_sequence(seq, fh)
    return 0


def cmd_encode_fslz(args) -> int:
    seq = _load_sequence(args)
    l_o = args.match_length if args.match_length is not None else choose_match_length(_law(args), args.window)
    stream, stats = fslz_encode(seq, FslzParams(args.window, l_o, seq.alphabet))
    with _open_out(args.out, True) as fh:
        fh.write(stream.to_bytes())
    print(f"blocks={stats.m} matched={stats.m1} literal={stats.m2} "
          f"bits={stats.bits_total} ratio={stats.ratio:.6g}", file=sys.stderr)
    return 0


def cmd_decode(args, decode) -> int:
    seq = decode(_read_input(args.input))
    with _open_out(args.out, True) as fh:
        write_sequence(seq, fh)
    return 0


def cmd_encode_swlz(args) -> int:
    seq = _load_sequence(args)
    stream, stats, phrases = swlz_encode(seq, SwlzParams(args.window, seq.alphabet))
    with _open_out(args.out, True) as fh:
        fh.write(stream.to_bytes())
    if args.emit_phrases:
        with open(args.emit_phrases, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["j", "mode", "s_j", "l_j", "cost"])
            for j, ph in enumerate(phrases, 1):
                w.writerow([j, ph.mode, "" if ph.s_j is None else ph.s_j, ph.l_j, ph.cost])
    print(f"phrases={stats.c_n} bits={stats.bits_total} ratio={stats.ratio:.6g}", file=sys.stderr)
    return 0


def cmd_recurrence_scan(args) -> int:
    seq = _load_sequence(args)
    law = _law(args)
    start = args.t_start if args.t_start is not None else max(args.n)
    ts = [start + i * args.stride for i in range(args.count)]
    with _open_out(args.out, False) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "n", "r_n", "l_n", "capped", "normalized_return", "normalized_match"])
        for n in args.n:
            for s in scan(seq, [t for t in ts if t + n <= len(seq)], n, args.cap):
                nr = nm = ""
                if s.r_n is not None:
                    nr = repr(normalized_return(law, s))
                if s.l_n is not None and s.l_n >= 1 and not s.capped and law.f(s.l_n) > 0:
                    nm = repr(normalized_match(law, s))
                w.writerow([s.t, s.n, "" if s.r_n is None else s.r_n,
                            "" if s.l_n is None else s.l_n, int(s.capped), nr, nm])
    return 0


def cmd_mu_g(args) -> int:
    seq = _load_sequence(args)
    l_o = args.l_o if args.l_o is not None else choose_match_length(_law(args), args.window)
    est = mu_g_estimate(seq, l_o, args.window, args.stride)
    with _open_out(args.out, False) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["l_o", "n_w", "trials", "misses", "mu_hat"])
        w.writerow([est.l_o, est.n_w, est.trials, est.misses, repr(est.mu_hat)])
    return 0


def cmd_sweep(args) -> int:
    codecs = [c for c in args.codec.split(",") if c]
    rows = lab.sweep(args.source, codecs, args.nw, _law(args), args.factor, args.min_total,
                     args.seed, args.jobs)
    with _open_out(args.out, False) as fh:
        lab.write_sweep_csv(rows, fh, timing=args.timing)
    if args.plot_data:
        with open(args.plot_data, "w") as fh:
            lab.write_plot_data(rows, fh)
    return 0


def cmd_fit(args) -> int:
    import io
    rows = lab.read_sweep_csv(io.StringIO(_read_input(args.input).decode("utf-8")))
    res = lab.fit_rate(rows, args.model, args.codec)
    with _open_out(args.out, False) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["model", "codec", "c_coef", "a_exp", "residual"])
        w.writerow([res.model, args.codec, repr(res.c_coef), repr(res.a_exp), repr(res.residual)])
    return 0


def cmd_lz78_count(args) -> int:
    seq = _load_sequence(args)
    prefixes = args.prefixes or [len(seq)]
    counts = lab.lz78_phrase_count(seq, prefixes)
    with _open_out(args.out, False) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n", "c", "ratio_proxy"])
        for n, c in zip(prefixes, counts):
            w.writerow([n, c, repr(lab.lz78_ratio_proxy(c, n)) if n else ""])
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lzlab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a symbol sequence file")
    p.add_argument("--source", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threshold", type=float, help="rotation partition cut, E = [0, threshold)")
    p.add_argument("--x0", type=float, help="rotation starting point")
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("encode-fslz", help="fixed-shift LZ encode")
    _add_seq_input(p)
    p.add_argument("--window", type=int, required=True)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--match-length", type=int)
    g.add_argument("--law", default=None, help="linear, log or power:<s>")
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--epsilon", type=float, default=0.25)
    p.add_argument("--out")
    p.set_defaults(func=cmd_encode_fslz)

    p = sub.add_parser("decode-fslz")
    p.add_argument("--in", dest="input")
    p.add_argument("--out")
    p.set_defaults(func=lambda a: cmd_decode(a, fslz_decode))

    p = sub.add_parser("encode-swlz", help="sliding-window LZ encode")
    _add_seq_input(p)
    p.add_argument("--window", type=int, required=True)
    p.add_argument("--emit-phrases", metavar="CSV")
    p.add_argument("--out")
    p.set_defaults(func=cmd_encode_swlz)

    p = sub.add_parser("decode-swlz")
    p.add_argument("--in", dest="input")
    p.add_argument("--out")
    p.set_defaults(func=lambda a: cmd_decode(a, swlz_decode))

    p = sub.add_parser("recurrence-scan", help="return times and match lengths as CSV")
    _add_seq_input(p)
    _add_law(p)
    p.add_argument("--n", type=_int_list, required=True, help="word lengths / windows, comma separated")
    p.add_argument("--t-start", type=int)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--stride", type=int, default=1)
    p.add_argument("--cap", type=int, help="lookahead cap for match lengths")
    p.add_argument("--out")
    p.set_defaults(func=cmd_recurrence_scan)

    p = sub.add_parser("mu-g", help="ergodic estimate of the miss probability")
    _add_seq_input(p)
    _add_law(p)
    p.add_argument("--window", type=int, required=True)
    p.add_argument("--l-o", type=int)
    p.add_argument("--stride", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_mu_g)

    p = sub.add_parser("sweep", help="window-size sweep as CSV")
    p.add_argument("--source", required=True)
    p.add_argument("--codec", default="fslz,swlz")
    p.add_argument("--nw", type=_int_list, required=True)
    _add_law(p)
    p.add_argument("--factor", type=int, default=64, help="N = factor * n_w (default 64)")
    p.add_argument("--min-total", type=int, default=1 << 14)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="fill the wall_time column")
    p.add_argument("--plot-data", metavar="FILE")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("fit", help="fit a decay model to sweep CSV")
    p.add_argument("--model", choices=lab.MODELS, required=True)
    p.add_argument("--codec", choices=lab.CODECS, default="swlz")
    p.add_argument("--in", dest="input")
    p.add_argument("--out")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("lz78-count", help="LZ78 phrase counts per prefix")
    _add_seq_input(p)
    p.add_argument("--prefixes", type=_int_list)
    p.add_argument("--out")
    p.set_defaults(func=cmd_lz78_count)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "encode-fslz":
        if args.match_length is None and args.law is None:
            args.law = "log"
    try:
        return args.func(args)
    except BrokenPipeError:
        # Downstream closed early (e.g. `| head`); silence the flush at exit.
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0
    except (ValueError, IndexError, KeyError, CodecError, OSError) as exc:
        print(f"lzlab: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
