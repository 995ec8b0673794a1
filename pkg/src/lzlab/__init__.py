"""Window-based Lempel-Ziv codecs on recurrent symbol sources.

Two codecs share one bit-exact frame format: fixed-shift LZ (:mod:`lzlab.fslz`)
and greedy sliding-window LZ (:mod:`lzlab.swlz`). :mod:`lzlab.sources` builds
rotation, periodic and i.i.d. sequences, :mod:`lzlab.recurrence` measures
return times and match lengths, and :mod:`lzlab.lab` runs window sweeps.
"""

from .bitio import (
    BadMagicError,
    Bitstream,
    CodecError,
    FrameHeader,
    MalformedCodeError,
    OffsetRangeError,
    TruncatedStreamError,
    elias_gamma_decode,
    elias_gamma_encode,
)
from .fslz import FslzParams, choose_match_length, fslz_decode, fslz_encode, fslz_rate_report
from .lab import fit_rate, lz78_phrase_count, sweep
from .matching import MatchFinder, longest_match
from .recurrence import ReturnLaw, first_return, match_length, mu_g_estimate
from .sources import (
    Alphabet,
    RotationConfig,
    SymbolSequence,
    diophantine_profile,
    generate_iid,
    generate_periodic,
    generate_rotation,
)
from .swlz import SwlzParams, bad_interval_fraction, swlz_decode, swlz_encode

__version__ = "0.1.0"
