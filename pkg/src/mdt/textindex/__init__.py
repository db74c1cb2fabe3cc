from .suffix import (sa_build, bwt_from_text, bwt_invert, prepare_text, suffix_array,
                     inverse_sa, naive_occurrences, naive_suffix_array)
from .fm import FmIndex
from .csa import CsaIndex
from .serial import dump_index, load_index

__all__ = ["sa_build", "bwt_from_text", "bwt_invert", "prepare_text", "suffix_array",
           "inverse_sa", "naive_occurrences", "naive_suffix_array", "FmIndex",
           "CsaIndex", "dump_index", "load_index"]
