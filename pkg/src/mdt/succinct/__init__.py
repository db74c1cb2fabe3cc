from .bits import PackedBits, PackedIntArray
from .rrr import RsBitvector
from .eliasfano import EliasFano
from .wavelet import WaveletTree, balanced_code
from .serial import dump, load

__all__ = ["PackedBits", "PackedIntArray", "RsBitvector", "EliasFano",
           "WaveletTree", "balanced_code", "dump", "load"]
