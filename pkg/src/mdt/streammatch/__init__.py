from .kmismatch import KMismatchMatcher, km_push, prime_shift_set
from .kr import KrMatcher, kr_push, naive_hamming_ends, naive_occurrence_ends
from .pp import PpLevel, PpMatcher, make_context, pp_push
