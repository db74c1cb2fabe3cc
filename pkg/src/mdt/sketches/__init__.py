from .counters import (Boosted, BoostConfig, DistinctCounter, MorrisCounter, boost_mean_median,
                       bottom_k_size, distinct_estimate, distinct_offer, fm_single_estimate,
                       lower_median, mean_copies, mean_median, median_copies, morris_estimate,
                       morris_tick)
from .dgim import (DgimSum, DgimWindow, bit_planes, check_rules, dgim_count, dgim_push,
                   dgim_sum, dgim_sum_push)
from .lsh import LshIndex, lsh_fit_r, lsh_insert, lsh_query, lsh_scurve
from .minhash import (MinHashSketch, hamming_estimate, jaccard_estimate, jaccard_exact,
                      minhash_build, minhash_k, minhash_merge)
from .serial import dump_sketch, load_sketch
