from .bloom import (BloomFilter, CountingBloomFilter, bloom_contains, bloom_insert,
                    bloom_params, cbf_contains, cbf_counter_bits, cbf_insert, cbf_params,
                    cbf_remove, overflow_bound)
from .quotient import (QuotientFilter, longest_cluster_bound, qf_contains, qf_insert,
                       qf_params, qf_remove, reference_layout)
from .serial import dump_filter, load_filter
