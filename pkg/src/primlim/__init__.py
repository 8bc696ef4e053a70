"""Exact counts and growth-constant enclosures for primitive subsets of {1..n}."""

from .antichain import (PosetInstance, count_antichains, count_kcore_subsets,
                        count_primitive_subsets_oracle, is_kcore, is_primitive)
from .arith import (PrimeBasis, SmoothDecomposition, coprime_count, enumerate_smooth,
                    first_primes, smooth_rough_split)
from .errors import ParameterError, ResourceLimitError
from .limits import (AlphaEnclosure, alpha_k_enclosure, finite_n_gap, fn_exact, fnk_product,
                     pk_upper_bound_log2, removal_map, tail_bound_log2)
from .smoothgrid import count_smooth_primitive, pk_table
from .verify import VerificationReport, verify_inequalities

__all__ = [
    "AlphaEnclosure", "ParameterError", "PosetInstance", "PrimeBasis", "ResourceLimitError",
    "SmoothDecomposition", "VerificationReport", "alpha_k_enclosure", "coprime_count",
    "count_antichains", "count_kcore_subsets", "count_primitive_subsets_oracle",
    "count_smooth_primitive", "enumerate_smooth", "finite_n_gap", "first_primes", "fn_exact",
    "fnk_product", "is_kcore", "is_primitive", "pk_table", "pk_upper_bound_log2",
    "removal_map", "smooth_rough_split", "tail_bound_log2", "verify_inequalities",
]
