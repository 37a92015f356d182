"""
MomentLab core module.

Provides seeded random inputs shared by the verification suites and tests.
"""

from momentlab.core.sampling import (
    divergence_free_field,
    make_rng,
    random_exact_one_form,
    random_field,
    random_one_form,
    random_vector_field,
    stream_rng,
)

__all__ = [
    "divergence_free_field",
    "make_rng",
    "random_exact_one_form",
    "random_field",
    "random_one_form",
    "random_vector_field",
    "stream_rng",
]
