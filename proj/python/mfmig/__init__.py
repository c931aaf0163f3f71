"""Python wrapper over the compiled _mfmig extension.

The extension is built by the CMake tree (target _mfmig); point PYTHONPATH at
the build directory, or copy the module next to this package.
"""

from _mfmig import (
    adjusted_rand_index,
    dirichlet_expected_gini,
    fit,
    gig_sample,
    gini_match,
    nigau_expected_gini,
)

__all__ = [
    "adjusted_rand_index",
    "dirichlet_expected_gini",
    "fit",
    "gig_sample",
    "gini_match",
    "nigau_expected_gini",
]
