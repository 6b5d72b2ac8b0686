"""Hot-kernel dispatch: compiled extension when built, numpy fallback otherwise.

Set COHORTDRIFT_PURE_PYTHON=1 to force the fallback (used by the benchmark).
"""

import os

if os.environ.get("COHORTDRIFT_PURE_PYTHON"):
    from cohortdrift.kernels._py import IMPL, binary_hellinger, subset_counts
else:
    try:
        from cohortdrift.kernels._ckernels import (  # type: ignore[attr-defined]
            IMPL,
            binary_hellinger,
            subset_counts,
        )
    except ImportError:
        from cohortdrift.kernels._py import IMPL, binary_hellinger, subset_counts

__all__ = ["IMPL", "binary_hellinger", "subset_counts"]
