"""Pure-numpy implementations of the hot kernels.

Used when the compiled extension is unavailable; must match it bitwise.
"""

import numpy as np

IMPL = "python"


def subset_counts(indptr, indices, rows, ndims):
    """Column sums of a CSR boolean matrix restricted to ``rows``.

    indptr/indices describe per-patient closure presence; the result is the
    per-dimension presence count within the patient subset.
    """
    counts = np.zeros(ndims, dtype=np.int64)
    for r in rows:
        counts[indices[indptr[r]:indptr[r + 1]]] += 1
    return counts


def binary_hellinger(count_a, n_a, count_b, n_b):
    """Per-dimension Hellinger distance between binary presence distributions.

    count_* are presence counts, n_* the cohort sizes. Evaluates
    sqrt(0.5 * ((sqrt(p)-sqrt(q))^2 + (sqrt(1-p)-sqrt(1-q))^2)) per entry.
    """
    p = np.asarray(count_a, dtype=np.float64) / n_a
    q = np.asarray(count_b, dtype=np.float64) / n_b
    s = (np.sqrt(p) - np.sqrt(q)) ** 2 + (np.sqrt(1.0 - p) - np.sqrt(1.0 - q)) ** 2
    h = np.sqrt(0.5 * s)
    return np.minimum(h, 1.0)
