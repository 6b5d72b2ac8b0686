"""Benchmark the compiled kernels against the pure-numpy fallback.

Run with ``python3 benchmarks/bench_kernels.py``. Both implementations are
imported directly (bypassing the dispatch in cohortdrift.kernels) so a single
process can time and cross-check them side by side.
"""

import time

import numpy as np

from cohortdrift.kernels import _py

try:
    from cohortdrift.kernels import _ckernels
except ImportError:
    _ckernels = None


def make_fixture(rng, patients=8360, ndims=15376, density=0.02):
    """Synthetic CSR closure matrix at roughly the documented scale maxima."""
    row_sizes = rng.binomial(ndims, density, size=patients)
    indptr = np.zeros(patients + 1, dtype=np.int64)
    np.cumsum(row_sizes, out=indptr[1:])
    indices = np.empty(indptr[-1], dtype=np.int32)
    for r in range(patients):
        indices[indptr[r]:indptr[r + 1]] = np.sort(
            rng.choice(ndims, size=row_sizes[r], replace=False)
        ).astype(np.int32)
    rows = np.sort(rng.choice(patients, size=patients // 2, replace=False)).astype(np.int64)
    return indptr, indices, rows


def bench(fn, *args, repeat=5):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    rng = np.random.default_rng(0)
    indptr, indices, rows = make_fixture(rng)
    ndims = 15376

    impls = [("python", _py)]
    if _ckernels is not None:
        impls.append(("cython", _ckernels))
    else:
        print("compiled extension not built; benchmarking fallback only")

    print(f"fixture: {len(indptr) - 1} patients, {ndims} dims, "
          f"{len(indices)} nonzeros, subset of {len(rows)} rows\n")

    results = {}
    print("subset_counts (CSR row-subset column sums):")
    for name, mod in impls:
        t, counts = bench(mod.subset_counts, indptr, indices, rows, ndims)
        results[name] = counts
        print(f"  {name:>7}: {t * 1000:8.2f} ms")
    if len(results) == 2:
        assert np.array_equal(results["python"], results["cython"]), "count mismatch"

    count_a = results[impls[-1][0]]
    count_b = _py.subset_counts(indptr, indices, np.setdiff1d(
        np.arange(len(indptr) - 1, dtype=np.int64), rows), ndims)
    n_a, n_b = len(rows), len(indptr) - 1 - len(rows)

    results = {}
    print("\nbinary_hellinger (per-dimension distance):")
    for name, mod in impls:
        t, h = bench(mod.binary_hellinger, count_a, n_a, count_b, n_b)
        results[name] = h
        print(f"  {name:>7}: {t * 1000:8.2f} ms")
    if len(results) == 2:
        assert np.array_equal(results["python"], results["cython"]), "distance mismatch"
        print("\ncross-check: implementations agree bitwise")


if __name__ == "__main__":
    main()
