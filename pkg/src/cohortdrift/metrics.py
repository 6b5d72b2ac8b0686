"""Drift mathematics between a baseline and a focus cohort.

Per-dimension distributions (binary presence via ancestor closure, categorical
proportions, shared-bin numeric histograms), Hellinger distance, average drift
with constrained-dimension exclusion, drift gradients, gradient-based saliency,
and cohort overlap classification.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from cohortdrift import kernels
from cohortdrift.cohort import Cohort, PatientTable, ProvenanceTree
from cohortdrift.hierarchy import (
    ATTRIBUTE_ROOT,
    CodeHierarchy,
    DimensionId,
    UnknownDimensionError,
)

PROB_TOL = 1e-9
NUMERIC_BINS = 10


class MetricsError(ValueError):
    pass


class DegenerateDistributionError(MetricsError):
    """Raised when asked for a distribution over an empty cohort."""


@dataclass(frozen=True)
class Distribution:
    kind: str  # "binary" | "categorical" | "numeric-binned"
    support: tuple[str, ...]
    probs: tuple[float, ...]
    counts: tuple[int, ...] = ()

    def __post_init__(self):
        if abs(sum(self.probs) - 1.0) > PROB_TOL:
            raise MetricsError(f"probabilities sum to {sum(self.probs)}, not 1")
        if any(p < 0 for p in self.probs):
            raise MetricsError("negative probability")

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "support": list(self.support),
            "probs": list(self.probs),
            "counts": list(self.counts),
        }


def hellinger(p: Distribution, q: Distribution) -> float:
    """Hellinger distance between two distributions on identical support."""
    if p.support != q.support:
        raise MetricsError(f"mismatched support: {p.support} vs {q.support}")
    total = sum(
        (math.sqrt(pi) - math.sqrt(qi)) ** 2 for pi, qi in zip(p.probs, q.probs)
    )
    return min(math.sqrt(0.5 * total), 1.0)


def binary_distribution(present: int, total: int) -> Distribution:
    if total <= 0:
        raise DegenerateDistributionError("empty cohort")
    p = present / total
    return Distribution("binary", ("present", "absent"), (p, 1.0 - p), (present, total - present))


def _numeric_bin_edges(values: np.ndarray, nbins: int = NUMERIC_BINS) -> np.ndarray:
    lo, hi = float(values.min()), float(values.max())
    if lo == hi:
        hi = lo + 1.0
    return np.linspace(lo, hi, nbins + 1)


def dimension_distribution(
    cohort: Cohort,
    dim: DimensionId,
    patients: PatientTable,
    h: CodeHierarchy,
    bin_edges: np.ndarray | None = None,
) -> Distribution:
    """Distribution of one dimension within a cohort.

    Event codes are binary (present/absent by closure). Categorical attributes
    use the declared category order; numeric attributes are binned, with
    ``bin_edges`` supplied by the caller when two cohorts must share support.
    """
    if dim not in h:
        raise UnknownDimensionError(str(dim))
    n = len(cohort.patient_ids)
    if n == 0:
        raise DegenerateDistributionError(f"cohort {cohort.id} is empty")

    if not h.is_attribute(dim):
        idx = h.index[dim]
        present = sum(
            1 for pid in cohort.patient_ids if patients.closure_contains(pid, idx)
        )
        return binary_distribution(present, n)

    spec = h.attribute(dim.code)
    values = [patients.patient(pid).attributes.get(spec.name) for pid in cohort.patient_ids]
    if spec.kind == "categorical":
        counts = [sum(1 for v in values if v == c) for c in spec.categories]
        return Distribution(
            "categorical",
            spec.categories,
            tuple(c / n for c in counts),
            tuple(counts),
        )

    arr = np.asarray([float(v) for v in values if v is not None], dtype=np.float64)
    if arr.size == 0:
        raise DegenerateDistributionError(f"no numeric values for {spec.name}")
    edges = _numeric_bin_edges(arr) if bin_edges is None else np.asarray(bin_edges)
    counts, _ = np.histogram(arr, bins=edges)
    support = tuple(f"[{edges[i]:g}, {edges[i + 1]:g})" for i in range(len(edges) - 1))
    return Distribution(
        "numeric-binned",
        support,
        tuple(c / arr.size for c in counts.tolist()),
        tuple(counts.tolist()),
    )


def distribution_pair(
    baseline: Cohort,
    focus: Cohort,
    dim: DimensionId,
    patients: PatientTable,
    h: CodeHierarchy,
) -> tuple[Distribution, Distribution]:
    """Distributions for both cohorts on shared support (shared bins for numerics)."""
    edges = None
    if h.is_attribute(dim) and h.attribute(dim.code).kind == "numeric":
        vals = [
            float(v)
            for pid in baseline.patient_ids | focus.patient_ids
            for v in [patients.patient(pid).attributes.get(dim.code)]
            if v is not None
        ]
        if not vals:
            raise DegenerateDistributionError(f"no numeric values for {dim.code}")
        edges = _numeric_bin_edges(np.asarray(vals))
    return (
        dimension_distribution(baseline, dim, patients, h, edges),
        dimension_distribution(focus, dim, patients, h, edges),
    )


@dataclass(frozen=True)
class AggregationSettings:
    t_s: float = 0.05
    method: str = "breadth-first"  # "breadth-first" | "depth-first"
    manual_salient: frozenset[DimensionId] = frozenset()

    def __post_init__(self):
        if not 0.0 <= self.t_s <= 1.0:
            raise MetricsError(f"t_s must be in [0, 1], got {self.t_s}")
        if self.method not in ("breadth-first", "depth-first"):
            raise MetricsError(f"unknown aggregation method {self.method!r}")

    def promote(self, dim: DimensionId) -> "AggregationSettings":
        return AggregationSettings(self.t_s, self.method, self.manual_salient | {dim})


@dataclass
class DriftProfile:
    baseline: int
    focus: int
    per_dim: dict[DimensionId, float]
    gradients: dict[tuple[DimensionId, DimensionId], float]  # (child, parent) -> dH
    salient: set[DimensionId]
    constrained_explicit: set[DimensionId]
    constrained_descendants: set[DimensionId]
    h_avg: float
    color_max: float
    warnings: list[str] = field(default_factory=list)

    @property
    def constrained(self) -> set[DimensionId]:
        return self.constrained_explicit | self.constrained_descendants

    def gradient(self, child: DimensionId, parent: DimensionId) -> float:
        try:
            return self.gradients[(child, parent)]
        except KeyError:
            raise MetricsError(f"{child} is not a hierarchy child of {parent}") from None

    def to_json(self) -> dict:
        return {
            "baseline": self.baseline,
            "focus": self.focus,
            "per_dim": {str(d): v for d, v in sorted(self.per_dim.items())},
            "gradients": [
                {"child": str(c), "parent": str(p), "delta": v}
                for (c, p), v in sorted(self.gradients.items())
            ],
            "salient": sorted(str(d) for d in self.salient),
            "constrained_explicit": sorted(str(d) for d in self.constrained_explicit),
            "constrained_descendants": sorted(str(d) for d in self.constrained_descendants),
            "h_avg": self.h_avg,
            "color_max": self.color_max,
            "warnings": list(self.warnings),
        }


def salient_set(
    per_dim: dict[DimensionId, float],
    h: CodeHierarchy,
    t_s: float,
    manual: frozenset[DimensionId] = frozenset(),
) -> set[DimensionId]:
    """Dimensions whose drift rose >= t_s above the parent, or with a child
    whose drift fell >= t_s below them. Roots use only the child clause,
    leaves only the parent clause."""
    out: set[DimensionId] = set(manual)
    for dim, value in per_dim.items():
        node = h.node(dim)
        if node.parent is not None and value - per_dim[node.parent] >= t_s:
            out.add(dim)
            continue
        if any(per_dim[c] - value <= -t_s for c in h.children(dim)):
            out.add(dim)
    return out


def compute_drift_profile(
    tree: ProvenanceTree,
    baseline_id: int,
    focus_id: int,
    patients: PatientTable,
    h: CodeHierarchy,
    settings: AggregationSettings | None = None,
) -> DriftProfile:
    """Full per-dimension drift profile between two cohorts.

    Event dimensions go through the compiled counting/Hellinger kernels over
    the closure matrix; attribute dimensions are computed individually.
    H_avg and color_max exclude the union of constraints along both cohorts'
    root paths (and their descendants).
    """
    settings = settings or AggregationSettings()
    baseline = tree.cohort(baseline_id)
    focus = tree.cohort(focus_id)
    if not baseline.patient_ids or not focus.patient_ids:
        raise MetricsError("cannot compare empty cohorts")

    ndims = len(h.dims)
    rows_b = patients.rows(baseline.patient_ids)
    rows_f = patients.rows(focus.patient_ids)
    counts_b = kernels.subset_counts(patients.indptr, patients.indices, rows_b, ndims)
    counts_f = kernels.subset_counts(patients.indptr, patients.indices, rows_f, ndims)
    h_values = kernels.binary_hellinger(
        counts_b, float(len(rows_b)), counts_f, float(len(rows_f))
    )

    per_dim: dict[DimensionId, float] = {}
    warnings: list[str] = []
    for dim in h.dims:
        if h.is_attribute(dim):
            try:
                db, df = distribution_pair(baseline, focus, dim, patients, h)
                per_dim[dim] = hellinger(db, df)
            except DegenerateDistributionError as exc:
                per_dim[dim] = 0.0
                warnings.append(str(exc))
        elif dim == ATTRIBUTE_ROOT:
            per_dim[dim] = 0.0
        else:
            per_dim[dim] = float(h_values[h.index[dim]])

    gradients = {
        (dim, node.parent): per_dim[dim] - per_dim[node.parent]
        for dim, node in h.nodes.items()
        if node.parent is not None
    }

    expl_b, desc_b = tree.constrained_dimensions(baseline_id, h)
    expl_f, desc_f = tree.constrained_dimensions(focus_id, h)
    explicit = expl_b | expl_f
    descendants = (desc_b | desc_f) - explicit

    excluded = explicit | descendants
    free = [per_dim[d] for d in h.dims if d not in excluded]
    if free:
        h_avg = float(sum(free) / len(free))
        color_max = float(max(free))
    else:
        h_avg = 0.0
        color_max = 0.0
        warnings.append("all dimensions constrained; H_avg defined as 0")

    salient = salient_set(per_dim, h, settings.t_s, settings.manual_salient)
    return DriftProfile(
        baseline=baseline_id,
        focus=focus_id,
        per_dim=per_dim,
        gradients=gradients,
        salient=salient,
        constrained_explicit=explicit,
        constrained_descendants=descendants,
        h_avg=h_avg,
        color_max=color_max,
        warnings=warnings,
    )


def avg_hellinger(profile: DriftProfile) -> float:
    """H_avg recomputed from a profile's own per-dimension values."""
    free = [v for d, v in profile.per_dim.items() if d not in profile.constrained]
    return float(sum(free) / len(free)) if free else 0.0


@dataclass(frozen=True)
class OverlapSummary:
    size_a: int
    size_b: int
    size_intersection: int
    relationship: str  # "subset" | "partial" | "disjoint"

    def to_json(self) -> dict:
        return {
            "size_a": self.size_a,
            "size_b": self.size_b,
            "size_intersection": self.size_intersection,
            "relationship": self.relationship,
        }


def overlap(a: Cohort, b: Cohort) -> OverlapSummary:
    inter = len(a.patient_ids & b.patient_ids)
    if inter == 0:
        rel = "disjoint"
    elif inter == min(len(a.patient_ids), len(b.patient_ids)):
        rel = "subset"
    else:
        rel = "partial"
    return OverlapSummary(len(a.patient_ids), len(b.patient_ids), inter, rel)
