"""Patient data model, filter operators, and the cohort provenance tree.

A filter applied to a parent cohort always produces an included/excluded pair
that partitions the parent. Event filters match against the ancestor closure
of each patient's recorded codes, so filtering on a generic code also matches
patients carrying only more specific descendants.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable

import numpy as np

from cohortdrift.hierarchy import (
    AttributeSpec,
    CodeHierarchy,
    DimensionId,
    UnknownDimensionError,
)


class CohortError(ValueError):
    pass


class UnknownCohortError(KeyError):
    pass


@dataclass(frozen=True)
class Patient:
    id: str
    attributes: dict[str, object]
    events: frozenset[DimensionId]


class PatientTable:
    """Immutable patient set bound to a hierarchy.

    Precomputes the closure presence matrix (CSR over hierarchy dim indices)
    once; cohort-level presence counts are then cheap row-subset column sums.
    """

    def __init__(self, patients: list[Patient], hierarchy: CodeHierarchy):
        self.hierarchy = hierarchy
        self.patients = list(patients)
        self.row_of = {p.id: i for i, p in enumerate(self.patients)}
        if len(self.row_of) != len(self.patients):
            raise CohortError("duplicate patient id")
        for p in self.patients:
            for e in p.events:
                if e not in hierarchy:
                    raise UnknownDimensionError(str(e))

        # Closure presence lives only in the CSR arrays: numpy storage keeps
        # the (potentially large) per-patient sets off the cyclic-GC heap.
        index = hierarchy.index
        indptr = np.zeros(len(self.patients) + 1, dtype=np.int64)
        chunks = []
        for i, p in enumerate(self.patients):
            clo = hierarchy.closure(p.events)
            idx = np.sort(np.fromiter((index[d] for d in clo), dtype=np.int32, count=len(clo)))
            chunks.append(idx)
            indptr[i + 1] = indptr[i] + len(idx)
        self.indptr = indptr
        self.indices = (
            np.concatenate(chunks) if chunks else np.empty(0, dtype=np.int32)
        )

    def __len__(self) -> int:
        return len(self.patients)

    def patient(self, pid: str) -> Patient:
        try:
            return self.patients[self.row_of[pid]]
        except KeyError:
            raise CohortError(f"unknown patient {pid!r}") from None

    def closure_of(self, pid: str) -> frozenset[DimensionId]:
        row = self.row_of[pid]
        dims = self.hierarchy.dims
        return frozenset(
            dims[i] for i in self.indices[self.indptr[row]:self.indptr[row + 1]]
        )

    def closure_contains(self, pid: str, dim_index: int) -> bool:
        """Membership test against the CSR row, without materializing the set."""
        row = self.row_of[pid]
        lo, hi = self.indptr[row], self.indptr[row + 1]
        at = np.searchsorted(self.indices[lo:hi], dim_index)
        return bool(at < hi - lo and self.indices[lo + at] == dim_index)

    def rows(self, patient_ids: Iterable[str]) -> np.ndarray:
        return np.fromiter(sorted(self.row_of[p] for p in patient_ids), dtype=np.int64)


FILTER_KINDS = ("attribute-equals", "attribute-range", "event-present", "event-absent")


@dataclass(frozen=True)
class FilterOperator:
    kind: str
    target: str | DimensionId  # attribute name or event DimensionId
    value: object = None  # category label, (lo, hi) interval, or None

    def __post_init__(self):
        if self.kind not in FILTER_KINDS:
            raise CohortError(f"unknown filter kind {self.kind!r}")
        if self.kind.startswith("attribute"):
            if not isinstance(self.target, str):
                raise CohortError("attribute filters target an attribute name")
            if self.kind == "attribute-range":
                lo, hi = self.value  # type: ignore[misc]
                if not lo <= hi:
                    raise CohortError(f"empty interval ({lo}, {hi})")
        else:
            if not isinstance(self.target, DimensionId):
                raise CohortError("event filters target a DimensionId")

    def matches(self, patient: Patient, closure: frozenset[DimensionId]) -> bool:
        if self.kind == "event-present":
            return self.target in closure
        if self.kind == "event-absent":
            return self.target not in closure
        value = patient.attributes.get(self.target)
        if self.kind == "attribute-equals":
            return value == self.value
        lo, hi = self.value  # type: ignore[misc]
        return value is not None and lo <= value <= hi

    def target_dimension(self, h: CodeHierarchy) -> DimensionId:
        if isinstance(self.target, DimensionId):
            if self.target not in h:
                raise UnknownDimensionError(str(self.target))
            return self.target
        return h.attribute_dim(self.target)

    def describe(self) -> str:
        if self.kind == "attribute-equals":
            return f"{self.target} = {self.value}"
        if self.kind == "attribute-range":
            lo, hi = self.value  # type: ignore[misc]
            return f"{self.target} in [{lo}, {hi}]"
        verb = "has" if self.kind == "event-present" else "lacks"
        return f"{verb} {self.target}"


@dataclass(frozen=True)
class Cohort:
    id: int
    patient_ids: frozenset[str]
    parent: int | None = None
    operator: FilterOperator | None = None
    polarity: str = "included"  # "included" | "excluded"
    visible: bool = True


class ProvenanceTree:
    """Tree of cohorts with baseline/focus markers.

    The root cohort is the full queried population; ids increase monotonically
    so "most recently created" is well defined for the default focus.
    """

    def __init__(self, root_patient_ids: Iterable[str]):
        root = Cohort(id=0, patient_ids=frozenset(root_patient_ids))
        self.cohorts: dict[int, Cohort] = {0: root}
        self.root = 0
        self.baseline = 0
        self.focus = 0
        self._next_id = 1

    def cohort(self, cohort_id: int) -> Cohort:
        try:
            return self.cohorts[cohort_id]
        except KeyError:
            raise UnknownCohortError(cohort_id) from None

    def children(self, cohort_id: int) -> list[Cohort]:
        self.cohort(cohort_id)
        return [c for c in self.cohorts.values() if c.parent == cohort_id]

    def apply_filter(
        self,
        parent: int,
        op: FilterOperator,
        patients: PatientTable,
        h: CodeHierarchy,
    ) -> tuple[int, int]:
        """Partition the parent cohort under op; returns (included, excluded) ids.

        Focus moves to the new included cohort; the excluded cohort starts
        hidden.
        """
        parent_cohort = self.cohort(parent)
        target = op.target_dimension(h)  # validates against the hierarchy

        if op.kind in ("event-present", "event-absent"):
            # Vectorized membership over the CSR closure matrix.
            idx = h.index[target]
            pos = np.flatnonzero(patients.indices == idx)
            rows_with = np.searchsorted(patients.indptr, pos, side="right") - 1
            carriers = {patients.patients[r].id for r in rows_with.tolist()}
            hits = parent_cohort.patient_ids & carriers
            if op.kind == "event-absent":
                hits = parent_cohort.patient_ids - hits
            included_ids, excluded_ids = hits, parent_cohort.patient_ids - hits
        else:
            included_ids, excluded_ids = set(), set()
            for pid in parent_cohort.patient_ids:
                p = patients.patient(pid)
                if op.matches(p, frozenset()):
                    included_ids.add(pid)
                else:
                    excluded_ids.add(pid)

        inc = Cohort(self._next_id, frozenset(included_ids), parent, op, "included", True)
        exc = Cohort(self._next_id + 1, frozenset(excluded_ids), parent, op, "excluded", False)
        self._next_id += 2
        self.cohorts[inc.id] = inc
        self.cohorts[exc.id] = exc
        self.focus = inc.id
        return inc.id, exc.id

    def set_baseline(self, cohort_id: int) -> None:
        self.cohort(cohort_id)
        self.baseline = cohort_id

    def set_focus(self, cohort_id: int) -> None:
        self.cohort(cohort_id)
        self.focus = cohort_id

    def sibling_excluded(self, cohort_id: int) -> Cohort:
        """The excluded cohort of the filter edge that created cohort_id."""
        c = self.cohort(cohort_id)
        if c.operator is None:
            raise CohortError("root cohort has no filter edge")
        if c.polarity == "excluded":
            return c
        for other in self.cohorts.values():
            if other.parent == c.parent and other.operator is c.operator and other.polarity == "excluded":
                return other
        raise CohortError(f"no excluded sibling for cohort {cohort_id}")

    def set_excluded_visible(self, cohort_id: int, flag: bool) -> None:
        exc = self.sibling_excluded(cohort_id)
        self.cohorts[exc.id] = replace(exc, visible=flag)

    def path_to_root(self, cohort_id: int) -> list[Cohort]:
        """Cohorts from cohort_id up to (and including) the root."""
        c = self.cohort(cohort_id)
        path = [c]
        while c.parent is not None:
            c = self.cohorts[c.parent]
            path.append(c)
        return path

    def constrained_dimensions(
        self, cohort_id: int, h: CodeHierarchy
    ) -> tuple[set[DimensionId], set[DimensionId]]:
        """(explicit targets on the root path, plus all their hierarchy descendants)."""
        explicit: set[DimensionId] = set()
        for c in self.path_to_root(cohort_id):
            if c.operator is not None:
                explicit.add(c.operator.target_dimension(h))
        with_desc = set(explicit)
        for dim in explicit:
            with_desc |= h.descendants(dim)
        return explicit, with_desc
