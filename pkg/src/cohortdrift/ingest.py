"""Dataset ingest: patient file parsing, validation, and synthetic generation.

The synthetic generator plants pairwise correlations between event codes via a
joint Bernoulli whose cell probabilities are solved from the target phi
coefficient, and is bit-reproducible per seed (numpy PCG64).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from cohortdrift.cohort import Patient, PatientTable
from cohortdrift.hierarchy import (
    ATTRIBUTE_SYSTEM,
    AttributeSpec,
    CodeHierarchy,
    CodeNode,
    DimensionId,
    HierarchyError,
    load_hierarchy,
)

UNKNOWN_ROOT_CODE = "__unknown__"


class IngestError(ValueError):
    pass


def parse_patient_records(content: str) -> list[dict]:
    """Syntactic parse of the newline-delimited patient format."""
    records = []
    for lineno, line in enumerate(content.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise IngestError(f"line {lineno}: malformed record: {exc}") from None
        for key in ("id", "attributes", "events"):
            if key not in rec:
                raise IngestError(f"line {lineno}: missing field {key!r}")
        records.append(rec)
    return records


def _record_to_patient(rec: dict) -> Patient:
    events = frozenset(DimensionId.parse(e) for e in rec["events"])
    return Patient(str(rec["id"]), dict(rec["attributes"]), events)


def infer_attribute_specs(records: list[dict]) -> list[AttributeSpec]:
    """Categorical unless every observed value is numeric."""
    values: dict[str, list] = {}
    for rec in records:
        for name, v in rec["attributes"].items():
            values.setdefault(name, []).append(v)
    specs = []
    for name in sorted(values):
        vals = [v for v in values[name] if v is not None]
        if vals and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in vals):
            specs.append(
                AttributeSpec(name, "numeric", numeric_range=(float(min(vals)), float(max(vals))))
            )
        else:
            cats = tuple(sorted({str(v) for v in vals}))
            specs.append(AttributeSpec(name, "categorical", categories=cats))
    return specs


def parse_patients(
    content: str, h: CodeHierarchy, attach_unknown: bool = False
) -> PatientTable:
    """Parse and validate a patient file against a hierarchy.

    Unknown event codes are an error in strict mode (the default); with
    attach_unknown they are grafted under a per-system synthetic root instead
    of being silently dropped.
    """
    records = parse_patient_records(content)
    patients = [_record_to_patient(r) for r in records]

    known = set(h.nodes)
    missing = sorted({e for p in patients for e in p.events if e not in known})
    if missing and not attach_unknown:
        raise IngestError(f"unknown code(s) not in hierarchy: {', '.join(map(str, missing))}")
    if missing:
        nodes = dict(h.nodes)
        roots = list(h.roots)
        for dim in missing:
            root = DimensionId(dim.system, UNKNOWN_ROOT_CODE)
            if root not in nodes:
                nodes[root] = CodeNode(root, "Unknown", None, 0)
                roots.append(root)
            nodes[dim] = CodeNode(dim, dim.code, root, 1)
        h = CodeHierarchy(nodes, sorted(roots), h.attribute_dims)

    if h.attribute_dims:
        hierarchy = h
    else:
        hierarchy = h.with_attributes(infer_attribute_specs(records))
    return PatientTable(patients, hierarchy)


def serialize_patients(table: PatientTable) -> str:
    lines = []
    for p in table.patients:
        lines.append(
            json.dumps(
                {
                    "id": p.id,
                    "attributes": p.attributes,
                    "events": sorted(str(e) for e in p.events),
                },
                sort_keys=True,
            )
        )
    return "\n".join(lines) + "\n"


def validate_dataset(h: CodeHierarchy, records: list[dict]) -> dict:
    """Report-only diagnostics: counts, distinct codes per system, problems."""
    diagnostics = []
    seen_ids = set()
    codes_by_system: dict[str, set[str]] = {}
    for rec in records:
        pid = str(rec["id"])
        if pid in seen_ids:
            diagnostics.append(f"duplicate patient id {pid!r}")
        seen_ids.add(pid)
        for text in rec["events"]:
            try:
                dim = DimensionId.parse(text)
            except ValueError:
                diagnostics.append(f"patient {pid!r}: malformed code {text!r}")
                continue
            codes_by_system.setdefault(dim.system, set()).add(dim.code)
            if dim not in h:
                diagnostics.append(f"patient {pid!r}: unknown code {dim}")
    hierarchy_counts = {}
    for dim in h.dims:
        if dim.system != ATTRIBUTE_SYSTEM:
            hierarchy_counts[dim.system] = hierarchy_counts.get(dim.system, 0) + 1
    return {
        "patients": len(records),
        "distinct_event_types": {s: len(c) for s, c in sorted(codes_by_system.items())},
        "hierarchy_nodes": hierarchy_counts,
        "diagnostics": diagnostics,
    }


DEFAULT_ATTRIBUTES = [
    AttributeSpec("Gender", "categorical", categories=("Female", "Male")),
    AttributeSpec("Race", "categorical", categories=("Asian", "Black", "Other", "White")),
    AttributeSpec("Age", "numeric", numeric_range=(18.0, 90.0)),
]


@dataclass(frozen=True)
class SyntheticSpec:
    seed: int = 0
    patients: int = 1000
    systems: int = 2
    branching: int = 3
    depth: int = 3
    correlations: tuple[tuple[str, str, float], ...] = ()
    attributes: tuple[AttributeSpec, ...] = field(
        default_factory=lambda: tuple(DEFAULT_ATTRIBUTES)
    )
    prevalence_range: tuple[float, float] = (0.05, 0.4)

    def __post_init__(self):
        if self.patients <= 0 or self.systems <= 0 or self.branching <= 0 or self.depth <= 0:
            raise IngestError("counts must be positive")
        for a, b, s in self.correlations:
            if not -1.0 <= s <= 1.0:
                raise IngestError(f"correlation strength {s} outside [-1, 1]")

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "patients": self.patients,
            "systems": self.systems,
            "branching": self.branching,
            "depth": self.depth,
            "correlations": [list(c) for c in self.correlations],
            "attributes": [
                {
                    "name": a.name,
                    "kind": a.kind,
                    "categories": list(a.categories),
                    "numeric_range": list(a.numeric_range) if a.numeric_range else None,
                }
                for a in self.attributes
            ],
            "prevalence_range": list(self.prevalence_range),
        }


def synthetic_hierarchy(spec: SyntheticSpec) -> CodeHierarchy:
    """Complete trees: one per system, branching^depth leaves each."""
    rows = ["system,code,parent,label"]
    for s in range(spec.systems):
        system = f"sys{s}"
        rows.append(f"{system},r,,{system} root")

        def emit(code: str, level: int):
            if level == spec.depth:
                return
            for i in range(spec.branching):
                child = f"{code}.{i}"
                rows.append(f"{system},{child},{code},{system} {child}")
                emit(child, level + 1)

        emit("r", 0)
    return load_hierarchy("\n".join(rows) + "\n")


def synthetic_leaves(spec: SyntheticSpec, system: int = 0) -> list[DimensionId]:
    h = synthetic_hierarchy(spec)
    return [d for d in h.leaves() if d.system == f"sys{system}"]


def _joint_bernoulli_cells(pa: float, pb: float, phi: float) -> tuple[float, float, float, float]:
    """Cell probabilities (p11, p10, p01, p00) realizing marginals and phi."""
    p11 = phi * math.sqrt(pa * (1 - pa) * pb * (1 - pb)) + pa * pb
    lo, hi = max(0.0, pa + pb - 1.0), min(pa, pb)
    if not lo - 1e-12 <= p11 <= hi + 1e-12:
        raise IngestError(
            f"infeasible correlation {phi} for marginals ({pa:.3f}, {pb:.3f})"
        )
    p11 = min(max(p11, lo), hi)
    return p11, pa - p11, pb - p11, 1.0 - pa - pb + p11


def generate_synthetic(spec: SyntheticSpec) -> tuple[CodeHierarchy, PatientTable]:
    """Deterministic synthetic dataset with planted pairwise correlations."""
    rng = np.random.default_rng(spec.seed)
    h = synthetic_hierarchy(spec)
    leaves = h.leaves()
    n = spec.patients

    prevalence = {
        leaf: float(rng.uniform(*spec.prevalence_range)) for leaf in leaves
    }

    # Correlated pairs get equal marginals at a level where the full
    # requested phi range stays feasible under the Frechet bounds.
    p_corr = min(0.5, max(0.3, sum(spec.prevalence_range) / 2))
    correlated: dict[DimensionId, np.ndarray] = {}
    for a_text, b_text, strength in spec.correlations:
        a, b = DimensionId.parse(a_text), DimensionId.parse(b_text)
        for d in (a, b):
            if d not in h:
                raise IngestError(f"correlation references unknown code {d}")
            if d in correlated:
                raise IngestError(f"code {d} used in more than one correlation")
            prevalence[d] = p_corr
        p11, p10, p01, _ = _joint_bernoulli_cells(prevalence[a], prevalence[b], strength)
        u = rng.random(n)
        correlated[a] = u < p11 + p10
        correlated[b] = (u < p11) | ((u >= p11 + p10) & (u < p11 + p10 + p01))

    presence = np.empty((n, len(leaves)), dtype=bool)
    for j, leaf in enumerate(leaves):
        presence[:, j] = (
            correlated[leaf] if leaf in correlated else rng.random(n) < prevalence[leaf]
        )

    attr_values: dict[str, list] = {}
    for a in spec.attributes:
        if a.kind == "categorical":
            attr_values[a.name] = [
                a.categories[i] for i in rng.integers(0, len(a.categories), n)
            ]
        else:
            lo, hi = a.numeric_range or (0.0, 1.0)
            attr_values[a.name] = [float(round(v, 1)) for v in rng.uniform(lo, hi, n)]

    patients = []
    for i in range(n):
        events = frozenset(leaves[j] for j in np.nonzero(presence[i])[0])
        attributes = {name: attr_values[name][i] for name in attr_values}
        patients.append(Patient(f"p{i:06d}", attributes, events))

    hierarchy = h.with_attributes(list(spec.attributes))
    return hierarchy, PatientTable(patients, hierarchy)
