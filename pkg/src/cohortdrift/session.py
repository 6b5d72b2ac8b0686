"""Analysis session: one dataset, one provenance tree, current settings.

This is the shared core behind both the CLI report and the HTTP service, so
both surfaces return identical numbers. Every mutation is recorded in an
append-only log; replaying a log on a fresh session reproduces all responses.
"""

from __future__ import annotations

import json
from typing import Any

from cohortdrift.cohort import FilterOperator, PatientTable, ProvenanceTree
from cohortdrift.hierarchy import CodeHierarchy, DimensionId
from cohortdrift.ingest import parse_patients
from cohortdrift.layout import (
    aggregate_breadth_first,
    aggregate_depth_first,
    dot_plot,
    expand_group,
    list_rows,
    split_icicle,
)
from cohortdrift.metrics import (
    AggregationSettings,
    DriftProfile,
    compute_drift_profile,
    distribution_pair,
    overlap,
)


def _operator_from_json(step: dict, h: CodeHierarchy) -> FilterOperator:
    kind = step["kind"]
    if kind.startswith("event"):
        target: Any = DimensionId.parse(step["target"])
    else:
        target = step["target"]
    value = step.get("value")
    if kind == "attribute-range" and value is not None:
        value = (value[0], value[1])
    return FilterOperator(kind, target, value)


class AnalysisSession:
    def __init__(self, hierarchy_csv: str, patients_text: str):
        from cohortdrift.hierarchy import load_hierarchy

        base = load_hierarchy(hierarchy_csv)
        self.table: PatientTable = parse_patients(patients_text, base)
        self.hierarchy: CodeHierarchy = self.table.hierarchy
        self.tree = ProvenanceTree(p.id for p in self.table.patients)
        self.settings = AggregationSettings()
        self.log: list[dict] = []
        self._profiles: dict[tuple, DriftProfile] = {}

    # -- mutations ---------------------------------------------------------

    def apply_filter(self, step: dict) -> tuple[int, int]:
        op = _operator_from_json(step, self.hierarchy)
        inc, exc = self.tree.apply_filter(int(step["parent"]), op, self.table, self.hierarchy)
        self.log.append({"op": "filter", **{k: step[k] for k in ("parent", "kind", "target") if k in step}, "value": step.get("value")})
        self._profiles.clear()
        return inc, exc

    def set_baseline(self, cohort_id: int) -> None:
        self.tree.set_baseline(cohort_id)
        self.log.append({"op": "baseline", "cohort": cohort_id})

    def set_focus(self, cohort_id: int) -> None:
        self.tree.set_focus(cohort_id)
        self.log.append({"op": "focus", "cohort": cohort_id})

    def set_settings(self, t_s: float | None = None, method: str | None = None) -> None:
        self.settings = AggregationSettings(
            t_s if t_s is not None else self.settings.t_s,
            method if method is not None else self.settings.method,
            self.settings.manual_salient,
        )
        self.log.append({"op": "settings", "t_s": self.settings.t_s, "method": self.settings.method})
        self._profiles.clear()

    def set_excluded_visible(self, cohort_id: int, flag: bool) -> None:
        self.tree.set_excluded_visible(cohort_id, flag)
        self.log.append({"op": "visibility", "cohort": cohort_id, "visible": flag})

    def promote_salient(self, dim_text: str) -> None:
        dim = DimensionId.parse(dim_text)
        self.hierarchy.node(dim)
        self.settings = self.settings.promote(dim)
        self.log.append({"op": "salient", "dim": dim_text})
        self._profiles.clear()

    def replay(self, log: list[dict]) -> None:
        for entry in log:
            op = entry["op"]
            if op == "filter":
                self.apply_filter(entry)
            elif op == "baseline":
                self.set_baseline(entry["cohort"])
            elif op == "focus":
                self.set_focus(entry["cohort"])
            elif op == "settings":
                self.set_settings(entry.get("t_s"), entry.get("method"))
            elif op == "visibility":
                self.set_excluded_visible(entry["cohort"], entry["visible"])
            elif op == "salient":
                self.promote_salient(entry["dim"])
            else:
                raise ValueError(f"unknown log entry {op!r}")

    # -- queries -----------------------------------------------------------

    def profile(self, baseline: int | None = None, focus: int | None = None) -> DriftProfile:
        b = self.tree.baseline if baseline is None else baseline
        f = self.tree.focus if focus is None else focus
        key = (b, f, self.settings.t_s, self.settings.method, self.settings.manual_salient)
        if key not in self._profiles:
            self._profiles[key] = compute_drift_profile(
                self.tree, b, f, self.table, self.hierarchy, self.settings
            )
        return self._profiles[key]

    def tree_summary(self) -> dict:
        baseline = self.tree.baseline
        h_avg: dict[int, float] = {}
        for cid, cohort in self.tree.cohorts.items():
            if cohort.patient_ids and self.tree.cohort(baseline).patient_ids:
                h_avg[cid] = self.profile(baseline, cid).h_avg
            else:
                h_avg[cid] = 0.0
        nodes = []
        edges = []
        for cid in sorted(self.tree.cohorts):
            c = self.tree.cohorts[cid]
            nodes.append(
                {
                    "id": cid,
                    "parent": c.parent,
                    "size": len(c.patient_ids),
                    "polarity": c.polarity,
                    "visible": c.visible,
                    "operator": c.operator.describe() if c.operator else None,
                    "h_avg": h_avg[cid],
                    "is_baseline": cid == self.tree.baseline,
                    "is_focus": cid == self.tree.focus,
                }
            )
            if c.parent is not None:
                edges.append(
                    {
                        "parent": c.parent,
                        "child": cid,
                        "operator": c.operator.describe() if c.operator else None,
                        "delta_h_avg": h_avg[cid] - h_avg[c.parent],
                    }
                )
        return {"root": self.tree.root, "baseline": self.tree.baseline, "focus": self.tree.focus, "nodes": nodes, "edges": edges}

    def icicle_layout(self, aggregated: bool = True):
        profile = self.profile()
        layout = split_icicle(self.hierarchy, profile)
        if not aggregated:
            return layout
        salient = profile.salient | self.settings.manual_salient
        if self.settings.method == "breadth-first":
            return aggregate_breadth_first(layout, salient, profile)
        return aggregate_depth_first(layout, salient, profile)

    def expanded_group(self, group_id: int) -> list:
        """Classic icicle geometry of one aggregated group's members."""
        return expand_group(self.icicle_layout(aggregated=True), group_id)

    def dotplot_layout(self):
        return dot_plot(self.hierarchy, self.profile(), self.settings)

    def list_layout(self):
        return list_rows(self.profile(), self.hierarchy)

    def overlap_summary(self):
        return overlap(self.tree.cohort(self.tree.baseline), self.tree.cohort(self.tree.focus))

    def dimension_payload(self, system: str, code: str) -> dict:
        dim = DimensionId(system, code)
        self.hierarchy.node(dim)
        base = self.tree.cohort(self.tree.baseline)
        focus = self.tree.cohort(self.tree.focus)
        db, df = distribution_pair(base, focus, dim, self.table, self.hierarchy)
        return {
            "dim": str(dim),
            "label": self.hierarchy.node(dim).label,
            "baseline": {"cohort": base.id, "size": len(base.patient_ids), **db.to_json()},
            "focus": {"cohort": focus.id, "size": len(focus.patient_ids), **df.to_json()},
        }

    def export(self) -> dict:
        return {
            "log": self.log,
            "settings": {
                "t_s": self.settings.t_s,
                "method": self.settings.method,
                "manual_salient": sorted(str(d) for d in self.settings.manual_salient),
            },
        }


def dumps(obj: Any) -> str:
    """Canonical JSON used for all persisted/compared outputs."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))
