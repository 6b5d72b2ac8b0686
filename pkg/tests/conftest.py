import json

import pytest

from cohortdrift.hierarchy import CodeHierarchy, DimensionId, load_hierarchy
from cohortdrift.metrics import DriftProfile, salient_set

H1_CSV = """system,code,parent,label
icd,R,,Root
icd,A,R,Branch A
icd,B,R,Branch B
icd,A1,A,Leaf A1
icd,A2,A,Leaf A2
icd,B1,B,Leaf B1
"""


def dim(code: str, system: str = "icd") -> DimensionId:
    return DimensionId(system, code)


@pytest.fixture
def h1() -> CodeHierarchy:
    return load_hierarchy(H1_CSV)


def h1_patients_text() -> str:
    """10 patients over H1: 5 carry B1 (3 also A1, 2 also A2), 5 carry bare B."""
    recs = []
    for i in range(10):
        events = []
        if i < 5:
            events.append("icd:B1")
        else:
            events.append("icd:B")
        if i < 3:
            events.append("icd:A1")
        elif i < 5:
            events.append("icd:A2")
        recs.append(
            {
                "id": f"p{i}",
                "attributes": {"Gender": "Male", "Age": 20 + 6 * i},
                "events": events,
            }
        )
    return "\n".join(json.dumps(r) for r in recs) + "\n"


def make_hierarchy(edges: dict[str, str | None], system: str = "x") -> CodeHierarchy:
    """Build a hierarchy from {code: parent_code_or_None}."""
    lines = ["system,code,parent,label"]
    for code, parent in edges.items():
        lines.append(f"{system},{code},{parent or ''},{code}")
    return load_hierarchy("\n".join(lines) + "\n")


def make_profile(
    h: CodeHierarchy,
    values: dict[str, float],
    constrained: set[str] = frozenset(),
    t_s: float = 0.05,
    system: str = "x",
) -> DriftProfile:
    """Profile built directly from per-dimension values (no cohorts involved)."""
    per_dim = {DimensionId(system, c): v for c, v in values.items()}
    assert set(per_dim) == set(h.dims), "values must cover every dim"
    explicit = {DimensionId(system, c) for c in constrained}
    descendants = set()
    for d in explicit:
        descendants |= h.descendants(d)
    descendants -= explicit
    gradients = {
        (d, n.parent): per_dim[d] - per_dim[n.parent]
        for d, n in h.nodes.items()
        if n.parent is not None
    }
    free = [v for d, v in per_dim.items() if d not in explicit | descendants]
    return DriftProfile(
        baseline=0,
        focus=0,
        per_dim=per_dim,
        gradients=gradients,
        salient=salient_set(per_dim, h, t_s),
        constrained_explicit=explicit,
        constrained_descendants=descendants,
        h_avg=sum(free) / len(free) if free else 0.0,
        color_max=max(free) if free else 0.0,
    )


def pytest_terminal_summary(terminalreporter):
    """Re-emit the per-criterion acceptance lines past output capture."""
    import sys

    lines = []
    for name, module in sys.modules.items():
        if name.rpartition(".")[2] == "test_acceptance":
            lines.extend(getattr(module, "CRITERION_LINES", []))
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
