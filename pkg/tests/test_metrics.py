import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cohortdrift.cohort import FilterOperator, ProvenanceTree
from cohortdrift.ingest import parse_patients
from cohortdrift.kernels import _py as py_kernels
from cohortdrift.metrics import (
    AggregationSettings,
    DegenerateDistributionError,
    Distribution,
    MetricsError,
    avg_hellinger,
    binary_distribution,
    compute_drift_profile,
    dimension_distribution,
    distribution_pair,
    hellinger,
    overlap,
    salient_set,
)
from tests.conftest import dim, h1_patients_text, make_hierarchy, make_profile


def oracle_hellinger(p, q):
    """Independent direct evaluation: sqrt(1/2 sum (sqrt(p_i)-sqrt(q_i))^2)."""
    return math.sqrt(0.5 * sum((math.sqrt(a) - math.sqrt(b)) ** 2 for a, b in zip(p, q)))


def binary(p):
    return Distribution("binary", ("present", "absent"), (p, 1.0 - p))


def test_hellinger_identity():
    assert hellinger(binary(0.5), binary(0.5)) == 0.0


def test_hellinger_maximal():
    assert hellinger(binary(1.0), binary(0.0)) == pytest.approx(1.0, abs=1e-12)


def test_hellinger_use_case_prevalences():
    # 59% (133 of 227) vs 29% (496 of 1732). The rounded percentages give
    # 0.21638; the exact counts give 0.21627. Both frozen from the oracle.
    rounded = hellinger(binary(0.59), binary(0.29))
    assert rounded == pytest.approx(0.21640, abs=1e-4)
    assert rounded == pytest.approx(oracle_hellinger((0.59, 0.41), (0.29, 0.71)), abs=1e-12)

    exact = hellinger(binary(133 / 227), binary(496 / 1732))
    assert exact == pytest.approx(0.21627, abs=1e-4)
    assert exact == pytest.approx(
        oracle_hellinger((133 / 227, 94 / 227), (496 / 1732, 1236 / 1732)), abs=1e-12
    )


def test_hellinger_half_vs_sure():
    assert hellinger(binary(0.5), binary(1.0)) == pytest.approx(0.54120, abs=1e-4)


def test_hellinger_mismatched_support():
    cat = Distribution("categorical", ("a", "b"), (0.5, 0.5))
    with pytest.raises(MetricsError, match="support"):
        hellinger(binary(0.5), cat)


def test_hellinger_random_pairs_vs_oracle():
    rng = np.random.default_rng(12345)
    for _ in range(1000):
        n = int(rng.integers(2, 21))
        p = rng.dirichlet(np.ones(n))
        q = rng.dirichlet(np.ones(n))
        support = tuple(str(i) for i in range(n))
        P = Distribution("categorical", support, tuple(p))
        Q = Distribution("categorical", support, tuple(q))
        h = hellinger(P, Q)
        assert abs(h - oracle_hellinger(p, q)) < 1e-12
        assert 0.0 <= h <= 1.0
        assert h == hellinger(Q, P)
        assert hellinger(P, P) == 0.0


def test_kernel_parity():
    # The compiled kernel and the numpy fallback must agree bitwise.
    from cohortdrift import kernels

    rng = np.random.default_rng(7)
    na, nb = 227, 1732
    ca = rng.integers(0, na + 1, 500).astype(np.int64)
    cb = rng.integers(0, nb + 1, 500).astype(np.int64)
    a = kernels.binary_hellinger(ca, float(na), cb, float(nb))
    b = py_kernels.binary_hellinger(ca, float(na), cb, float(nb))
    assert np.array_equal(a, b)
    for ai, cai, cbi in zip(a, ca, cb):
        assert ai == pytest.approx(
            oracle_hellinger((cai / na, 1 - cai / na), (cbi / nb, 1 - cbi / nb)), abs=1e-12
        )


@pytest.fixture
def fixture_session(h1):
    table = parse_patients(h1_patients_text(), h1)
    tree = ProvenanceTree(p.id for p in table.patients)
    return table.hierarchy, table, tree


def test_binary_dimension_distribution(fixture_session):
    h, table, tree = fixture_session
    d = dimension_distribution(tree.cohort(0), dim("B1"), table, h)
    assert d.probs == (0.5, 0.5)
    # Closure forces the root present for every patient with any icd event.
    r = dimension_distribution(tree.cohort(0), dim("R"), table, h)
    assert r.probs == (1.0, 0.0)


def test_numeric_binning():
    h = make_hierarchy({"r": None})
    recs = "\n".join(
        '{"id": "p%d", "attributes": {"Age": %d}, "events": []}' % (i, age)
        for i, age in enumerate([20, 20, 80, 80])
    )
    table = parse_patients(recs, h)
    tree = ProvenanceTree(p.id for p in table.patients)
    edges = np.linspace(20, 80, 3)  # 2 equal-width bins over [20, 80]
    d = dimension_distribution(
        tree.cohort(0), table.hierarchy.attribute_dim("Age"), table, table.hierarchy, edges
    )
    assert d.probs == (0.5, 0.5)
    assert d.counts == (2, 2)


def test_empty_cohort_is_degenerate(fixture_session):
    h, table, tree = fixture_session
    inc, _ = tree.apply_filter(
        0, FilterOperator("attribute-equals", "Gender", "Female"), table, h
    )
    with pytest.raises(DegenerateDistributionError):
        dimension_distribution(tree.cohort(inc), dim("B1"), table, h)
    with pytest.raises(MetricsError):
        compute_drift_profile(tree, 0, inc, table, h)


def test_profile_baseline_equals_focus(fixture_session):
    h, table, tree = fixture_session
    profile = compute_drift_profile(tree, 0, 0, table, h)
    assert all(v == 0.0 for v in profile.per_dim.values())
    assert profile.h_avg == 0.0
    assert profile.salient == set()


def test_profile_planted_shift(fixture_session):
    h, table, tree = fixture_session
    inc, _ = tree.apply_filter(0, FilterOperator("event-present", dim("B1")), table, h)
    profile = compute_drift_profile(tree, 0, inc, table, h)
    # Brute-force per-dimension oracle.
    for d in h.dims:
        if h.is_attribute(d) or d == h.node(h.attribute_dim("Gender")).parent:
            continue
        base, focus = tree.cohort(0), tree.cohort(inc)
        pb = sum(1 for pid in base.patient_ids if d in table.closure_of(pid)) / len(base.patient_ids)
        pf = sum(1 for pid in focus.patient_ids if d in table.closure_of(pid)) / len(focus.patient_ids)
        expected = oracle_hellinger((pb, 1 - pb), (pf, 1 - pf))
        assert profile.per_dim[d] == pytest.approx(expected, abs=1e-12)
    assert profile.per_dim[dim("A1")] > 0 or profile.per_dim[dim("A2")] > 0
    assert profile.per_dim[dim("R")] == 0.0  # closure: root present for all, both sides


def test_exclusion_semantics(fixture_session):
    h, table, tree = fixture_session
    inc, _ = tree.apply_filter(0, FilterOperator("event-present", dim("A")), table, h)
    profile = compute_drift_profile(tree, 0, inc, table, h)
    assert profile.constrained_explicit == {dim("A")}
    assert profile.constrained_descendants == {dim("A1"), dim("A2")}
    # Oracle: mean over exactly the non-excluded dimensions.
    excluded = {dim("A"), dim("A1"), dim("A2")}
    free = [v for d, v in profile.per_dim.items() if d not in excluded]
    assert profile.h_avg == pytest.approx(sum(free) / len(free), abs=1e-12)
    assert profile.h_avg == pytest.approx(avg_hellinger(profile), abs=1e-15)
    assert profile.color_max == max(free)


def test_color_max_ignores_constrained_peak():
    # Constrained dim has the highest raw drift; color_max comes from the best
    # non-constrained dim and is strictly smaller (max-scan oracle).
    h = make_hierarchy({"r": None, "a": "r", "b": "r"})
    values = {"r": 0.05, "a": 0.9, "b": 0.3}
    profile = make_profile(h, values, constrained={"a"})
    free_max = max(v for c, v in values.items() if c != "a")
    assert profile.color_max == free_max < 0.9


def test_gradient_consistency():
    h = make_hierarchy({"r": None, "a": "r", "a1": "a"})
    profile = make_profile(h, {"r": 0.10, "a": 0.25, "a1": 0.05})
    from cohortdrift.hierarchy import DimensionId

    a, r, a1 = (DimensionId("x", c) for c in ("a", "r", "a1"))
    assert profile.gradient(a, r) == pytest.approx(0.15)
    assert profile.gradient(a1, a) == pytest.approx(-0.20)
    with pytest.raises(MetricsError):
        profile.gradient(a1, r)  # not hierarchy-adjacent
    for (child, parent), delta in profile.gradients.items():
        assert delta == profile.per_dim[child] - profile.per_dim[parent]


def test_salient_parent_clause():
    h = make_hierarchy({"r": None, "a": "r"})
    per = {dim("r", "x"): 0.10, dim("a", "x"): 0.25}
    assert dim("a", "x") in salient_set(per, h, 0.1)
    assert dim("a", "x") not in salient_set(per, h, 0.2)


def test_salient_child_decrease_clause():
    h = make_hierarchy({"r": None, "a": "r"})
    per = {dim("r", "x"): 0.30, dim("a", "x"): 0.05}
    assert dim("r", "x") in salient_set(per, h, 0.1)  # child fell by 0.25


def test_salient_threshold_zero():
    # At t_s = 0 either a node rose above its parent (node salient) or fell
    # below it (parent salient via the child clause).
    h = make_hierarchy({"r": None, "a": "r", "a1": "a", "b": "r"})
    per = {dim("r", "x"): 0.5, dim("a", "x"): 0.3, dim("a1", "x"): 0.4, dim("b", "x"): 0.6}
    s = salient_set(per, h, 0.0)
    for d, node in h.nodes.items():
        if node.parent is not None:
            assert d in s or node.parent in s


def test_salient_monotonicity():
    rng = np.random.default_rng(3)
    h = make_hierarchy({"r": None, "a": "r", "b": "r", "a1": "a", "a2": "a", "b1": "b"})
    per = {d: float(rng.random()) for d in h.dims}
    prev = None
    for t in np.arange(0.0, 0.51, 0.01):
        s = salient_set(per, h, float(t))
        if prev is not None:
            assert s <= prev
        prev = s


def test_manual_salient_survives_threshold():
    h = make_hierarchy({"r": None, "a": "r"})
    per = {dim("r", "x"): 0.1, dim("a", "x"): 0.1}
    manual = frozenset({dim("a", "x")})
    assert dim("a", "x") in salient_set(per, h, 0.9, manual)


def test_overlap_identity_and_subset(fixture_session):
    h, table, tree = fixture_session
    root = tree.cohort(0)
    s = overlap(root, root)
    assert s.relationship == "subset" and s.size_intersection == 10
    inc, exc = tree.apply_filter(0, FilterOperator("event-present", dim("B1")), table, h)
    focus = tree.cohort(inc)
    s = overlap(focus, root)
    assert s.relationship == "subset" and s.size_intersection == 5
    sib = overlap(tree.cohort(inc), tree.cohort(exc))
    assert sib.relationship == "disjoint" and sib.size_intersection == 0


@given(
    st.sets(st.integers(0, 30)),
    st.sets(st.integers(0, 30)),
)
@settings(max_examples=200)
def test_overlap_identities(a_ids, b_ids):
    from cohortdrift.cohort import Cohort

    a = Cohort(1, frozenset(map(str, a_ids)))
    b = Cohort(2, frozenset(map(str, b_ids)))
    s = overlap(a, b)
    assert s.size_intersection <= min(s.size_a, s.size_b)
    assert (s.relationship == "disjoint") == (s.size_intersection == 0)
    if s.relationship == "subset":
        assert s.size_intersection == min(s.size_a, s.size_b) > 0


def test_distribution_pair_shared_bins():
    h = make_hierarchy({"r": None})
    recs = "\n".join(
        '{"id": "p%d", "attributes": {"Age": %d}, "events": []}' % (i, age)
        for i, age in enumerate([20, 30, 40, 70, 80])
    )
    table = parse_patients(recs, h)
    tree = ProvenanceTree(p.id for p in table.patients)
    inc, _ = tree.apply_filter(
        0, FilterOperator("attribute-range", "Age", (20, 40)), table, table.hierarchy
    )
    db, df = distribution_pair(
        tree.cohort(0), tree.cohort(inc), table.hierarchy.attribute_dim("Age"), table, table.hierarchy
    )
    assert db.support == df.support  # shared edges across both cohorts
    assert hellinger(db, df) > 0
