import pytest
from fastapi.testclient import TestClient

from cohortdrift.service import app
from tests.conftest import H1_CSV, h1_patients_text


@pytest.fixture
def client():
    return TestClient(app)


@pytest.fixture
def session(client):
    r = client.post("/sessions", json={"hierarchy": H1_CSV, "patients": h1_patients_text()})
    assert r.status_code == 200, r.text
    return r.json()["session"]


FILTER = {"parent": 0, "kind": "event-present", "target": "icd:B1"}


def test_create_and_filter(client, session):
    r = client.post(f"/sessions/{session}/cohorts", json=FILTER)
    assert r.status_code == 200
    body = r.json()
    assert len(body["tree"]["nodes"]) == 3  # root + included + excluded
    assert body["included"] == 1 and body["excluded"] == 2
    sizes = {n["id"]: n["size"] for n in body["tree"]["nodes"]}
    assert sizes == {0: 10, 1: 5, 2: 5}


def test_profile_baseline_equals_focus(client, session):
    r = client.get(f"/sessions/{session}/profile")
    assert r.status_code == 200
    assert r.json()["h_avg"] == 0.0


def test_full_query_surface(client, session):
    client.post(f"/sessions/{session}/cohorts", json=FILTER)
    for path in ("tree", "profile", "layout/icicle", "layout/dotplot", "layout/list", "overlap", "export"):
        r = client.get(f"/sessions/{session}/{path}")
        assert r.status_code == 200, path
    r = client.get(f"/sessions/{session}/dimension/icd/B1")
    assert r.status_code == 200
    payload = r.json()
    assert payload["baseline"]["probs"] == [0.5, 0.5]
    assert payload["focus"]["probs"] == [1.0, 0.0]


def test_markers_and_settings(client, session):
    client.post(f"/sessions/{session}/cohorts", json=FILTER)
    assert client.put(f"/sessions/{session}/baseline", json={"cohort": 1}).status_code == 200
    assert client.put(f"/sessions/{session}/focus", json={"cohort": 0}).status_code == 200
    tree = client.get(f"/sessions/{session}/tree").json()
    marks = {n["id"]: (n["is_baseline"], n["is_focus"]) for n in tree["nodes"]}
    assert marks[1] == (True, False) and marks[0] == (False, True)
    r = client.put(f"/sessions/{session}/settings", json={"t_s": 0.2, "method": "depth-first"})
    assert r.status_code == 200
    assert r.json()["settings"]["t_s"] == 0.2


def test_visibility_and_salient(client, session):
    client.post(f"/sessions/{session}/cohorts", json=FILTER)
    r = client.put(f"/sessions/{session}/visibility", json={"cohort": 1, "visible": True})
    assert r.status_code == 200
    assert [n["visible"] for n in r.json()["tree"]["nodes"] if n["id"] == 2] == [True]
    r = client.post(f"/sessions/{session}/salient", json={"dim": "icd:B1"})
    assert r.status_code == 200
    assert r.json()["settings"]["manual_salient"] == ["icd:B1"]


def test_expanded_group(client, session):
    client.post(f"/sessions/{session}/cohorts", json=FILTER)
    layout = client.get(f"/sessions/{session}/layout/icicle").json()
    assert layout["groups"], "expected at least one aggregated group"
    gid = layout["groups"][0]["id"]
    r = client.get(f"/sessions/{session}/layout/icicle/group/{gid}")
    assert r.status_code == 200
    rects = r.json()
    assert {f["dim"] for f in rects} == {
        m["dim"] for m in layout["groups"][0]["members"]
    }
    assert client.get(f"/sessions/{session}/layout/icicle/group/9999").status_code == 404


def test_error_codes(client, session):
    assert client.get("/sessions/nope/tree").status_code == 404
    assert client.put(f"/sessions/{session}/baseline", json={"cohort": 99}).status_code == 404
    assert client.get(f"/sessions/{session}/dimension/icd/NOPE").status_code == 404
    bad = {"parent": 0, "kind": "event-present", "target": "icd:NOPE"}
    assert client.post(f"/sessions/{session}/cohorts", json=bad).status_code == 404
    worse = {"parent": 0, "kind": "bogus", "target": "icd:B1"}
    assert client.post(f"/sessions/{session}/cohorts", json=worse).status_code == 400


def test_replay_reproduces_responses(client, session):
    client.post(f"/sessions/{session}/cohorts", json=FILTER)
    client.post(
        f"/sessions/{session}/cohorts",
        json={"parent": 1, "kind": "attribute-range", "target": "Age", "value": [20, 50]},
    )
    client.put(f"/sessions/{session}/settings", json={"t_s": 0.1})
    log = client.get(f"/sessions/{session}/export").json()["log"]

    r2 = client.post(
        "/sessions", json={"hierarchy": H1_CSV, "patients": h1_patients_text(), "log": log}
    )
    fresh = r2.json()["session"]
    for path in ("tree", "profile", "layout/icicle", "layout/dotplot", "layout/list", "overlap"):
        a = client.get(f"/sessions/{session}/{path}")
        b = client.get(f"/sessions/{fresh}/{path}")
        assert a.json() == b.json(), path
