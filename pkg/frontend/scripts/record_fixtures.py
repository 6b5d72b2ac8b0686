"""Record deterministic service responses as frontend test fixtures.

Run from the repository root with the Python package installed:
    python3 frontend/scripts/record_fixtures.py
"""

import json
from pathlib import Path

from fastapi.testclient import TestClient

from cohortdrift.service import app

HIERARCHY = """system,code,parent,label
icd,R,,Root
icd,A,R,Branch A
icd,B,R,Branch B
icd,A1,A,Leaf A1
icd,A2,A,Leaf A2
icd,B1,B,Leaf B1
"""


def patients_text() -> str:
    recs = []
    for i in range(10):
        events = ["icd:B1"] if i < 5 else ["icd:B"]
        if i < 3:
            events.append("icd:A1")
        elif i < 5:
            events.append("icd:A2")
        recs.append(
            {
                "id": f"p{i}",
                "attributes": {"Gender": "Male" if i % 2 else "Female", "Age": 20 + 6 * i},
                "events": events,
            }
        )
    return "\n".join(json.dumps(r) for r in recs) + "\n"


def main() -> None:
    out = Path(__file__).resolve().parent.parent / "tests" / "fixtures"
    out.mkdir(parents=True, exist_ok=True)
    client = TestClient(app)

    def save(name: str, payload) -> None:
        (out / f"{name}.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")

    sid = client.post(
        "/sessions", json={"hierarchy": HIERARCHY, "patients": patients_text()}
    ).json()["session"]
    save("tree_root_only", client.get(f"/sessions/{sid}/tree").json())

    client.post(
        f"/sessions/{sid}/cohorts",
        json={"parent": 0, "kind": "event-present", "target": "icd:B1"},
    )
    client.put(f"/sessions/{sid}/visibility", json={"cohort": 2, "visible": True})

    save("tree", client.get(f"/sessions/{sid}/tree").json())
    save("profile", client.get(f"/sessions/{sid}/profile").json())
    save("icicle_ts_0.05", client.get(f"/sessions/{sid}/layout/icicle").json())
    save("dotplot", client.get(f"/sessions/{sid}/layout/dotplot").json())
    save("list", client.get(f"/sessions/{sid}/layout/list").json())
    save("overlap", client.get(f"/sessions/{sid}/overlap").json())
    save("dimension_binary", client.get(f"/sessions/{sid}/dimension/icd/B1").json())
    save("dimension_numeric", client.get(f"/sessions/{sid}/dimension/attributes/Age").json())
    save(
        "dimension_categorical",
        client.get(f"/sessions/{sid}/dimension/attributes/Gender").json(),
    )

    icicle = client.get(f"/sessions/{sid}/layout/icicle").json()
    gid = icicle["groups"][0]["id"]
    save("expanded_group", client.get(f"/sessions/{sid}/layout/icicle/group/{gid}").json())

    client.put(f"/sessions/{sid}/settings", json={"t_s": 0.2})
    save("icicle_ts_0.2", client.get(f"/sessions/{sid}/layout/icicle").json())
    client.put(f"/sessions/{sid}/settings", json={"t_s": 0.05})
    save("icicle_ts_0.05_return", client.get(f"/sessions/{sid}/layout/icicle").json())

    print(f"wrote fixtures to {out}")


if __name__ == "__main__":
    main()
