"""Session-scoped HTTP API over the analysis core.

Sessions are kept in memory and persisted as dataset reference + append-only
mutation log; layouts and profiles are recomputed on demand (cached inside the
session keyed by baseline/focus/settings).
"""

from __future__ import annotations

import threading
import uuid
from pathlib import Path
from typing import Any

from fastapi import Body, FastAPI, HTTPException
from fastapi.responses import JSONResponse

from cohortdrift.cohort import CohortError, UnknownCohortError
from cohortdrift.hierarchy import HierarchyError, UnknownDimensionError
from cohortdrift.ingest import IngestError
from cohortdrift.layout import LayoutError
from cohortdrift.metrics import MetricsError
from cohortdrift.session import AnalysisSession

app = FastAPI(title="cohortdrift")


class _Store:
    def __init__(self):
        self.sessions: dict[str, AnalysisSession] = {}
        self.locks: dict[str, threading.Lock] = {}

    def get(self, sid: str) -> AnalysisSession:
        try:
            return self.sessions[sid]
        except KeyError:
            raise HTTPException(404, f"unknown session {sid}")

    def lock(self, sid: str) -> threading.Lock:
        self.get(sid)
        return self.locks[sid]


store = _Store()


def _mutate(sid: str):
    """Serialize mutations per session; concurrent writers get a 409."""
    lock = store.lock(sid)
    if not lock.acquire(blocking=False):
        raise HTTPException(409, "concurrent mutation in progress; retry")
    return lock


@app.exception_handler(UnknownCohortError)
@app.exception_handler(UnknownDimensionError)
@app.exception_handler(LayoutError)
async def _not_found(request, exc):
    return JSONResponse(status_code=404, content={"detail": str(exc)})


@app.exception_handler(CohortError)
@app.exception_handler(HierarchyError)
@app.exception_handler(IngestError)
@app.exception_handler(MetricsError)
@app.exception_handler(ValueError)
async def _bad_request(request, exc):
    return JSONResponse(status_code=400, content={"detail": str(exc)})


@app.post("/sessions")
def create_session(payload: dict = Body(...)):
    """Create a session from inline content or file paths; optionally replay a log."""
    if "hierarchy_path" in payload:
        hierarchy = Path(payload["hierarchy_path"]).read_text()
    else:
        hierarchy = payload["hierarchy"]
    if "patients_path" in payload:
        patients = Path(payload["patients_path"]).read_text()
    else:
        patients = payload["patients"]
    session = AnalysisSession(hierarchy, patients)
    if payload.get("log"):
        session.replay(payload["log"])
    sid = uuid.uuid4().hex
    store.sessions[sid] = session
    store.locks[sid] = threading.Lock()
    return {"session": sid, "tree": session.tree_summary()}


@app.post("/sessions/{sid}/cohorts")
def apply_filter(sid: str, step: dict = Body(...)):
    lock = _mutate(sid)
    try:
        session = store.get(sid)
        inc, exc = session.apply_filter(step)
        return {"included": inc, "excluded": exc, "tree": session.tree_summary()}
    finally:
        lock.release()


@app.put("/sessions/{sid}/baseline")
def set_baseline(sid: str, payload: dict = Body(...)):
    lock = _mutate(sid)
    try:
        session = store.get(sid)
        session.set_baseline(int(payload["cohort"]))
        return {"tree": session.tree_summary()}
    finally:
        lock.release()


@app.put("/sessions/{sid}/focus")
def set_focus(sid: str, payload: dict = Body(...)):
    lock = _mutate(sid)
    try:
        session = store.get(sid)
        session.set_focus(int(payload["cohort"]))
        return {"tree": session.tree_summary()}
    finally:
        lock.release()


@app.put("/sessions/{sid}/settings")
def set_settings(sid: str, payload: dict = Body(...)):
    lock = _mutate(sid)
    try:
        session = store.get(sid)
        session.set_settings(payload.get("t_s"), payload.get("method"))
        return {"settings": session.export()["settings"]}
    finally:
        lock.release()


@app.put("/sessions/{sid}/visibility")
def set_visibility(sid: str, payload: dict = Body(...)):
    lock = _mutate(sid)
    try:
        session = store.get(sid)
        session.set_excluded_visible(int(payload["cohort"]), bool(payload["visible"]))
        return {"tree": session.tree_summary()}
    finally:
        lock.release()


@app.post("/sessions/{sid}/salient")
def promote_salient(sid: str, payload: dict = Body(...)):
    lock = _mutate(sid)
    try:
        session = store.get(sid)
        session.promote_salient(payload["dim"])
        return {"settings": session.export()["settings"]}
    finally:
        lock.release()


@app.get("/sessions/{sid}/tree")
def get_tree(sid: str):
    return store.get(sid).tree_summary()


@app.get("/sessions/{sid}/profile")
def get_profile(sid: str):
    return store.get(sid).profile().to_json()


@app.get("/sessions/{sid}/layout/icicle")
def get_icicle(sid: str, aggregated: bool = True):
    return store.get(sid).icicle_layout(aggregated).to_json()


@app.get("/sessions/{sid}/layout/icicle/group/{group_id}")
def get_expanded_group(sid: str, group_id: int):
    return [f.to_json() for f in store.get(sid).expanded_group(group_id)]


@app.get("/sessions/{sid}/layout/dotplot")
def get_dotplot(sid: str):
    return store.get(sid).dotplot_layout().to_json()


@app.get("/sessions/{sid}/layout/list")
def get_list(sid: str):
    return [r.to_json() for r in store.get(sid).list_layout()]


@app.get("/sessions/{sid}/overlap")
def get_overlap(sid: str):
    return store.get(sid).overlap_summary().to_json()


@app.get("/sessions/{sid}/dimension/{system}/{code}")
def get_dimension(sid: str, system: str, code: str):
    return store.get(sid).dimension_payload(system, code)


@app.get("/sessions/{sid}/export")
def export_session(sid: str):
    return store.get(sid).export()
