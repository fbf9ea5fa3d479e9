"""HTTP service: session state, revisions, and the five API routes."""

from __future__ import annotations

import json
import shutil

import pytest
from fastapi.testclient import TestClient

from imog.diagnostics import InvalidModelError
from imog.service import create_app

from conftest import defect_path, fixture_path, fixture_text


def make_client(tmp_path, name: str, **kwargs):
    """Serve a throwaway copy so persisted updates never touch the fixtures."""
    path = tmp_path / f"{name}.imog.json"
    shutil.copy(fixture_path(name), path)
    app = create_app(str(path), **kwargs)
    return TestClient(app), path


# ---------------------------------------------------------------------------
# GET /api/model

def test_get_model_returns_document_and_session_state(tmp_path):
    client, _ = make_client(tmp_path, "escooter")
    response = client.get("/api/model")
    assert response.status_code == 200
    assert response.headers["ETag"] == '"1"'
    body = response.json()
    assert body["revision"] == 1
    assert body["model"] == json.loads(fixture_text("escooter"))
    assert body["decisions"] == {}
    assert body["selections"] == {"variants": {}, "refinements": {}}
    assert body["diagnostics"] == []


def test_create_app_refuses_a_model_with_error_findings(tmp_path):
    path = tmp_path / "broken.imog.json"
    shutil.copy(defect_path("qp_sat"), path)
    with pytest.raises(InvalidModelError):
        create_app(str(path))


# ---------------------------------------------------------------------------
# GET /api/fp/analysis

def test_analysis_reports_count_dead_void_and_propagation(tmp_path):
    client, _ = make_client(tmp_path, "escooter_fp_context")
    body = client.get("/api/fp/analysis").json()
    assert body["count"] == 16
    assert body["dead"] == []
    assert body["void"] is False
    assert body["propagation"]["forcedIn"] == [
        "fp-damping", "fp-driving", "fp-escooter", "fp-insurance"]
    assert body["propagation"]["forcedOut"] == []
    assert body["propagation"]["conflict"] is None

    client, _ = make_client(tmp_path, "void")
    body = client.get("/api/fp/analysis").json()
    assert body["void"] is True
    assert body["count"] == 0
    assert body["dead"] == ["fp-a", "fp-b", "fp-root"]


def test_analysis_respects_the_block_cap(tmp_path):
    client, _ = make_client(tmp_path, "escooter_fp_context", block_cap=4)
    response = client.get("/api/fp/analysis")
    assert response.status_code == 422
    assert "4" in response.json()["detail"]


# ---------------------------------------------------------------------------
# POST /api/fp/decisions

def test_decisions_accumulate_and_bump_the_revision(tmp_path):
    client, _ = make_client(tmp_path, "escooter_fp_context")
    response = client.post("/api/fp/decisions",
                           json={"id": "fp-loading", "state": "In"})
    body = response.json()
    assert response.headers["ETag"] == '"2"'
    assert body["applied"] is True
    assert body["revision"] == 2
    assert body["decisions"] == {"fp-loading": "In"}
    assert "fp-loading" in body["propagation"]["forcedIn"]

    body = client.post("/api/fp/decisions",
                       json={"id": "fp-simple", "state": "In"}).json()
    assert body["revision"] == 3
    assert body["decisions"] == {"fp-loading": "In", "fp-simple": "In"}
    assert "fp-comfort" in body["propagation"]["forcedOut"]

    body = client.post("/api/fp/decisions",
                       json={"id": "fp-simple", "state": "Clear"}).json()
    assert body["revision"] == 4
    assert body["decisions"] == {"fp-loading": "In"}

    body = client.post("/api/fp/decisions", json={"clear": True}).json()
    assert body["revision"] == 5
    assert body["decisions"] == {}


def test_conflicting_decision_is_reported_but_not_committed(tmp_path):
    client, _ = make_client(tmp_path, "escooter_fp_context")
    response = client.post("/api/fp/decisions",
                           json={"id": "fp-driving", "state": "Out"})
    body = response.json()
    assert response.status_code == 200
    assert body["applied"] is False
    assert body["revision"] == 1
    assert body["decisions"] == {}
    assert "fp-driving=Out" in body["propagation"]["conflict"]["message"]
    assert client.get("/api/model").json()["decisions"] == {}


def test_stale_if_match_is_rejected_without_side_effects(tmp_path):
    client, _ = make_client(tmp_path, "escooter_fp_context")
    response = client.post("/api/fp/decisions",
                           json={"id": "fp-loading", "state": "In"},
                           headers={"If-Match": '"1"'})
    assert response.status_code == 200

    response = client.post("/api/fp/decisions",
                           json={"id": "fp-loading", "state": "Out"},
                           headers={"If-Match": '"1"'})
    assert response.status_code == 409
    assert response.json()["detail"] == {"reason": "revision mismatch", "revision": 2}
    body = client.get("/api/model").json()
    assert body["revision"] == 2
    assert body["decisions"] == {"fp-loading": "In"}

    # a bare revision number is accepted alongside the quoted ETag form
    response = client.post("/api/fp/decisions",
                           json={"id": "fp-loading", "state": "Clear"},
                           headers={"If-Match": "2"})
    assert response.status_code == 200


def test_decision_requests_are_checked_for_shape_and_target(tmp_path):
    client, _ = make_client(tmp_path, "escooter_fp_context")
    assert client.post("/api/fp/decisions",
                       json={"id": 5, "state": "In"}).status_code == 400
    assert client.post("/api/fp/decisions",
                       json={"id": "fp-loading", "state": "Maybe"}).status_code == 400
    assert client.post("/api/fp/decisions",
                       json={"id": "fp-nope", "state": "In"}).status_code == 404


# ---------------------------------------------------------------------------
# POST /api/sp/resolve

def test_resolve_returns_the_effective_view_without_bumping_on_noop(tmp_path):
    client, _ = make_client(tmp_path, "sp_variants")
    body = client.post("/api/sp/resolve", json={"block": "spb-gen"}).json()
    assert body["revision"] == 1
    assert body["block"]["name"] == "Urban Generator"
    assert body["block"]["provenance"] == ["spb-gen", "spv-urban"]
    assert body["selections"] == {"variants": {}, "refinements": {}}


def test_resolve_merges_selections_and_tracks_changes(tmp_path):
    client, _ = make_client(tmp_path, "sp_variants")
    request = {"block": "spb-gen",
               "variants": {"spb-gen": "spv-marine"},
               "refinements": {"rg-cooling": "rb-liquid"}}
    body = client.post("/api/sp/resolve", json=request).json()
    assert body["revision"] == 2
    assert body["block"]["name"] == "Arctic Marine Generator"
    assert body["selections"] == {"variants": {"spb-gen": "spv-marine"},
                                  "refinements": {"rg-cooling": "rb-liquid"}}

    # resubmitting the identical selection changes nothing
    body = client.post("/api/sp/resolve", json=request).json()
    assert body["revision"] == 2

    # null entries drop their overrides again
    body = client.post("/api/sp/resolve",
                       json={"block": "spb-gen",
                             "variants": {"spb-gen": None},
                             "refinements": {"rg-cooling": None}}).json()
    assert body["revision"] == 3
    assert body["block"]["name"] == "Urban Generator"
    assert body["selections"] == {"variants": {}, "refinements": {}}


def test_resolve_rejects_bad_blocks_and_selections(tmp_path):
    client, _ = make_client(tmp_path, "sp_variants")
    assert client.post("/api/sp/resolve",
                       json={"block": "spb-nope"}).status_code == 404
    assert client.post("/api/sp/resolve", json={}).status_code == 400
    assert client.post("/api/sp/resolve",
                       json={"block": "spb-gen",
                             "variants": ["spv-marine"]}).status_code == 400
    assert client.post("/api/sp/resolve",
                       json={"block": "spb-gen",
                             "variants": {"spb-gen": 7}}).status_code == 400
    # spv-arctic belongs to spv-marine, not to spb-gen directly
    response = client.post("/api/sp/resolve",
                           json={"block": "spb-gen",
                                 "variants": {"spb-gen": "spv-arctic"}})
    assert response.status_code == 400
    # the rejected selection never entered the session
    assert client.get("/api/model").json()["selections"]["variants"] == {}


# ---------------------------------------------------------------------------
# GET /api/trace/report

def test_trace_report_endpoint(tmp_path):
    client, _ = make_client(tmp_path, "escooter")
    body = client.get("/api/trace/report").json()
    assert body["revision"] == 1
    report = body["report"]
    assert report["unallocatedFunctions"] == []
    assert report["danglingLinks"] == []
    assert report["knowledgeReuse"] == [
        {"block": "sp-battery", "entry": "ke-cell"},
        {"block": "sp-controller", "entry": "ke-rules"},
        {"block": "sp-motor", "entry": "ke-motor"},
    ]


# ---------------------------------------------------------------------------
# POST /api/model

def test_replacing_the_model_persists_and_resets_the_session(tmp_path):
    client, path = make_client(tmp_path, "escooter")
    client.post("/api/fp/decisions", json={"id": "fp-loading", "state": "In"})

    replacement = json.loads(fixture_text("escooter_fp_context_require"))
    response = client.post("/api/model", json=replacement)
    body = response.json()
    assert body["applied"] is True
    assert body["revision"] == 3
    assert body["diagnostics"] == []
    assert path.read_text(encoding="utf-8") == fixture_text("escooter_fp_context_require")

    body = client.get("/api/model").json()
    assert body["model"] == replacement
    assert body["decisions"] == {}


def test_replacement_with_error_findings_is_not_applied(tmp_path):
    client, path = make_client(tmp_path, "escooter")
    before = path.read_text(encoding="utf-8")
    broken = json.loads(defect_path("qp_sat").read_text(encoding="utf-8"))
    response = client.post("/api/model", json=broken)
    body = response.json()
    assert response.status_code == 200
    assert body["applied"] is False
    assert body["revision"] == 1
    assert "QP-SAT" in {d["code"] for d in body["diagnostics"]}
    assert path.read_text(encoding="utf-8") == before


def test_replacement_with_schema_violations_is_a_client_error(tmp_path):
    client, _ = make_client(tmp_path, "escooter")
    response = client.post("/api/model", json={"imogVersion": "1.0"})
    assert response.status_code == 400
    assert "strategy" in response.json()["detail"]


def test_read_only_sessions_never_touch_the_file(tmp_path):
    client, path = make_client(tmp_path, "escooter", persist=False)
    before = path.read_text(encoding="utf-8")
    replacement = json.loads(fixture_text("escooter_fp_context"))
    body = client.post("/api/model", json=replacement).json()
    assert body["applied"] is True
    assert path.read_text(encoding="utf-8") == before


# ---------------------------------------------------------------------------
# Static UI mount

def test_static_ui_directory_is_served_at_the_root(tmp_path):
    ui = tmp_path / "ui"
    ui.mkdir()
    (ui / "index.html").write_text("<h1>model browser</h1>", encoding="utf-8")
    client, _ = make_client(tmp_path, "escooter", ui_dir=str(ui))
    response = client.get("/")
    assert response.status_code == 200
    assert "model browser" in response.text
    assert client.get("/api/model").status_code == 200
