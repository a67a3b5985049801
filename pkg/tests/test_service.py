"""HTTP service: endpoints, schemas, error mapping."""

import pytest
from fastapi.testclient import TestClient

from cwf_lab.bundle import mutation_manifest_doc
from cwf_lab.manifest import category_to_doc, depty_to_doc, presheaf_to_doc
from cwf_lab.service.app import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def test_health(client):
    resp = client.get("/health")
    assert resp.status_code == 200
    assert resp.json()["status"] == "ok"


def test_validate_category_ok(client, c2):
    resp = client.post("/v1/validate", json={
        "kind": "category", "document": category_to_doc(c2), "name": "C2"})
    assert resp.status_code == 200
    body = resp.json()
    assert body["ok"] is True and body["violations"] == []


def test_validate_presheaf_against_bundled_base(client, g2):
    resp = client.post("/v1/validate", json={
        "kind": "presheaf", "document": presheaf_to_doc(g2, base_name="C2")})
    assert resp.status_code == 200
    assert resp.json()["ok"] is True


def test_validate_broken_document_lists_witnesses(client, g2):
    doc = presheaf_to_doc(g2, base_name="C2")
    for row in doc["action"]:
        if row["mor"] == "id_a" and row["arg"] == "0":
            row["result"] = "1"
    resp = client.post("/v1/validate", json={"kind": "presheaf", "document": doc})
    assert resp.status_code == 200
    body = resp.json()
    assert body["ok"] is False
    assert any(v["law"] == "identity-action" for v in body["violations"])


def test_validate_with_inline_context(client, g2, a2, a2p):
    from cwf_lab.cwf import comprehension
    ga = comprehension(g2, a2)
    resp = client.post("/v1/validate", json={
        "kind": "depty",
        "document": depty_to_doc(a2p, "EXTRA"),
        "context": {"presheaves": {"EXTRA": presheaf_to_doc(ga, base_name="C2")}},
    })
    assert resp.status_code == 200
    assert resp.json()["ok"] is True


def test_validate_unresolvable_reference_is_422(client, g2):
    doc = presheaf_to_doc(g2, base_name="GhostCat")
    resp = client.post("/v1/validate", json={"kind": "presheaf", "document": doc})
    assert resp.status_code == 422


def test_report_bundled_all_green(client):
    resp = client.post("/v1/report", json={})
    assert resp.status_code == 200
    body = resp.json()
    assert body["summary"]["failed"] == 0
    assert body["v"] == 1
    ids = [c["check_id"] for c in body["checks"]]
    assert ids == sorted(ids)


def test_report_with_suite_override(client):
    resp = client.post("/v1/report", json={"suites": ["validate"]})
    assert resp.status_code == 200
    body = resp.json()
    assert all(c["check_id"].startswith("validate.") for c in body["checks"])


def test_report_inline_mutations(client):
    resp = client.post("/v1/report", json={"manifest": mutation_manifest_doc()})
    assert resp.status_code == 200
    assert resp.json()["summary"]["failed"] == 3


def test_laws_endpoint(client):
    resp = client.post("/v1/laws", json={"types": ["A2"], "domains": ["T2"]})
    assert resp.status_code == 200
    body = resp.json()
    assert body["summary"]["failed"] == 0
    assert any(c["check_id"].startswith("cwf.proj-ext") for c in body["checks"])


def test_pi_endpoint(client):
    resp = client.post("/v1/pi", json={"pairs": [["A01", "B01"]]})
    assert resp.status_code == 200
    assert resp.json()["summary"]["failed"] == 0


def test_internalize_endpoint_bundled_name(client):
    resp = client.post("/v1/internalize", json={"base": "D1", "suite": "all"})
    assert resp.status_code == 200
    body = resp.json()
    assert body["summary"]["failed"] == 0
    assert any(c["check_id"].startswith("internal.") for c in body["checks"])


def test_internalize_endpoint_unknown_base(client):
    resp = client.post("/v1/internalize", json={"base": "Ghost"})
    assert resp.status_code == 422


def test_modality_endpoint(client):
    resp = client.post("/v1/modality", json={
        "ctx": "G2", "terminal": "b", "ty": "A2"})
    assert resp.status_code == 200
    assert resp.json()["summary"]["failed"] == 0


def test_fixtures_listing_and_fetch(client):
    resp = client.get("/v1/fixtures")
    assert resp.status_code == 200
    names = resp.json()["names"]
    assert "G2" in names["presheaves"] and "DVar" in names["base_cwfs"]
    doc = client.get("/v1/fixtures/G2")
    assert doc.status_code == 200
    assert doc.json()["kind"] == "presheaf"
    assert client.get("/v1/fixtures/Ghost").status_code == 422


def test_validate_base_cwf_document(client, unit_base):
    from cwf_lab.manifest import base_cwf_to_doc
    resp = client.post("/v1/validate", json={
        "kind": "base_cwf", "document": base_cwf_to_doc(unit_base, cat_name="C1")})
    assert resp.status_code == 200 and resp.json()["ok"] is True
    broken = base_cwf_to_doc(unit_base, cat_name="C1")
    broken["v"] = [{"obj": "o", "ty": "T", "result": "el(U)"},
                   {"obj": "o", "ty": "U", "result": "el(U)"}]
    resp = client.post("/v1/validate", json={"kind": "base_cwf", "document": broken})
    assert resp.status_code == 200 and resp.json()["ok"] is False


def test_validate_bundled_term_document(client):
    doc = client.get("/v1/fixtures/M_A2").json()
    assert doc["kind"] == "term"
    resp = client.post("/v1/validate", json={"kind": "term",
                                             "document": doc["document"]})
    assert resp.status_code == 200 and resp.json()["ok"] is True


def test_request_schema_validation(client):
    resp = client.post("/v1/validate", json={"kind": "spaceship", "document": {}})
    assert resp.status_code == 422
