"""Suite orchestration: determinism, anchors, skip/fail semantics."""

import json

import pytest

from cwf_lab.bundle import bundled_dir, bundled_manifest
from cwf_lab.errors import StructuralError
from cwf_lab.manifest import SuiteSpec, load_manifest
from cwf_lab.suites import SUITES, emit_report, run_suites

KNOWN_ANCHORS = {
    "artifact/validation",
    "cwf/comprehension-laws",
    "pi/iso", "pi/subst-laws", "pi/beta",
    "internal/objects", "internal/homs", "internal/types", "internal/terms",
    "internal/operators", "internal/faithful", "internal/closed",
    "modality/idempotent-comonad", "modality/boxed-types",
    "modality/eliminator",
}


@pytest.fixture(scope="module")
def bundled_report():
    return run_suites(bundled_manifest(strict=False))


def test_all_suites_registered():
    assert set(SUITES) == {"validate", "cwf_laws", "pi", "internalize",
                           "modality"}


def test_bundled_run_all_green(bundled_report):
    assert bundled_report.summary["failed"] == 0
    assert bundled_report.summary["total"] > 500


def test_every_check_has_known_anchor(bundled_report):
    for c in bundled_report.checks:
        assert c.anchor in KNOWN_ANCHORS, c.check_id


def test_check_ids_unique(bundled_report):
    ids = [c.check_id for c in bundled_report.checks]
    assert len(ids) == len(set(ids))


def test_json_report_deterministic():
    r1 = emit_report(run_suites(bundled_manifest(strict=False)), "json")
    r2 = emit_report(run_suites(bundled_manifest(strict=False)), "json")
    assert r1 == r2


def test_json_report_sorted_and_versioned(bundled_report):
    doc = json.loads(emit_report(bundled_report, "json"))
    assert doc["v"] == 1
    ids = [c["check_id"] for c in doc["checks"]]
    assert ids == sorted(ids)
    assert "suite_ms" not in doc  # timings stay out of the canonical form


def test_text_report_has_summary_line(bundled_report):
    text = emit_report(bundled_report, "text").decode()
    s = bundled_report.summary
    assert f"{s['passed']}/{s['total']} passed" in text


def test_json_report_roundtrips_through_schema(bundled_report):
    from cwf_lab.service.schemas import ReportResponse
    doc = json.loads(emit_report(bundled_report, "json"))
    parsed = ReportResponse(**doc)
    assert parsed.summary.total == bundled_report.summary["total"]
    assert [c.check_id for c in parsed.checks] == \
        [c["check_id"] for c in doc["checks"]]


def test_unknown_format_rejected(bundled_report):
    with pytest.raises(StructuralError):
        emit_report(bundled_report, "yaml")


def test_empty_suite_list_gives_empty_report():
    m = bundled_manifest(strict=False)
    m.suites = []
    r = run_suites(m)
    assert r.summary["total"] == 0 and r.ok


def test_explicit_empty_selection_runs_nothing():
    m = bundled_manifest(strict=False)
    m.suites = [SuiteSpec("cwf_laws", {"types": []})]
    assert run_suites(m).summary["total"] == 0


def test_unknown_suite_rejected():
    m = bundled_manifest(strict=False)
    m.suites = [SuiteSpec("nope")]
    with pytest.raises(StructuralError):
        run_suites(m)


def test_mutation_manifest_reports_failures_with_witnesses():
    m = load_manifest(bundled_dir() / "mutations.json", strict=False)
    r = run_suites(m)
    assert r.summary["failed"] == 3
    failing = {c.check_id: c for c in r.checks if c.status == "fail"}
    assert set(failing) == {"validate.category.BadCat",
                            "validate.presheaf.BadPresheaf",
                            "validate.type.BadType"}
    for c in failing.values():
        assert c.witness["violations"], c.check_id


def test_suites_skip_objects_that_failed_validation():
    m = load_manifest(bundled_dir() / "mutations.json", strict=False)
    m.suites = [SuiteSpec("cwf_laws", {"types": ["BadType"]})]
    r = run_suites(m)
    assert r.summary["skipped"] == 1
    assert r.summary["failed"] == 0


def test_pi_suite_respects_budget():
    m = bundled_manifest(strict=False)
    m.suites = [SuiteSpec("pi", {"pairs": [["A2", "A2p"]]})]
    m.budgets["pi_fiber_budget"] = 1
    r = run_suites(m)
    assert r.summary["skipped"] >= 1
    assert any(c.check_id == "pi.capacity" for c in r.checks)


def test_internalize_suite_on_missing_base():
    m = bundled_manifest(strict=False)
    m.suites = [SuiteSpec("internalize", {"bases": ["Ghost"]})]
    r = run_suites(m)
    assert r.summary["skipped"] == 1
