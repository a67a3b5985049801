"""Document codecs and manifest loading."""

import json
import pytest

from cwf_lab import fixtures
from cwf_lab.bundle import (
    bundled_dir,
    bundled_manifest,
    emit_fixtures,
    mutation_manifest_doc,
)
from cwf_lab.cwf import comprehension, enumerate_terms
from cwf_lab.errors import InvalidStructureError, StructuralError
from cwf_lab.manifest import (
    base_cwf_from_doc,
    base_cwf_to_doc,
    category_from_doc,
    category_to_doc,
    depty_from_doc,
    depty_to_doc,
    load_manifest,
    manifest_from_doc,
    nat_from_doc,
    nat_to_doc,
    presheaf_from_doc,
    presheaf_to_doc,
    term_from_doc,
    term_to_doc,
)


def test_category_roundtrip(c2):
    doc = category_to_doc(c2)
    back = category_from_doc(doc, name="C2")
    assert back == c2


def test_presheaf_roundtrip(c2, g2):
    doc = presheaf_to_doc(g2, base_name="C2")
    back = presheaf_from_doc(doc, {"C2": c2}, name="G2")
    assert back == g2


def test_presheaf_roundtrip_with_pair_elements(g2, a2):
    ga = comprehension(g2, a2)
    doc = presheaf_to_doc(ga, base_name="C2")
    back = presheaf_from_doc(doc, {"C2": g2.base}, name="G2.A2")
    assert back == ga


def test_depty_roundtrip(g2, a2):
    doc = depty_to_doc(a2, "G2")
    back = depty_from_doc(doc, {"G2": g2}, name="A2")
    assert back == a2


def test_depty_roundtrip_over_pair_context(g2, a2, a2p):
    ga = comprehension(g2, a2)
    doc = depty_to_doc(a2p, "G2.A2")
    back = depty_from_doc(doc, {"G2.A2": ga}, name="A2p")
    assert back == a2p


def test_nat_roundtrip(g2, sigma2, top2):
    doc = nat_to_doc(sigma2, "T2", "G2")
    back = nat_from_doc(doc, {"T2": top2, "G2": g2}, name="sigma2")
    assert back == sigma2


def test_term_roundtrip(g2, a2):
    (M,) = enumerate_terms(a2)
    doc = term_to_doc(M, "G2", "A2")
    back = term_from_doc(doc, {"G2": g2}, {"A2": a2}, name="M")
    assert back == M


def test_base_cwf_roundtrip(unit_base_pi, renaming_base):
    doc = base_cwf_to_doc(unit_base_pi, cat_name="C1")
    back = base_cwf_from_doc(doc, {"C1": unit_base_pi.cat}, name="D1pi")
    assert back == unit_base_pi
    doc2 = base_cwf_to_doc(renaming_base)  # inline category
    back2 = base_cwf_from_doc(doc2, {}, name="DVar")
    assert back2 == renaming_base


def test_bundled_manifest_loads_clean():
    m = bundled_manifest(strict=True)
    assert m.load_report.ok
    assert set(m.base_cwfs) == {"D1", "D1pi", "DVar"}
    assert "G2" in m.presheaves and "A2" in m.deptys


def test_bundled_fixture_files_match_fresh_emission(tmp_path):
    emit_fixtures(tmp_path)
    for path in sorted(bundled_dir().glob("*.json")):
        fresh = (tmp_path / path.name).read_text()
        assert fresh == path.read_text(), path.name


def test_manifest_unknown_reference():
    doc = {"v": 1, "presheaves": {"X": {"base": "NOPE", "carrier": {},
                                        "action": []}}}
    with pytest.raises(StructuralError):
        manifest_from_doc(doc)


def test_manifest_broken_table_fails_strict_load():
    doc = mutation_manifest_doc()
    with pytest.raises(InvalidStructureError):
        manifest_from_doc(doc)
    m = manifest_from_doc(doc, strict=False)
    assert {"category:BadCat", "presheaf:BadPresheaf", "type:BadType"} <= m.invalid


def test_manifest_parse_error_location(tmp_path):
    target = tmp_path / "broken.json"
    target.write_text('{"v": 1,,}')
    with pytest.raises(StructuralError) as err:
        load_manifest(target)
    assert "line" in str(err.value)


def test_manifest_missing_file():
    with pytest.raises(StructuralError):
        load_manifest("/definitely/not/here.json")


def test_manifest_ref_resolution(tmp_path, c2):
    (tmp_path / "cat.json").write_text(json.dumps(category_to_doc(c2)))
    manifest = {"v": 1, "categories": {"C2": {"$ref": "cat.json"}}}
    (tmp_path / "m.json").write_text(json.dumps(manifest))
    m = load_manifest(tmp_path / "m.json")
    assert m.categories["C2"] == c2


def test_manifest_dangling_ref(tmp_path):
    manifest = {"v": 1, "categories": {"C2": {"$ref": "ghost.json"}}}
    (tmp_path / "m.json").write_text(json.dumps(manifest))
    with pytest.raises(StructuralError):
        load_manifest(tmp_path / "m.json")


def test_unsupported_schema_version():
    with pytest.raises(StructuralError):
        manifest_from_doc({"v": 99})


def test_depty_doc_rejects_inconsistent_source(g2, a2):
    doc = depty_to_doc(a2, "G2")
    for row in doc["action"]:
        if row["mor"] == "f":
            row["src_s"] = "1"  # restriction of x along f is 0, not 1
    with pytest.raises(StructuralError):
        depty_from_doc(doc, {"G2": g2})


def test_loader_rejects_partial_composition_table(c2):
    doc = category_to_doc(c2)
    doc["compose"] = doc["compose"][:-1]
    m = manifest_from_doc({"v": 1, "categories": {"C2partial": doc}}, strict=False)
    assert any(v.law == "composition-missing" for v in m.load_report.violations)
