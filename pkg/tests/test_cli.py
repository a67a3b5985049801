"""Command-line client: verbs, exit codes, output formats."""

import json

from cwf_lab.bundle import bundled_dir
from cwf_lab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_report_bundled_exits_zero(capsys):
    code, out, _ = run(capsys, "report", "--format", "text")
    assert code == 0
    assert "0 failed" in out


def test_report_json_deterministic(tmp_path, capsys):
    f1, f2 = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["report", "--format", "json", "--out", str(f1)]) == 0
    assert main(["report", "--format", "json", "--out", str(f2)]) == 0
    assert f1.read_bytes() == f2.read_bytes()
    doc = json.loads(f1.read_text())
    assert doc["summary"]["failed"] == 0


def test_report_mutations_exits_one(capsys):
    path = bundled_dir() / "mutations.json"
    code, out, _ = run(capsys, "report", str(path), "--format", "text")
    assert code == 1
    assert "3 failed" in out


def test_report_missing_manifest_exits_two(capsys):
    code, _, err = run(capsys, "report", "/no/such/manifest.json")
    assert code == 2
    assert "error" in err


def test_validate_single_document(capsys):
    path = bundled_dir() / "g2.json"
    code, out, _ = run(capsys, "validate", str(path), "--kind", "presheaf")
    assert code == 0
    assert "ok" in out


def test_validate_manifest_kind(capsys):
    path = bundled_dir() / "manifest.json"
    # inline-manifest validation has no base dir for $refs -> structural error
    code, _, err = run(capsys, "validate", str(path), "--kind", "manifest")
    assert code == 2
    assert "ref" in err or "error" in err


def test_laws_verb(capsys):
    code, out, _ = run(capsys, "laws", "--types", "A2", "--domains", "T2",
                       "--format", "text")
    assert code == 0
    assert "cwf.proj-ext" in out


def test_pi_verb_with_pairs(capsys):
    code, out, _ = run(capsys, "pi", "--pairs", "A01:B01", "--format", "text")
    assert code == 0
    assert "pi.iso-card" in out


def test_internalize_verb(capsys):
    code, out, _ = run(capsys, "internalize", "D1pi", "--format", "text")
    assert code == 0
    assert "internal.pi-operators[D1pi]" in out


def test_internalize_from_file(tmp_path, capsys):
    src = (bundled_dir() / "dvar.json").read_text()
    target = tmp_path / "base.json"
    target.write_text(src)
    code, out, _ = run(capsys, "internalize", str(target), "--format", "text")
    assert code == 0
    assert "internal.internal-objects[base]" in out


def test_modality_verb(capsys):
    code, out, _ = run(capsys, "modality", "G2", "--terminal", "b",
                       "--ty", "A2", "--format", "text")
    assert code == 0
    assert "modality.letbox-wellformed" in out


def test_modality_wrong_terminal_exits_two(capsys):
    code, _, err = run(capsys, "modality", "G2", "--terminal", "a")
    assert code == 2


def test_fixtures_emit(tmp_path, capsys):
    out_dir = tmp_path / "fx"
    code, out, _ = run(capsys, "fixtures", "emit", "--out", str(out_dir))
    assert code == 0
    emitted = sorted(p.name for p in out_dir.glob("*.json"))
    bundled = sorted(p.name for p in bundled_dir().glob("*.json"))
    assert emitted == bundled


def test_pi_budget_flag(capsys):
    code, out, _ = run(capsys, "pi", "--pairs", "A2:A2p",
                       "--pi-fiber-budget", "1", "--format", "text")
    assert code == 0  # capacity exhaustion skips, it does not fail
    assert "capacity" in out


def test_seed_recorded_in_report(capsys):
    code, out, _ = run(capsys, "report", "--suite", "validate",
                       "--seed", "7", "--format", "json")
    assert code == 0
    assert json.loads(out)["seed"] == 7
