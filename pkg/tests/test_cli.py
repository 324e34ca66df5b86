from __future__ import annotations

import csv
import io
import json

import pytest

from rdimkit import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_rdim_text_and_json(capsys):
    code, out, _ = run(capsys, "rdim", "C2xC2xC2")
    assert code == 0 and "rdim(C2xC2xC2) = 3" in out and "GT" in out
    code, out, _ = run(capsys, "rdim", "Heis4", "--json")
    data = json.loads(out)
    assert code == 0 and data["rdim"] == 8 and data["rdim_sq_vs_order"] == "EQ"


def test_spec_file(tmp_path, capsys):
    path = tmp_path / "s3.json"
    path.write_text(json.dumps({"kind": "perm", "degree": 3, "generators": [[1, 0, 2], [1, 2, 0]]}))
    code, out, _ = run(capsys, "rdim", str(path))
    assert code == 0 and "= 2" in out
    code, out, _ = run(capsys, "info", str(path), "--json")
    assert json.loads(out)["classes"] == 3


def test_chartab(capsys):
    code, out, _ = run(capsys, "chartab", "S3")
    assert code == 0 and "chi2 (deg 2)" in out
    code, out, _ = run(capsys, "chartab", "S3", "--json")
    assert json.loads(out)["degrees"] == [1, 1, 2]


def test_usage_errors(tmp_path, capsys):
    code, _, err = run(capsys, "rdim", "not-a-group")
    assert code == 2 and "neither" in err
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"kind": "table", "mul": [[0, 1], [1, 1]]}))
    code, _, err = run(capsys, "info", str(bad))
    assert code == 2 and "Latin" in err
    code, _, _ = run(capsys, "verify", "A")
    assert code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["verify", "Z"])
    assert exc.value.code == 2


def test_verify_single_groups(capsys):
    code, out, _ = run(capsys, "verify", "A", "Heis8", "--jobs", "1")
    assert code == 0 and "PASS branch ii" in out
    code, out, _ = run(capsys, "verify", "camina", "E3^3+", "--jobs", "1")
    assert code == 0 and "PASS" in out
    code, out, _ = run(capsys, "verify", "odd", "C2xC2", "--jobs", "1")
    assert code == 0 and "SKIPPED" in out
    code, out, _ = run(capsys, "verify", "F", "D8oC8", "--jobs", "1")
    assert code == 0 and "PASS" in out


def test_verify_reports_failures(capsys):
    code, out, _ = run(capsys, "verify", "D", "C3xC3xC3", "--jobs", "1")
    assert code == 1 and "FAILED CHECK" in out
    code, out, _ = run(capsys, "verify", "cal")
    assert code == 1 and "(2, 2, 2, 2, 2, 2)" in out and "FAIL" in out


def test_survey_csv_and_json(tmp_path, capsys):
    out_csv = tmp_path / "s.csv"
    code, _, err = run(capsys, "survey", "--corpus", "--out", str(out_csv), "--jobs", "1")
    # C3^3 fails the odd-prime equality characterization
    assert code == 1 and "FAILED CHECK: C3xC3xC3" in err
    rows = list(csv.DictReader(io.StringIO(out_csv.read_text())))
    assert rows and set(rows[0]) == set(cli.pipeline.SURVEY_COLUMNS)
    by_id = {r["id"]: r for r in rows}
    assert by_id["C2xC2xC2"]["rdim"] == "3" and by_id["C2xC2xC2"]["A_branch"] == "ii"
    assert by_id["Heis8"]["rdim_sq_vs_order"] == "GT"
    assert all(r["schema"] == cli.pipeline.SURVEY_SCHEMA for r in rows)
    # second run is served from the cache and gives identical bytes
    out_json = tmp_path / "s.json"
    run(capsys, "survey", "--corpus", "--out", str(out_json), "--format", "json", "--jobs", "1")
    data = json.loads(out_json.read_text())
    assert data["schema"] == cli.pipeline.SURVEY_SCHEMA and len(data["rows"]) == len(rows)
    code, out, _ = run(capsys, "cache", "stats")
    assert f"groups: {len(rows)}" in out


def test_cache_and_corpus_commands(tmp_path, capsys):
    run(capsys, "rdim", "D8")
    code, out, _ = run(capsys, "cache", "clear")
    assert code == 0 and "removed 1" in out
    code, out, _ = run(capsys, "corpus", "list")
    assert "Heis16\t4096" in out
    code, out, _ = run(capsys, "corpus", "export", str(tmp_path / "x"))
    assert code == 0 and (tmp_path / "x" / "D8.json").exists()
