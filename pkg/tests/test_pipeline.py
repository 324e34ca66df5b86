from __future__ import annotations

import json

from rdimkit import pipeline
from rdimkit.corpus import corpus_entry


def test_compare_square():
    assert pipeline.compare_square(3, 8) == "GT"
    assert pipeline.compare_square(8, 64) == "EQ"
    assert pipeline.compare_square(2, 8) == "LT"


def test_analyze_writes_record_and_table(tmp_path):
    e = corpus_entry("Heis4")
    rec = pipeline.analyze(e.id, e.spec)
    assert not rec.error and rec.rdim == 8
    assert rec.survey["rdim_sq_vs_order"] == "EQ"
    assert rec.survey["B"] == "PASS"
    root = pipeline.cache_dir() / e.spec.digest()
    data = json.loads((root / "record.json").read_text())
    assert data["schema"] == pipeline.RECORD_SCHEMA and data["rdim"] == 8
    assert (root / "chartab.json").exists()
    assert not list(root.glob("*.tmp"))
    # second run reads the cached table
    again = pipeline.analyze(e.id, e.spec)
    assert again.certificate == rec.certificate
    assert pipeline.cache_stats()["groups"] == 1
    assert pipeline.clear_cache() == 1


def test_corrupt_cache_entry_is_rebuilt():
    e = corpus_entry("S4")
    pipeline.analyze(e.id, e.spec)
    path = pipeline.cache_dir() / e.spec.digest() / "chartab.json"
    path.write_text("{not json")
    rec = pipeline.analyze(e.id, e.spec)
    assert rec.rdim == 3 and not rec.error
    json.loads(path.read_text())


def test_errors_are_recorded_not_raised():
    from rdimkit.group import GroupSpec

    spec = GroupSpec.from_dict({"kind": "table", "mul": [[0, 1], [1, 1]]})
    rec = pipeline.analyze("broken", spec)
    assert rec.error.startswith("GroupError")
    assert rec.survey["error"] == rec.error
    assert pipeline.cache_stats()["groups"] == 0


def test_fan_out_preserves_order():
    assert pipeline.fan_out(abs, [-3, 1, -2], jobs=2) == [3, 1, 2]
    assert pipeline.fan_out(abs, [-1], jobs=4) == [1]
