from __future__ import annotations

import pytest

from rdimkit.chartab import character_table
from rdimkit.corpus import corpus_entry, standard_corpus

# ((criterion number, part), PASS/FAIL, detail) lines filled in by the acceptance tests
ACCEPTANCE_LINES: list[tuple[tuple[int, str], str, str]] = []


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("RDIMKIT_CACHE", str(tmp_path / "cache"))


@pytest.fixture(scope="session")
def load():
    """Corpus groups by id, loaded once per session."""
    groups = {}

    def get(gid):
        if gid not in groups:
            groups[gid] = corpus_entry(gid).load()
        return groups[gid]

    return get


@pytest.fixture(scope="session")
def table(load):
    return lambda gid: character_table(load(gid))


@pytest.fixture(scope="session")
def fast_corpus():
    return standard_corpus(include_slow=False)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for (k, part), status, detail in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(f"criterion {f'{k}{part}':>3}: {status}  {detail}")
