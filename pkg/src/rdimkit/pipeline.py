"""Per-group pipeline (classes, table, structure, rdim, verdicts), the on-disk
cache, and the corpus survey."""

from __future__ import annotations

import json
import os
import shutil
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Iterable

from .chartab import CharTable, TableError, character_table, load_table, save_table
from .group import Group, GroupSpec, load_group
from .solver import SolverConfig, SolverExhausted, build_cover, rdim_abelian, solve_rdim
from .structure import center, minimal_normal_subgroups, nilpotency_class, prime_power, socle_decomposition, subgroup_invariants
from .theorems import (
    FAIL,
    ClassifierVerdict,
    all_fully_ramified_over_center,
    check_theorem_B,
    check_theorem_C,
    check_theorem_D,
    check_theorem_parity,
    classify_theorem_A,
    f_p,
    is_camina_pair,
)

SURVEY_SCHEMA = "rdimkit-survey/1"
RECORD_SCHEMA = "rdimkit-record/1"
CACHE_ENV = "RDIMKIT_CACHE"

SURVEY_COLUMNS = (
    "schema", "id", "order", "p", "n", "nilpotency_class", "center_rank", "rdim", "rdim_sq_vs_order",
    "f_p", "A", "A_branch", "B", "C", "D", "even_odd", "camina", "fully_ramified", "error",
)


def cache_dir() -> Path:
    return Path(os.environ.get(CACHE_ENV) or Path.home() / ".cache" / "rdimkit")


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def cached_table(g: Group, spec: GroupSpec, use_cache: bool = True) -> CharTable:
    """Character table, read from (and written to) the cache keyed by the spec hash."""
    if not use_cache:
        return character_table(g)
    path = cache_dir() / spec.digest() / "chartab.json"
    if "chartab" not in g.cache and path.exists():
        try:
            g.cache["chartab"] = load_table(path, g)
        except (TableError, ValueError, KeyError):
            path.unlink(missing_ok=True)
    t = character_table(g)
    if not path.exists():
        save_table(t, path)
    return t


def compare_square(rdim: int, order: int) -> str:
    """``LT``/``EQ``/``GT`` for rdim^2 against |G|."""
    sq = rdim * rdim
    return "LT" if sq < order else "EQ" if sq == order else "GT"


@dataclass
class RunRecord:
    group_id: str
    input_hash: str
    order: int
    rdim: int | None = None
    certificate: dict | None = None
    verdicts: list[dict] = field(default_factory=list)
    survey: dict = field(default_factory=dict)
    timings: dict[str, float] = field(default_factory=dict)
    cache_paths: list[str] = field(default_factory=list)
    error: str = ""

    @property
    def failed(self) -> bool:
        return any(v["status"] == FAIL for v in self.verdicts)

    def to_dict(self) -> dict:
        return {"schema": RECORD_SCHEMA, **asdict(self)}


def _verdict_dict(v: ClassifierVerdict) -> dict:
    return {"theorem": v.theorem, "branch": v.branch, "status": v.status, "detail": v.detail,
            "evidence": v.evidence.as_dict()}


def analyze(group_id: str, spec: GroupSpec, use_cache: bool = True,
            cfg: SolverConfig | None = None) -> RunRecord:
    """Run the whole pipeline for one group; never raises for per-group failures."""
    rec = RunRecord(group_id, spec.digest(), 0)
    clock = time.perf_counter
    try:
        t0 = clock()
        g = load_group(spec, name=group_id)
        rec.order = g.order
        rec.timings["load"] = clock() - t0
        t0 = clock()
        t = cached_table(g, spec, use_cache)
        rec.timings["chartab"] = clock() - t0
        t0 = clock()
        minimals = minimal_normal_subgroups(g)
        socle_decomposition(g)
        rec.timings["structure"] = clock() - t0
        t0 = clock()
        cert = solve_rdim(build_cover(t, minimals), cfg)
        if g.is_abelian and rdim_abelian(g) != cert.total:
            raise AssertionError("solver disagrees with d(G) on an abelian group")
        rec.rdim = cert.total
        rec.certificate = cert.to_dict()
        g.cache["rdim"] = cert.total
        rec.timings["rdim"] = clock() - t0
        if g.order > 1:
            t0 = clock()
            rec.verdicts = [_verdict_dict(v) for v in theorem_verdicts(g, t, cert.total)]
            rec.timings["theorems"] = clock() - t0
            rec.survey = survey_row(group_id, g, t, cert.total, rec.verdicts)
    except (SolverExhausted, MemoryError, ValueError, RuntimeError, AssertionError) as exc:
        rec.error = f"{type(exc).__name__}: {exc}"
    if not rec.survey:
        rec.survey = {c: "" for c in SURVEY_COLUMNS} | {"schema": SURVEY_SCHEMA, "id": group_id,
                                                      "order": rec.order, "error": rec.error}
    if use_cache and not rec.error:
        path = cache_dir() / rec.input_hash / "record.json"
        rec.cache_paths = [str(path.parent / "chartab.json"), str(path)]
        _atomic_write(path, json.dumps(rec.to_dict(), sort_keys=True, indent=1))
    return rec


def theorem_verdicts(g: Group, t: CharTable, rdim: int) -> list[ClassifierVerdict]:
    out = [classify_theorem_A(g, t, rdim), check_theorem_B(g, t, rdim),
           check_theorem_C(g, t, rdim), check_theorem_D(g, t, rdim)]
    if prime_power(g.order):
        out.append(check_theorem_parity(g, t, rdim))
    return out


def survey_row(group_id: str, g: Group, t: CharTable, rdim: int, verdicts: list[dict]) -> dict:
    pp = prime_power(g.order)
    by = {v["theorem"]: v for v in verdicts}
    parity = by.get("even") or by.get("odd")
    z = center(g)
    return {
        "schema": SURVEY_SCHEMA,
        "id": group_id,
        "order": g.order,
        "p": pp[0] if pp else "",
        "n": pp[1] if pp else "",
        "nilpotency_class": nilpotency_class(g) if pp else "",
        "center_rank": subgroup_invariants(z)[1],
        "rdim": rdim,
        "rdim_sq_vs_order": compare_square(rdim, g.order),
        "f_p": f_p(*pp).value if pp else "",
        "A": by["A"]["status"],
        "A_branch": by["A"]["branch"],
        "B": by["B"]["status"],
        "C": by["C"]["status"],
        "D": by["D"]["status"],
        "even_odd": f"{parity['theorem']}:{parity['status']}" if parity else "",
        "camina": int(is_camina_pair(g)) if z.order > 1 else "",
        "fully_ramified": int(all_fully_ramified_over_center(t)),
        "error": "",
    }


def _analyze_entry(args: tuple[str, GroupSpec, bool]) -> RunRecord:
    return analyze(*args)


def fan_out(fn: Callable, items: Iterable, jobs: int | None = None) -> list:
    """Map ``fn`` over ``items`` in worker processes, preserving order."""
    items = list(items)
    jobs = jobs or os.cpu_count() or 1
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=1))


def survey(entries, jobs: int | None = None, use_cache: bool = True) -> list[RunRecord]:
    """Analyze every corpus entry; rows come back in corpus order."""
    return fan_out(_analyze_entry, [(e.id, e.spec, use_cache) for e in entries], jobs)


def cache_stats() -> dict:
    root = cache_dir()
    if not root.exists():
        return {"path": str(root), "groups": 0, "files": 0, "bytes": 0}
    files = [p for p in root.rglob("*") if p.is_file()]
    return {"path": str(root), "groups": sum(1 for p in root.iterdir() if p.is_dir()),
            "files": len(files), "bytes": sum(p.stat().st_size for p in files)}


def clear_cache() -> int:
    root = cache_dir()
    n = 0
    if root.exists():
        for child in root.iterdir():
            if child.is_dir():
                shutil.rmtree(child)
                n += 1
    return n
