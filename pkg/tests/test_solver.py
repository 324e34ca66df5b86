from __future__ import annotations

import pytest

from rdimkit.chartab import character_table
from rdimkit.solver import (
    SolverConfig,
    SolverExhausted,
    brute_force_rdim,
    build_cover,
    compute_rdim,
    rdim,
    rdim_abelian,
    rdim_pgroup,
    solve_rdim,
    upper_bound_socle,
    verify_certificate,
)
from rdimkit.structure import minimal_normal_subgroups

KNOWN = {
    "C7": 1, "C2xC2": 2, "C2xC2xC2": 3, "C6xC6": 2, "S3": 2, "D8": 2, "Q8": 2, "A4": 3,
    "S4": 3, "A5": 3, "S5": 4, "Frob20": 4, "C2xD8": 3, "Q8xQ8": 4, "E2^5+": 4, "Heis2": 2,
}


@pytest.mark.parametrize("gid, value", sorted(KNOWN.items()))
def test_known_values(load, gid, value):
    g = load(gid)
    assert rdim(g) == value
    if g.order > 1:
        assert brute_force_rdim(character_table(g)) == value


def test_certificate(load):
    g = load("S3xS3")
    res = compute_rdim(g)
    cert = res.certificate
    verify_certificate(res.instance, cert)
    assert cert.total == sum(cert.degrees) == 4
    d = cert.to_dict()
    assert d["rows"] == list(cert.rows) and d["total"] == 4


def test_tampered_certificate_rejected(load):
    g = load("C2xC2xC2")
    res = compute_rdim(g)
    cert = res.certificate
    import dataclasses

    bad = dataclasses.replace(cert, rows=cert.rows[:-1], degrees=cert.degrees[:-1], total=cert.total - 1)
    with pytest.raises(AssertionError):
        verify_certificate(res.instance, bad)


def test_node_limit(load):
    t = character_table(load("C2xC2xC2xC2xC2"))
    with pytest.raises(SolverExhausted):
        solve_rdim(build_cover(t), SolverConfig(node_limit=1))


def test_abelian_requires_abelian(load):
    with pytest.raises(ValueError):
        rdim_abelian(load("S3"))


def test_pgroup_fast_path_and_exhaustive(load):
    for gid in ("D8oC8", "Q8xC2xC2", "E3^3-", "Heis4", "C2xC4xC4", "D8xD8"):
        g = load(gid)
        t = character_table(g)
        rep = rdim_pgroup(g, t)
        assert rep.value == rep.exhaustive_minimum() == solve_rdim(build_cover(t)).total


def test_socle_bound(load):
    for gid in ("C2xC2xC2", "A5xC3", "S3xS3", "Frob42", "D8xQ8"):
        g = load(gid)
        sb = upper_bound_socle(g)
        assert sb.bound >= rdim(g)
        assert len(sb.rows) == max(1, len(sb.a_list))


def test_cover_universe_is_minimal_normals(load):
    g = load("C6xC6")
    inst = build_cover(character_table(g))
    assert len(inst.universe) == len(minimal_normal_subgroups(g)) == 7


def test_trivial_group():
    from rdimkit.group import from_table

    assert rdim(from_table([[0]])) == 0
