from __future__ import annotations

import math

import pytest

from rdimkit.chartab import character_table
from rdimkit.group import GroupError
from rdimkit.solver import rdim
from rdimkit.structure import center, derived_subgroup, normal_subgroups
from rdimkit.theorems import (
    FAIL,
    PASS,
    SKIPPED,
    REFERENCE_CAL_TUPLES,
    abelian_quotient_rank,
    abelianization_witness,
    all_fully_ramified_over_center,
    check_quotient_bounds,
    check_theorem_B,
    check_theorem_C,
    check_theorem_D,
    check_theorem_E,
    check_theorem_F,
    check_theorem_parity,
    classify_theorem_A,
    f_p,
    is_camina_pair,
    max_cal_length,
    quotient_rdim,
    quotient_rdims_from_table,
    socle_sum_sign,
    verify_lemma_cal,
)


def verdicts(load, gid):
    g = load(gid)
    t = character_table(g)
    n = rdim(g)
    return g, t, n


def test_f_p_brute():
    for p in (2, 3, 5):
        for n in range(1, 12):
            rep = f_p(p, n)
            vals = [r * p ** ((n - r) // 2) for r in range(1, n + 1)]
            assert rep.value == max(vals)
            assert rep.argmax == tuple(r + 1 for r, v in enumerate(vals) if v == max(vals))


def test_f_p_rejects_nonpositive():
    with pytest.raises(ValueError):
        f_p(2, 0)


def test_theorem_A_branches(load):
    g, t, n = verdicts(load, "C2xC2xC2")
    v = classify_theorem_A(g, t, n)
    assert (v.status, v.branch) == (PASS, "ii")
    g, t, n = verdicts(load, "S4")
    v = classify_theorem_A(g, t, n)
    assert (v.status, v.branch) == (PASS, "i")
    assert n * n <= g.order


def test_theorem_B(load):
    for gid in ("C2xC2", "Heis4", "C2xC2xC2xC2", "Q8xQ8"):
        g, t, n = verdicts(load, gid)
        v = check_theorem_B(g, t, n)
        assert v.status == PASS
        assert (n * n == g.order) == (v.branch != "-")


def test_theorem_C_excluded_n(load):
    g, t, n = verdicts(load, "E2^5+")
    assert check_theorem_C(g, t, n).status == SKIPPED
    g, t, n = verdicts(load, "Heis8")
    v = check_theorem_C(g, t, n)
    assert (v.status, v.branch) == (PASS, "i")


def test_theorem_D_passes_on_extraspecial(load):
    for gid in ("E3^3+", "E5^3-", "E3^5+"):
        g, t, n = verdicts(load, gid)
        assert check_theorem_D(g, t, n).status == PASS


def test_theorem_D_fails_on_elementary_abelian_order_27(load):
    # f_3(3) = 3 is attained at r = 1 and at r = 3, so C3^3 reaches it with |Z| = 27
    g, t, n = verdicts(load, "C3xC3xC3")
    assert n == f_p(3, 3).value == 3
    assert f_p(3, 3).argmax == (1, 3)
    v = check_theorem_D(g, t, n)
    assert v.status == FAIL
    assert v.evidence.center_order == 27


def test_parity_theorem(load):
    for gid in ("D8", "Q16", "C2xC4", "E3^3-", "D8oC8", "C4:C8"):
        g, t, n = verdicts(load, gid)
        assert check_theorem_parity(g, t, n).status == PASS


def test_lemma_cal_enumeration():
    assert max_cal_length() == 6
    assert not any(t * t >= 2 ** (t - 1) for t in range(7, 40))
    sols = verify_lemma_cal()
    strict = {s.a for s in sols if not s.boundary}
    boundary = {s.a for s in sols if s.boundary}
    assert strict == REFERENCE_CAL_TUPLES | {(2, 2, 2, 2, 2, 2)}
    assert boundary == {(4, 4), (8, 2, 2), (3, 3, 3)}


def test_socle_sum_float_agreement():
    for a in [(11, 2), (12, 2), (4, 4), (2,) * 6, (2,) * 7, (6, 3), (5, 3), (4, 3, 2), (5, 3, 2)]:
        prod = math.prod(a)
        s = sum(math.sqrt(x / prod) for x in a) - 1
        if abs(s) > 1e-12:
            assert socle_sum_sign(a) == (1 if s > 0 else -1)
        else:
            assert socle_sum_sign(a) == 0


def test_quotient_rdims(load):
    g = load("D8")
    table_values = quotient_rdims_from_table(character_table(g))
    for s in normal_subgroups(g):
        assert table_values[s.mask.tobytes()] == quotient_rdim(g, s)
    assert abelian_quotient_rank(g, derived_subgroup(g)) == 2
    with pytest.raises(GroupError):
        abelian_quotient_rank(g, g.trivial())


def test_quotient_bound_reports(load):
    g = load("S4")
    reps = check_quotient_bounds(g)
    assert {r.theorem for r in reps} == {"E", "F"}
    assert all(r.status == PASS for r in reps)
    f = check_theorem_F(g, derived_subgroup(g))
    assert (f.rdim_g, f.rdim_quotient, f.bound) == (3, 1, 4)
    e = check_theorem_E(g, g.trivial(), j=lambda n: 1)
    assert e.rdim_quotient == 3 and e.bound == 3
    with pytest.raises(GroupError):
        check_theorem_F(g, g.trivial())


def test_abelianization_witness(load):
    w = abelianization_witness(load("D8oC8"))
    assert w.exhibits
    assert (w.rdim, w.rdim_abelianization) == (2, 3)
    assert not abelianization_witness(load("D16xC2")).exhibits


def test_camina(load):
    for gid, expected in [("Q8", True), ("E3^3+", True), ("D16", False), ("C4", True), ("D12", False)]:
        g = load(gid)
        assert is_camina_pair(g) is expected
        assert all_fully_ramified_over_center(character_table(g)) is expected
    # with trivial center both sides hold vacuously
    assert is_camina_pair(load("S3")) and all_fully_ramified_over_center(character_table(load("S3")))


def test_center_of_frobenius_trivial(load):
    assert center(load("Frob20")).order == 1


def test_theorem_D_skips_excluded_n(load):
    g, t, n = verdicts(load, "Heis3xC3")
    assert check_theorem_D(g, t, n).status == SKIPPED
