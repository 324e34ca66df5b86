from __future__ import annotations

import json

import numpy as np
import pytest

from rdimkit.group import GroupError, GroupSizeError, GroupSpec, from_permutations, from_table, load_group, table_spec
from rdimkit.structure import (
    abelian_invariants,
    center,
    conjugacy_classes,
    derived_subgroup,
    lower_central_series,
    minimal_normal_subgroups,
    nilpotency_class,
    normal_subgroups,
    quotient,
    socle_decomposition,
)


def s3():
    return from_permutations([[1, 0, 2], [1, 2, 0]], 3)


def test_permutation_closure_and_axioms():
    g = s3()
    assert g.order == 6
    g.check_axioms()
    assert not g.is_abelian
    assert sorted(g.element_orders.tolist()) == [1, 2, 2, 2, 3, 3]
    assert g.exponent == 6


def test_bad_permutation_rejected():
    with pytest.raises(GroupError):
        from_permutations([[0, 0, 1]], 3)


def test_non_latin_table_rejected():
    with pytest.raises(GroupError):
        from_table([[0, 1], [1, 1]])


def test_nonassociative_latin_square_rejected():
    # a Latin square with identity 0 that is not associative
    mul = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(GroupError):
        from_table(mul)


def test_size_limit():
    with pytest.raises(GroupSizeError):
        from_permutations([[1, 2, 3, 4, 0], [1, 0, 2, 3, 4]], 5, max_order=100)


def test_spec_roundtrip_and_digest(tmp_path):
    spec = GroupSpec.from_dict({"kind": "perm", "degree": 3, "generators": [[1, 0, 2], [1, 2, 0]]})
    path = tmp_path / "s3.json"
    path.write_text(json.dumps(spec.to_dict()))
    again = GroupSpec.from_file(path)
    assert again == spec and again.digest() == spec.digest()
    assert len(spec.digest()) == 64
    g = load_group(spec)
    h = load_group(table_spec(g))
    assert h.order == 6 and np.array_equal(g.table, h.table)


def test_unknown_kind():
    with pytest.raises(GroupError):
        GroupSpec.from_dict({"kind": "presentation"})


def test_table_order_mismatch():
    with pytest.raises(GroupError):
        load_group({"kind": "table", "order": 3, "mul": [[0, 1], [1, 0]]})


def test_classes_and_center(load):
    g = load("D8")
    cd = conjugacy_classes(g)
    assert cd.n_classes == 5
    assert sorted(int(s) for s in cd.sizes) == [1, 1, 2, 2, 2]
    assert center(g).order == 2
    assert derived_subgroup(g).order == 2


def test_normal_subgroup_counts(load):
    # D8 and Q8 each have six normal subgroups, S4 has four
    assert len(normal_subgroups(load("D8"))) == 6
    assert len(normal_subgroups(load("Q8"))) == 6
    assert len(normal_subgroups(load("S4"))) == 4
    assert len(normal_subgroups(load("C2xC2xC2"))) == 16  # all subgroups: 1 + 7 + 7 + 1


def test_minimal_normals_and_socle(load):
    g = load("S4")
    mins = minimal_normal_subgroups(g)
    assert [m.order for m in mins] == [4]
    soc = socle_decomposition(load("A5"))
    assert soc.socle.order == 60 and soc.nonabelian_part.order == 60
    soc = socle_decomposition(load("C2xC2xC2"))
    assert soc.socle.order == 8 and soc.t == 3 and soc.a_list == (2, 2, 2)


def test_abelian_invariants(load):
    assert abelian_invariants(load("C2xC4"))[0] == (2, 4)
    assert abelian_invariants(load("C2xC2xC2"))[1] == 3
    assert abelian_invariants(load("C60"))[1] == 1


def test_quotient(load):
    g = load("Q8")
    q = quotient(g, center(g))
    assert q.order == 4 and q.is_abelian
    assert abelian_invariants(q)[0] == (2, 2)


def test_nilpotency(load):
    assert nilpotency_class(load("D16")) == 3
    assert nilpotency_class(load("Heis4")) == 2
    assert nilpotency_class(load("S3")) is None
    assert lower_central_series(load("C6"))[-1].order == 1


def test_subgroup_lattice_ops(load):
    g = load("D8")
    z = center(g)
    d = derived_subgroup(g)
    assert z == d and z.is_central and z.is_normal
    assert z.join(g.trivial()) == z
    assert z.intersection(g.trivial()).is_trivial
