from __future__ import annotations

import numpy as np
import pytest

from rdimkit.corpus import (
    build,
    build_family,
    corpus_entry,
    export_corpus,
    field_tables,
    heisenberg,
    standard_corpus,
)
from rdimkit.group import GroupError, GroupSpec, load_group
from rdimkit.structure import abelian_invariants, center, nilpotency_class


def test_ids_unique_and_orders(fast_corpus):
    ids = [e.id for e in fast_corpus]
    assert len(ids) == len(set(ids))
    assert all(not e.slow for e in fast_corpus)
    slow = [e.id for e in standard_corpus(include_slow=True) if e.slow]
    assert slow == ["Heis16"]


def test_every_entry_has_declared_order(fast_corpus):
    for e in fast_corpus:
        assert e.load().order == e.order, e.id


def test_abelian_coverage(fast_corpus):
    # number of abelian groups of order n is the product of partition counts of the exponents
    from sympy import factorint
    from sympy.functions.combinatorial.numbers import partition

    counts = {}
    for e in fast_corpus:
        if "abelian" in e.tags:
            counts[e.order] = counts.get(e.order, 0) + 1
    for n in range(2, 65):
        expected = 1
        for k in factorint(n).values():
            expected *= int(partition(k))
        assert counts.get(n, 0) == expected, n


def test_field_tables_form_a_field():
    add, mul = field_tables(8)
    assert np.array_equal(add, add.T) and np.array_equal(mul, mul.T)
    for x in range(1, 8):
        assert 1 in mul[x].tolist()
    assert (add[np.arange(8), np.arange(8)] == 0).all()


def test_heisenberg_structure():
    g = heisenberg(4)
    assert g.order == 64
    assert center(g).order == 4
    assert nilpotency_class(g) == 2


def test_family_errors():
    with pytest.raises(GroupError):
        build_family("semidihedral", {"order": 12})
    with pytest.raises(GroupError):
        build_family("no_such_family", {})
    with pytest.raises(GroupError):
        build_family("heisenberg", {"q": 6})


def test_build_spec():
    spec = build("dihedral", m=5)
    assert isinstance(spec, GroupSpec)
    assert load_group(spec).order == 10


def test_export(tmp_path):
    paths = export_corpus(tmp_path)
    assert len(paths) == len(standard_corpus(include_slow=False))
    spec = GroupSpec.from_file(tmp_path / "C2xC4.json")
    assert abelian_invariants(load_group(spec))[0] == (2, 4)


def test_unknown_entry():
    with pytest.raises(KeyError):
        corpus_entry("nope")


def test_dicyclic_from_quaternion_family():
    g = build_family("quaternion", {"order": 12})
    assert g.order == 12 and center(g).order == 2
