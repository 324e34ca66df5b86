from __future__ import annotations

import dataclasses

import numpy as np
import pytest
from sympy import isprime

from rdimkit.chartab import (
    TableError,
    character_table,
    dixon_prime,
    faithful_rows,
    has_faithful_irreducible,
    is_fully_ramified,
    kernel_subgroup,
    load_table,
    save_table,
    verify_table,
)
from rdimkit.corpus import corpus_entry


def test_dixon_prime_conditions():
    for order, e in [(6, 6), (60, 30), (512, 4), (4096, 4), (120, 12)]:
        q = dixon_prime(order, e)
        assert isprime(q) and q % e == 1 and q * q > 4 * order
        smaller = [p for p in range(e + 1, q, e) if isprime(p) and p * p > 4 * order]
        assert not smaller


@pytest.mark.parametrize(
    "gid, degrees",
    [
        ("S3", [1, 1, 2]),
        ("D8", [1, 1, 1, 1, 2]),
        ("Q8", [1, 1, 1, 1, 2]),
        ("A4", [1, 1, 1, 3]),
        ("S4", [1, 1, 2, 3, 3]),
        ("A5", [1, 3, 3, 4, 5]),
        ("S5", [1, 1, 4, 4, 5, 5, 6]),
        ("Frob20", [1, 1, 1, 1, 4]),
        ("Heis3", [1] * 9 + [3, 3]),
    ],
)
def test_degrees(table, gid, degrees):
    assert sorted(table(gid).degrees) == degrees


def test_complex_orthogonality_independent(table):
    # floating-point check of both orthogonality relations, separate from the exact one
    for gid in ("S4", "A5", "Heis3", "C3xQ8", "E2^5-"):
        t = table(gid)
        x = t.complex_values()
        sizes = t.classes.sizes.astype(float)
        n = t.group.order
        assert np.allclose((x * sizes) @ x.conj().T, n * np.eye(t.n_rows), atol=1e-8)
        assert np.allclose(x.conj().T @ x, np.diag(n / sizes), atol=1e-8)


def test_a5_irrationalities(table):
    t = table("A5")
    golden = (1 + 5**0.5) / 2
    vals = {round(v.real, 9) for v in t.complex_values().ravel()}
    assert round(golden, 9) in vals and round(1 - golden, 9) in vals


def test_corrupted_table_rejected(table):
    t = table("S4")
    bad = t.values.copy()
    bad[2, 1] = -bad[2, 1]
    with pytest.raises(TableError):
        verify_table(dataclasses.replace(t, values=bad))
    with pytest.raises(TableError):
        verify_table(dataclasses.replace(t, degrees=(1, 1, 2, 3, 2)))


def test_cache_roundtrip(tmp_path):
    g = corpus_entry("Q16").load()
    t = character_table(g)
    path = tmp_path / "t.json"
    save_table(t, path)
    h = corpus_entry("Q16").load()
    u = load_table(path, h)
    assert u.digest() == t.digest()
    assert np.array_equal(u.values, t.values)


def test_kernels_and_faithful_rows(table):
    t = table("D8")
    assert has_faithful_irreducible(t) is not None
    assert [t.degrees[r] for r in faithful_rows(t)] == [2]
    assert [kernel_subgroup(t, r).order for r in range(t.n_rows)].count(8) == 1
    assert has_faithful_irreducible(table("C2xC2")) is None


def test_fully_ramified(table):
    t = table("E3^3+")
    rows = [r for r in range(t.n_rows) if is_fully_ramified(t, r)]
    assert sorted(t.degrees[r] for r in rows) == [3, 3]
