"""Exact ordinary character tables via class matrices over GF(q) (Dixon's method).

The common eigenvectors of the class matrices are found over a prime field
``GF(q)`` with ``q = 1 (mod exponent)`` and ``q > 2 sqrt(|G|)``; character
values are then lifted to exact cyclotomic integers through the eigenvalue
multiplicities of each class element. Every table is verified (degree sum,
both orthogonality relations, principal row) before it is returned.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from sympy import isprime, primitive_root

from . import modp
from .cyclotomic import CyclotomicInt, degree as cyc_degree, reduction_matrix
from .group import Group, GroupError, Subgroup
from .structure import ClassData, center, conjugacy_classes

CACHE_SCHEMA = "rdimkit-chartab/1"


class TableError(RuntimeError):
    """A computed table failed verification (an internal error, never ignored)."""


def dixon_prime(order: int, exponent: int, bound: int = 10**7) -> int:
    """Smallest prime ``q = 1 (mod exponent)`` with ``q > 2 sqrt(order)``."""
    q = exponent + 1
    while q * q <= 4 * order or not isprime(q):
        q += exponent
        if q > bound:
            raise TableError(f"no Dixon prime below {bound} for exponent {exponent}")
    return q


def class_matrix(cd: ClassData, j: int) -> np.ndarray:
    """``M[i, k] = a_ijk = #{(x, y) in C_i x C_j : x y = z_k}`` for fixed reps ``z_k``."""
    g = cd.group
    c = cd.n_classes
    y_inv = g.inv[cd.members[j]]
    x = g.table[np.ix_(cd.reps, y_inv)]  # x = z_k y^-1
    cls = cd.class_of[x]
    m = np.zeros((c, c), dtype=np.int64)
    np.add.at(m, (cls, np.broadcast_to(np.arange(c)[:, None], cls.shape)), 1)
    return m


def class_matrices(cd: ClassData) -> np.ndarray:
    """All coefficients as ``a[i, j, k]``."""
    return np.stack([class_matrix(cd, j) for j in range(cd.n_classes)], axis=1)


@dataclass(frozen=True, eq=False)
class CharTable:
    """Irreducible characters; ``values[row, k]`` are canonical cyclotomic
    coefficient vectors (length ``phi(exponent)``)."""

    group: Group
    classes: ClassData
    degrees: tuple[int, ...]
    values: np.ndarray
    exponent: int
    prime: int

    @property
    def n_rows(self) -> int:
        return len(self.degrees)

    def __len__(self) -> int:
        return len(self.degrees)

    def value(self, row: int, k: int) -> CyclotomicInt:
        return CyclotomicInt(self.exponent, self.values[row, k])

    def row(self, row: int) -> list[CyclotomicInt]:
        return [self.value(row, k) for k in range(self.classes.n_classes)]

    def complex_values(self) -> np.ndarray:
        """Floating-point view of the table (display only)."""
        e = self.exponent
        z = np.exp(2j * np.pi * np.arange(self.values.shape[-1]) / e)
        return self.values @ z

    def to_dict(self) -> dict:
        return {
            "schema": CACHE_SCHEMA,
            "order": self.group.order,
            "exponent": self.exponent,
            "prime": self.prime,
            "class_reps": self.classes.reps.tolist(),
            "class_sizes": self.classes.sizes.tolist(),
            "degrees": list(self.degrees),
            "rows": self.values.tolist(),
        }

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":")).encode()
        return hashlib.sha256(blob).hexdigest()


def character_table(g: Group) -> CharTable:
    if "chartab" not in g.cache:
        t = _dixon(g)
        verify_table(t)
        g.cache["chartab"] = t
    return g.cache["chartab"]


def _split_common_eigenspaces(cd: ClassData, q: int) -> list[np.ndarray]:
    c = cd.n_classes
    spaces = [np.eye(c, dtype=np.int64)]
    for j in range(1, c):
        if all(len(v) == 1 for v in spaces):
            break
        m = class_matrix(cd, j) % q
        new: list[np.ndarray] = []
        for v in spaces:
            if len(v) == 1:
                new.append(v)
                continue
            v, piv = modp.rref(v, q)
            r = (v @ m.T % q)[:, piv]  # coefficient action c -> c @ r
            new.extend(_eigensplit(v, r, q))
        spaces = new
    if any(len(v) != 1 for v in spaces):
        raise TableError("class matrices failed to separate the characters")
    return spaces


def _eigensplit(v: np.ndarray, r: np.ndarray, q: int) -> list[np.ndarray]:
    d = len(r)
    if np.array_equal(r, np.diag(np.full(d, r[0, 0]))):
        return [v]
    rt = r.T % q
    pieces = []
    found = 0
    eye = np.eye(d, dtype=np.int64)
    for lam in modp.roots(modp.charpoly(rt, q), q):
        ns = modp.nullspace((rt - lam * eye) % q, q)
        if len(ns):
            pieces.append(ns @ v % q)
            found += len(ns)
            if found == d:
                break
    if found != d:
        raise TableError("class matrix restriction is not diagonalizable over GF(q)")
    return pieces


def _dixon(g: Group) -> CharTable:
    cd = conjugacy_classes(g)
    n, c, e = g.order, cd.n_classes, g.exponent
    q = dixon_prime(n, e)
    spaces = _split_common_eigenspaces(cd, q)
    omega = np.array([v[0] * pow(int(v[0, 0]), -1, q) % q for v in spaces], dtype=np.int64)
    inv_sizes = np.array([pow(int(s), -1, q) for s in cd.sizes], dtype=np.int64)
    sq_limit = math.isqrt(n)
    squares = {d * d % q: d for d in range(sq_limit, 0, -1)}
    degrees = []
    for w in omega:
        s = int(np.sum(w * w[cd.inverse_class] % q * inv_sizes % q) % q)
        target = n * pow(s, -1, q) % q
        if target not in squares:
            raise TableError("no integer degree matches the eigenvector norm")
        degrees.append(squares[target])
    deg = np.array(degrees, dtype=np.int64)
    chi_hat = (deg[:, None] * omega % q) * inv_sizes[None, :] % q

    # multiplicity of eigenvalue zeta^j of g_k in each representation
    powmaps = np.array([cd.power_map(l) for l in range(e)])  # (e, c)
    vals_pow = chi_hat[:, powmaps.T]  # (rows, c, e): chi(g_k^l)
    zeta = pow(primitive_root(q), (q - 1) // e, q)
    fourier = np.array([[pow(zeta, (-j * l) % e, q) for j in range(e)] for l in range(e)], dtype=np.int64)
    mult = np.zeros((c, c, e), dtype=np.int64)
    for j in range(e):
        # chunked to keep products below 2^63
        mult[:, :, j] = (vals_pow * fourier[None, None, :, j] % q).sum(axis=2) % q
    mult = mult * pow(e, -1, q) % q
    if np.any(mult > deg[:, None, None]) or np.any(mult.sum(axis=2) != deg[:, None]):
        raise TableError("eigenvalue multiplicities failed to lift")
    values = mult @ reduction_matrix(e)

    one = reduction_matrix(e)[0]
    principal = [i for i in range(c) if deg[i] == 1 and (values[i] == one).all()]
    if len(principal) != 1:
        raise TableError("principal character not found exactly once")
    rest = sorted(
        (i for i in range(c) if i != principal[0]),
        key=lambda i: (int(deg[i]), values[i].tolist()),
    )
    order = principal + rest
    values = np.ascontiguousarray(values[order])
    values.setflags(write=False)
    return CharTable(g, cd, tuple(int(deg[i]) for i in order), values, e, q)


def _gram(a: np.ndarray, b_conj: np.ndarray, weights: np.ndarray, e: int) -> np.ndarray:
    """Canonical ``sum_k w_k a[x, k] * b_conj[y, k]`` for all row pairs."""
    red = reduction_matrix(e)
    phi = a.shape[-1]
    # fold[i*phi + j] = canonical form of zeta^(i+j)
    idx = np.arange(phi)
    fold = red[(idx[:, None] + idx[None, :]).ravel() % e]
    aw = a * weights[None, :, None]
    rows_a, rows_b = a.shape[0], b_conj.shape[0]
    # float64 BLAS is exact while every partial sum stays below 2**53
    bound = (float(np.abs(aw).max(initial=0)) * float(np.abs(b_conj).max(initial=0)) * a.shape[1]
             * phi * phi * float(np.abs(fold).max(initial=0)))
    exact_float = bound < 2.0**52
    dtype = np.float64 if exact_float else np.int64
    aw_, b_, fold_ = aw.astype(dtype), b_conj.astype(dtype), fold.astype(dtype)
    out = np.zeros((rows_a, rows_b, phi), dtype=np.int64)
    chunk = max(1, int(4e7 // max(1, rows_b * phi * phi)))
    for start in range(0, rows_a, chunk):
        block = np.tensordot(aw_[start:start + chunk], b_, axes=([1], [1]))  # (x, i, y, j)
        block = block.transpose(0, 2, 1, 3).reshape(block.shape[0], rows_b, phi * phi)
        res = block @ fold_
        out[start:start + chunk] = np.rint(res).astype(np.int64) if exact_float else res
    return out


def conjugate_values(values: np.ndarray, e: int) -> np.ndarray:
    red = reduction_matrix(e)
    phi = values.shape[-1]
    conj = red[(-np.arange(phi)) % e]  # canonical zeta^-j for basis element j
    return values @ conj


def verify_table(t: CharTable) -> None:
    """Raise :class:`TableError` unless every table invariant holds exactly."""
    g, cd, e = t.group, t.classes, t.exponent
    n, c = g.order, cd.n_classes
    deg = np.array(t.degrees, dtype=np.int64)
    one = reduction_matrix(e)[0]
    if t.n_rows != c:
        raise TableError("row count differs from class count")
    if int(np.sum(deg * deg)) != n:
        raise TableError("sum of squared degrees differs from |G|")
    if any(n % d for d in t.degrees):
        raise TableError("a degree does not divide |G|")
    if not (t.values[0] == one).all():
        raise TableError("row 0 is not the principal character")
    if not np.array_equal(t.values[:, 0], deg[:, None] * one[None, :]):
        raise TableError("identity-class values differ from the degrees")
    z = center(g).order
    if np.any(deg * deg * z > n):
        raise TableError("a degree exceeds |G:Z(G)|^(1/2)")
    conj = conjugate_values(t.values, e)
    first = _gram(t.values, conj, cd.sizes, e)
    expected = np.zeros_like(first)
    expected[np.arange(c), np.arange(c)] = n * one
    if not np.array_equal(first, expected):
        raise TableError("first orthogonality relation fails")
    cols = np.ascontiguousarray(t.values.transpose(1, 0, 2))
    second = _gram(cols, np.ascontiguousarray(conj.transpose(1, 0, 2)), np.ones(c, dtype=np.int64), e)
    expected = np.zeros_like(second)
    expected[np.arange(c), np.arange(c)] = (n // cd.sizes)[:, None] * one
    if not np.array_equal(second, expected):
        raise TableError("second orthogonality relation fails")


# -- character-level predicates ------------------------------------------------


def kernel_classes(t: CharTable, row: int) -> frozenset[int]:
    target = t.degrees[row] * reduction_matrix(t.exponent)[0]
    return frozenset(np.flatnonzero((t.values[row] == target).all(axis=1)).tolist())


def kernel_mask(t: CharTable, row: int) -> int:
    return sum(1 << k for k in kernel_classes(t, row))


def kernel_subgroup(t: CharTable, row: int) -> Subgroup:
    return t.classes.subgroup_from_classes(sorted(kernel_classes(t, row)))


def faithful_rows(t: CharTable) -> list[int]:
    return [i for i in range(t.n_rows) if kernel_classes(t, i) == {0}]


@dataclass(frozen=True)
class CentralCharacter:
    """Linear character of a central subgroup, recorded on a fixed basis.

    ``exponents[i]`` is ``j`` with ``lam(basis[i]) = zeta_e**j``; for an
    elementary abelian ``p``-subgroup, ``vector`` is the same data in
    ``(Z/p)**r``.
    """

    subgroup: Subgroup
    basis: tuple[int, ...]
    exponent: int
    exponents: tuple[int, ...]
    p: int | None = None

    @property
    def vector(self) -> tuple[int, ...] | None:
        if self.p is None:
            return None
        step = self.exponent // self.p
        return tuple(j // step for j in self.exponents)

    @property
    def is_principal(self) -> bool:
        return not any(self.exponents)

    def values(self) -> tuple[CyclotomicInt, ...]:
        return tuple(CyclotomicInt.zeta(self.exponent, j) for j in self.exponents)


def central_basis(a: Subgroup) -> tuple[int, ...]:
    """Greedy generating set of ``a`` in element order (a basis when elementary abelian)."""
    gens, _ = a.parent.reduce_generators(a.elements)
    return tuple(gens)


def restrict_to_central(t: CharTable, row: int, a: Subgroup, basis: tuple[int, ...] | None = None) -> CentralCharacter:
    if not a.is_central:
        raise GroupError("restrict_to_central requires a central subgroup")
    basis = central_basis(a) if basis is None else tuple(basis)
    d = t.degrees[row]
    exps = []
    for z in basis:
        val = t.value(row, int(t.classes.class_of[z]))
        try:
            lam = val.exact_div(d)
        except ArithmeticError as exc:
            raise TableError("central element does not act by a scalar") from exc
        j = lam.root_of_unity_exponent()
        if j is None:
            raise TableError("central value is not a root of unity times the degree")
        exps.append(j)
    p = None
    if a.order > 1 and a.is_elementary_abelian:
        p = int(a.parent.element_orders[a.elements[1]])
    return CentralCharacter(a, basis, t.exponent, tuple(exps), p)


def lies_over(t: CharTable, row: int, lam: CentralCharacter) -> bool:
    return restrict_to_central(t, row, lam.subgroup, lam.basis).exponents == lam.exponents


def irr_over(t: CharTable, lam: CentralCharacter) -> list[int]:
    return [i for i in range(t.n_rows) if lies_over(t, i, lam)]


def _central_classes(t: CharTable) -> frozenset[int]:
    return frozenset(np.flatnonzero(t.classes.sizes == 1).tolist())


def irr_over_center_nonprincipal(t: CharTable) -> list[int]:
    """Rows whose kernel does not contain ``Z(G)``."""
    zc = _central_classes(t)
    return [i for i in range(t.n_rows) if not zc <= kernel_classes(t, i)]


def irr_over_subgroup_nonprincipal(t: CharTable, n: Subgroup) -> list[int]:
    """Rows whose kernel does not contain the normal subgroup ``n``."""
    nc = frozenset(t.classes.classes_of(n.elements).tolist())
    return [i for i in range(t.n_rows) if not nc <= kernel_classes(t, i)]


def is_fully_ramified(t: CharTable, row: int) -> bool:
    """``chi(1)**2 == |G:Z|``, cross-checked against vanishing off the center."""
    zc = _central_classes(t)
    if zc <= kernel_classes(t, row):
        return False
    g = t.group
    d = t.degrees[row]
    by_degree = d * d * len(zc) == g.order
    off_center = [k for k in range(t.classes.n_classes) if k not in zc]
    by_vanishing = not t.values[row, off_center].any()
    if by_degree != by_vanishing:
        raise TableError("fully-ramified criteria disagree")
    return by_degree


def has_faithful_irreducible(t: CharTable) -> int | None:
    """Minimum-degree faithful row, or ``None``."""
    rows = faithful_rows(t)
    if not rows:
        return None
    return min(rows, key=lambda i: (t.degrees[i], i))


# -- cache files ----------------------------------------------------------------


def save_table(t: CharTable, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
        json.dump(t.to_dict(), fh, sort_keys=True)
    os.replace(tmp, path)


def load_table(path: str | Path, g: Group) -> CharTable:
    with open(path) as fh:
        data = json.load(fh)
    if data.get("schema") != CACHE_SCHEMA:
        raise TableError(f"unsupported table cache schema {data.get('schema')!r}")
    cd = conjugacy_classes(g)
    if data["order"] != g.order or data["class_reps"] != cd.reps.tolist() or data["class_sizes"] != cd.sizes.tolist():
        raise TableError("cached table does not match this group")
    e = int(data["exponent"])
    values = np.array(data["rows"], dtype=np.int64).reshape(len(data["degrees"]), cd.n_classes, cyc_degree(e))
    values.setflags(write=False)
    t = CharTable(g, cd, tuple(int(d) for d in data["degrees"]), values, e, int(data["prime"]))
    verify_table(t)
    return t
