"""Finite groups as multiplication tables on element indices 0..|G|-1."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

DEFAULT_MAX_ORDER = 10_000
FULL_ASSOCIATIVITY_LIMIT = 512


class GroupError(ValueError):
    """Malformed group input."""


class GroupSizeError(GroupError):
    """Group closure exceeds the configured maximum order."""


@dataclass(frozen=True)
class GroupSpec:
    """Serializable description of a group.

    ``kind`` is one of ``"perm"``, ``"table"`` or ``"family"``; ``payload``
    holds the remaining keys of the JSON form.
    """

    kind: str
    payload: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: dict) -> GroupSpec:
        data = dict(data)
        kind = data.pop("kind", None)
        if kind not in ("perm", "table", "family"):
            raise GroupError(f"unknown group spec kind {kind!r}")
        return cls(kind, data)

    @classmethod
    def from_file(cls, path: str | Path) -> GroupSpec:
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        return {"kind": self.kind, **self.payload}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def digest(self) -> str:
        return hashlib.sha256(self.to_json().encode()).hexdigest()


class Group:
    """A finite group given by a total multiplication table.

    ``table[a, b]`` is the index of ``a*b``. Instances are treated as
    immutable; derived data is memoized on first use.
    """

    def __init__(
        self,
        table: np.ndarray,
        identity: int = 0,
        labels: Sequence[Any] | None = None,
        name: str = "",
    ):
        table = np.ascontiguousarray(table, dtype=_index_dtype(len(table)))
        table.setflags(write=False)
        self.table = table
        self.identity = int(identity)
        self.labels = tuple(labels) if labels is not None else tuple(range(len(table)))
        self.name = name
        # derived structure computed by other modules is memoized here
        self.cache: dict[Any, Any] = {}

    def __repr__(self) -> str:
        return f"Group({self.name or '?'}, order={self.order})"

    def __len__(self) -> int:
        return self.order

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    @cached_property
    def inv(self) -> np.ndarray:
        rows, cols = np.nonzero(self.table == self.identity)
        inv = np.empty(self.order, dtype=np.int64)
        inv[rows] = cols
        inv.setflags(write=False)
        return inv

    def power(self, x: int, m: int) -> int:
        return int(self.powers(np.array([x]), m)[0])

    def powers(self, xs: np.ndarray, m: int) -> np.ndarray:
        """Elementwise ``x**m`` by binary exponentiation (``m`` may be negative)."""
        xs = np.asarray(xs, dtype=np.int64)
        if m < 0:
            xs = self.inv[xs]
            m = -m
        result = np.full_like(xs, self.identity)
        base = xs.copy()
        while m:
            if m & 1:
                result = self.table[result, base].astype(np.int64)
            base = self.table[base, base].astype(np.int64)
            m >>= 1
        return result

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        idx = np.arange(n)
        orders = np.zeros(n, dtype=np.int64)
        cur = idx.copy()
        k = 1
        while True:
            hit = (cur == self.identity) & (orders == 0)
            orders[hit] = k
            if orders.all():
                break
            cur = self.table[cur, idx].astype(np.int64)
            k += 1
        orders.setflags(write=False)
        return orders

    @cached_property
    def exponent(self) -> int:
        return int(np.lcm.reduce(np.unique(self.element_orders)))

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """A small generating set, chosen greedily (larger element orders first)."""
        order_key = np.lexsort((np.arange(self.order), -self.element_orders))
        gens, _ = self.reduce_generators(order_key)
        return tuple(gens)

    def reduce_generators(self, xs: Iterable[int]) -> tuple[list[int], np.ndarray]:
        """Greedily keep the ``xs`` that enlarge the subgroup generated so far."""
        gens: list[int] = []
        mask = np.zeros(self.order, dtype=bool)
        mask[self.identity] = True
        for x in xs:
            if not mask[x]:
                gens.append(int(x))
                mask = self.closure_mask(gens)
                if mask.all():
                    break
        return gens, mask

    @cached_property
    def conjugators(self) -> np.ndarray:
        """Row ``i`` maps ``x`` to ``s x s^-1`` for the ``i``-th generator ``s``."""
        rows = [self.table[self.table[s, :], self.inv[s]] for s in self.generators]
        if not rows:
            return np.zeros((0, self.order), dtype=np.int64)
        return np.array(rows, dtype=np.int64)

    def closure_mask(self, gens: Iterable[int]) -> np.ndarray:
        """Boolean mask of the subgroup generated by ``gens``."""
        gens = np.unique(np.asarray(list(gens), dtype=np.int64))
        mask = np.zeros(self.order, dtype=bool)
        mask[self.identity] = True
        frontier = np.array([self.identity], dtype=np.int64)
        if gens.size == 0:
            return mask
        while frontier.size:
            prod = self.table[np.ix_(frontier, gens)].ravel()
            new = np.unique(prod[~mask[prod]])
            mask[new] = True
            frontier = new.astype(np.int64)
        return mask

    def subgroup(self, gens: Iterable[int]) -> Subgroup:
        return Subgroup.from_mask(self, self.closure_mask(gens))

    def whole(self) -> Subgroup:
        return Subgroup.from_mask(self, np.ones(self.order, dtype=bool))

    def trivial(self) -> Subgroup:
        mask = np.zeros(self.order, dtype=bool)
        mask[self.identity] = True
        return Subgroup.from_mask(self, mask)

    def normal_closure(self, xs: Iterable[int]) -> Subgroup:
        gens, mask = self.reduce_generators(xs)
        while True:
            conj = self.conjugators[:, np.flatnonzero(mask)].ravel()
            missing = conj[~mask[conj]]
            if missing.size == 0:
                return Subgroup.from_mask(self, mask)
            gens.append(int(missing[0]))
            mask = self.closure_mask(gens)

    def check_axioms(self, rng_seed: int = 0, samples: int = 20_000) -> None:
        """Raise :class:`GroupError` unless the table is a group table."""
        n = self.order
        t = self.table.astype(np.int64)
        idx = np.arange(n)
        if not (np.array_equal(t[self.identity], idx) and np.array_equal(t[:, self.identity], idx)):
            raise GroupError("designated identity is not two-sided")
        if n <= FULL_ASSOCIATIVITY_LIMIT:
            for a in range(n):
                # (a*b)*c == a*(b*c) for all b, c
                if not np.array_equal(t[t[a]], t[a][t]):
                    raise GroupError(f"table is not associative (first failure at a={a})")
        else:
            rng = np.random.default_rng(rng_seed)
            a, b, c = rng.integers(0, n, size=(3, samples))
            if not np.array_equal(t[t[a, b], c], t[a, t[b, c]]):
                raise GroupError("table is not associative on sampled triples")


@dataclass(frozen=True, eq=False)
class Subgroup:
    """A subgroup stored as a sorted element-index array plus a membership mask."""

    parent: Group
    elements: np.ndarray
    mask: np.ndarray

    @classmethod
    def from_mask(cls, parent: Group, mask: np.ndarray) -> Subgroup:
        mask = np.asarray(mask, dtype=bool).copy()
        mask.setflags(write=False)
        elements = np.flatnonzero(mask)
        elements.setflags(write=False)
        return cls(parent, elements, mask)

    @classmethod
    def from_elements(cls, parent: Group, elements: Iterable[int]) -> Subgroup:
        mask = np.zeros(parent.order, dtype=bool)
        mask[np.asarray(list(elements), dtype=np.int64)] = True
        return cls.from_mask(parent, mask)

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x: int) -> bool:
        return bool(self.mask[x])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return other.parent is self.parent and np.array_equal(self.mask, other.mask)

    def __hash__(self) -> int:
        return hash(self.mask.tobytes())

    def __le__(self, other: Subgroup) -> bool:
        return bool(np.all(other.mask[self.elements]))

    def __lt__(self, other: Subgroup) -> bool:
        return self <= other and self.order < other.order

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order} of {self.parent!r})"

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    def intersection(self, other: Subgroup) -> Subgroup:
        return Subgroup.from_mask(self.parent, self.mask & other.mask)

    def join(self, other: Subgroup) -> Subgroup:
        """Subgroup generated by both (their product when one is normal)."""
        _, mask = self.parent.reduce_generators(np.concatenate([self.elements, other.elements]))
        return Subgroup.from_mask(self.parent, mask)

    @cached_property
    def is_normal(self) -> bool:
        conj = self.parent.conjugators[:, self.elements]
        return bool(self.mask[conj].all())

    @cached_property
    def is_abelian(self) -> bool:
        sub = self.parent.table[np.ix_(self.elements, self.elements)]
        return bool(np.array_equal(sub, sub.T))

    @cached_property
    def is_central(self) -> bool:
        t = self.parent.table
        return bool(np.array_equal(t[self.elements, :], t[:, self.elements].T))

    @cached_property
    def is_elementary_abelian(self) -> bool:
        if self.order == 1:
            return True
        orders = set(self.parent.element_orders[self.elements].tolist()) - {1}
        return self.is_abelian and len(orders) == 1 and _is_prime(orders.pop())


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _index_dtype(n: int):
    return np.int16 if n < 2**15 else np.int32


def _parse_permutation(gen, degree: int) -> np.ndarray:
    """Accept either an image list ``[p(0), ..., p(n-1)]`` or a list of cycles."""
    gen = list(gen)
    if gen and all(isinstance(c, (list, tuple)) for c in gen):
        perm = np.arange(degree)
        seen: set[int] = set()
        for cycle in gen:
            for a, b in zip(cycle, list(cycle[1:]) + list(cycle[:1])):
                if not (0 <= a < degree) or a in seen:
                    raise GroupError(f"invalid cycle {cycle!r} on {degree} points")
                seen.add(a)
                perm[a] = b
    else:
        perm = np.asarray(gen, dtype=np.int64)
        if perm.shape != (degree,):
            raise GroupError(f"generator {gen!r} is not an image list on {degree} points")
    if sorted(perm.tolist()) != list(range(degree)):
        raise GroupError(f"generator {gen!r} is not a bijection on {{0..{degree - 1}}}")
    return perm.astype(np.int64)


def from_permutations(
    generators: Sequence, degree: int, max_order: int = DEFAULT_MAX_ORDER, name: str = ""
) -> Group:
    """Close permutation generators in BFS order; ``(a*b)(x) = a(b(x))``."""
    gens = [_parse_permutation(g, degree) for g in generators]
    ident = np.arange(degree, dtype=np.int64)
    elements = [ident]
    index = {ident.tobytes(): 0}
    pos = 0
    while pos < len(elements):
        x = elements[pos]
        for s in gens:
            y = x[s]
            key = y.tobytes()
            if key not in index:
                if len(elements) >= max_order:
                    raise GroupSizeError(f"closure exceeds max order {max_order}")
                index[key] = len(elements)
                elements.append(y)
        pos += 1
    perms = np.array(elements)
    n = len(perms)
    table = np.empty((n, n), dtype=np.int64)
    if degree <= 15:
        weights = degree ** np.arange(degree, dtype=np.int64)
        codes = perms @ weights
        order = np.argsort(codes)
        sorted_codes = codes[order]
        for i in range(n):
            prod_codes = perms[i][perms] @ weights
            table[i] = order[np.searchsorted(sorted_codes, prod_codes)]
    else:
        for i in range(n):
            prods = perms[i][perms]
            table[i] = [index[row.tobytes()] for row in prods]
    labels = [tuple(p.tolist()) for p in perms]
    return Group(table, identity=0, labels=labels, name=name)


def from_table(
    mul: Sequence[Sequence[int]] | np.ndarray,
    identity: int | None = None,
    labels: Sequence[Any] | None = None,
    max_order: int = DEFAULT_MAX_ORDER,
    name: str = "",
    check: bool = True,
) -> Group:
    table = np.asarray(mul, dtype=np.int64)
    if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
        raise GroupError("multiplication table must be a nonempty square array")
    n = table.shape[0]
    if n > max_order:
        raise GroupSizeError(f"table order {n} exceeds max order {max_order}")
    full = np.arange(n)
    if not (np.array_equal(np.sort(table, axis=1), np.broadcast_to(full, (n, n)))
            and np.array_equal(np.sort(table, axis=0), np.broadcast_to(full[:, None], (n, n)))):
        raise GroupError("multiplication table is not a Latin square")
    if identity is None:
        cands = [e for e in range(n) if np.array_equal(table[e], full) and np.array_equal(table[:, e], full)]
        if not cands:
            raise GroupError("multiplication table has no identity")
        identity = cands[0]
    g = Group(table, identity=identity, labels=labels, name=name)
    if check:
        g.check_axioms()
    return g


def load_group(spec: GroupSpec | dict, max_order: int = DEFAULT_MAX_ORDER, name: str = "") -> Group:
    """Build a :class:`Group` from any supported spec kind."""
    if isinstance(spec, dict):
        spec = GroupSpec.from_dict(spec)
    p = spec.payload
    if spec.kind == "perm":
        return from_permutations(p["generators"], int(p["degree"]), max_order=max_order, name=name)
    if spec.kind == "table":
        mul = p["mul"]
        if "order" in p and int(p["order"]) != len(mul):
            raise GroupError(f"declared order {p['order']} does not match table size {len(mul)}")
        return from_table(mul, identity=p.get("identity"), labels=p.get("labels"),
                          max_order=max_order, name=name)
    from .corpus import build_family  # family builders live with the corpus

    g = build_family(p["name"], p.get("params", {}), max_order=max_order)
    if name:
        g.name = name
    return g


def table_spec(g: Group) -> GroupSpec:
    """Export a group as a table-kind spec."""
    payload = {"order": g.order, "identity": g.identity, "mul": g.table.astype(int).tolist()}
    return GroupSpec("table", payload)
