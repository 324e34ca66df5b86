"""Element- and subgroup-level structure: classes, center, socle, quotients."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np
from sympy import factorint

from .group import Group, GroupError, Subgroup


@dataclass(frozen=True, eq=False)
class ClassData:
    group: Group
    reps: np.ndarray
    sizes: np.ndarray
    class_of: np.ndarray
    members: tuple[np.ndarray, ...]
    inverse_class: np.ndarray
    _power_maps: dict = field(default_factory=dict, repr=False)

    @property
    def n_classes(self) -> int:
        return len(self.reps)

    def __len__(self) -> int:
        return len(self.reps)

    def power_map(self, m: int) -> np.ndarray:
        """Class of ``g_k**m`` for each class ``k``."""
        m %= self.group.exponent
        if m not in self._power_maps:
            pm = self.class_of[self.group.powers(self.reps, m)]
            pm.setflags(write=False)
            self._power_maps[m] = pm
        return self._power_maps[m]

    def classes_of(self, elements: Iterable[int]) -> np.ndarray:
        return np.unique(self.class_of[np.asarray(list(elements) if not isinstance(elements, np.ndarray) else elements)])

    def class_mask(self, sub: Subgroup) -> int:
        """Bitmask over class indices of a normal subgroup."""
        return sum(1 << int(k) for k in self.classes_of(sub.elements))

    def subgroup_from_classes(self, classes: Iterable[int]) -> Subgroup:
        elems = np.concatenate([self.members[k] for k in classes])
        return Subgroup.from_elements(self.group, elems)


def _memo(g: Group, key, fn):
    if key not in g.cache:
        g.cache[key] = fn()
    return g.cache[key]


def conjugacy_classes(g: Group) -> ClassData:
    """Conjugacy classes ordered identity first, then by (size, smallest element)."""
    return _memo(g, "classes", lambda: _conjugacy_classes(g))


def _conjugacy_classes(g: Group) -> ClassData:
    n = g.order
    conj = g.conjugators
    label = np.full(n, -1, dtype=np.int64)
    orbits: list[np.ndarray] = []
    for x in range(n):
        if label[x] >= 0:
            continue
        k = len(orbits)
        label[x] = k
        orbit = [x]
        frontier = np.array([x])
        while frontier.size:
            images = np.unique(conj[:, frontier].ravel())
            new = images[label[images] < 0]
            label[new] = k
            orbit.extend(new.tolist())
            frontier = new
        orbits.append(np.array(sorted(orbit), dtype=np.int64))
    ident = int(label[g.identity])
    order = sorted(range(len(orbits)), key=lambda k: (k != ident, len(orbits[k]), int(orbits[k][0])))
    members = tuple(orbits[k] for k in order)
    class_of = np.empty(n, dtype=np.int64)
    for new_k, elems in enumerate(members):
        class_of[elems] = new_k
        elems.setflags(write=False)
    reps = np.array([int(m[0]) for m in members], dtype=np.int64)
    sizes = np.array([len(m) for m in members], dtype=np.int64)
    inverse_class = class_of[g.inv[reps]]
    for arr in (reps, sizes, class_of, inverse_class):
        arr.setflags(write=False)
    return ClassData(g, reps, sizes, class_of, members, inverse_class)


def center(g: Group) -> Subgroup:
    def compute():
        cd = conjugacy_classes(g)
        return Subgroup.from_mask(g, cd.sizes[cd.class_of] == 1)

    return _memo(g, "center", compute)


def commutator_subgroup(g: Group, a: Subgroup, b: Subgroup) -> Subgroup:
    """``[A, B]`` for normal subgroups ``A`` and ``B``."""
    t = g.table
    ae, be = a.elements, b.elements
    # [x, y] = x^-1 y^-1 x y
    left = t[np.ix_(g.inv[ae], g.inv[be])]
    right = t[np.ix_(ae, be)]
    comms = np.unique(t[left, right])
    return g.normal_closure(comms)


def derived_subgroup(g: Group) -> Subgroup:
    def compute():
        gens = np.array(g.generators, dtype=np.int64)
        if gens.size == 0:
            return g.trivial()
        t = g.table
        comms = t[t[np.ix_(g.inv[gens], g.inv[gens])], t[np.ix_(gens, gens)]]
        return g.normal_closure(np.unique(comms))

    return _memo(g, "derived", compute)


def omega1_center(g: Group, p: int) -> Subgroup:
    """Central elements ``z`` with ``z**p == 1``."""
    if g.order % p:
        raise GroupError(f"{p} does not divide |G| = {g.order}")
    z = center(g)
    mask = np.zeros(g.order, dtype=bool)
    pw = g.powers(z.elements, p)
    mask[z.elements[pw == g.identity]] = True
    return Subgroup.from_mask(g, mask)


def prime_power(n: int) -> tuple[int, int] | None:
    """``(p, k)`` when ``n == p**k`` with ``k >= 1``, else ``None``."""
    f = factorint(n)
    if len(f) != 1:
        return None
    ((p, k),) = f.items()
    return int(p), int(k)


def normal_closures_of_classes(g: Group) -> list[Subgroup]:
    """Normal closure of each class (index-aligned with the class list)."""

    def compute():
        cd = conjugacy_classes(g)
        return [g.subgroup(members) for members in cd.members]

    return _memo(g, "class_closures", compute)


def minimal_normal_subgroups(g: Group) -> list[Subgroup]:
    def compute():
        if g.order == 1:
            return []
        closures = normal_closures_of_classes(g)[1:]
        unique: dict[bytes, Subgroup] = {}
        for n in closures:
            unique.setdefault(n.mask.tobytes(), n)
        cands = list(unique.values())
        minimal = [n for n in cands if not any(m < n for m in cands)]
        return sorted(minimal, key=lambda s: (s.order, s.elements.tolist()))

    return _memo(g, "minimal_normals", compute)


def product(g: Group, subs: Iterable[Subgroup]) -> Subgroup:
    """Subgroup generated by a family of subgroups."""
    elems = [s.elements for s in subs]
    if not elems:
        return g.trivial()
    _, mask = g.reduce_generators(np.concatenate(elems))
    return Subgroup.from_mask(g, mask)


@dataclass(frozen=True, eq=False)
class SocleDecomposition:
    minimal_normals: list[Subgroup]
    socle: Subgroup
    nonabelian_part: Subgroup  # product of all nonabelian minimal normals
    abelian_factors: list[Subgroup]  # greedy direct factors of the abelian part

    @property
    def t(self) -> int:
        return len(self.abelian_factors)

    @property
    def a_list(self) -> tuple[int, ...]:
        return tuple(sorted((a.order for a in self.abelian_factors), reverse=True))

    @property
    def abelian_part(self) -> Subgroup:
        return product(self.socle.parent, self.abelian_factors)

    def complement(self, i: int) -> Subgroup:
        """Product of the abelian factors other than the ``i``-th."""
        return product(self.socle.parent, [a for j, a in enumerate(self.abelian_factors) if j != i])


def socle_decomposition(g: Group) -> SocleDecomposition:
    return _memo(g, "socle", lambda: _socle_decomposition(g))


def _socle_decomposition(g: Group) -> SocleDecomposition:
    minimals = minimal_normal_subgroups(g)
    nonabelian = [m for m in minimals if not m.is_abelian]
    abelian = [m for m in minimals if m.is_abelian]
    socle = product(g, minimals)
    running = product(g, nonabelian)
    nonab_part = running
    factors: list[Subgroup] = []
    for m in abelian:
        if running.intersection(m).is_trivial:
            factors.append(m)
            running = running.join(m)
    if running != socle:
        raise AssertionError("greedy socle factors do not exhaust the socle")
    size = nonab_part.order
    for a in factors:
        size *= a.order
    if size != socle.order:
        raise AssertionError("socle factors do not form a direct product")
    return SocleDecomposition(minimals, socle, nonab_part, factors)


def quotient(g: Group, n: Subgroup) -> Group:
    """Group of left cosets ``xN``, ordered by smallest member."""
    from .group import Group as _Group

    if not n.is_normal:
        raise GroupError("quotient requires a normal subgroup")
    t = g.table
    coset_of = np.full(g.order, -1, dtype=np.int64)
    reps: list[int] = []
    for x in range(g.order):
        if coset_of[x] < 0:
            coset_of[t[x, n.elements]] = len(reps)
            reps.append(x)
    reps_arr = np.array(reps, dtype=np.int64)
    qt = coset_of[t[np.ix_(reps_arr, reps_arr)]]
    labels = [int(r) for r in reps]
    name = f"{g.name}/N{n.order}" if g.name else ""
    return _Group(qt, identity=int(coset_of[g.identity]), labels=labels, name=name)


def abelian_invariants(g: Group) -> tuple[tuple[int, ...], int]:
    """Invariant factors ``d1 | d2 | ...`` (ascending) and their number ``d(G)``."""
    if not g.is_abelian:
        raise GroupError("abelian_invariants requires an abelian group")
    return _invariants_from_orders(g.element_orders, g.order)


def subgroup_invariants(sub: Subgroup) -> tuple[tuple[int, ...], int]:
    """Invariant factors of an abelian subgroup (e.g. the center)."""
    if not sub.is_abelian:
        raise GroupError("subgroup_invariants requires an abelian subgroup")
    return _invariants_from_orders(sub.parent.element_orders[sub.elements], sub.order)


def _invariants_from_orders(orders: np.ndarray, n: int) -> tuple[tuple[int, ...], int]:
    if n == 1:
        return (), 0
    parts: dict[int, list[int]] = {}
    for p, top in factorint(n).items():
        p = int(p)
        # c[k] = log_p #{x : x^(p^k) = 1}; the p-part has exponent at most p^top
        c = [0]
        for k in range(1, int(top) + 1):
            count = int(np.count_nonzero(np.gcd(orders, p**k) == orders))
            ck = round(np.log(count) / np.log(p))
            if p**ck != count:
                raise AssertionError("p-torsion count is not a power of p")
            c.append(ck)
        at_least = [c[i] - c[i - 1] for i in range(1, len(c))]
        # at_least[i] counts cyclic p-factors of order >= p^(i+1)
        exps = []
        for i, cnt in enumerate(at_least):
            nxt = at_least[i + 1] if i + 1 < len(at_least) else 0
            exps.extend([i + 1] * (cnt - nxt))
        parts[p] = sorted(exps, reverse=True)
    d = max(len(v) for v in parts.values())
    factors = []
    for i in range(d):
        f = 1
        for p, exps in parts.items():
            if i < len(exps):
                f *= p ** exps[i]
        factors.append(f)
    return tuple(sorted(factors)), d


def normal_subgroups(g: Group, limit: int | None = None) -> list[Subgroup]:
    """All normal subgroups, as joins of normal closures of classes.

    The product of two normal subgroups is their join, so a breadth-first
    search that multiplies by class closures reaches every normal subgroup.
    """
    return _memo(g, ("normal_subgroups", limit), lambda: _normal_subgroups(g, limit))


def _normal_subgroups(g: Group, limit: int | None) -> list[Subgroup]:
    closures = normal_closures_of_classes(g)
    gens: dict[bytes, np.ndarray] = {}
    for c in closures[1:]:
        gens.setdefault(c.mask.tobytes(), c.elements)
    gen_list = list(gens.values())
    triv = np.zeros(g.order, dtype=bool)
    triv[g.identity] = True
    found: dict[bytes, np.ndarray] = {triv.tobytes(): triv}
    queue = [triv]
    t = g.table
    while queue:
        mask = queue.pop()
        elems = np.flatnonzero(mask)
        for c in gen_list:
            if mask[c].all():
                continue
            prod = np.zeros(g.order, dtype=bool)
            prod[t[np.ix_(elems, c)].ravel()] = True
            key = prod.tobytes()
            if key not in found:
                found[key] = prod
                queue.append(prod)
                if limit is not None and len(found) > limit:
                    raise GroupError(f"more than {limit} normal subgroups")
    subs = [Subgroup.from_mask(g, m) for m in found.values()]
    return sorted(subs, key=lambda s: (s.order, s.elements.tolist()))


def lower_central_series(g: Group) -> list[Subgroup]:
    series = [g.whole()]
    while True:
        nxt = commutator_subgroup(g, series[-1], g.whole())
        if nxt.order == series[-1].order:
            return series
        series.append(nxt)


def nilpotency_class(g: Group) -> int | None:
    """Nilpotency class, or ``None`` when ``g`` is not nilpotent."""
    series = lower_central_series(g)
    if series[-1].order != 1:
        return None
    return len(series) - 1


def has_abelian_maximal_subgroup_index_p(g: Group, p: int) -> bool:
    """True when some normal subgroup of index ``p`` is abelian (p-group use)."""
    for n in normal_subgroups(g):
        if n.order * p == g.order and n.is_abelian:
            return True
    return False
