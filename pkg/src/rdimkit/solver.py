"""Exact rdim(G): minimum total degree of irreducible characters with trivial
joint kernel, as a weighted set cover over the minimal normal subgroups.

A set of irreducibles has trivial joint kernel exactly when every minimal
normal subgroup escapes at least one of the kernels, because any nontrivial
normal subgroup contains a minimal one.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np

from . import modp
from .chartab import (
    CharTable,
    central_basis,
    character_table,
    has_faithful_irreducible,
    kernel_classes,
    kernel_mask,
    restrict_to_central,
)
from .exact import sign_sqrt_sum_minus
from .group import Group, GroupError, Subgroup
from .structure import (
    abelian_invariants,
    conjugacy_classes,
    minimal_normal_subgroups,
    omega1_center,
    prime_power,
    socle_decomposition,
)

BRUTE_FORCE_SUBSET_LIMIT = 200_000
BRUTE_FORCE_STATE_LIMIT = 2_000_000


class SolverExhausted(RuntimeError):
    """The branch-and-bound search hit its node limit before proving optimality."""


class OracleSkipped(RuntimeError):
    """The brute-force oracle declined an instance that is too large."""


@dataclass(frozen=True)
class SolverConfig:
    node_limit: int = 10**7


@dataclass(frozen=True, eq=False)
class CoverInstance:
    """``covers[row]`` is a bitmask over ``universe`` (indices into ``minimals``)."""

    table: CharTable
    minimals: tuple[Subgroup, ...]
    universe: tuple[int, ...]
    covers: tuple[int, ...]
    weights: tuple[int, ...]
    prunable: tuple[bool, ...]

    @property
    def full(self) -> int:
        return (1 << len(self.universe)) - 1

    def covering_rows(self, pos: int) -> list[int]:
        return [r for r, c in enumerate(self.covers) if c >> pos & 1]


def build_cover(t: CharTable, minimals: list[Subgroup] | None = None) -> CoverInstance:
    cd = t.classes
    if minimals is None:
        minimals = minimal_normal_subgroups(t.group)
    mmasks = [cd.class_mask(m) for m in minimals]
    kmasks = [kernel_mask(t, r) for r in range(t.n_rows)]
    # most constrained minimal normal first
    raw = [[(mm & ~km) != 0 for mm in mmasks] for km in kmasks]
    counts = [sum(raw[r][i] for r in range(t.n_rows)) for i in range(len(minimals))]
    universe = tuple(sorted(range(len(minimals)), key=lambda i: (counts[i], i)))
    covers = tuple(sum(1 << pos for pos, i in enumerate(universe) if raw[r][i]) for r in range(t.n_rows))
    weights = t.degrees
    prunable = []
    for r, (cr, wr) in enumerate(zip(covers, weights)):
        dominated = cr == 0 or any(
            s != r and cr & ~cs == 0 and ws <= wr and (cr != cs or ws < wr or s < r)
            for s, (cs, ws) in enumerate(zip(covers, weights))
        )
        prunable.append(dominated)
    full = (1 << len(universe)) - 1
    union = 0
    for c in covers:
        union |= c
    if union != full:
        raise AssertionError("rows do not cover every minimal normal subgroup")
    if covers[0] != 0:
        raise AssertionError("principal row covers a minimal normal subgroup")
    return CoverInstance(t, tuple(minimals), universe, covers, weights, tuple(prunable))


@dataclass(frozen=True)
class RdimCertificate:
    rows: tuple[int, ...]
    total: int
    degrees: tuple[int, ...]
    witness: dict[int, int]  # minimal normal index -> chosen row whose kernel misses it
    table_digest: str = ""
    nodes: int = 0

    def to_dict(self) -> dict:
        return {
            "rows": list(self.rows),
            "degrees": list(self.degrees),
            "total": self.total,
            "witness": {str(k): v for k, v in sorted(self.witness.items())},
            "table_sha256": self.table_digest,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def verify_certificate(inst: CoverInstance, cert: RdimCertificate) -> None:
    t = inst.table
    joint = (1 << t.classes.n_classes) - 1
    for r in cert.rows:
        joint &= kernel_mask(t, r)
        if inst.covers[r] == 0:
            raise AssertionError(f"certificate row {r} has the whole socle in its kernel")
    if joint != 1:
        raise AssertionError("certificate rows have a nontrivial joint kernel")
    if cert.total != sum(t.degrees[r] for r in cert.rows):
        raise AssertionError("certificate total differs from its degree sum")
    cd = t.classes
    for i, r in cert.witness.items():
        if cd.class_mask(inst.minimals[i]) & ~kernel_mask(t, r) == 0:
            raise AssertionError("witness row contains the minimal normal subgroup in its kernel")


class _Search:
    """Branch and bound with a transposition table keyed by the uncovered set.

    ``memo[u] = (value, exact, choice)``: when ``exact`` the optimum for ``u`` is
    ``value`` (first row ``choice``); otherwise ``value`` is a proven lower bound.
    """

    def __init__(self, inst: CoverInstance, cfg: SolverConfig):
        self.inst = inst
        self.cfg = cfg
        self.rows = [r for r in range(len(inst.covers)) if not inst.prunable[r]]
        self.w = inst.weights
        self.cov = inst.covers
        u = len(inst.universe)
        self.matrix = np.array([[c >> i & 1 for i in range(u)] for c in (self.cov[r] for r in self.rows)],
                               dtype=bool).reshape(len(self.rows), u)
        self.wvec = np.array([self.w[r] for r in self.rows], dtype=np.float64)
        self.by_elem = [sorted((r for r in self.rows if self.cov[r] >> i & 1), key=lambda r: (self.w[r], r))
                        for i in range(u)]
        self.memo: dict[int, tuple[int, bool, int]] = {0: (0, True, -1)}
        self.nodes = 0

    def lower_bound(self, unc: int) -> int:
        if unc == 0:
            return 0
        cols = np.array([unc >> i & 1 for i in range(self.matrix.shape[1])], dtype=bool)
        sub = self.matrix[:, cols]
        fresh = sub.sum(axis=1)
        with np.errstate(divide="ignore"):
            ratio = np.where(fresh > 0, self.wvec / np.maximum(fresh, 1), np.inf)
        per_elem = np.where(sub, ratio[:, None], np.inf).min(axis=0)
        return math.ceil(float(per_elem.sum()) - 1e-9)

    def solve(self, unc: int, budget: int) -> int:
        """Optimum for ``unc`` if it is below ``budget``, else a lower bound >= ``budget``."""
        hit = self.memo.get(unc)
        if hit is not None and (hit[1] or hit[0] >= budget):
            return hit[0]
        self.nodes += 1
        if self.nodes > self.cfg.node_limit:
            raise SolverExhausted(f"node limit {self.cfg.node_limit} reached")
        lb = self.lower_bound(unc)
        if lb >= budget:
            self.memo[unc] = (lb, False, -1)
            return lb
        pivot = (unc & -unc).bit_length() - 1
        best, choice = budget, -1
        seen: set[int] = set()
        for r in self.by_elem[pivot]:
            new = self.cov[r] & unc
            if new in seen:  # a lighter (or equal, earlier) row covers the same here
                continue
            seen.add(new)
            w = self.w[r]
            if w >= best:
                continue
            sub = self.solve(unc & ~new, best - w)
            if w + sub < best:
                best, choice = w + sub, r
        if choice >= 0:
            self.memo[unc] = (best, True, choice)
        else:
            self.memo[unc] = (max(budget, lb), False, -1)
        return best

    def reconstruct(self, unc: int) -> list[int]:
        rows = []
        while unc:
            value, exact, r = self.memo[unc]
            if not exact:
                raise AssertionError("reconstruction reached an unsolved state")
            rows.append(r)
            unc &= ~self.cov[r]
        return rows


def solve_rdim(inst: CoverInstance, cfg: SolverConfig | None = None) -> RdimCertificate:
    cfg = cfg or SolverConfig()
    t = inst.table
    if not inst.universe:
        return RdimCertificate((), 0, (), {}, t.digest(), 0)
    search = _Search(inst, cfg)
    # a feasible cover (one cheapest row per element) bounds the optimum
    upper = sum(t.degrees[search.by_elem[i][0]] for i in range(len(inst.universe)))
    value = search.solve(inst.full, upper + 1)
    rows = tuple(sorted(search.reconstruct(inst.full)))
    if sum(t.degrees[r] for r in rows) != value:
        raise AssertionError("reconstructed rows disagree with the optimum")
    witness = {}
    for pos, i in enumerate(inst.universe):
        witness[i] = next(r for r in rows if inst.covers[r] >> pos & 1)
    cert = RdimCertificate(rows, value, tuple(t.degrees[r] for r in rows), witness, t.digest(), search.nodes)
    verify_certificate(inst, cert)
    return cert


def brute_force_rdim(t: CharTable, minimals: list[Subgroup] | None = None) -> int:
    """Independent oracle working on kernel class sets rather than the cover.

    Subsets of at most ``|minimals|`` rows are enumerated directly when there
    are few enough; otherwise the same minimisation runs as a dynamic program
    over joint-kernel class masks (each row used at most once).
    """
    g = t.group
    if g.order == 1:
        return 0
    if minimals is None:
        minimals = minimal_normal_subgroups(g)
    k = len(minimals)
    rows = list(range(1, t.n_rows))
    kmasks = [kernel_mask(t, r) for r in range(t.n_rows)]
    full = (1 << t.classes.n_classes) - 1
    n_subsets = sum(comb(len(rows), s) for s in range(1, k + 1))
    if n_subsets <= BRUTE_FORCE_SUBSET_LIMIT:
        best = None
        for s in range(1, k + 1):
            for subset in combinations(rows, s):
                joint = full
                for r in subset:
                    joint &= kmasks[r]
                if joint == 1:
                    d = sum(t.degrees[r] for r in subset)
                    if best is None or d < best:
                        best = d
        if best is None:
            raise AssertionError("no row subset has trivial joint kernel")
        return best
    best_at: dict[int, int] = {full: 0}
    for r in rows:
        km, d = kmasks[r], t.degrees[r]
        for state, cost in list(best_at.items()):
            new = state & km
            if new != state and best_at.get(new, math.inf) > cost + d:
                best_at[new] = cost + d
        if len(best_at) > BRUTE_FORCE_STATE_LIMIT:
            raise OracleSkipped("too many joint-kernel states")
    return best_at[1]


def rdim_abelian(g: Group) -> int:
    if not g.is_abelian:
        raise GroupError("rdim_abelian requires an abelian group")
    return abelian_invariants(g)[1]


@dataclass(frozen=True)
class PGroupReport:
    value: int
    basis: tuple[tuple[int, ...], ...]
    min_degree: dict[tuple[int, ...], int]
    p: int
    rank: int

    def exhaustive_minimum(self) -> int:
        """Minimum of ``sum m(lambda_i)`` over all bases (used as a test oracle)."""
        vectors = sorted(self.min_degree)
        best = None
        for combo in combinations(vectors, self.rank):
            if modp.rank(np.array(combo), self.p) == self.rank:
                s = sum(self.min_degree[v] for v in combo)
                best = s if best is None else min(best, s)
        return best


def rdim_pgroup(g: Group, t: CharTable | None = None) -> PGroupReport:
    pp = prime_power(g.order)
    if pp is None:
        raise GroupError("rdim_pgroup requires a nontrivial p-group")
    p = pp[0]
    t = t or character_table(g)
    a = omega1_center(g, p)
    basis = central_basis(a)
    r = len(basis)
    if p**r != a.order:
        raise AssertionError("Omega_1(Z) basis has the wrong size")
    m: dict[tuple[int, ...], int] = {}
    for row in range(t.n_rows):
        v = restrict_to_central(t, row, a, basis).vector
        if any(v):
            m[v] = min(m.get(v, t.degrees[row]), t.degrees[row])
    if len(m) != p**r - 1:
        raise AssertionError("some nonprincipal character of Omega_1(Z) lies under no row")
    kept: list[tuple[int, ...]] = []
    for v in sorted(m, key=lambda v: (m[v], v)):
        if modp.rank(np.array(kept + [v]), p) > len(kept):
            kept.append(v)
            if len(kept) == r:
                break
    return PGroupReport(sum(m[v] for v in kept), tuple(kept), m, p, r)


@dataclass(frozen=True)
class SocleBound:
    bound: int
    rows: tuple[int, ...]
    a_list: tuple[int, ...]
    strict_ok: bool | None  # Lemma-style strict inequality, None when t = 0


def upper_bound_socle(g: Group, t: CharTable | None = None) -> SocleBound:
    """Constructive bound: per abelian socle factor ``A_i`` a cheapest row whose
    kernel meets the socle in exactly the complement ``B_i``."""
    t = t or character_table(g)
    if g.order == 1:
        return SocleBound(0, (), (), None)
    soc = socle_decomposition(g)
    cd = t.classes
    if soc.t == 0:
        row = has_faithful_irreducible(t)
        if row is None:
            raise AssertionError("socle without abelian part but no faithful irreducible")
        return SocleBound(t.degrees[row], (row,), (), None)
    soc_classes = frozenset(cd.classes_of(soc.socle.elements).tolist())
    rows = []
    for i, a_i in enumerate(soc.abelian_factors):
        b_classes = frozenset(cd.classes_of(soc.complement(i).elements).tolist())
        cands = [r for r in range(t.n_rows) if kernel_classes(t, r) & soc_classes == b_classes]
        if not cands:
            raise AssertionError("no row has the required kernel on the socle")
        rows.append(min(cands, key=lambda r: (t.degrees[r], r)))
    joint = (1 << cd.n_classes) - 1
    for r in rows:
        joint &= kernel_mask(t, r)
    if joint != 1:
        raise AssertionError("constructed rows have a nontrivial joint kernel")
    bound = sum(t.degrees[r] for r in rows)
    orders = [a.order for a in soc.abelian_factors]
    prod_all = math.prod(orders)
    radicands = [Fraction(g.order * orders[j], prod_all) for j in range(len(orders))]
    strict_ok = sign_sqrt_sum_minus(radicands, bound) > 0
    return SocleBound(bound, tuple(rows), soc.a_list, strict_ok)


@dataclass(frozen=True)
class RdimResult:
    value: int
    certificate: RdimCertificate
    instance: CoverInstance


def compute_rdim(g: Group, cfg: SolverConfig | None = None) -> RdimResult:
    """Full pipeline: classes, verified table, minimal normals, exact cover."""
    t = character_table(g)
    inst = build_cover(t, minimal_normal_subgroups(g))
    cert = solve_rdim(inst, cfg)
    return RdimResult(cert.total, cert, inst)


def rdim(g: Group, cfg: SolverConfig | None = None) -> int:
    """rdim(G), memoized on the group; abelian groups use ``d(G)`` directly."""
    if "rdim" not in g.cache:
        if g.order == 1:
            g.cache["rdim"] = 0
        elif g.is_abelian and len(conjugacy_classes(g)) > 64:
            g.cache["rdim"] = rdim_abelian(g)
        else:
            g.cache["rdim"] = compute_rdim(g, cfg).value
    return g.cache["rdim"]
