"""Checks of the rdim classification results on concrete groups.

Every check recomputes its evidence from the group and its character table
and reports PASS, FAIL or SKIPPED; irrational comparisons are done in exact
squared form.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable

import numpy as np
from sympy import factorint

from .chartab import (
    CharTable,
    character_table,
    has_faithful_irreducible,
    irr_over_center_nonprincipal,
    irr_over_subgroup_nonprincipal,
    is_fully_ramified,
    kernel_mask,
)
from .exact import sign_sqrt_sum_minus
from .group import Group, GroupError, Subgroup
from .solver import rdim as group_rdim
from .structure import (
    center,
    conjugacy_classes,
    derived_subgroup,
    has_abelian_maximal_subgroup_index_p,
    nilpotency_class,
    normal_subgroups,
    omega1_center,
    prime_power,
    quotient,
    socle_decomposition,
    subgroup_invariants,
)

PASS, FAIL, SKIPPED = "PASS", "FAIL", "SKIPPED"


# -- f_p(n) ------------------------------------------------------------------------


@dataclass(frozen=True)
class FpReport:
    p: int
    n: int
    value: int
    argmax: tuple[int, ...]


def f_p(p: int, n: int) -> FpReport:
    """``max_r r * p**((n - r) // 2)`` over ``1 <= r <= n`` with its argmax set."""
    if n < 1:
        raise ValueError("n must be positive")
    values = {r: r * p ** ((n - r) // 2) for r in range(1, n + 1)}
    best = max(values.values())
    return FpReport(p, n, best, tuple(r for r, v in values.items() if v == best))


# -- evidence and verdicts -------------------------------------------------------


@dataclass(frozen=True)
class Evidence:
    order: int
    n: int | None
    p: int | None
    center_rank: int
    center_order: int
    center_elementary: bool
    socle_is_center: bool
    all_fully_ramified: bool
    rdim: int
    predicted: int | None = None

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ClassifierVerdict:
    theorem: str
    branch: str
    status: str
    evidence: Evidence
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status != FAIL


def all_fully_ramified_over_center(t: CharTable) -> bool:
    """Every row over a nonprincipal character of ``Z(G)`` is fully ramified."""
    return all(is_fully_ramified(t, r) for r in irr_over_center_nonprincipal(t))


def evidence(g: Group, t: CharTable, rdim: int, predicted: int | None = None) -> Evidence:
    z = center(g)
    pp = prime_power(g.order)
    _, rank = subgroup_invariants(z)
    soc = socle_decomposition(g).socle
    return Evidence(
        order=g.order,
        n=pp[1] if pp else None,
        p=pp[0] if pp else None,
        center_rank=rank,
        center_order=z.order,
        center_elementary=z.order > 1 and z.is_elementary_abelian,
        socle_is_center=soc == z,
        all_fully_ramified=all_fully_ramified_over_center(t),
        rdim=rdim,
        predicted=predicted,
    )


def _require_nontrivial(g: Group) -> None:
    if g.order == 1:
        raise GroupError("the classification checks need |G| > 1")


def _central_type_structure(ev: Evidence, center_orders: tuple[int, ...]) -> bool:
    """2-group with Soc = Z elementary abelian of one of the given orders, all fully ramified."""
    return (
        ev.p == 2
        and ev.socle_is_center
        and ev.center_elementary
        and ev.center_order in center_orders
        and ev.all_fully_ramified
    )


def classify_theorem_A(g: Group, t: CharTable, rdim: int) -> ClassifierVerdict:
    _require_nontrivial(g)
    ev = evidence(g, t, rdim)
    exceptional = _central_type_structure(ev, (8,))
    n = g.order
    if exceptional and 8 * rdim * rdim != 9 * n:
        return ClassifierVerdict("A", "ii", FAIL, ev, "exceptional structure but 8*rdim^2 != 9|G|")
    if rdim * rdim <= n:
        return ClassifierVerdict("A", "i", PASS, ev, "rdim^2 <= |G|")
    if exceptional:
        return ClassifierVerdict("A", "ii", PASS, ev, "8*rdim^2 == 9|G|")
    return ClassifierVerdict("A", "none", FAIL, ev, "rdim^2 > |G| without the exceptional structure")


def check_theorem_B(g: Group, t: CharTable, rdim: int) -> ClassifierVerdict:
    _require_nontrivial(g)
    ev = evidence(g, t, rdim)
    equal = rdim * rdim == g.order
    structure = _central_type_structure(ev, (4, 16))
    branch = ("i" if ev.center_order == 4 else "ii") if structure else "-"
    status = PASS if equal == structure else FAIL
    return ClassifierVerdict("B", branch, status, ev, f"rdim^2 == |G|: {equal}; structure: {structure}")


def _pgroup_data(g: Group) -> tuple[int, int, int]:
    pp = prime_power(g.order)
    if pp is None:
        raise GroupError("a nontrivial p-group is required")
    p, n = pp
    r = subgroup_invariants(center(g))[1]
    return p, n, r


def check_theorem_even(g: Group, t: CharTable, rdim: int) -> ClassifierVerdict:
    p, n, r = _pgroup_data(g)
    if (n - r) % 2:
        raise GroupError("n - r is odd; use check_theorem_odd")
    target = r * p ** ((n - r) // 2)
    ev = evidence(g, t, rdim, target)
    left = rdim == target
    right = ev.center_order == p**r and ev.center_elementary and ev.all_fully_ramified
    status = PASS if left == right else FAIL
    return ClassifierVerdict("even", "holds" if left else "-", status, ev, f"left: {left}; right: {right}")


def check_theorem_odd(g: Group, t: CharTable, rdim: int) -> ClassifierVerdict:
    p, n, r = _pgroup_data(g)
    if (n - r) % 2 == 0:
        raise GroupError("n - r is even; use check_theorem_even")
    target = r * p ** ((n - r - 1) // 2)
    ev = evidence(g, t, rdim, target)
    omega = omega1_center(g, p)
    common = p ** ((n - r - 1) // 2)
    left = rdim == target
    right = all(t.degrees[i] == common for i in irr_over_subgroup_nonprincipal(t, omega))
    status = PASS if left == right else FAIL
    detail = f"left: {left}; right: {right}"
    if left and center(g).order > p * omega.order:
        status = FAIL
        detail += "; |Z : Omega_1(Z)| > p"
    return ClassifierVerdict("odd", "holds" if left else "-", status, ev, detail)


def check_theorem_parity(g: Group, t: CharTable, rdim: int) -> ClassifierVerdict:
    """Dispatch to the even or odd variant according to ``n - r``."""
    p, n, r = _pgroup_data(g)
    return (check_theorem_even if (n - r) % 2 == 0 else check_theorem_odd)(g, t, rdim)


def _skipped(theorem: str, g: Group, t: CharTable, rdim: int, reason: str) -> ClassifierVerdict:
    return ClassifierVerdict(theorem, "-", SKIPPED, evidence(g, t, rdim), reason)


def check_theorem_C(g: Group, t: CharTable, rdim: int) -> ClassifierVerdict:
    pp = prime_power(g.order)
    if pp is None or pp[0] != 2:
        return _skipped("C", g, t, rdim, "not a 2-group")
    n = pp[1]
    if n in (1, 5, 7):
        return _skipped("C", g, t, rdim, f"n = {n} is excluded")
    fp = f_p(2, n)
    ev = evidence(g, t, rdim, fp.value)
    left = rdim == fp.value
    orders = (8,) if n % 2 else (4, 16)
    right = ev.center_elementary and ev.center_order in orders and ev.all_fully_ramified
    branch = ("i" if n % 2 else "ii") if right else "-"
    return ClassifierVerdict("C", branch, PASS if left == right else FAIL, ev, f"left: {left}; right: {right}")


def check_theorem_D(g: Group, t: CharTable, rdim: int) -> ClassifierVerdict:
    pp = prime_power(g.order)
    if pp is None or pp[0] == 2:
        return _skipped("D", g, t, rdim, "not a p-group for odd p")
    p, n = pp
    if n in (1, 4):
        return _skipped("D", g, t, rdim, f"n = {n} is excluded")
    fp = f_p(p, n)
    ev = evidence(g, t, rdim, fp.value)
    left = rdim == fp.value
    if n % 2:
        right = ev.center_order == p and ev.all_fully_ramified
    else:
        right = ev.center_elementary and ev.center_order == p * p and ev.all_fully_ramified
    branch = ("i" if n % 2 else "ii") if right else "-"
    detail = f"left: {left}; right: {right}; f_p argmax {fp.argmax}"
    return ClassifierVerdict("D", branch, PASS if left == right else FAIL, ev, detail)


# -- the socle-sum enumeration -----------------------------------------------------------

REFERENCE_CAL_TUPLES: frozenset[tuple[int, ...]] = frozenset(
    [(x, 2) for x in range(2, 12)]
    + [(y, 3) for y in range(3, 6)]
    + [(x, 2, 2) for x in range(2, 8)]
    + [(4, 3, 2), (3, 3, 2)]
    + [(x, 2, 2, 2) for x in range(2, 6)]
    + [(3, 3, 2, 2)]
    + [(2, 2, 2, 2, 2), (3, 2, 2, 2, 2)]
)


@dataclass(frozen=True)
class CalSolution:
    t: int
    a: tuple[int, ...]
    boundary: bool  # the sum equals 1 exactly


def socle_sum_sign(a: tuple[int, ...]) -> int:
    """Sign of ``sum_j prod_{k != j} a_k**(-1/2) - 1``, exactly."""
    total = math.prod(a)
    return sign_sqrt_sum_minus([Fraction(x, total) for x in a], 1)


def max_cal_length() -> int:
    """Largest ``t`` with ``t**2 >= 2**(t-1)``: beyond it every sum is below 1."""
    t = 2
    while (t + 1) ** 2 >= 2**t:
        t += 1
    return t


def verify_lemma_cal(t_max: int | None = None) -> list[CalSolution]:
    """All nonincreasing tuples ``a_1 >= ... >= a_t >= 2`` (``t >= 2``) whose sum is at least 1.

    The sum decreases in each coordinate, so tuples are grown from the
    smallest entry upward and a branch stops once even the smallest
    admissible completion drops below 1.
    """
    t_max = max_cal_length() if t_max is None else t_max
    out: list[CalSolution] = []

    def grow(suffix: tuple[int, ...], t: int) -> None:
        # suffix holds a_i..a_t (nondecreasing when read backwards)
        if len(suffix) == t:
            s = socle_sum_sign(suffix)
            if s >= 0:
                out.append(CalSolution(t, suffix, s == 0))
            return
        lo = suffix[0] if suffix else 2
        x = lo
        while True:
            padded = (x,) * (t - len(suffix)) + suffix
            if socle_sum_sign(padded) < 0:
                break
            grow((x,) + suffix, t)
            x += 1

    for t in range(2, t_max + 1):
        grow((), t)
    return sorted(out, key=lambda s: (s.t, tuple(-x for x in s.a)))


# -- quotient bounds -------------------------------------------------------------


def jordan_factorial(n: int) -> int:
    """Default Jordan bound ``j(n) = (n + 1)!``."""
    return math.factorial(n + 1)


@dataclass(frozen=True)
class QuotientReport:
    theorem: str
    normal_order: int
    rdim_g: int
    rdim_quotient: int
    bound: int
    status: str


def abelian_quotient_rank(g: Group, n_sub: Subgroup) -> int:
    """``d(G/N)`` for ``G' <= N``: the largest ``log_p |G : N G^p|``."""
    if not derived_subgroup(g) <= n_sub:
        raise GroupError("abelian_quotient_rank needs G' <= N")
    index = g.order // n_sub.order
    if index == 1:
        return 0
    everything = np.arange(g.order)
    best = 0
    for p in factorint(index):
        p = int(p)
        powers = np.unique(g.powers(everything, p))
        mask = np.zeros(g.order, dtype=bool)
        mask[g.table[np.ix_(n_sub.elements, powers)].ravel()] = True
        k = round(math.log(g.order // int(mask.sum()), p))
        best = max(best, k)
    return best


def quotient_rdim(g: Group, n_sub: Subgroup) -> int:
    """rdim(G/N); abelian quotients use ``d(G/N)``, others the full pipeline on ``G/N``."""
    if derived_subgroup(g) <= n_sub:
        return abelian_quotient_rank(g, n_sub)
    return group_rdim(quotient(g, n_sub))


def check_theorem_E(g: Group, n_sub: Subgroup, j: Callable[[int], int] = jordan_factorial,
                    rdim_g: int | None = None) -> QuotientReport:
    if not n_sub.is_normal:
        raise GroupError("Theorem E needs a normal subgroup")
    n = group_rdim(g) if rdim_g is None else rdim_g
    rq = quotient_rdim(g, n_sub)
    bound = n * j(n)
    return QuotientReport("E", n_sub.order, n, rq, bound, PASS if rq <= bound else FAIL)


def check_theorem_F(g: Group, n_sub: Subgroup, rdim_g: int | None = None) -> QuotientReport:
    if not n_sub.is_normal:
        raise GroupError("Theorem F needs a normal subgroup")
    if not derived_subgroup(g) <= n_sub:
        raise GroupError("Theorem F needs an abelian quotient")
    n = group_rdim(g) if rdim_g is None else rdim_g
    rq = quotient_rdim(g, n_sub)
    bound = 3 * n // 2
    return QuotientReport("F", n_sub.order, n, rq, bound, PASS if 2 * rq <= 3 * n else FAIL)


def quotient_rdims_from_table(t: CharTable) -> dict[bytes, int]:
    """rdim(G/N) for every normal ``N`` at once, from the table of ``G``.

    Irr(G/N) is the set of rows whose kernel contains ``N``, and a set of
    them is faithful on ``G/N`` exactly when their joint kernel is ``N``;
    a knapsack over joint-kernel class masks therefore yields every
    quotient's rdim.  Keys are element masks of ``N``.
    """
    cd = t.classes
    full = (1 << cd.n_classes) - 1
    best: dict[int, int] = {full: 0}
    for r in range(1, t.n_rows):
        km, d = kernel_mask(t, r), t.degrees[r]
        for state, cost in list(best.items()):
            new = state & km
            if new != state and best.get(new, math.inf) > cost + d:
                best[new] = cost + d
    out = {}
    for state, cost in best.items():
        classes = [k for k in range(cd.n_classes) if state >> k & 1]
        out[cd.subgroup_from_classes(classes).mask.tobytes()] = cost
    return out


def check_quotient_bounds(g: Group, all_normals_limit: int = 128,
                          j: Callable[[int], int] = jordan_factorial) -> list[QuotientReport]:
    """Theorem E over the chosen normal subgroups, Theorem F over those with abelian quotient."""
    n = group_rdim(g)
    if g.order <= all_normals_limit:
        subs = normal_subgroups(g)
    else:
        seen: dict[bytes, Subgroup] = {}
        for s in (g.trivial(), center(g), derived_subgroup(g), socle_decomposition(g).socle, g.whole()):
            seen.setdefault(s.mask.tobytes(), s)
        subs = sorted(seen.values(), key=lambda s: (s.order, s.elements.tolist()))
    gp = derived_subgroup(g)
    from_table = quotient_rdims_from_table(character_table(g))
    reports = []
    for s in subs:
        if from_table[s.mask.tobytes()] != quotient_rdim(g, s):
            raise AssertionError("quotient rdim disagrees with the knapsack over the table of G")
        reports.append(check_theorem_E(g, s, j, n))
        if gp <= s:
            reports.append(check_theorem_F(g, s, n))
    return reports


@dataclass(frozen=True)
class AbelianizationWitness:
    """Data for a group whose abelianization needs more dimensions than the group."""

    order: int
    rdim: int
    rdim_abelianization: int
    abelian_maximal: bool
    faithful_degree: int | None
    nilpotency_class: int | None

    @property
    def exhibits(self) -> bool:
        return (self.abelian_maximal and self.faithful_degree == 2 and self.rdim == 2
                and self.rdim_abelianization == 3)


def abelianization_witness(g: Group) -> AbelianizationWitness:
    t = character_table(g)
    row = has_faithful_irreducible(t)
    pp = prime_power(g.order)
    return AbelianizationWitness(
        order=g.order,
        rdim=group_rdim(g),
        rdim_abelianization=group_rdim(quotient(g, derived_subgroup(g))),
        abelian_maximal=bool(pp) and has_abelian_maximal_subgroup_index_p(g, pp[0]),
        faithful_degree=None if row is None else t.degrees[row],
        nilpotency_class=nilpotency_class(g),
    )


# -- Camina pairs --------------------------------------------------------------------


def is_camina_pair(g: Group) -> bool:
    """For every ``x`` outside ``Z(G)``, the coset ``x Z(G)`` lies in the class of ``x``."""
    _require_nontrivial(g)
    cd = conjugacy_classes(g)
    z = center(g).elements
    for k in range(cd.n_classes):
        if cd.sizes[k] == 1:
            continue
        x = int(cd.reps[k])
        if (cd.class_of[g.table[x, z]] != k).any():
            return False
    return True
