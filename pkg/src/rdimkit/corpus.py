"""Family builders (concrete models emitted as multiplication tables) and the
curated test corpus."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product as iproduct
from pathlib import Path
from typing import Callable

import numpy as np
from sympy import factorint, isprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p

from .group import DEFAULT_MAX_ORDER, Group, GroupError, GroupSizeError, GroupSpec, from_permutations, table_spec
from .structure import center, quotient


# -- finite fields -----------------------------------------------------------


@lru_cache(maxsize=None)
def field_tables(q: int) -> tuple[np.ndarray, np.ndarray]:
    """Addition and multiplication tables of GF(q); element ``x`` encodes the
    polynomial whose base-``p`` digits are its coefficients."""
    f = factorint(q)
    if len(f) != 1:
        raise GroupError(f"{q} is not a prime power")
    ((p, k),) = f.items()
    p, k = int(p), int(k)
    digits = np.array([[(x // p**i) % p for i in range(k)] for x in range(q)], dtype=np.int64)
    weights = p ** np.arange(k)
    add = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
    modulus = _first_irreducible(p, k)
    mul = np.zeros((q, q), dtype=np.int64)
    for a in range(q):
        for b in range(q):
            prod = np.convolve(digits[a], digits[b]) % p
            # reduce modulo the monic irreducible polynomial (low degree first)
            for top in range(len(prod) - 1, k - 1, -1):
                c = prod[top]
                if c:
                    prod[top - k:top + 1] = (prod[top - k:top + 1] - c * np.array(modulus)) % p
            mul[a, b] = int(prod[:k] @ weights)
    return add, mul


def _first_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically first monic irreducible of degree ``k``, low degree first."""
    if k == 1:
        return (0, 1)
    for tail in iproduct(range(p), repeat=k):
        coeffs_high_first = [1] + list(tail)
        if gf_irreducible_p([ZZ(c) for c in coeffs_high_first], p, ZZ):
            return tuple(reversed(coeffs_high_first))
    raise GroupError(f"no irreducible polynomial of degree {k} over GF({p})")


# -- builders -----------------------------------------------------------------


def cyclic(m: int) -> Group:
    idx = np.arange(m)
    return Group((idx[:, None] + idx[None, :]) % m, name=f"C{m}")


def semidirect_cyclic(m: int, k: int, u: int, name: str = "") -> Group:
    """``C_m x| C_k`` with the generator of ``C_k`` acting by ``a -> a**u``.

    Element ``a**i x**f`` has index ``f*m + i``."""
    if pow(u, k, m) != 1 % m:
        raise GroupError(f"u={u} does not have order dividing {k} mod {m}")
    i = np.arange(m)
    f = np.arange(k)
    upow = np.array([pow(u, int(x), m) for x in f])
    # (i, f)(j, g) = (i + u^f j, f + g)
    ii = i[None, :, None, None]
    ff = f[:, None, None, None]
    jj = i[None, None, None, :]
    gg = f[None, None, :, None]
    new_i = (ii + upow[ff] * jj) % m
    new_f = (ff + gg) % k
    table = (new_f * m + new_i).reshape(m * k, m * k)
    return Group(table, name=name or f"C{m}:C{k}")


def dihedral(m: int) -> Group:
    """Dihedral group of order ``2m``."""
    return semidirect_cyclic(m, 2, m - 1, name=f"D{2 * m}")


def generalized_quaternion(order: int) -> Group:
    """Dicyclic group of order ``order`` (generalized quaternion when a power of 2)."""
    if order % 4 or order < 8:
        raise GroupError("quaternion order must be a multiple of 4, at least 8")
    n2 = order // 2  # order of a
    i = np.arange(n2)
    f = np.arange(2)
    ii = i[None, :, None, None]
    ff = f[:, None, None, None]
    jj = i[None, None, None, :]
    gg = f[None, None, :, None]
    sign = np.where(ff == 1, -1, 1)
    new_i = (ii + sign * jj + (ff & gg) * (n2 // 2)) % n2
    new_f = ff ^ gg
    table = (new_f * n2 + new_i).reshape(order, order)
    return Group(table, name=f"Q{order}")


def semidihedral(order: int) -> Group:
    m = order // 2
    return semidirect_cyclic(m, 2, m // 2 - 1, name=f"SD{order}")


def modular(order: int) -> Group:
    m = order // 2
    return semidirect_cyclic(m, 2, m // 2 + 1, name=f"M{order}")


def direct_product(*groups: Group) -> Group:
    if not groups:
        return cyclic(1)
    result = groups[0]
    for h in groups[1:]:
        a, b = result.table.astype(np.int64), h.table.astype(np.int64)
        nb = h.order
        table = (a[:, None, :, None] * nb + b[None, :, None, :]).reshape(result.order * nb, result.order * nb)
        result = Group(table, identity=result.identity * nb + h.identity,
                       name=f"{result.name}x{h.name}")
    return result


def elementary(p: int, r: int) -> Group:
    g = direct_product(*[cyclic(p) for _ in range(r)])
    g.name = f"C{p}^{r}"
    return g


def _central_element_of_prime_order(g: Group, p: int) -> int:
    z = center(g)
    for x in z.elements:
        if g.element_orders[x] == p:
            return int(x)
    raise GroupError(f"no central element of order {p}")


def central_product(g: Group, h: Group, zg: int | None = None, zh: int | None = None, p: int = 2,
                    name: str = "") -> Group:
    """``(G x H) / <(z_g, z_h^-1)>`` identifying central elements of order ``p``."""
    zg = _central_element_of_prime_order(g, p) if zg is None else zg
    zh = _central_element_of_prime_order(h, p) if zh is None else zh
    gh = direct_product(g, h)
    diag = gh.subgroup([zg * h.order + int(h.inv[zh])])
    q = quotient(gh, diag)
    q.name = name or f"{g.name}o{h.name}"
    return q


def heisenberg(q: int) -> Group:
    """Upper unitriangular 3x3 matrices over GF(q); ``(a, b, c)`` has index ``(a*q + b)*q + c``."""
    add, mul = field_tables(q)
    a = np.arange(q)
    A1 = a[:, None, None, None, None, None]
    B1 = a[None, :, None, None, None, None]
    C1 = a[None, None, :, None, None, None]
    A2 = a[None, None, None, :, None, None]
    B2 = a[None, None, None, None, :, None]
    C2 = a[None, None, None, None, None, :]
    na = add[A1, A2]
    nb = add[B1, B2]
    nc = add[add[C1, C2], mul[A1, B2]]
    n = q**3
    table = ((na * q + nb) * q + nc).reshape(n, n)
    return Group(table, name=f"Heis({q})")


def extraspecial(p: int, n: int, sign: str) -> Group:
    """Extraspecial group of order ``p**(1+2n)``; ``sign`` is ``"+"`` or ``"-"``.

    For ``p = 2`` the types are D8^(n) and D8^(n-1) o Q8; for odd ``p`` the
    ``+`` type has exponent ``p`` and the ``-`` type exponent ``p**2``.
    """
    if sign not in "+-" or n < 1:
        raise GroupError("extraspecial needs n >= 1 and sign '+' or '-'")
    if p == 2:
        plus, minus = dihedral(4), generalized_quaternion(8)
    else:
        plus, minus = heisenberg(p), semidirect_cyclic(p * p, p, 1 + p)
    pieces = [plus] * (n - 1) + [plus if sign == "+" else minus]
    g = pieces[0]
    for h in pieces[1:]:
        g = central_product(g, h, p=p)
    g.name = f"{p}^(1+{2 * n}){sign}"
    return g


def frobenius_p(p: int) -> Group:
    """Affine maps ``x -> a x + b`` over Z/p, ``a != 0``; composition ``(f g)(x) = f(g(x))``."""
    if not isprime(p):
        raise GroupError(f"{p} is not prime")
    a = np.arange(1, p)[:, None, None, None]
    b = np.arange(p)[None, :, None, None]
    a2 = np.arange(1, p)[None, None, :, None]
    b2 = np.arange(p)[None, None, None, :]
    na = a * a2 % p
    nb = (a * b2 + b) % p
    n = p * (p - 1)
    table = ((na - 1) * p + nb).reshape(n, n)
    return Group(table, name=f"F{n}")


def symmetric(m: int) -> Group:
    if m < 1 or m > 6:
        raise GroupError("symmetric(m) supports 1 <= m <= 6")
    if m == 1:
        return cyclic(1)
    gens = [[[0, 1]], [list(range(m))]] if m > 2 else [[[0, 1]]]
    g = from_permutations(gens, m)
    g.name = f"S{m}"
    return g


def alternating(m: int) -> Group:
    if m < 1 or m > 6:
        raise GroupError("alternating(m) supports 1 <= m <= 6")
    if m < 3:
        return cyclic(1)
    gens = [[[i, i + 1, i + 2]] for i in range(m - 2)]
    g = from_permutations(gens, m)
    g.name = f"A{m}"
    return g


def _require_power_of_two(n: int, what: str) -> None:
    if n < 8 or n & (n - 1):
        raise GroupError(f"{what} needs a power of two >= 8, got {n}")


def build_family(name: str, params: dict, max_order: int = DEFAULT_MAX_ORDER) -> Group:
    """Build the named family member; see :data:`FAMILIES` for parameters."""
    if name not in FAMILIES:
        raise GroupError(f"unknown family {name!r}")
    expected = _family_order(name, params)
    if expected is not None and expected > max_order:
        raise GroupSizeError(f"{name}{params} has order {expected} > {max_order}")
    g = FAMILIES[name](params, max_order)
    if expected is not None and g.order != expected:
        raise AssertionError(f"{name} builder produced order {g.order}, expected {expected}")
    if g.order > max_order:
        raise GroupSizeError(f"{name}{params} has order {g.order} > {max_order}")
    return g


def _family_order(name: str, p: dict) -> int | None:
    try:
        return {
            "cyclic": lambda: p["m"],
            "elementary": lambda: p["p"] ** p["r"],
            "dihedral": lambda: 2 * p["m"],
            "quaternion": lambda: p["order"],
            "generalized_quaternion": lambda: p["order"],
            "semidihedral": lambda: p["order"],
            "modular": lambda: p["order"],
            "extraspecial": lambda: p["p"] ** (1 + 2 * p["n"]),
            "extraspecial_plus": lambda: p["p"] ** (1 + 2 * p["n"]),
            "extraspecial_minus": lambda: p["p"] ** (1 + 2 * p["n"]),
            "heisenberg": lambda: p["q"] ** 3,
            "frobenius_p": lambda: p["p"] * (p["p"] - 1),
            "semidirect_cyclic": lambda: p["m"] * p["k"],
        }[name]()
    except KeyError:
        return None


def _build_factors(params: dict, max_order: int) -> list[Group]:
    return [build_family(f["name"], f.get("params", {}), max_order) for f in params["factors"]]


def _check_heis(q: int) -> int:
    if len(factorint(q)) != 1:
        raise GroupError(f"heisenberg field size {q} is not a prime power")
    return q


def _positive(n: int, what: str) -> int:
    if int(n) < 1:
        raise GroupError(f"{what} must be positive")
    return int(n)


FAMILIES: dict[str, Callable[[dict, int], Group]] = {
    "cyclic": lambda p, mx: cyclic(_positive(p["m"], "m")),
    "elementary": lambda p, mx: elementary(int(p["p"]), int(p["r"])),
    "dihedral": lambda p, mx: dihedral(int(p["m"])),
    "quaternion": lambda p, mx: generalized_quaternion(int(p["order"])),
    "generalized_quaternion": lambda p, mx: generalized_quaternion(int(p["order"])),
    "semidihedral": lambda p, mx: (_require_power_of_two(int(p["order"]), "semidihedral"), semidihedral(int(p["order"])))[1],
    "modular": lambda p, mx: (_require_power_of_two(int(p["order"]), "modular"), modular(int(p["order"])))[1],
    "semidirect_cyclic": lambda p, mx: semidirect_cyclic(int(p["m"]), int(p["k"]), int(p["u"])),
    "extraspecial": lambda p, mx: extraspecial(int(p["p"]), int(p["n"]), p.get("sign", "+")),
    "extraspecial_plus": lambda p, mx: extraspecial(int(p["p"]), int(p["n"]), "+"),
    "extraspecial_minus": lambda p, mx: extraspecial(int(p["p"]), int(p["n"]), "-"),
    "heisenberg": lambda p, mx: heisenberg(_check_heis(int(p["q"]))),
    "frobenius_p": lambda p, mx: frobenius_p(int(p["p"])),
    "symmetric": lambda p, mx: symmetric(int(p["m"])),
    "alternating": lambda p, mx: alternating(int(p["m"])),
    "direct_product": lambda p, mx: direct_product(*_build_factors(p, mx)),
    "central_product": lambda p, mx: central_product(*_build_factors(p, mx), p=int(p.get("p", 2))),
}


def build(name: str, **params) -> GroupSpec:
    """Family spec -> table-kind :class:`GroupSpec`."""
    return table_spec(build_family(name, params))


# -- the curated corpus ----------------------------------------------------------


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    spec: GroupSpec
    order: int
    slow: bool = False
    tags: tuple[str, ...] = field(default_factory=tuple)

    def load(self) -> Group:
        from .group import load_group

        return load_group(self.spec, name=self.id)


def fam(name: str, **params) -> dict:
    return {"name": name, "params": params}


def _spec(name: str, **params) -> GroupSpec:
    return GroupSpec("family", {"name": name, "params": params})


def _abelian_chains(n: int) -> list[tuple[int, ...]]:
    """Invariant-factor sequences d1 | d2 | ... with product ``n`` (each d > 1)."""
    out: list[tuple[int, ...]] = []

    def rec(remaining: int, prefix: tuple[int, ...]):
        if remaining == 1:
            out.append(prefix)
            return
        last = prefix[-1] if prefix else 1
        for d in range(2, remaining + 1):
            if remaining % d == 0 and d % last == 0:
                rest = remaining // d
                # every later factor is a multiple of d
                if rest == 1 or rest % d == 0:
                    rec(rest, prefix + (d,))

    rec(n, ())
    return sorted(out)


def abelian_spec(factors: tuple[int, ...]) -> GroupSpec:
    if len(factors) == 1:
        return _spec("cyclic", m=factors[0])
    return _spec("direct_product", factors=[fam("cyclic", m=d) for d in factors])


def abelian_id(factors: tuple[int, ...]) -> str:
    return "x".join(f"C{d}" for d in factors)


@lru_cache(maxsize=None)
def standard_corpus(include_slow: bool = True) -> tuple[CorpusEntry, ...]:
    entries: list[CorpusEntry] = []

    def add(id_: str, spec: GroupSpec, order: int, *tags: str, slow: bool = False):
        entries.append(CorpusEntry(id_, spec, order, slow, tags))

    for n in range(2, 65):
        for chain in _abelian_chains(n):
            add(abelian_id(chain), abelian_spec(chain), n, "abelian")
    for m in range(3, 33):
        add(f"D{2 * m}", _spec("dihedral", m=m), 2 * m, "dihedral")
    for order in (8, 16, 32, 64):
        add(f"Q{order}", _spec("quaternion", order=order), order, "quaternion")
    for p in (2, 3, 5, 7):
        for sign in "+-":
            add(f"E{p}^3{sign}", _spec("extraspecial", p=p, n=1, sign=sign), p**3, "extraspecial")
    for sign in "+-":
        add(f"E2^5{sign}", _spec("extraspecial", p=2, n=2, sign=sign), 32, "extraspecial", "order32")
    for q in (2, 3, 4, 8, 16):
        add(f"Heis{q}", _spec("heisenberg", q=q), q**3, "heisenberg", slow=(q == 16))
    for p in (5, 7, 13):
        add(f"Frob{p * (p - 1)}", _spec("frobenius_p", p=p), p * (p - 1), "frobenius")
    for m in (3, 4, 5):
        add(f"S{m}", _spec("symmetric", m=m), {3: 6, 4: 24, 5: 120}[m], "symmetric")
    for m in (4, 5):
        add(f"A{m}", _spec("alternating", m=m), {4: 12, 5: 60}[m], "alternating")

    # order 32 members beyond abelian, dihedral, quaternion and extraspecial
    d8, q8 = fam("dihedral", m=4), fam("quaternion", order=8)
    order32 = {
        "SD32": _spec("semidihedral", order=32),
        "M32": _spec("modular", order=32),
        "D16xC2": _spec("direct_product", factors=[fam("dihedral", m=8), fam("cyclic", m=2)]),
        "Q16xC2": _spec("direct_product", factors=[fam("quaternion", order=16), fam("cyclic", m=2)]),
        "SD16xC2": _spec("direct_product", factors=[fam("semidihedral", order=16), fam("cyclic", m=2)]),
        "M16xC2": _spec("direct_product", factors=[fam("modular", order=16), fam("cyclic", m=2)]),
        "D8xC4": _spec("direct_product", factors=[d8, fam("cyclic", m=4)]),
        "Q8xC4": _spec("direct_product", factors=[q8, fam("cyclic", m=4)]),
        "D8xC2xC2": _spec("direct_product", factors=[d8, fam("cyclic", m=2), fam("cyclic", m=2)]),
        "Q8xC2xC2": _spec("direct_product", factors=[q8, fam("cyclic", m=2), fam("cyclic", m=2)]),
        "D8oC8": _spec("central_product", factors=[d8, fam("cyclic", m=8)]),
        "D8oC4xC2": _spec("direct_product", factors=[fam("central_product", factors=[d8, fam("cyclic", m=4)]),
                                                     fam("cyclic", m=2)]),
        "C4:C8": _spec("semidirect_cyclic", m=8, k=4, u=5),
        "C8:C4": _spec("semidirect_cyclic", m=8, k=4, u=3),
        "C8:C4b": _spec("semidirect_cyclic", m=8, k=4, u=7),
        "C16:C2x": _spec("semidirect_cyclic", m=16, k=2, u=15),
    }
    del order32["C16:C2x"]  # same as D32
    for id_, spec in order32.items():
        add(id_, spec, 32, "order32")

    products = {
        "C2xQ8": [fam("cyclic", m=2), q8],
        "C2xD8": [fam("cyclic", m=2), d8],
        "C3xQ8": [fam("cyclic", m=3), q8],
        "C3xS3": [fam("cyclic", m=3), fam("symmetric", m=3)],
        "S3xS3": [fam("symmetric", m=3), fam("symmetric", m=3)],
        "Q8xQ8": [q8, q8],
        "D8xD8": [d8, d8],
        "D8xQ8": [d8, q8],
        "A4xC2": [fam("alternating", m=4), fam("cyclic", m=2)],
        "A4xC3": [fam("alternating", m=4), fam("cyclic", m=3)],
        "S4xC2": [fam("symmetric", m=4), fam("cyclic", m=2)],
        "A5xC2": [fam("alternating", m=5), fam("cyclic", m=2)],
        "A5xC3": [fam("alternating", m=5), fam("cyclic", m=3)],
        "Frob20xC2": [fam("frobenius_p", p=5), fam("cyclic", m=2)],
        "S3xC2^3": [fam("symmetric", m=3), fam("elementary", p=2, r=3)],
        "Heis4xC2": [fam("heisenberg", q=4), fam("cyclic", m=2)],
        "Heis3xC3": [fam("heisenberg", q=3), fam("cyclic", m=3)],
        "E2^5+xC2": [fam("extraspecial", p=2, n=2, sign="+"), fam("cyclic", m=2)],
        "Q8xQ8xC2": [q8, q8, fam("cyclic", m=2)],
        "D8xD8xD8": [d8, d8, d8],
        "Q8xC2^4": [q8, fam("elementary", p=2, r=4)],
        "C2^7": [fam("elementary", p=2, r=7)],
        "C2^6xC3": [fam("elementary", p=2, r=6), fam("cyclic", m=3)],
        "Heis4xC2^2": [fam("heisenberg", q=4), fam("elementary", p=2, r=2)],
        "Heis8": None,
    }
    del products["Heis8"]
    for id_, factors in products.items():
        spec = _spec("direct_product", factors=factors)
        order = 1
        for f in factors:
            order *= _family_order(f["name"], f["params"]) or {("symmetric", 3): 6, ("symmetric", 4): 24,
                                                               ("alternating", 4): 12, ("alternating", 5): 60}[
                (f["name"], f["params"]["m"])]
        add(id_, spec, order, "product")
    add("D8oD8oC4", _spec("central_product", factors=[fam("extraspecial", p=2, n=2, sign="+"), fam("cyclic", m=4)]),
        64, "product")
    add("E3^5+", _spec("extraspecial", p=3, n=2, sign="+"), 243, "extraspecial")
    add("Heis4xHeis2", _spec("direct_product", factors=[fam("heisenberg", q=4), fam("heisenberg", q=2)]), 512,
        "product")
    if not include_slow:
        entries = [e for e in entries if not e.slow]
    return tuple(entries)


def corpus_entry(id_: str) -> CorpusEntry:
    for e in standard_corpus():
        if e.id == id_:
            return e
    raise KeyError(id_)


def export_corpus(directory: str | Path, include_slow: bool = False) -> list[Path]:
    """Write every corpus table as a table-kind group spec file."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for entry in standard_corpus(include_slow):
        g = entry.load()
        path = directory / f"{entry.id.replace(':', '_').replace('^', 'e')}.json"
        data = table_spec(g).to_dict()
        data["id"] = entry.id
        path.write_text(json.dumps(data, separators=(",", ":")))
        written.append(path)
    return written
