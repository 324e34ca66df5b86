"""Exact sign of ``sum_j sqrt(r_j) - x`` for nonnegative rationals ``r_j`` and rational ``x``.

Each square root is rewritten as ``c * sqrt(f)`` with ``f`` square-free; roots of
distinct square-free integers are linearly independent over Q, so the sum equals
a rational exactly when every irrational part cancels.  Otherwise the sign is
decided by refining integer-square-root enclosures until they exclude zero.
"""

from __future__ import annotations

import math
from collections import defaultdict
from fractions import Fraction
from typing import Iterable

from sympy import factorint


def squarefree_split(m: int) -> tuple[int, int]:
    """``(s, f)`` with ``m == s*s*f`` and ``f`` square-free."""
    if m == 0:
        return 0, 1
    s, f = 1, 1
    for p, k in factorint(m).items():
        s *= p ** (k // 2)
        if k % 2:
            f *= p
    return s, f


def sqrt_terms(radicands: Iterable[Fraction | int]) -> dict[int, Fraction]:
    """Collect ``sum sqrt(r)`` as ``{f: c}`` meaning ``sum c * sqrt(f)``."""
    out: dict[int, Fraction] = defaultdict(Fraction)
    for r in radicands:
        r = Fraction(r)
        if r < 0:
            raise ValueError("negative radicand")
        if r == 0:
            continue
        s, f = squarefree_split(r.numerator * r.denominator)
        out[f] += Fraction(s, r.denominator)
    return {f: c for f, c in out.items() if c}


def _enclose(terms: dict[int, Fraction], shift: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    lo = hi = shift
    scale = 1 << bits
    for f, c in terms.items():
        root_lo = Fraction(math.isqrt(f * scale * scale), scale)
        root_hi = root_lo + Fraction(1, scale)
        if c > 0:
            lo += c * root_lo
            hi += c * root_hi
        else:
            lo += c * root_hi
            hi += c * root_lo
    return lo, hi


def sign_sqrt_sum_minus(radicands: Iterable[Fraction | int], x: Fraction | int) -> int:
    """Sign (-1, 0, 1) of ``sum sqrt(r_j) - x``, computed exactly."""
    terms = sqrt_terms(radicands)
    rational = terms.pop(1, Fraction(0)) - Fraction(x)
    if not terms:
        return (rational > 0) - (rational < 0)
    bits = 32
    while True:
        lo, hi = _enclose(terms, rational, bits)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        bits *= 2

