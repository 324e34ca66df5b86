"""Exact elements of Z[zeta_e] in the power basis reduced modulo Phi_e."""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from sympy import Poly, cyclotomic_poly, symbols

_x = symbols("x")


@lru_cache(maxsize=None)
def cyclotomic_coeffs(e: int) -> tuple[int, ...]:
    """Coefficients of Phi_e, constant term first."""
    return tuple(int(c) for c in reversed(Poly(cyclotomic_poly(e, _x), _x).all_coeffs()))


@lru_cache(maxsize=None)
def reduction_matrix(e: int) -> np.ndarray:
    """Row ``j`` holds the canonical coefficients of ``zeta**j``, ``0 <= j < e``."""
    phi = np.array(cyclotomic_coeffs(e), dtype=np.int64)
    deg = len(phi) - 1
    red = np.zeros((e, deg), dtype=np.int64)
    cur = np.zeros(deg, dtype=np.int64)
    cur[0] = 1
    for j in range(e):
        red[j] = cur
        # x * cur, then x^deg = -(phi_0 + ... + phi_{deg-1} x^{deg-1})
        overflow = cur[-1]
        cur = np.concatenate([[0], cur[:-1]]) - overflow * phi[:deg]
    red.setflags(write=False)
    return red


def degree(e: int) -> int:
    return len(cyclotomic_coeffs(e)) - 1


def reduce_exponent_vector(m: np.ndarray, e: int) -> np.ndarray:
    """Map coefficient vectors on ``zeta**0..zeta**(e-1)`` (last axis) to canonical form."""
    return np.asarray(m, dtype=np.int64) @ reduction_matrix(e)


class CyclotomicInt:
    """An element ``sum c_j zeta_e**j`` with ``c`` canonical modulo ``Phi_e``."""

    __slots__ = ("e", "coeffs")

    def __init__(self, e: int, coeffs):
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != degree(e):
            raise ValueError(f"expected {degree(e)} coefficients for e={e}, got {len(coeffs)}")
        self.e = e
        self.coeffs = coeffs

    @classmethod
    def from_int(cls, e: int, n: int) -> CyclotomicInt:
        return cls(e, tuple(reduction_matrix(e)[0] * n))

    @classmethod
    def zeta(cls, e: int, j: int = 1) -> CyclotomicInt:
        return cls(e, tuple(reduction_matrix(e)[j % e]))

    @classmethod
    def from_exponents(cls, e: int, m) -> CyclotomicInt:
        """From coefficients on ``zeta**0 .. zeta**(e-1)``."""
        return cls(e, tuple(reduce_exponent_vector(np.asarray(m), e)))

    def _coerce(self, other) -> CyclotomicInt:
        if isinstance(other, CyclotomicInt):
            if other.e != self.e:
                raise ValueError("cyclotomic orders differ")
            return other
        if isinstance(other, (int, np.integer)):
            return CyclotomicInt.from_int(self.e, int(other))
        return NotImplemented

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.e, self.coeffs))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return CyclotomicInt(self.e, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self) -> CyclotomicInt:
        return CyclotomicInt(self.e, [-a for a in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        e = self.e
        full = np.zeros(e, dtype=np.int64)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    full[(i + j) % e] += a * b
        return CyclotomicInt.from_exponents(e, full)

    __rmul__ = __mul__

    def conjugate(self) -> CyclotomicInt:
        e = self.e
        full = np.zeros(e, dtype=np.int64)
        for j, c in enumerate(self.coeffs):
            full[(-j) % e] += c
        return CyclotomicInt.from_exponents(e, full)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def as_int(self) -> int | None:
        """The rational-integer value, or ``None`` if not in Z."""
        if any(self.coeffs[1:]):
            return None
        return self.coeffs[0]

    def root_of_unity_exponent(self) -> int | None:
        """``j`` with ``self == zeta**j``, or ``None``."""
        red = reduction_matrix(self.e)
        hits = np.flatnonzero((red == np.array(self.coeffs)).all(axis=1))
        return int(hits[0]) if hits.size else None

    def exact_div(self, n: int) -> CyclotomicInt:
        if any(c % n for c in self.coeffs):
            raise ArithmeticError(f"{self!r} is not divisible by {n}")
        return CyclotomicInt(self.e, [c // n for c in self.coeffs])

    def __complex__(self) -> complex:
        z = np.exp(2j * np.pi / self.e)
        return complex(sum(c * z**j for j, c in enumerate(self.coeffs)))

    def __repr__(self) -> str:
        terms = [f"{c}*z^{j}" if j else str(c) for j, c in enumerate(self.coeffs) if c]
        return f"CyclotomicInt(e={self.e}: {' + '.join(terms) or '0'})"
