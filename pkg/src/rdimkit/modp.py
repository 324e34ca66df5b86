"""Dense linear algebra over GF(q) for small primes q (int64 numpy arrays)."""

from __future__ import annotations

import numpy as np


def rref(a: np.ndarray, q: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form mod ``q`` and pivot columns; zero rows dropped."""
    a = np.array(a, dtype=np.int64) % q
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        a[r] = a[r] * pow(int(a[r, c]), -1, q) % q
        col = a[:, c].copy()
        col[r] = 0
        nzr = np.flatnonzero(col)
        if nzr.size:
            a[nzr] = (a[nzr] - np.outer(col[nzr], a[r])) % q
        pivots.append(c)
        r += 1
    return a[:r], pivots


def nullspace(a: np.ndarray, q: int) -> np.ndarray:
    """Basis (as rows) of ``{x : a @ x = 0}`` mod ``q``."""
    a = np.asarray(a, dtype=np.int64)
    n = a.shape[1]
    red, pivots = rref(a, q)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, pc in enumerate(pivots):
            basis[i, pc] = (-red[r, f]) % q
    return basis


def rank(a: np.ndarray, q: int) -> int:
    return len(rref(a, q)[1])


def hessenberg(a: np.ndarray, q: int) -> np.ndarray:
    """Upper Hessenberg matrix similar to ``a`` mod ``q``."""
    h = np.array(a, dtype=np.int64) % q
    d = len(h)
    for k in range(d - 2):
        nz = np.flatnonzero(h[k + 1:, k])
        if nz.size == 0:
            continue
        p = k + 1 + int(nz[0])
        if p != k + 1:
            h[[k + 1, p]] = h[[p, k + 1]]
            h[:, [k + 1, p]] = h[:, [p, k + 1]]
        piv_inv = pow(int(h[k + 1, k]), -1, q)
        u = h[k + 2:, k] * piv_inv % q
        if not u.any():
            continue
        h[k + 2:] = (h[k + 2:] - np.outer(u, h[k + 1])) % q
        h[:, k + 1] = (h[:, k + 1] + h[:, k + 2:] @ u) % q
    return h


def charpoly(a: np.ndarray, q: int) -> np.ndarray:
    """Characteristic polynomial of ``a`` mod ``q``, constant term first."""
    h = hessenberg(a, q)
    d = len(h)
    polys = [np.array([1], dtype=np.int64)]
    for m in range(d):
        # p_{m+1} = (x - h_mm) p_m - sum_{i<m} h_im * prod_{j=i+1..m} h_{j,j-1} * p_i
        nxt = np.zeros(m + 2, dtype=np.int64)
        nxt[1:] = polys[m]
        nxt[:m + 1] = (nxt[:m + 1] - h[m, m] * polys[m]) % q
        coef = 1
        for i in range(m - 1, -1, -1):
            coef = coef * int(h[i + 1, i]) % q
            if coef == 0:
                break
            c = coef * int(h[i, m]) % q
            if c:
                nxt[:i + 1] = (nxt[:i + 1] - c * polys[i]) % q
        polys.append(nxt)
    return polys[d]


def roots(poly: np.ndarray, q: int) -> list[int]:
    """All roots in GF(q) of a polynomial given constant term first."""
    xs = np.arange(q, dtype=np.int64)
    acc = np.zeros(q, dtype=np.int64)
    for c in poly[::-1]:
        acc = (acc * xs + int(c)) % q
    return np.flatnonzero(acc == 0).tolist()
