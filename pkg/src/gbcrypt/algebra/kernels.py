"""Dense modular linear-algebra kernels.

Two backends compute identical results:

* ``numba``: ``@njit`` loops over int64 arrays, used when q < 2^31 so that a
  product of two residues fits in a signed 64-bit word;
* ``numpy``: vectorised row operations, works for int64 and for object arrays
  holding Python ints (the only option for larger moduli).

Set ``GBCRYPT_NO_NUMBA=1`` to force the numpy backend everywhere.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

USE_NUMBA = numba is not None and os.environ.get("GBCRYPT_NO_NUMBA", "") not in ("1", "true", "yes")


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"


def _rref_numpy(A: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    A = A.copy()
    rows, cols = A.shape
    r = 0
    pivots: list[int] = []
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        inv = pow(int(A[r, c]), -1, p)
        A[r, c:] = (A[r, c:] * inv) % p
        col = A[:, c].copy()
        col[r] = 0
        others = np.flatnonzero(col)
        if others.size:
            A[others, c:] = (A[others, c:] - np.outer(col[others], A[r, c:])) % p
        pivots.append(c)
        r += 1
    return A, pivots


def _charpoly_numpy(A: np.ndarray, p: int) -> list[int]:
    """Characteristic polynomial via Hessenberg reduction, coefficients low to high."""
    H = A.copy() % p
    n = H.shape[0]
    for m in range(1, n - 1):
        nz = np.flatnonzero(H[m:, m - 1])
        if nz.size == 0:
            continue
        i = m + int(nz[0])
        if i != m:
            H[[m, i]] = H[[i, m]]
            H[:, [m, i]] = H[:, [i, m]]
        t = pow(int(H[m, m - 1]), -1, p)
        for i in range(m + 1, n):
            u = int(H[i, m - 1]) * t % p
            if u == 0:
                continue
            H[i, :] = (H[i, :] - u * H[m, :]) % p
            H[:, m] = (H[:, m] + u * H[:, i]) % p
    return _hessenberg_charpoly([[int(v) for v in row] for row in H], p)


def _hessenberg_charpoly(H: list[list[int]], p: int) -> list[int]:
    n = len(H)
    polys: list[list[int]] = [[1]]
    for m in range(1, n + 1):
        prev = polys[m - 1]
        cur = [0] * (m + 1)
        h = H[m - 1][m - 1]
        for k, c in enumerate(prev):
            cur[k + 1] = (cur[k + 1] + c) % p
            cur[k] = (cur[k] - h * c) % p
        t = 1
        for i in range(1, m):
            t = t * H[m - i][m - i - 1] % p
            coef = H[m - i - 1][m - 1] * t % p
            if coef:
                for k, c in enumerate(polys[m - i - 1]):
                    cur[k] = (cur[k] - coef * c) % p
        polys.append(cur)
    return polys[n]


if numba is not None:

    @numba.njit(cache=True)
    def _inv_mod(a, p):
        t, newt, r, newr = 0, 1, p, a % p
        while newr != 0:
            qq = r // newr
            t, newt = newt, t - qq * newt
            r, newr = newr, r - qq * newr
        if t < 0:
            t += p
        return t

    @numba.njit(cache=True)
    def _rref_numba(A, p):
        rows, cols = A.shape
        pivots = np.empty(min(rows, cols), dtype=np.int64)
        r = 0
        for c in range(cols):
            if r == rows:
                break
            i = r
            while i < rows and A[i, c] == 0:
                i += 1
            if i == rows:
                continue
            if i != r:
                for k in range(c, cols):
                    tmp = A[r, k]
                    A[r, k] = A[i, k]
                    A[i, k] = tmp
            inv = _inv_mod(A[r, c], p)
            for k in range(c, cols):
                A[r, k] = A[r, k] * inv % p
            for i2 in range(rows):
                if i2 == r:
                    continue
                f = A[i2, c]
                if f == 0:
                    continue
                for k in range(c, cols):
                    A[i2, k] = (A[i2, k] - f * A[r, k]) % p
            pivots[r] = c
            r += 1
        return pivots[:r]

    @numba.njit(cache=True)
    def _hessenberg_numba(H, p):
        n = H.shape[0]
        for m in range(1, n - 1):
            i = m
            while i < n and H[i, m - 1] == 0:
                i += 1
            if i == n:
                continue
            if i != m:
                for k in range(n):
                    tmp = H[m, k]
                    H[m, k] = H[i, k]
                    H[i, k] = tmp
                for k in range(n):
                    tmp = H[k, m]
                    H[k, m] = H[k, i]
                    H[k, i] = tmp
            t = _inv_mod(H[m, m - 1], p)
            for i2 in range(m + 1, n):
                u = H[i2, m - 1] * t % p
                if u == 0:
                    continue
                for k in range(n):
                    H[i2, k] = (H[i2, k] - u * H[m, k]) % p
                for k in range(n):
                    H[k, m] = (H[k, m] + u * H[k, i2]) % p
        return H

    @numba.njit(cache=True)
    def _hess_charpoly_numba(H, p):
        n = H.shape[0]
        P = np.zeros((n + 1, n + 1), dtype=np.int64)
        P[0, 0] = 1
        for m in range(1, n + 1):
            h = H[m - 1, m - 1]
            for k in range(m):
                c = P[m - 1, k]
                P[m, k + 1] = (P[m, k + 1] + c) % p
                P[m, k] = (P[m, k] - h * c) % p
            t = 1
            for i in range(1, m):
                t = t * H[m - i, m - i - 1] % p
                coef = H[m - i - 1, m - 1] * t % p
                if coef != 0:
                    for k in range(m - i):
                        P[m, k] = (P[m, k] - coef * P[m - i - 1, k]) % p
        return P[n]


def rref_mod(A: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``A`` over F_p; returns (R, pivot columns)."""
    if A.dtype == np.int64 and p < 1 << 31 and USE_NUMBA:
        R = np.ascontiguousarray(A % p)
        piv = _rref_numba(R, p)
        return R, [int(c) for c in piv]
    return _rref_numpy(A % p if A.dtype != object else A, p)


def charpoly_mod(A: np.ndarray, p: int) -> list[int]:
    """Characteristic polynomial det(xI - A) over F_p, low degree first."""
    n = A.shape[0]
    if n == 0:
        return [1]
    if A.dtype == np.int64 and p < 1 << 31 and USE_NUMBA:
        H = _hessenberg_numba(np.ascontiguousarray(A % p), p)
        return [int(c) for c in _hess_charpoly_numba(H, p)]
    return _charpoly_numpy(A, p)
