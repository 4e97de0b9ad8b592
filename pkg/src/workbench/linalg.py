"""Linear algebra over F_p on int64 numpy arrays.

All inputs are reduced mod p on entry; outputs are reduced representatives
in ``range(p)``.  Entries stay below p**2 * n between reductions, which is far
inside int64 for the primes used here.
"""

from __future__ import annotations

import numpy as np


def as_array(A, p: int, ncols: int | None = None) -> np.ndarray:
    M = np.array(A, dtype=np.int64)
    if M.size == 0:
        rows = M.shape[0] if M.ndim >= 1 else 0
        return np.zeros((rows, ncols or (M.shape[1] if M.ndim == 2 else 0)), dtype=np.int64)
    return M.reshape(M.shape[0], -1) % p


def rref_with_transform(A: np.ndarray, p: int):
    """Return ``(U, R, pivots)`` with ``U @ A = R`` in reduced row echelon form."""
    R = np.array(A, dtype=np.int64) % p
    m, n = R.shape
    U = np.eye(m, dtype=np.int64)
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
            U[[r, i]] = U[[i, r]]
        inv = pow(int(R[r, c]), -1, p)
        R[r] = (R[r] * inv) % p
        U[r] = (U[r] * inv) % p
        col = R[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            R[nzr] = (R[nzr] - np.outer(col[nzr], R[r])) % p
            U[nzr] = (U[nzr] - np.outer(col[nzr], U[r])) % p
        pivots.append(c)
        r += 1
    return U, R, pivots


def rref(A: np.ndarray, p: int):
    _, R, piv = rref_with_transform(A, p)
    return R[: len(piv)], piv


def rank(A, p: int) -> int:
    A = np.asarray(A, dtype=np.int64)
    if A.size == 0:
        return 0
    return len(rref(A, p)[1])


def inverse(A: np.ndarray, p: int) -> np.ndarray:
    n = A.shape[0]
    U, R, piv = rref_with_transform(A, p)
    if len(piv) != n:
        raise ValueError("matrix is singular")
    return U


def nullspace(A: np.ndarray, p: int) -> np.ndarray:
    """Basis (rows) of ``{x : A @ x = 0}``."""
    A = np.asarray(A, dtype=np.int64) % p
    m, n = A.shape
    if m == 0:
        return np.eye(n, dtype=np.int64)
    R, piv = rref(A, p)
    free = [j for j in range(n) if j not in piv]
    N = np.zeros((len(free), n), dtype=np.int64)
    for k, f in enumerate(free):
        N[k, f] = 1
        for i, pc in enumerate(piv):
            N[k, pc] = (-R[i, f]) % p
    return N


def left_nullspace(A: np.ndarray, p: int) -> np.ndarray:
    """Basis (rows) of ``{y : y @ A = 0}``."""
    return nullspace(np.asarray(A, dtype=np.int64).T, p)


def row_basis(A: np.ndarray, p: int, ncols: int | None = None) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    if A.size == 0:
        return np.zeros((0, ncols if ncols is not None else (A.shape[1] if A.ndim == 2 else 0)),
                        dtype=np.int64)
    return rref(A, p)[0]


def solve_left(A: np.ndarray, b: np.ndarray, p: int):
    """Some ``x`` with ``x @ A = b`` (b a vector or matrix of rows), or None."""
    A = np.asarray(A, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64) % p
    vec = b.ndim == 1
    B = b.reshape(1, -1) if vec else b
    m, n = A.shape
    if m == 0:
        return (np.zeros(0, dtype=np.int64) if vec else np.zeros((B.shape[0], 0), dtype=np.int64)) \
            if not B.any() else None
    # x A = b  <=>  A^T x^T = b^T
    U, R, piv = rref_with_transform(A.T, p)
    rhs = (U @ B.T) % p
    r = len(piv)
    if rhs[r:].any():
        return None
    X = np.zeros((m, B.shape[0]), dtype=np.int64)
    for i, c in enumerate(piv):
        X[c] = rhs[i]
    X = X.T % p
    return X[0] if vec else X


def in_rowspace(A: np.ndarray, b: np.ndarray, p: int) -> bool:
    return solve_left(A, b, p) is not None


def intersect_rowspaces(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """Basis of rowspace(A) ∩ rowspace(B)."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if A.shape[0] == 0 or B.shape[0] == 0:
        return np.zeros((0, A.shape[1]), dtype=np.int64)
    K = left_nullspace(np.vstack([A, -B]), p)
    return row_basis((K[:, : A.shape[0]] @ A) % p, p, A.shape[1])


def complement_basis(sub: np.ndarray, n: int, p: int) -> np.ndarray:
    """Standard basis vectors completing ``rowspace(sub)`` to F_p^n."""
    rows = []
    cur = row_basis(sub, p, n)
    piv = set(rref(cur, p)[1]) if cur.shape[0] else set()
    for j in range(n):
        if j not in piv:
            e = np.zeros(n, dtype=np.int64)
            e[j] = 1
            rows.append(e)
    return np.array(rows, dtype=np.int64).reshape(len(rows), n)
