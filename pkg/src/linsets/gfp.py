"""Dense linear algebra over a prime field GF(p).

Matrices are numpy integer arrays with entries in ``0..p-1``.  Everything
above the field layer (subspaces of F_{q^n}^{d+1}, weights, quotients) is
expressed as F_p-linear algebra on coefficient vectors, so these few
routines carry most of the fast path.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def inverse_table(p: int) -> np.ndarray:
    """inv[a] = a^{-1} mod p for a != 0, inv[0] = 0."""
    inv = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        inv[a] = pow(a, p - 2, p)
    return inv


def rref(M, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``M`` over GF(p).

    Returns the nonzero rows of the RREF and the list of pivot columns.
    Two matrices have the same row space iff their RREFs are identical.
    """
    A = np.array(M, dtype=np.int64) % p
    if A.ndim != 2:
        raise ValueError("expected a 2-d array")
    rows, cols = A.shape
    inv = inverse_table(p)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        A[r] = (A[r] * inv[A[r, c]]) % p
        col = A[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            A[hit] = (A[hit] - np.outer(col[hit], A[r])) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(M, p: int) -> int:
    A = np.asarray(M)
    if A.size == 0:
        return 0
    return len(rref(A, p)[1])


def nullspace(M, p: int) -> np.ndarray:
    """Basis (as rows) of the right kernel {x : M x = 0} over GF(p)."""
    A = np.asarray(M, dtype=np.int64)
    ncols = A.shape[1]
    R, pivots = rref(A, p) if A.shape[0] else (np.zeros((0, ncols), np.int64), [])
    free = [c for c in range(ncols) if c not in set(pivots)]
    N = np.zeros((len(free), ncols), dtype=np.int64)
    for j, f in enumerate(free):
        N[j, f] = 1
        for i, pc in enumerate(pivots):
            N[j, pc] = (-R[i, f]) % p
    return N


def row_space_contains(R: np.ndarray, pivots: list[int], v, p: int) -> bool:
    """Membership test against an RREF basis ``R`` with pivot columns ``pivots``."""
    v = np.asarray(v, dtype=np.int64) % p
    if R.shape[0] == 0:
        return not v.any()
    residue = (v - v[pivots] @ R) % p
    return not residue.any()


def intersection_dim(A, B, p: int) -> int:
    """dim(rowspace A ∩ rowspace B) via Grassmann's identity."""
    ra, rb = rank(A, p), rank(B, p)
    return ra + rb - rank(np.vstack([A, B]), p)


def batched_rank(A: np.ndarray, p: int) -> np.ndarray:
    """Rank of every matrix in a stack of shape (batch, m, n).

    Elimination runs over the last axis, so callers should arrange for the
    last axis to be the short one.
    """
    A = np.array(A, dtype=np.int64) % p
    batch, m, n = A.shape
    inv = inverse_table(p)
    ranks = np.zeros(batch, dtype=np.int64)
    rows = np.arange(m)
    for c in range(n):
        eligible = (rows[None, :] >= ranks[:, None]) & (A[:, :, c] != 0)
        has = eligible.any(axis=1)
        if not has.any():
            continue
        b = np.flatnonzero(has)
        piv = eligible[b].argmax(axis=1)
        r = ranks[b]
        pivot_rows = A[b, piv].copy()
        A[b, piv] = A[b, r]
        pivot_rows = (pivot_rows * inv[pivot_rows[:, c]][:, None]) % p
        A[b, r] = pivot_rows
        factors = A[b, :, c].copy()
        factors[np.arange(b.size), r] = 0
        A[b] = (A[b] - factors[:, :, None] * pivot_rows[:, None, :]) % p
        ranks[b] += 1
    return ranks


def intersection(A, B, p: int) -> np.ndarray:
    """Basis (rows) of rowspace A ∩ rowspace B."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if A.shape[0] == 0 or B.shape[0] == 0:
        return np.zeros((0, A.shape[1]), dtype=np.int64)
    K = nullspace(np.vstack([A, B]).T, p)
    if K.shape[0] == 0:
        return K.reshape(0, A.shape[1])
    X = (K[:, : A.shape[0]] @ A) % p
    R, _ = rref(X, p)
    return R
