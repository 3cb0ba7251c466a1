"""Dense linear algebra over a prime field GF(p).

Matrices are ``numpy`` int64 arrays with entries in ``[0, p)``. Elimination
pivots by column order, so every routine is deterministic.
"""
from __future__ import annotations

import numpy as np

DEFAULT_PRIME = 101


def reduce(a, p: int) -> np.ndarray:
    return np.mod(np.asarray(a, dtype=np.int64), p)


def inv_scalar(x: int, p: int) -> int:
    x %= p
    if x == 0:
        raise ZeroDivisionError("zero has no inverse mod %d" % p)
    return pow(int(x), p - 2, p)


def rref(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    r = reduce(a, p).copy()
    nrows, ncols = r.shape
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        if row == nrows:
            break
        nz = np.nonzero(r[row:, col])[0]
        if nz.size == 0:
            continue
        k = row + int(nz[0])
        if k != row:
            r[[row, k]] = r[[k, row]]
        r[row] = (r[row] * inv_scalar(int(r[row, col]), p)) % p
        col_vals = r[:, col].copy()
        col_vals[row] = 0
        mask = np.nonzero(col_vals)[0]
        if mask.size:
            r[mask] = (r[mask] - np.outer(col_vals[mask], r[row])) % p
        pivots.append(col)
        row += 1
    return r, pivots


def rank(a: np.ndarray, p: int) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def nullspace(a: np.ndarray, p: int) -> np.ndarray:
    """Columns spanning the right kernel ``{x : a x = 0}``."""
    a = np.asarray(a, dtype=np.int64)
    nrows, ncols = a.shape
    if ncols == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if nrows == 0:
        return np.eye(ncols, dtype=np.int64)
    r, pivots = rref(a, p)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = np.zeros((ncols, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        basis[f, j] = 1
        for i, pc in enumerate(pivots):
            basis[pc, j] = (-r[i, f]) % p
    return basis


def column_basis(a: np.ndarray, p: int) -> np.ndarray:
    """Linearly independent columns of ``a`` spanning its column space."""
    a = np.asarray(a, dtype=np.int64)
    if a.shape[1] == 0 or a.shape[0] == 0:
        return np.zeros((a.shape[0], 0), dtype=np.int64)
    _, pivots = rref(a, p)
    return reduce(a[:, pivots], p)


def solve(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """One solution ``x`` of ``a x = b`` (b may be a matrix), or ``None``."""
    a = reduce(a, p)
    b = reduce(b, p)
    vector = b.ndim == 1
    if vector:
        b = b.reshape(-1, 1)
    nrows, ncols = a.shape
    if nrows == 0:
        x = np.zeros((ncols, b.shape[1]), dtype=np.int64)
        return x[:, 0] if vector else x
    r, pivots = rref(np.hstack([a, b]), p)
    if any(pc >= ncols for pc in pivots):
        return None
    x = np.zeros((ncols, b.shape[1]), dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = r[i, ncols:]
    return x[:, 0] if vector else x


def inverse(a: np.ndarray, p: int) -> np.ndarray:
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    x = solve(a, np.eye(n, dtype=np.int64), p)
    if x is None or rank(a, p) != n:
        raise ZeroDivisionError("singular matrix")
    return x


def complement(sub: np.ndarray, dim: int, p: int) -> np.ndarray:
    """Standard basis vectors completing the columns of ``sub`` to a basis."""
    cols = []
    sub = np.asarray(sub, dtype=np.int64)
    current = sub.reshape(dim, -1) if sub.size else np.zeros((dim, 0), dtype=np.int64)
    r = rank(current, p)
    for i in range(dim):
        e = np.zeros((dim, 1), dtype=np.int64)
        e[i, 0] = 1
        trial = np.hstack([current, e])
        if rank(trial, p) > r:
            current, r = trial, r + 1
            cols.append(i)
    out = np.zeros((dim, len(cols)), dtype=np.int64)
    for j, i in enumerate(cols):
        out[i, j] = 1
    return out


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if a.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    return (a @ b) % p
