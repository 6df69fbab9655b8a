#!/usr/bin/env python3
"""
Exact dense linear algebra over a prime field.

Matrices are numpy int64 arrays holding residues in [0, p). Elimination works
column by column with an outer-product update of the whole matrix, so every
intermediate entry stays below p**2 < 2**62.
"""

from typing import Optional, Tuple

import numpy as np

DEFAULT_PRIME = 32003
MAX_PRIME = 2 ** 31


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def check_prime(p: int) -> int:
    """Validate a field characteristic and return it."""
    if not isinstance(p, (int, np.integer)) or not is_prime(int(p)):
        raise ValueError(f"✗ Error: field characteristic must be prime, got {p!r}")
    if p >= MAX_PRIME:
        raise ValueError(f"✗ Error: prime {p} too large for int64 residues (limit {MAX_PRIME})")
    return int(p)


def inv(x: int, p: int) -> int:
    x %= p
    if x == 0:
        raise ZeroDivisionError("zero has no inverse modulo p")
    return pow(int(x), -1, p)


def as_matrix(data, p: int) -> np.ndarray:
    """Coerce nested lists / arrays to a reduced int64 matrix."""
    m = np.asarray(data, dtype=np.int64)
    if m.ndim == 1:
        m = m.reshape(1, -1) if m.size else m.reshape(0, 0)
    if m.ndim != 2:
        raise ValueError(f"Expected a 2-d matrix, got shape {m.shape}")
    return np.mod(m, p)


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Product mod p, chunked over the inner dimension so int64 never overflows."""
    if a.shape[-1] != b.shape[0]:
        raise ValueError(f"Dimension mismatch: {a.shape} @ {b.shape}")
    inner = a.shape[-1]
    chunk = max(1, (2 ** 62) // max(1, (p - 1) ** 2))
    out_shape = a.shape[:-1] + b.shape[1:]
    out = np.zeros(out_shape, dtype=np.int64)
    for start in range(0, inner, chunk):
        stop = min(inner, start + chunk)
        out = np.mod(out + np.mod(a[..., start:stop] @ b[start:stop], p), p)
    return out


def rref(m: np.ndarray, p: int) -> Tuple[np.ndarray, list]:
    """Reduced row echelon form and the strictly increasing pivot columns."""
    work = np.mod(np.array(m, dtype=np.int64, copy=True), p)
    if work.ndim != 2:
        raise ValueError(f"Expected a 2-d matrix, got shape {work.shape}")
    rows, cols = work.shape
    pivots = []
    i = 0
    for j in range(cols):
        if i >= rows:
            break
        nonzero = np.flatnonzero(work[i:, j])
        if nonzero.size == 0:
            continue
        k = i + int(nonzero[0])
        if k != i:
            work[[i, k]] = work[[k, i]]
        work[i] = np.mod(work[i] * inv(int(work[i, j]), p), p)
        col = work[:, j].copy()
        col[i] = 0
        if col.any():
            work = np.mod(work - np.outer(col, work[i]), p)
        pivots.append(j)
        i += 1
    return work, pivots


def rank(m: np.ndarray, p: int) -> int:
    if m.size == 0:
        return 0
    return len(rref(m, p)[1])


def kernel(m: np.ndarray, p: int) -> np.ndarray:
    """Basis of {v : m·v = 0}, returned as the columns of a (cols × k) matrix."""
    cols = m.shape[1]
    if m.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    reduced, pivots = rref(m, p)
    pivot_set = set(pivots)
    free = [j for j in range(cols) if j not in pivot_set]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for k, f in enumerate(free):
        basis[f, k] = 1
        for row, pc in enumerate(pivots):
            basis[pc, k] = (-reduced[row, f]) % p
    return basis


def solve(m: np.ndarray, b: np.ndarray, p: int) -> Optional[Tuple[np.ndarray, np.ndarray]]:
    """
    Solve m·x = b.

    b is a vector (or a single column). Returns (particular solution, kernel basis
    as columns) or None when the system is inconsistent.
    """
    b = np.mod(np.asarray(b, dtype=np.int64).reshape(-1), p)
    rows, cols = m.shape
    if b.shape[0] != rows:
        raise ValueError(f"Dimension mismatch: matrix has {rows} rows, right-hand side {b.shape[0]}")
    if rows == 0:
        return np.zeros(cols, dtype=np.int64), np.eye(cols, dtype=np.int64)
    augmented = np.concatenate([np.mod(m, p), b.reshape(-1, 1)], axis=1)
    reduced, pivots = rref(augmented, p)
    if pivots and pivots[-1] == cols:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for row, pc in enumerate(pivots):
        x[pc] = reduced[row, cols]
    return x, kernel(m, p)


def column_space(m: np.ndarray, p: int) -> np.ndarray:
    """Basis of the column space, as columns, in rref pivot order of m^T."""
    if m.size == 0:
        return np.zeros((m.shape[0], 0), dtype=np.int64)
    reduced, pivots = rref(m.T, p)
    return reduced[:len(pivots)].T.copy()


def independent_columns(m: np.ndarray, p: int) -> list:
    """Indices of the first maximal linearly independent set of columns."""
    if m.size == 0:
        return []
    return rref(m, p)[1]


def in_span(vectors: np.ndarray, v: np.ndarray, p: int) -> bool:
    """Whether v lies in the span of the columns of `vectors`."""
    v = np.mod(np.asarray(v, dtype=np.int64).reshape(-1), p)
    if not v.any():
        return True
    if vectors.size == 0:
        return False
    return solve(vectors, v, p) is not None


def normalize_ray(v: np.ndarray, p: int) -> Tuple[int, ...]:
    """Scale v so its first nonzero entry is 1; a canonical key for the line k·v."""
    v = np.mod(np.asarray(v, dtype=np.int64).reshape(-1), p)
    nonzero = np.flatnonzero(v)
    if nonzero.size == 0:
        return tuple(int(x) for x in v)
    scale = inv(int(v[nonzero[0]]), p)
    return tuple(int(x) for x in np.mod(v * scale, p))


def inverse(m: np.ndarray, p: int) -> np.ndarray:
    """Inverse of a square matrix; raises ZeroDivisionError when it is singular."""
    k = m.shape[0]
    if m.shape != (k, k):
        raise ValueError(f"Expected a square matrix, got shape {m.shape}")
    reduced, pivots = rref(np.concatenate([np.mod(m, p), np.eye(k, dtype=np.int64)], axis=1), p)
    if pivots[:k] != list(range(k)):
        raise ZeroDivisionError("matrix is singular modulo p")
    return reduced[:, k:].copy()
