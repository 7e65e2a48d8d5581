"""Dense linear algebra over GF(2) on numpy ``uint8`` arrays.

Matrices act on column vectors.  Everything here is exact; sizes in this
package stay in the low hundreds, so plain Gaussian elimination suffices.
"""

from __future__ import annotations

import numpy as np


def as_gf2(a) -> np.ndarray:
    return (np.asarray(a, dtype=np.int64) % 2).astype(np.uint8)


def zeros(r: int, c: int) -> np.ndarray:
    return np.zeros((r, c), dtype=np.uint8)


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[1] == 0 or a.shape[0] == 0 or b.shape[1] == 0:
        return zeros(a.shape[0], b.shape[1])
    return (a.astype(np.int64) @ b.astype(np.int64) % 2).astype(np.uint8)


def rref(m: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and the pivot columns (leftmost first)."""
    r = m.copy() % 2
    r = r.astype(np.uint8)
    rows, cols = r.shape
    pivots: list[int] = []
    row = 0
    for col in range(cols):
        if row >= rows:
            break
        hits = np.nonzero(r[row:, col])[0]
        if hits.size == 0:
            continue
        p = row + hits[0]
        if p != row:
            r[[row, p]] = r[[p, row]]
        others = np.nonzero(r[:, col])[0]
        others = others[others != row]
        r[others] ^= r[row]
        pivots.append(col)
        row += 1
    return r[:row], pivots


def rank(m: np.ndarray) -> int:
    if m.size == 0:
        return 0
    return len(rref(m)[1])


def nullspace(m: np.ndarray) -> np.ndarray:
    """Basis of the kernel, one vector per row, in reduced form."""
    cols = m.shape[1]
    if m.shape[0] == 0:
        return np.eye(cols, dtype=np.uint8)
    r, pivots = rref(m)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = zeros(len(free), cols)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for row, p in enumerate(pivots):
            if r[row, f]:
                basis[k, p] = 1
    return basis


def row_space(vectors: np.ndarray) -> np.ndarray:
    if vectors.shape[0] == 0:
        return vectors
    return rref(vectors)[0]


def reduce_mod(v: np.ndarray, basis_rref: np.ndarray, pivots: list[int]) -> np.ndarray:
    """Reduce ``v`` against a row space given in reduced echelon form."""
    v = v.copy()
    for row, p in enumerate(pivots):
        if v[p]:
            v ^= basis_rref[row]
    return v


def solve(a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """One solution ``x`` of ``a x = b`` (``b`` a vector), or None."""
    rows, cols = a.shape
    aug = np.concatenate([a % 2, (b % 2).reshape(-1, 1)], axis=1).astype(np.uint8)
    r, pivots = rref(aug)
    if cols in pivots:
        return None
    x = np.zeros(cols, dtype=np.uint8)
    for row, p in enumerate(pivots):
        x[p] = r[row, cols]
    return x


def quotient_basis(cycles: np.ndarray, boundaries: np.ndarray) -> np.ndarray:
    """Canonical representatives of ``span(cycles) / span(boundaries)``.

    Boundaries are put in reduced echelon form, cycles are reduced against
    them and the survivors are reduced among themselves, so the result does
    not depend on the input bases.
    """
    n = cycles.shape[1] if cycles.ndim == 2 else 0
    if boundaries.shape[0]:
        b, bp = rref(boundaries)
    else:
        b, bp = zeros(0, n), []
    reduced = np.array([reduce_mod(v, b, bp) for v in cycles], dtype=np.uint8).reshape(-1, n)
    reduced = reduced[reduced.any(axis=1)] if reduced.size else reduced
    if reduced.shape[0] == 0:
        return zeros(0, n)
    q, _ = rref(reduced)
    return q
