"""Dense linear algebra over a prime field F_p on numpy arrays.

Matrices are numpy arrays holding integers in ``[0, p)``.  All products are
formed in float64 through BLAS and reduced immediately; this is exact as long
as every accumulated sum stays below 2**53, which ``_check_exact`` enforces.
Elimination is blocked: pivots are located on a narrow column panel and the
trailing matrix is updated with a single matrix product per panel.
"""

from __future__ import annotations

import numpy as np

from ..errors import ShapeMismatch

_EXACT_LIMIT = 2.0**52
PANEL = 96


def _check_exact(inner: int, p: int) -> None:
    if inner * (p - 1) ** 2 >= _EXACT_LIMIT:
        raise OverflowError(f"inner dimension {inner} too large for exact float products mod {p}")


def fmod(a: np.ndarray, p: int) -> np.ndarray:
    """Reduce an integral float array into [0, p) in place and return it."""
    a -= p * np.floor(a / p)
    return a


def as_float(a) -> np.ndarray:
    return np.asarray(a, dtype=np.float64)


def as_int(a: np.ndarray) -> np.ndarray:
    return np.asarray(a, dtype=np.float64).astype(np.int64)


def mat_mul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Exact product mod p, returned as int64."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape[-1] != b.shape[0]:
        raise ShapeMismatch(f"cannot multiply {a.shape} by {b.shape}")
    if a.size == 0 or b.size == 0:
        return np.zeros(a.shape[:-1] + b.shape[1:], dtype=np.int64)
    _check_exact(a.shape[-1], p)
    out = as_float(a) @ as_float(b)
    return fmod(out, p).astype(np.int64)


def mat_chain(p: int, *mats: np.ndarray) -> np.ndarray:
    out = mats[0]
    for m in mats[1:]:
        out = mat_mul(out, m, p)
    return np.asarray(out, dtype=np.int64) % p


def _inverse_small(b: np.ndarray, p: int) -> np.ndarray:
    """Gauss-Jordan inverse of a small invertible float matrix mod p."""
    k = b.shape[0]
    aug = np.concatenate([b.copy(), np.eye(k)], axis=1)
    for c in range(k):
        nz = np.flatnonzero(aug[c:, c])
        if nz.size == 0:
            raise ZeroDivisionError("matrix is singular mod p")
        r = c + nz[0]
        if r != c:
            aug[[c, r]] = aug[[r, c]]
        aug[c] = fmod(aug[c] * pow(int(aug[c, c]), p - 2, p), p)
        col = aug[:, c].copy()
        col[c] = 0
        nzr = np.flatnonzero(col)
        if nzr.size:
            aug[nzr] = fmod(aug[nzr] - np.outer(col[nzr], aug[c]), p)
    return aug[:, k:]


def _panel_pivots(panel: np.ndarray, p: int) -> tuple[list[int], list[int]]:
    """Pivot (row, column) pairs of a panel, in column order."""
    panel = panel.copy()
    m, b = panel.shape
    free = np.ones(m, dtype=bool)
    rows: list[int] = []
    cols: list[int] = []
    for j in range(b):
        cand = np.flatnonzero((panel[:, j] != 0) & free)
        if cand.size == 0:
            continue
        i = int(cand[0])
        free[i] = False
        rows.append(i)
        cols.append(j)
        if j + 1 == b:
            break
        prow = fmod(panel[i, j + 1:] * pow(int(panel[i, j]), p - 2, p), p)
        others = cand[1:]
        if others.size:
            panel[others, j + 1:] = fmod(
                panel[others, j + 1:] - np.outer(panel[others, j], prow), p
            )
            panel[others, j] = 0
    return rows, cols


def rref(a, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form mod p.

    Returns ``(R, pivots)``: ``R`` is int64 with the nonzero rows first and
    ``pivots[i]`` the pivot column of row ``i``.
    """
    A = as_float(a).copy()
    if A.ndim != 2:
        raise ShapeMismatch("rref expects a 2-d array")
    fmod(A, p)
    R, C = A.shape
    _check_exact(max(R, C, 1), p)
    done = np.zeros(R, dtype=bool)
    order: list[int] = []
    pivots: list[int] = []
    for c0 in range(0, C, PANEL):
        if len(order) == R:
            break
        c1 = min(C, c0 + PANEL)
        active = np.flatnonzero(~done)
        sub = A[active, c0:c1]
        if not sub.any():
            continue
        prow, pcol = _panel_pivots(sub, p)
        rows = active[prow]
        cols = c0 + np.asarray(pcol)
        binv = _inverse_small(A[np.ix_(rows, cols)], p)
        piv = fmod(binv @ A[rows, c0:], p)
        mult = A[:, cols].copy()
        mult[rows] = 0
        upd = A[:, c0:]
        upd -= mult @ piv
        fmod(upd, p)
        A[rows, c0:] = piv
        A[rows, :c0] = 0
        done[rows] = True
        order.extend(int(r) for r in rows)
        pivots.extend(int(c) for c in cols)
    rest = [i for i in range(R) if not done[i]]
    out = A[order + rest].astype(np.int64)
    out[len(order):] = 0
    return out, pivots


def rank(a, p: int) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    # eliminate along the shorter side
    if a.shape[0] > a.shape[1]:
        a = a.T
    return len(rref(a, p)[1])


def nullspace(a, p: int) -> np.ndarray:
    """Basis of ``{x : a x = 0}`` as the columns of an int64 array.

    Each basis vector has a 1 in one free coordinate and 0 in the others, so
    selecting the free coordinates is a left inverse of the basis matrix.
    """
    return nullspace_with_free(a, p)[0]


def nullspace_with_free(a, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Like :func:`nullspace` but also return the free coordinates.

    ``basis[free]`` is the identity matrix.
    """
    a = np.asarray(a)
    n = a.shape[1]
    if a.shape[0] == 0 or n == 0:
        return np.eye(n, dtype=np.int64), np.arange(n)
    R, piv = rref(a, p)
    free = np.setdiff1d(np.arange(n), piv)
    basis = np.zeros((n, free.size), dtype=np.int64)
    basis[free, np.arange(free.size)] = 1
    if piv:
        basis[np.asarray(piv)] = (-R[: len(piv)][:, free]) % p
    return basis, free


def solve(a, b, p: int) -> np.ndarray | None:
    """One solution X of ``a X = b`` (b may have several columns), or None."""
    a = np.asarray(a)
    b = np.asarray(b)
    vec = b.ndim == 1
    if vec:
        b = b[:, None]
    if a.shape[0] != b.shape[0]:
        raise ShapeMismatch(f"rows of a ({a.shape[0]}) and b ({b.shape[0]}) differ")
    n = a.shape[1]
    if a.shape[0] == 0:
        x = np.zeros((n, b.shape[1]), dtype=np.int64)
        return x[:, 0] if vec else x
    R, piv = rref(np.concatenate([a, b], axis=1), p)
    if piv and piv[-1] >= n:
        return None
    x = np.zeros((n, b.shape[1]), dtype=np.int64)
    if piv:
        x[np.asarray(piv)] = R[: len(piv), n:]
    return x[:, 0] if vec else x


def inverse(a, p: int) -> np.ndarray:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeMismatch("inverse of a non-square matrix")
    n = a.shape[0]
    x = solve(a, np.eye(n, dtype=np.int64), p)
    if x is None or rank(a, p) != n:
        raise ZeroDivisionError("matrix is singular mod p")
    return x


def column_space(a, p: int) -> np.ndarray:
    """Basis (as columns, reduced echelon in transpose) of the image of a."""
    a = np.asarray(a)
    if a.shape[1] == 0:
        return np.zeros((a.shape[0], 0), dtype=np.int64)
    R, piv = rref(a.T, p)
    return R[: len(piv)].T.copy()
