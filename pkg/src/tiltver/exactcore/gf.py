"""Finite fields F_{p^e} for small q, dense FFMatrix values and linear solving.

Elements of F_{p^e} are encoded as integers ``sum a_i p^i`` (coefficients of
the residue class of ``sum a_i t^i``) modulo a fixed monic irreducible
polynomial: the lexicographically smallest one of degree e.  For e = 1 the
encoding is the ordinary residue.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from ..errors import FieldMismatch, ShapeMismatch
from . import linalg
from .combinat import is_prime


def _poly_is_irreducible(coeffs: tuple[int, ...], p: int) -> bool:
    # coeffs low to high, monic of degree e = len(coeffs) - 1; degree <= 4 so
    # it suffices to rule out roots and (for e = 4) monic quadratic factors
    e = len(coeffs) - 1
    if e == 1:
        return True
    for x in range(p):
        if sum(c * pow(x, i, p) for i, c in enumerate(coeffs)) % p == 0:
            return False
    if e <= 3:
        return True
    for b, c in itertools.product(range(p), repeat=2):
        if _poly_divides((c, b, 1), coeffs, p):
            return False
    return True


def _poly_divides(d: tuple[int, ...], f: tuple[int, ...], p: int) -> bool:
    r = list(f)
    dl = len(d) - 1
    inv = pow(d[-1], p - 2, p)
    for top in range(len(r) - 1, dl - 1, -1):
        c = r[top] * inv % p
        if c:
            for i, v in enumerate(d):
                r[top - dl + i] = (r[top - dl + i] - c * v) % p
    return not any(r[:dl])


@lru_cache(maxsize=None)
def lowest_irreducible(p: int, e: int) -> tuple[int, ...]:
    """Lowest lexicographic monic irreducible of degree e over F_p (low to high)."""
    if e not in (1, 2, 3, 4):
        raise ValueError("extension degree must be between 1 and 4")
    if e == 1:
        return (0, 1)
    # lexicographic order on (a_{e-1}, ..., a_0)
    for tail in itertools.product(range(p), repeat=e):
        coeffs = tuple(reversed(tail)) + (1,)
        if _poly_is_irreducible(coeffs, p):
            return coeffs
    raise AssertionError("no irreducible polynomial found")


class GF:
    """The field with p**e elements, arithmetic through lookup tables."""

    _cache: dict[tuple[int, int], "GF"] = {}

    def __new__(cls, p: int, e: int = 1):
        key = (p, e)
        if key not in cls._cache:
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
            obj = super().__new__(cls)
            obj._setup(p, e)
            cls._cache[key] = obj
        return cls._cache[key]

    def _setup(self, p: int, e: int) -> None:
        self.p = p
        self.e = e
        self.q = p**e
        self.modulus = lowest_irreducible(p, e)
        q = self.q
        digits = np.array([[(a // p**i) % p for i in range(e)] for a in range(q)], dtype=np.int64)
        pw = p ** np.arange(e)
        self.add = ((digits[:, None, :] + digits[None, :, :]) % p) @ pw
        self.neg = ((-digits) % p) @ pw
        mul = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            for b in range(a, q):
                prod = [0] * (2 * e - 1)
                for i in range(e):
                    if digits[a, i]:
                        for j in range(e):
                            prod[i + j] += digits[a, i] * digits[b, j]
                for top in range(2 * e - 2, e - 1, -1):
                    c = prod[top] % p
                    if c:
                        for i in range(e):
                            prod[top - e + i] -= c * self.modulus[i]
                    prod[top] = 0
                code = sum((prod[i] % p) * p**i for i in range(e))
                mul[a, b] = mul[b, a] = code
        self.mul = mul
        self.inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            self.inv[a] = int(np.flatnonzero(mul[a] == 1)[0])

    def __repr__(self) -> str:
        return f"GF({self.p}**{self.e})"

    def __reduce__(self):
        return (GF, (self.p, self.e))

    def sub(self, a, b):
        return self.add[a, self.neg[b]]

    def embed(self, a):
        """Image of prime-field residues under F_p -> F_q (same integer code)."""
        return np.asarray(a, dtype=np.int64) % self.p

    def random_elements(self, rng: np.random.Generator, size) -> np.ndarray:
        return rng.integers(0, self.q, size=size, dtype=np.int64)

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.e == 1:
            return linalg.mat_mul(a, b, self.p)
        n, k = a.shape
        m = b.shape[1]
        out = np.zeros((n, m), dtype=np.int64)
        for t in range(k):
            term = self.mul[a[:, t][:, None], b[t][None, :]]
            out = self.add[out, term]
        return out

    def rref(self, a: np.ndarray) -> tuple[np.ndarray, list[int]]:
        if self.e == 1:
            return linalg.rref(a, self.p)
        A = np.array(a, dtype=np.int64)
        rows, cols = A.shape
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
            A[r] = self.mul[self.inv[A[r, c]], A[r]]
            for i2 in range(rows):
                if i2 != r and A[i2, c]:
                    A[i2] = self.sub(A[i2], self.mul[A[i2, c], A[r]])
            pivots.append(c)
            r += 1
        return A, pivots


@dataclass(frozen=True)
class FFMatrix:
    """Dense matrix over F_{p^e}; entries row-major as integer codes."""

    p: int
    ext_degree: int
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ShapeMismatch("entries length must equal rows * cols")
        q = self.p**self.ext_degree
        if any(not 0 <= x < q for x in self.entries):
            raise ValueError("entries must be canonical field codes")

    @property
    def field(self) -> GF:
        return GF(self.p, self.ext_degree)

    @classmethod
    def from_array(cls, a, p: int, ext_degree: int = 1) -> "FFMatrix":
        a = np.asarray(a, dtype=np.int64)
        if a.ndim == 1:
            a = a[:, None]
        q = p**ext_degree
        a = a % p if ext_degree == 1 else a
        if ((a < 0) | (a >= q)).any():
            raise ValueError("entries must be canonical field codes")
        return cls(p, ext_degree, a.shape[0], a.shape[1], tuple(int(x) for x in a.ravel()))

    @classmethod
    def identity(cls, n: int, p: int, ext_degree: int = 1) -> "FFMatrix":
        return cls.from_array(np.eye(n, dtype=np.int64), p, ext_degree)

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int, ext_degree: int = 1) -> "FFMatrix":
        return cls(p, ext_degree, rows, cols, (0,) * (rows * cols))

    def to_array(self) -> np.ndarray:
        return np.asarray(self.entries, dtype=np.int64).reshape(self.rows, self.cols)

    def _same_field(self, other: "FFMatrix") -> None:
        if (self.p, self.ext_degree) != (other.p, other.ext_degree):
            raise FieldMismatch(
                f"F_{self.p}^{self.ext_degree} vs F_{other.p}^{other.ext_degree}"
            )

    def __matmul__(self, other: "FFMatrix") -> "FFMatrix":
        self._same_field(other)
        if self.cols != other.rows:
            raise ShapeMismatch(f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        out = self.field.matmul(self.to_array(), other.to_array())
        return FFMatrix.from_array(out, self.p, self.ext_degree)

    def __add__(self, other: "FFMatrix") -> "FFMatrix":
        self._same_field(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeMismatch("cannot add matrices of different shapes")
        out = self.field.add[self.to_array(), other.to_array()]
        return FFMatrix.from_array(out, self.p, self.ext_degree)

    def rank(self) -> int:
        return len(self.field.rref(self.to_array())[1])

    def is_zero(self) -> bool:
        return not any(self.entries)


@dataclass(frozen=True)
class SolveResult:
    """Outcome of ``solve_linear``: particular solution plus kernel basis."""

    consistent: bool
    rank: int
    particular: FFMatrix | None
    kernel: FFMatrix  # columns span {x : A x = 0}

    @property
    def kernel_dim(self) -> int:
        return self.kernel.cols


def solve_linear(A: FFMatrix, b: FFMatrix) -> SolveResult:
    """Solve ``A X = b`` by Gaussian elimination over F_{p^e}."""
    A._same_field(b)
    if A.rows != b.rows:
        raise ShapeMismatch(f"A has {A.rows} rows but b has {b.rows}")
    F = A.field
    a = A.to_array()
    n = A.cols
    aug = np.concatenate([a, b.to_array()], axis=1)
    R, piv = F.rref(aug) if aug.shape[0] else (aug, [])
    rank_a = sum(1 for c in piv if c < n)
    free = [c for c in range(n) if c not in set(piv)]
    kern = np.zeros((n, len(free)), dtype=np.int64)
    pivrows = [(i, c) for i, c in enumerate(piv) if c < n]
    for j, f in enumerate(free):
        kern[f, j] = 1
        for i, c in pivrows:
            kern[c, j] = F.neg[R[i, f]]
    kernel = FFMatrix.from_array(kern.reshape(n, len(free)), A.p, A.ext_degree)
    if any(c >= n for c in piv):
        return SolveResult(False, rank_a, None, kernel)
    x = np.zeros((n, b.cols), dtype=np.int64)
    for i, c in pivrows:
        x[c] = R[i, n:]
    return SolveResult(True, rank_a, FFMatrix.from_array(x, A.p, A.ext_degree), kernel)


def ff_rank(A: FFMatrix) -> int:
    return A.rank()


def ff_from_rows(rows: Sequence[Sequence[int]], p: int, ext_degree: int = 1) -> FFMatrix:
    return FFMatrix.from_array(np.asarray(rows, dtype=np.int64), p, ext_degree)
