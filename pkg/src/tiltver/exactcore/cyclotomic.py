"""Arithmetic in Z[x] / Phi_{p^s}(x), i.e. Z adjoined a primitive p^s-th root of 1."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .laurent import LaurentPoly


def _check(p: int, s: int) -> None:
    if p < 2 or s < 1:
        raise ValueError(f"need a prime p and s >= 1, got p={p}, s={s}")


def cyclotomic_degree(p: int, s: int) -> int:
    return (p - 1) * p ** (s - 1)


def reduce_mod_cyclotomic(p: int, s: int, dense: Sequence[int]) -> tuple[int, ...]:
    """Reduce ``sum dense[k] x^k`` modulo ``Phi_{p^s} = sum_{k<p} x^(k p^(s-1))``.

    Exponents are first folded modulo p^s, then the single top block of
    length p^(s-1) is pushed down using the sparse relation
    ``x^((p-1)q) = -(1 + x^q + ... + x^((p-2)q))`` with ``q = p^(s-1)``.
    """
    _check(p, s)
    n = p**s
    q = p ** (s - 1)
    phi = n - q
    folded = [0] * n
    for k, c in enumerate(dense):
        if c:
            folded[k % n] += c
    top = folded[phi:]
    out = folded[:phi]
    for k in range(p - 1):
        base = k * q
        for t, c in enumerate(top):
            if c:
                out[base + t] -= c
    return tuple(out)


@dataclass(frozen=True)
class CycloElement:
    """Element of Z[omega] for a primitive p^s-th root of unity omega.

    ``coeffs[k]`` multiplies ``omega^k`` for ``0 <= k < (p-1) p^(s-1)``; the
    representation is always fully reduced, so ``== 0`` is exact.
    """

    p: int
    s: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        _check(self.p, self.s)
        if len(self.coeffs) != cyclotomic_degree(self.p, self.s):
            raise ValueError("coefficient vector has the wrong length")

    @classmethod
    def from_dense(cls, p: int, s: int, dense: Sequence[int]) -> "CycloElement":
        return cls(p, s, reduce_mod_cyclotomic(p, s, dense))

    @classmethod
    def constant(cls, p: int, s: int, c: int) -> "CycloElement":
        return cls.from_dense(p, s, [c])

    @classmethod
    def root(cls, p: int, s: int) -> "CycloElement":
        return cls.from_dense(p, s, [0, 1])

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def _same_ring(self, other: "CycloElement") -> None:
        if (self.p, self.s) != (other.p, other.s):
            raise ValueError("elements of different cyclotomic rings")

    def __add__(self, other: "CycloElement") -> "CycloElement":
        self._same_ring(other)
        return CycloElement(self.p, self.s, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "CycloElement":
        return CycloElement(self.p, self.s, tuple(-a for a in self.coeffs))

    def __sub__(self, other: "CycloElement") -> "CycloElement":
        return self + (-other)

    def __mul__(self, other: "CycloElement") -> "CycloElement":
        self._same_ring(other)
        prod = [0] * (2 * len(self.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        prod[i + j] += a * b
        return CycloElement.from_dense(self.p, self.s, prod)

    def to_json(self) -> dict:
        return {"p": self.p, "s": self.s, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "CycloElement":
        return cls(int(data["p"]), int(data["s"]), tuple(int(c) for c in data["coeffs"]))

    def __str__(self) -> str:
        terms = [f"{c}*w^{k}" if k else str(c) for k, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) if terms else "0"


def lp_eval_cyclotomic(f: LaurentPoly, p: int, s: int) -> CycloElement:
    """Evaluate f at the primitive p^s-th root of unity ``omega = x mod Phi_{p^s}``.

    Negative exponents are read through ``x^-1 = x^(p^s - 1)``.
    """
    _check(p, s)
    n = p**s
    dense = [0] * n
    for k, c in f.items():
        dense[k % n] += c
    return CycloElement.from_dense(p, s, dense)
