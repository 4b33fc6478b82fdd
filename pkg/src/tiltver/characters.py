"""Characters of SL2 in characteristic p: Weyl, simple, tilting, and friends.

A character is a bar-invariant Laurent polynomial in x, the coefficient of
x^k being the dimension of the weight-k space.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .errors import (
    InconsistentPadicDimension,
    InternalConsistencyError,
    NegativeCoefficients,
    NotBarInvariant,
    NotTiltingCharacter,
)
from .exactcore.combinat import base_p_digits, lucas_binomial, require_odd_prime
from .exactcore.cyclotomic import lp_eval_cyclotomic
from .exactcore.laurent import LaurentPoly


@dataclass(frozen=True)
class Character:
    """Bar-invariant Laurent polynomial viewed as a formal SL2 character."""

    underlying: LaurentPoly

    def __post_init__(self):
        if not isinstance(self.underlying, LaurentPoly):
            object.__setattr__(self, "underlying", LaurentPoly(self.underlying))
        if not self.underlying.is_bar_invariant():
            raise NotBarInvariant(f"{self.underlying} is not bar-invariant")

    @classmethod
    def from_weights(cls, weights: Iterable[int]) -> "Character":
        counts: dict[int, int] = {}
        for w in weights:
            counts[int(w)] = counts.get(int(w), 0) + 1
        return cls(LaurentPoly(counts))

    @property
    def dim(self) -> int:
        return self.underlying.at_one()

    def __getitem__(self, k: int) -> int:
        return self.underlying[k]

    def __add__(self, other: "Character") -> "Character":
        return Character(self.underlying + _lp(other))

    def __sub__(self, other: "Character") -> "Character":
        return Character(self.underlying - _lp(other))

    def __mul__(self, other) -> "Character":
        if isinstance(other, int):
            return Character(self.underlying * other)
        return Character(self.underlying * _lp(other))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, Character):
            return self.underlying == other.underlying
        if isinstance(other, (LaurentPoly, int)):
            return self.underlying == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.underlying)

    def frobenius(self, p: int) -> "Character":
        return Character(self.underlying.substitute_power(p))

    def is_zero(self) -> bool:
        return self.underlying.is_zero()

    def weyl_expansion(self) -> dict[int, int]:
        """Coefficients in the Weyl basis chi_m (exact; may be negative)."""
        f = self.underlying
        out: dict[int, int] = {}
        while not f.is_zero():
            top = f.degree
            c = f[top]
            out[top] = c
            f = f - weyl_char(top).underlying * c
        return out

    def to_json(self) -> dict[str, int]:
        return {str(k): v for k, v in self.underlying.items()}

    @classmethod
    def from_json(cls, data: Mapping[str, int | str]) -> "Character":
        return cls(LaurentPoly({int(k): int(v) for k, v in data.items()}))

    def render(self) -> str:
        """Human form in the Weyl basis, e.g. ``χ3 + 2·χ1``."""
        terms = self.weyl_expansion()
        if not terms:
            return "0"
        parts = []
        for m, c in terms.items():
            mono = f"χ{m}" if abs(c) == 1 else f"{abs(c)}·χ{m}"
            parts.append(("- " if c < 0 else "+ ") + mono)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def __str__(self) -> str:
        return str(self.underlying)


def _lp(f) -> LaurentPoly:
    if isinstance(f, Character):
        return f.underlying
    if isinstance(f, LaurentPoly):
        return f
    if isinstance(f, int):
        return LaurentPoly.constant(f)
    raise TypeError(f"cannot treat {type(f).__name__} as a character")


# -- the three families --------------------------------------------------------


@lru_cache(maxsize=None)
def weyl_char(m: int) -> Character:
    if m < 0:
        raise ValueError("Weyl characters need m >= 0")
    return Character(LaurentPoly({m - 2 * k: 1 for k in range(m + 1)}))


@lru_cache(maxsize=None)
def simple_char(p: int, m: int) -> Character:
    require_odd_prime(p)
    out = LaurentPoly.constant(1)
    for k, d in enumerate(base_p_digits(m, p)):
        if d:
            out = out * weyl_char(d).underlying.substitute_power(p**k)
    return Character(out)


@lru_cache(maxsize=None)
def tilting_char(p: int, m: int) -> Character:
    require_odd_prime(p)
    if m < 0:
        raise ValueError("tilting characters need m >= 0")
    if m <= p - 1:
        return weyl_char(m)
    if m <= 2 * p - 2:
        a = m - p + 1
        return weyl_char(p - 1 + a) + weyl_char(p - 1 - a)
    a = (m - p + 1) % p
    b = (m - p + 1 - a) // p
    return tilting_char(p, p - 1 + a) * tilting_char(p, b).frobenius(p)


# -- tilting decompositions ----------------------------------------------------


@dataclass(frozen=True)
class TiltingMultiset:
    p: int
    entries: tuple[tuple[int, int], ...]  # (m, multiplicity), m descending

    def __post_init__(self):
        if any(c <= 0 for _, c in self.entries):
            raise ValueError("multiplicities must be positive")

    @classmethod
    def from_dict(cls, p: int, d: Mapping[int, int]) -> "TiltingMultiset":
        return cls(p, tuple(sorted(((int(m), int(c)) for m, c in d.items() if c), reverse=True)))

    def as_dict(self) -> dict[int, int]:
        return dict(self.entries)

    def character(self) -> Character:
        out = Character(LaurentPoly())
        for m, c in self.entries:
            out = out + tilting_char(self.p, m) * c
        return out

    def to_json(self) -> dict:
        return {"p": self.p, "summands": {str(m): c for m, c in self.entries}}

    @classmethod
    def from_json(cls, data: Mapping) -> "TiltingMultiset":
        return cls.from_dict(int(data["p"]), {int(m): int(c) for m, c in data["summands"].items()})


def decompose_tilting(p: int, f) -> TiltingMultiset:
    """Peel tilting characters off at the highest surviving weight."""
    require_odd_prime(p)
    g = _lp(f)
    if not g.is_bar_invariant():
        raise NotBarInvariant(f"{g} is not bar-invariant")
    out: dict[int, int] = {}
    while not g.is_zero():
        top = g.degree
        c = g[top]
        if c < 0 or top < 0:
            raise NotTiltingCharacter(f"negative coefficient at weight {top}")
        out[top] = c
        g = g - tilting_char(p, top).underlying * c
        if not g.has_nonnegative_coefficients():
            raise NotTiltingCharacter(f"remainder after peeling T_{top} has negative coefficients")
    return TiltingMultiset.from_dict(p, out)


# -- exterior and symmetric powers --------------------------------------------


def _weight_multiset(f) -> list[tuple[int, int]]:
    g = _lp(f)
    if not g.has_nonnegative_coefficients():
        raise NegativeCoefficients(f"{g} has negative coefficients")
    return list(g.items())


def exterior_char(f, i: int) -> Character:
    """Elementary symmetric function e_i of the weights of f."""
    if i < 0:
        raise ValueError("i must be nonnegative")
    # coeffs[k] = e_k of the weights seen so far
    coeffs: list[dict[int, int]] = [{0: 1}] + [{} for _ in range(i)]
    for w, mult in _weight_multiset(f):
        for _ in range(mult):
            for k in range(i, 0, -1):
                prev = coeffs[k - 1]
                if prev:
                    cur = coeffs[k]
                    for e, c in prev.items():
                        cur[e + w] = cur.get(e + w, 0) + c
    return Character(LaurentPoly(coeffs[i]))


def symmetric_char(f, i: int) -> Character:
    """Complete homogeneous symmetric function h_i of the weights of f."""
    if i < 0:
        raise ValueError("i must be nonnegative")
    coeffs: list[dict[int, int]] = [{0: 1}] + [{} for _ in range(i)]
    for w, mult in _weight_multiset(f):
        for _ in range(mult):
            # multiply by 1/(1 - t x^w): forward recursion
            for k in range(1, i + 1):
                prev = coeffs[k - 1]
                cur = coeffs[k]
                for e, c in prev.items():
                    cur[e + w] = cur.get(e + w, 0) + c
    return Character(LaurentPoly(coeffs[i]))


# -- restriction of the GL Steinberg module -----------------------------------


@lru_cache(maxsize=None)
def _gl_g(m: int) -> LaurentPoly:
    g = LaurentPoly.constant(1)
    for i in range(1, m):
        g = g * (LaurentPoly({i: 1, -i: -1}) ** (m - i))
    return g


def gl_restriction_char(p: int, m: int) -> Character:
    """g(x^p) / g(x) for g = prod_{i<m} (x^i - x^-i)^(m-i)."""
    require_odd_prime(p)
    if m < 1:
        raise ValueError("m must be at least 1")
    g = _gl_g(m)
    q, r = g.substitute_power(p).divmod_exact(g)
    if not r.is_zero():
        raise InternalConsistencyError("g(x^p) is not divisible by g(x)")
    return Character(q)


# -- cells ---------------------------------------------------------------------


@dataclass(frozen=True)
class CellIndex:
    value: int

    def to_json(self) -> dict:
        return {"cell": self.value}


def vanishing_depth(f, p: int) -> int:
    """Largest n with f(omega_{p^s}) = 0 for all 1 <= s <= n."""
    g = _lp(f)
    if g.is_zero():
        raise ValueError("the zero character vanishes everywhere")
    n = 0
    while lp_eval_cyclotomic(g, p, n + 1).is_zero():
        n += 1
    return n


def threshold_cell(p: int, m: int) -> int:
    """Largest n with m >= p^n - 1."""
    n = 0
    while m >= p ** (n + 1) - 1:
        n += 1
    return n


def cell_index(p: int, m: int) -> CellIndex:
    require_odd_prime(p)
    n = vanishing_depth(tilting_char(p, m), p)
    fast = threshold_cell(p, m)
    if n != fast:
        raise InternalConsistencyError(
            f"cell of T_{m} at p={p}: cyclotomic method gives {n}, threshold rule {fast}"
        )
    return CellIndex(n)


# -- p-adic dimensions ---------------------------------------------------------


@dataclass(frozen=True)
class PadicDimension:
    p: int
    digits: tuple[int, ...]  # least significant first

    @property
    def value(self) -> int:
        return sum(d * self.p**k for k, d in enumerate(self.digits))

    def to_json(self) -> dict:
        return {"p": self.p, "digits": list(self.digits)}


def padic_dim_minus(p: int, dims: Sequence[int]) -> PadicDimension:
    """Digits D_k with C(D, s) = dims[s] mod p for every supplied s.

    Digit k is read off at s = p^k (Lucas), so only digits with p^k < len(dims)
    are determined; every supplied s is then checked.
    """
    require_odd_prime(p)
    dims = [int(d) % p for d in dims]
    if not dims or dims[0] != 1:
        raise InconsistentPadicDimension("dims[0] must be 1")
    digits = []
    k = 0
    while p**k < len(dims):
        digits.append(dims[p**k])
        k += 1
    D = sum(d * p**j for j, d in enumerate(digits))
    for s, d in enumerate(dims):
        if lucas_binomial(D, s, p) != d:
            raise InconsistentPadicDimension(
                f"no consistent p-adic dimension: C({D},{s}) mod {p} != {d}"
            )
    return PadicDimension(p, tuple(digits))


# -- labels of simple objects in the higher Verlinde category ------------------


@dataclass(frozen=True)
class VerObjectLabel:
    p: int
    n: int
    i: int

    def __post_init__(self):
        if self.n < 1 or not 0 <= self.i <= self.p ** (self.n - 1) * (self.p - 1) - 1:
            raise ValueError(f"label {self.i} out of range for level {self.n} at p={self.p}")

    @classmethod
    def generator(cls, p: int, n: int) -> "VerObjectLabel":
        """The label p^(n-1) - 1 of the distinguished projective simple object."""
        return cls(p, n, p ** (n - 1) - 1)

    def __str__(self) -> str:
        return f"V{self.i}"
