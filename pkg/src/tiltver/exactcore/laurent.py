"""Integer Laurent polynomials in one variable."""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from fractions import Fraction
from typing import Union

IntLike = Union[int, "LaurentPoly"]


class LaurentPoly:
    """Immutable sparse Laurent polynomial with integer coefficients.

    Coefficients are stored as ``{exponent: coefficient}`` with zero
    coefficients dropped, so two polynomials are equal exactly when their
    dictionaries are equal.

    >>> x = LaurentPoly.monomial(1)
    >>> (x + x**-1) ** 2
    LaurentPoly({2: 1, 0: 2, -2: 1})
    """

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, int] | Iterable[tuple[int, int]] | None = None):
        items = coeffs.items() if isinstance(coeffs, Mapping) else (coeffs or ())
        c: dict[int, int] = {}
        for k, v in items:
            k = int(k)
            c[k] = c.get(k, 0) + int(v)
        self._c = {k: c[k] for k in sorted(c, reverse=True) if c[k] != 0}
        self._hash = None

    @classmethod
    def _raw(cls, c: dict[int, int]) -> "LaurentPoly":
        # c must already be free of zeros
        obj = cls.__new__(cls)
        obj._c = {k: c[k] for k in sorted(c, reverse=True)}
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> "LaurentPoly":
        return cls({exponent: coeff})

    @classmethod
    def constant(cls, c: int) -> "LaurentPoly":
        return cls({0: c})

    # -- access ----------------------------------------------------------

    @property
    def coeffs(self) -> dict[int, int]:
        """Copy of the coefficient map, exponents in descending order."""
        return dict(self._c)

    def __getitem__(self, k: int) -> int:
        return self._c.get(k, 0)

    def items(self):
        return self._c.items()

    def exponents(self) -> list[int]:
        return list(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self) -> bool:
        return bool(self._c)

    @property
    def degree(self) -> int:
        if not self._c:
            raise ValueError("degree of the zero polynomial")
        return next(iter(self._c))

    @property
    def low_degree(self) -> int:
        if not self._c:
            raise ValueError("low degree of the zero polynomial")
        return min(self._c)

    def __len__(self) -> int:
        return len(self._c)

    # -- ring structure --------------------------------------------------

    @staticmethod
    def _coerce(other: IntLike) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly({0: other})
        return NotImplemented

    def __add__(self, other: IntLike) -> "LaurentPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        c = dict(self._c)
        for k, v in other._c.items():
            s = c.get(k, 0) + v
            if s:
                c[k] = s
            else:
                c.pop(k, None)
        return LaurentPoly._raw(c)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._raw({k: -v for k, v in self._c.items()})

    def __sub__(self, other: IntLike) -> "LaurentPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: IntLike) -> "LaurentPoly":
        return (-self) + other

    def __mul__(self, other: IntLike) -> "LaurentPoly":
        if isinstance(other, int):
            if other == 0:
                return LaurentPoly()
            return LaurentPoly._raw({k: v * other for k, v in self._c.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        c: dict[int, int] = {}
        for i, a in self._c.items():
            for j, b in other._c.items():
                c[i + j] = c.get(i + j, 0) + a * b
        return LaurentPoly._raw({k: v for k, v in c.items() if v})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            if len(self._c) != 1:
                raise ValueError("only monomials are invertible")
            (k, v), = self._c.items()
            if v not in (1, -1):
                raise ValueError("only unit monomials are invertible")
            return LaurentPoly({-k * (-n): v ** (-n)})
        result = LaurentPoly({0: 1})
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly({0: other})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    # -- substitutions -----------------------------------------------------

    def substitute_power(self, k: int) -> "LaurentPoly":
        """Return f(x^k); k = -1 gives the bar involution."""
        if k == 0:
            return LaurentPoly({0: sum(self._c.values())})
        return LaurentPoly._raw({e * k: v for e, v in self._c.items()})

    def bar(self) -> "LaurentPoly":
        return self.substitute_power(-1)

    def is_bar_invariant(self) -> bool:
        return all(self._c.get(-k) == v for k, v in self._c.items())

    def at_one(self) -> int:
        return sum(self._c.values())

    def shift(self, k: int) -> "LaurentPoly":
        return LaurentPoly._raw({e + k: v for e, v in self._c.items()})

    def has_nonnegative_coefficients(self) -> bool:
        return all(v > 0 for v in self._c.values())

    # -- exact division ----------------------------------------------------

    def divmod_exact(self, other: "LaurentPoly") -> tuple["LaurentPoly", "LaurentPoly"]:
        """Long division after clearing negative exponents.

        With ``self = x^a A(x)`` and ``other = x^b B(x)`` for ordinary
        polynomials A, B, returns ``(x^(a-b) Q, x^a R)`` where ``A = Q B + R``
        over the rationals.  Raises ``ArithmeticError`` if Q or R is not
        integral.
        """
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return LaurentPoly(), LaurentPoly()
        a, b = self.low_degree, other.low_degree
        num = [Fraction(0)] * (self.degree - a + 1)
        for k, v in self._c.items():
            num[k - a] = Fraction(v)
        den = [0] * (other.degree - b + 1)
        for k, v in other._c.items():
            den[k - b] = v
        dl = len(den) - 1
        lead = den[dl]
        quot: dict[int, Fraction] = {}
        for top in range(len(num) - 1, dl - 1, -1):
            c = num[top]
            if not c:
                continue
            f = c / lead
            quot[top - dl] = f
            for i, v in enumerate(den):
                if v:
                    num[top - dl + i] -= f * v
        rem = {k + a: v for k, v in enumerate(num) if v}
        if any(v.denominator != 1 for v in (*rem.values(), *quot.values())):
            raise ArithmeticError("division is not integral")
        q = LaurentPoly({k + a - b: int(v) for k, v in quot.items()})
        return q, LaurentPoly({k: int(v) for k, v in rem.items()})

    def divexact(self, other: "LaurentPoly") -> "LaurentPoly":
        q, r = self.divmod_exact(other)
        if not r.is_zero():
            raise ArithmeticError("Laurent division left a nonzero remainder")
        return q

    # -- rendering -------------------------------------------------------

    def to_json(self) -> dict[str, str]:
        """Canonical form: exponent -> decimal string, descending exponents."""
        return {str(k): str(v) for k, v in self._c.items()}

    @classmethod
    def from_json(cls, data: Mapping[str, str | int]) -> "LaurentPoly":
        return cls({int(k): int(v) for k, v in data.items()})

    def __repr__(self) -> str:
        return f"LaurentPoly({self._c!r})"

    def __str__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for k, v in self._c.items():
            if k == 0:
                mono = str(abs(v))
            else:
                xs = "x" if k == 1 else f"x^{k}"
                mono = xs if abs(v) == 1 else f"{abs(v)}*{xs}"
            parts.append(("- " if v < 0 else "+ ") + mono)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


X = LaurentPoly.monomial(1)
ONE = LaurentPoly.constant(1)
ZERO = LaurentPoly()


def lp_mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a * b
