"""Small integer utilities: primality, base-p digits, binomials mod p."""

from __future__ import annotations

from math import comb


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def require_odd_prime(p: int) -> None:
    if not (isinstance(p, int) and p > 2 and is_prime(p)):
        raise ValueError(f"p must be an odd prime, got {p!r}")


def base_p_digits(n: int, p: int) -> list[int]:
    """Digits of n in base p, least significant first; [] for n = 0."""
    if n < 0:
        raise ValueError("negative integer has no base-p digits")
    out = []
    while n:
        n, r = divmod(n, p)
        out.append(r)
    return out


def lucas_binomial(n: int, k: int, p: int) -> int:
    """C(n, k) mod p as the product of digitwise binomials (Lucas)."""
    if k < 0 or n < 0:
        return 0
    result = 1
    while n or k:
        n, a = divmod(n, p)
        k, b = divmod(k, p)
        if b > a:
            return 0
        result = result * comb(a, b) % p
    return result


def ilog(n: int, p: int) -> int:
    """Largest e with p**e <= n (n >= 1)."""
    if n < 1:
        raise ValueError("ilog needs n >= 1")
    e, q = 0, p
    while q <= n:
        e += 1
        q *= p
    return e
