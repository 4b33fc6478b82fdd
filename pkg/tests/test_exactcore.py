from __future__ import annotations

import math
import random

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import coeff_maps, laurent, naive_mul
from tiltver.errors import FieldMismatch, ShapeMismatch
from tiltver.exactcore import (
    CycloElement,
    FFMatrix,
    GF,
    LaurentPoly,
    cyclotomic_degree,
    lowest_irreducible,
    lp_eval_cyclotomic,
    lp_mul,
    lucas_binomial,
    solve_linear,
)
from tiltver.exactcore import linalg

x = LaurentPoly.monomial(1)
X = sympy.Symbol("x")


def cyclo_oracle(f: LaurentPoly, p: int, s: int) -> list[int]:
    """Remainder of x^N f(x) (N makes it a polynomial) times x^-N, via sympy."""
    n = p**s
    shift = n * (1 + max(0, -f.low_degree)) if not f.is_zero() else 0
    expr = sum(c * X ** (k + shift) for k, c in f.items())
    phi = sympy.Poly(sympy.cyclotomic_poly(n, X), X)
    # x^-shift = x^(n*q - shift) with shift a multiple of n, so it is 1
    r = sympy.Poly(expr, X).rem(phi) if expr != 0 else sympy.Poly(0, X)
    coeffs = [int(c) for c in reversed(r.all_coeffs())]
    return coeffs + [0] * (cyclotomic_degree(p, s) - len(coeffs))


# -- Laurent polynomials --------------------------------------------------------------


def test_lp_mul_examples():
    assert lp_mul(x + x**-1, x + x**-1) == x**2 + 2 + x**-2
    assert lp_mul(LaurentPoly(), x**3 + 1).is_zero()
    lhs = lp_mul(x**2 + 1 + x**-2, x**6 + 1 + x**-6)
    assert lhs == LaurentPoly({k: 1 for k in range(-8, 9, 2)})


def test_zero_coefficients_are_dropped():
    f = LaurentPoly({3: 0, 1: 2, -1: 0})
    assert f.coeffs == {1: 2}
    assert (f - f).coeffs == {}


def test_json_round_trip_big_coefficients():
    f = LaurentPoly({5: 10**40, -3: -7})
    d = f.to_json()
    assert d == {"5": str(10**40), "-3": "-7"}
    assert LaurentPoly.from_json(d) == f


def test_exact_division():
    g = (x - x**-1) ** 2 * (x**2 - x**-2)
    q = lp_mul(g, x**5 + 3 + x**-1).divexact(g)
    assert q == x**5 + 3 + x**-1
    with pytest.raises(ArithmeticError):
        (x**2 + 1).divexact(x + 3)


@settings(max_examples=1000, deadline=None)
@given(coeff_maps, coeff_maps, coeff_maps)
def test_ring_axioms_against_naive_convolution(a, b, c):
    A, B, C = LaurentPoly(a), LaurentPoly(b), LaurentPoly(c)
    assert lp_mul(A, B).coeffs == naive_mul(A.coeffs, B.coeffs)
    assert lp_mul(A, B) == lp_mul(B, A)
    assert lp_mul(lp_mul(A, B), C) == lp_mul(A, lp_mul(B, C))
    assert lp_mul(A, B + C) == lp_mul(A, B) + lp_mul(A, C)
    assert lp_mul(A, LaurentPoly.constant(1)) == A
    assert (A + B) - B == A


# -- cyclotomic evaluation ------------------------------------------------------------


def test_cyclotomic_examples():
    assert lp_eval_cyclotomic(x**2 + 1 + x**-2, 3, 1).is_zero()
    for p, s in ((3, 1), (5, 2), (7, 1)):
        assert lp_eval_cyclotomic(LaurentPoly.constant(1), p, s) == CycloElement.constant(p, s, 1)
    v = lp_eval_cyclotomic(x**2 + 1 + x**-2, 3, 2)
    assert v.coeffs == (1, -1, 1, 0, -1, 0)
    assert not v.is_zero()


def test_cyclo_json_round_trip():
    v = lp_eval_cyclotomic(x**7 - 4 * x**-2, 5, 2)
    assert CycloElement.from_json(v.to_json()) == v


@settings(max_examples=200, deadline=None)
@given(laurent, laurent, st.sampled_from([(3, 1), (3, 2), (5, 1), (5, 2), (7, 1)]))
def test_evaluation_is_a_ring_homomorphism(f, g, ps):
    p, s = ps
    ef, eg = lp_eval_cyclotomic(f, p, s), lp_eval_cyclotomic(g, p, s)
    assert lp_eval_cyclotomic(lp_mul(f, g), p, s) == ef * eg
    assert lp_eval_cyclotomic(f + g, p, s) == ef + eg


@settings(max_examples=150, deadline=None)
@given(laurent, st.sampled_from([(3, 1), (3, 2), (5, 1), (5, 2)]))
def test_reduction_matches_sympy(f, ps):
    p, s = ps
    assert list(lp_eval_cyclotomic(f, p, s).coeffs) == cyclo_oracle(f, p, s)


@settings(max_examples=150, deadline=None)
@given(laurent, st.sampled_from([(3, 1), (3, 2), (5, 1)]))
def test_zero_test_matches_divisibility(f, ps):
    p, s = ps
    n = p**s
    zero = lp_eval_cyclotomic(lp_mul(f, sum((x ** (k * n // p) for k in range(p)), LaurentPoly())), p, s)
    assert zero.is_zero()
    assert lp_eval_cyclotomic(f, p, s).is_zero() == (not any(cyclo_oracle(f, p, s)))


# -- binomials ------------------------------------------------------------------------


def test_lucas_examples():
    assert lucas_binomial(3, 1, 3) == 0
    assert lucas_binomial(3, 3, 3) == 1
    assert lucas_binomial(7, 2, 3) == 0


@pytest.mark.parametrize("p", [3, 5, 7])
def test_lucas_matches_integer_binomial(p):
    for n in range(201):
        for k in range(n + 1):
            assert lucas_binomial(n, k, p) == math.comb(n, k) % p


# -- linear algebra -------------------------------------------------------------------


def naive_rank(rows: list[list[int]], p: int) -> int:
    a = [r[:] for r in rows]
    rank = 0
    cols = len(a[0]) if a else 0
    for c in range(cols):
        piv = next((r for r in range(rank, len(a)) if a[r][c] % p), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = pow(a[rank][c], -1, p)
        a[rank] = [v * inv % p for v in a[rank]]
        for r in range(len(a)):
            if r != rank and a[r][c] % p:
                f = a[r][c]
                a[r] = [(u - f * v) % p for u, v in zip(a[r], a[rank])]
        rank += 1
    return rank


def test_solve_examples():
    I = FFMatrix.identity(2, 3)
    b = FFMatrix.from_array([[2], [1]], 3)
    res = solve_linear(I, b)
    assert res.consistent and res.rank == 2 and res.particular == b
    Z = FFMatrix.zeros(2, 2, 3)
    res = solve_linear(Z, FFMatrix.zeros(2, 1, 3))
    assert res.consistent and res.rank == 0 and res.kernel_dim == 2
    A = FFMatrix.from_array([[1, 2], [2, 1]], 3)
    assert solve_linear(A, FFMatrix.zeros(2, 1, 3)).rank == 1


def test_solve_errors():
    A = FFMatrix.identity(2, 3)
    with pytest.raises(ShapeMismatch):
        solve_linear(A, FFMatrix.zeros(3, 1, 3))
    with pytest.raises(FieldMismatch):
        solve_linear(A, FFMatrix.zeros(2, 1, 5))
    with pytest.raises(FieldMismatch):
        solve_linear(A, FFMatrix.zeros(2, 1, 3, 2))
    res = solve_linear(FFMatrix.zeros(1, 1, 3), FFMatrix.identity(1, 3))
    assert not res.consistent and res.particular is None


@settings(max_examples=200, deadline=None)
@given(
    st.sampled_from([3, 5, 7]),
    st.integers(1, 6),
    st.integers(1, 6),
    st.randoms(use_true_random=False),
)
def test_rank_nullity_and_particular_solution(p, r, c, rnd):
    rows = [[rnd.randrange(p) if rnd.random() < 0.6 else 0 for _ in range(c)] for _ in range(r)]
    A = FFMatrix.from_array(rows, p)
    b = FFMatrix.from_array([[rnd.randrange(p)] for _ in range(r)], p)
    res = solve_linear(A, b)
    assert res.rank == naive_rank(rows, p) == linalg.rank(np.array(rows), p)
    assert res.rank + res.kernel_dim == c
    assert (A @ res.kernel).is_zero()
    if res.consistent:
        assert A @ res.particular == b


def test_extension_fields():
    assert lowest_irreducible(3, 2) == (1, 0, 1)  # x^2 + 1 over F_3, lowest monic irreducible
    F = GF(5, 2)
    rng = np.random.default_rng(0)
    a = F.random_elements(rng, (4, 4))
    b = F.random_elements(rng, (4, 4))
    c = F.random_elements(rng, (4, 4))
    assert np.array_equal(F.matmul(F.matmul(a, b), c), F.matmul(a, F.matmul(b, c)))
    A = FFMatrix.from_array(a, 5, 2)
    res = solve_linear(A, FFMatrix.from_array(b[:, :1], 5, 2))
    assert res.rank + res.kernel_dim == 4
    if res.consistent:
        assert A @ res.particular == FFMatrix.from_array(b[:, :1], 5, 2)


def test_dense_linalg_over_large_prime_is_exact():
    p = 10007
    rnd = random.Random(1)
    a = np.array([[rnd.randrange(p) for _ in range(30)] for _ in range(30)])
    inv = linalg.inverse(a, p)
    assert np.array_equal(linalg.mat_mul(a, inv, p), np.eye(30, dtype=np.int64))
