"""Simple, Steinberg and indecomposable tilting modules."""

from __future__ import annotations

import dataclasses
from functools import lru_cache

import numpy as np

from ..characters import simple_char, tilting_char
from ..errors import InternalConsistencyError
from ..exactcore import linalg
from ..exactcore.combinat import base_p_digits, require_odd_prime
from .homs import end_space
from .module import (
    ModuleMap,
    WeightModule,
    frobenius_twist,
    kernel,
    natural_module,
    tensor,
    trivial_module,
)
from .powers import sym_power


def renamed(M: WeightModule, provenance: str) -> WeightModule:
    return dataclasses.replace(M, provenance=provenance)


def frobenius_power(M: WeightModule, k: int) -> WeightModule:
    for _ in range(k):
        M = frobenius_twist(M)
    return M


@lru_cache(maxsize=None)
def simple_module(p: int, m: int) -> WeightModule:
    """L_m as the tensor product of Frobenius twists of restricted symmetric powers."""
    require_odd_prime(p)
    parts = []
    V = natural_module(p)
    for k, d in enumerate(base_p_digits(m, p)):
        if d:
            parts.append(frobenius_power(sym_power(V, d), k))
    if not parts:
        return renamed(trivial_module(p), "L0")
    out = parts[0]
    for part in parts[1:]:
        out = tensor(out, part)
    out = renamed(out, f"L{m}")
    if out.character() != simple_char(p, m):
        raise InternalConsistencyError(f"L{m} has the wrong character")
    return out


def steinberg(p: int, r: int) -> WeightModule:
    return renamed(simple_module(p, p**r - 1), f"St{r}")


def _split_top_summand(M: WeightModule, target_char, seed: int, budget: int = 200) -> WeightModule:
    """Indecomposable summand of M containing the (one-dimensional) top weight space.

    Fitting's lemma: for an endomorphism phi acting on the top vector by c,
    ker (phi - c)^N is a summand containing that vector.  Random phi shrink
    the summand until its character is the expected one.
    """
    p = M.p
    rng = np.random.default_rng(seed)
    for _ in range(budget):
        if M.character() == target_char:
            return M
        E = end_space(M)
        c = rng.integers(0, p, size=E.dim)
        phi = E.matrix(c)
        top = int(phi[0, 0])
        psi = (phi - top * np.eye(M.dim, dtype=np.int64)) % p
        power = psi
        # psi^N for N >= dim
        steps = 1
        while steps < M.dim:
            power = linalg.mat_mul(power, power, p)
            steps *= 2
        A, inc, _ = kernel(ModuleMap(M, M, power))
        if A.dim < M.dim:
            M = A
    if M.character() == target_char:
        return M
    raise InternalConsistencyError("could not isolate the top summand")


@lru_cache(maxsize=None)
def tilting_module(p: int, m: int) -> WeightModule:
    """Indecomposable tilting module T_m with its top weight vector first."""
    require_odd_prime(p)
    if m == 0:
        return renamed(trivial_module(p), "T0")
    if m == 1:
        return renamed(natural_module(p), "T1")
    if m <= 2 * p - 2:
        M = tensor(natural_module(p), tilting_module(p, m - 1))
        T = _split_top_summand(M, tilting_char(p, m), seed=1000 * p + m)
        return renamed(T, f"T{m}")
    a = (m - p + 1) % p
    b = (m - p + 1 - a) // p
    T = tensor(tilting_module(p, p - 1 + a), frobenius_twist(tilting_module(p, b)))
    if T.character() != tilting_char(p, m):
        raise InternalConsistencyError(f"T{m} has the wrong character")
    return renamed(T, f"T{m}")

