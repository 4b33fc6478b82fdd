"""Symmetric and exterior powers through their defining presentations."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..exactcore.combinat import require_odd_prime
from .homs import PresentationSequence
from .module import (
    ModuleMap,
    WeightModule,
    cokernel,
    identity_map,
    leaf_permutation,
    submodule,
    tensor,
    tensor_maps,
    tensor_power,
    trivial_module,
)


def _cached(M: WeightModule, key, build):
    store = M.__dict__.setdefault("_powers", {})
    if key not in store:
        store[key] = build()
    return store[key]


def _half_projector(T: WeightModule, sign: int) -> np.ndarray:
    """(1 + sign * s) / 2 on T = M (x) M."""
    p = T.p
    n = len(T.leaves()) // 2
    swap = leaf_permutation(T, T, list(range(n, 2 * n)) + list(range(n)))
    half = pow(2, p - 2, p)
    return (np.eye(T.dim, dtype=np.int64) + sign * swap.matrix) * half % p


def _square_part(M: WeightModule, sign: int, name: str):
    require_odd_prime(M.p)
    T = tensor(M, M)
    n = M.dim
    # pairs (a, b) are addressed through the Kronecker positions of T
    cols = []
    sel = []
    for a in range(n):
        for b in range(a if sign > 0 else a + 1, n):
            v = np.zeros(T.dim, dtype=np.int64)
            v[T.kron_pos[a * n + b]] += 1
            v[T.kron_pos[b * n + a]] += sign
            if a == b:
                v[T.kron_pos[a * n + a]] = 1
            cols.append(v)
            sel.append(T.kron_pos[a * n + b])
    B = np.array(cols, dtype=np.int64).T.reshape(T.dim, len(cols)) % M.p
    Q = np.zeros((len(cols), T.dim), dtype=np.int64)
    Q[np.arange(len(cols)), sel] = 1
    S, inc, ret = submodule(T, B, Q, f"{name}({M.provenance})")
    proj = ModuleMap(T, S, ret.matrix @ _half_projector(T, sign) % M.p)
    return S, inc, proj


def sym2(M: WeightModule):
    """S^2 M as the image of (1+s)/2; returns (module, inclusion, projection)."""
    return _cached(M, "sym2", lambda: _square_part(M, 1, "S2"))


def wedge2(M: WeightModule):
    """Exterior square as the image of (1-s)/2; returns (module, inclusion, projection)."""
    return _cached(M, "wedge2", lambda: _square_part(M, -1, "Λ2"))


# -- exterior powers via the recursive presentation -----------------------------


def _wedge_step(M: WeightModule, j: int):
    """(W_j, X1_j = M (x) W_{j-1}, quotient X1_j -> W_j, sequence or None)."""

    def build():
        p = M.p
        if j == 0:
            one = trivial_module(p)
            return one, None, None, None
        if j == 1:
            W0 = _wedge_step(M, 0)[0]
            X1 = tensor(M, W0)
            q = ModuleMap(X1, M, np.eye(M.dim, dtype=np.int64))
            return M, X1, q, None
        W2 = _wedge_step(M, j - 2)[0]
        W1, X1_prev, q_prev, _ = _wedge_step(M, j - 1)
        S2, iota, _ = sym2(M)
        X2 = tensor(S2, W2)
        MM = iota.target
        Y = tensor(MM, W2)
        Z = tensor(M, X1_prev)
        X1 = tensor(M, W1)
        first = tensor_maps(iota, identity_map(W2), X2, Y)
        assoc = leaf_permutation(Y, Z, list(range(len(Y.leaves()))))
        last = tensor_maps(identity_map(M), q_prev, Z, X1)
        a = last @ (assoc @ first)
        W, q, _ = cokernel([a], X1, f"Λ{j}({M.provenance})")
        return W, X1, q, PresentationSequence((X2, X1, W), (a, q))

    return _cached(M, ("wedge", j), build)


def wedge_power(M: WeightModule, i: int) -> WeightModule:
    if i < 0:
        raise ValueError("i must be nonnegative")
    require_odd_prime(M.p)
    return _wedge_step(M, i)[0]


def wedge_presentation(M: WeightModule, i: int) -> PresentationSequence:
    """S^2 M (x) Λ^{i-2} M -> M (x) Λ^{i-1} M -> Λ^i M -> 0, for i >= 2."""
    if i < 2:
        raise ValueError("the presentation is defined for i >= 2")
    return _wedge_step(M, i)[3]


# -- symmetric powers via the full presentation on M^{(x) i} ---------------------------


def factor_swap_perm(leaves_per_factor: int, factors: int, k: int) -> list[int]:
    """Leaf permutation exchanging tensor factors k and k+1."""
    c = leaves_per_factor
    perm = list(range(c * factors))
    perm[c * k: c * (k + 1)], perm[c * (k + 1): c * (k + 2)] = (
        perm[c * (k + 1): c * (k + 2)],
        perm[c * k: c * (k + 1)],
    )
    return perm


def adjacent_swap(T: WeightModule, M: WeightModule, i: int, k: int) -> ModuleMap:
    c = len(M.leaves())
    return leaf_permutation(T, T, factor_swap_perm(c, i, k))


def sym_power_data(M: WeightModule, i: int):
    """(S^i M, M^{(x) i}, quotient map)."""

    def build():
        if i == 0:
            one = trivial_module(M.p)
            return one, one, identity_map(one)
        if i == 1:
            return M, M, identity_map(M)
        T = tensor_power(M, i)
        eye = identity_map(T)
        maps = [eye - adjacent_swap(T, M, i, k) for k in range(i - 1)]
        S, q, _ = cokernel(maps, T, f"S{i}({M.provenance})")
        return S, T, q

    return _cached(M, ("sym", i), build)


def sym_power(M: WeightModule, i: int) -> WeightModule:
    if i < 0:
        raise ValueError("i must be nonnegative")
    require_odd_prime(M.p)
    return sym_power_data(M, i)[0]


def tensor_map_chain(maps: Sequence[ModuleMap]):
    """Left-nested tensor product of maps; returns (map, source, target)."""
    F = maps[0]
    src, tgt = F.source, F.target
    for g in maps[1:]:
        src2, tgt2 = tensor(src, g.source), tensor(tgt, g.target)
        F = tensor_maps(F, g, src2, tgt2)
        src, tgt = src2, tgt2
    return F, src, tgt
