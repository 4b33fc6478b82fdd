"""Finite-dimensional modules for the divided-power hyperalgebra of SL2 over F_p.

A module is a weight-graded F_p vector space together with the matrices of
e^{(p^k)} and f^{(p^k)} for ``k = 0..K``.  Basis vectors are ordered by
descending weight; ties keep construction order.  Matrices act on column
vectors and are stored as dense int64 arrays with entries in [0, p).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial
from typing import Sequence

import numpy as np

from ..characters import Character
from ..config import check_dim
from ..errors import InternalConsistencyError, ShapeMismatch
from ..exactcore import linalg
from ..exactcore.combinat import base_p_digits, require_odd_prime
from ..exactcore.gf import FFMatrix


def num_generators(p: int, span: int) -> int:
    """K + 1 where K is minimal with 2 p^(K+1) > span."""
    K = 0
    while 2 * p ** (K + 1) <= span:
        K += 1
    return K + 1


@dataclass(frozen=True, eq=False)
class WeightModule:
    p: int
    weights: np.ndarray
    gens_e: tuple[np.ndarray, ...]
    gens_f: tuple[np.ndarray, ...]
    provenance: str = "?"
    # tensor structure: factors (left, right) and the position in this basis
    # of the basis vector with Kronecker index i * dim(right) + j
    factors: tuple["WeightModule", "WeightModule"] | None = field(default=None, repr=False)
    kron_pos: np.ndarray | None = field(default=None, repr=False)
    # for duals: position in the original module of each basis vector
    dual_of: "WeightModule | None" = field(default=None, repr=False)
    dual_index: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.int64)
        object.__setattr__(self, "weights", w)
        if w.size > 1 and (np.diff(w) > 0).any():
            raise InternalConsistencyError("basis must be ordered by descending weight")
        n = self.num_gens_expected
        if len(self.gens_e) != n or len(self.gens_f) != n:
            raise InternalConsistencyError(
                f"expected {n} generator levels, got {len(self.gens_e)}/{len(self.gens_f)}"
            )
        for g in (*self.gens_e, *self.gens_f):
            if g.shape != (self.dim, self.dim):
                raise ShapeMismatch("generator matrix has the wrong shape")

    # -- basic data ------------------------------------------------------------

    @property
    def dim(self) -> int:
        return int(self.weights.size)

    @property
    def span(self) -> int:
        return int(self.weights[0] - self.weights[-1]) if self.dim else 0

    @property
    def num_gens_expected(self) -> int:
        return num_generators(self.p, self.span)

    @property
    def K(self) -> int:
        return len(self.gens_e) - 1

    def blocks(self) -> dict[int, slice]:
        """Weight -> slice of basis positions, weights descending."""
        cache = self.__dict__.get("_blocks")
        if cache is None:
            cache = {}
            w = self.weights
            start = 0
            for i in range(1, w.size + 1):
                if i == w.size or w[i] != w[start]:
                    cache[int(w[start])] = slice(start, i)
                    start = i
            object.__setattr__(self, "_blocks", cache)
        return cache

    def weight_dims(self) -> dict[int, int]:
        return {w: s.stop - s.start for w, s in self.blocks().items()}

    def character(self) -> Character:
        return Character.from_weights(self.weights.tolist())

    def leaves(self) -> tuple["WeightModule", ...]:
        if self.factors is None:
            return (self,)
        return self.factors[0].leaves() + self.factors[1].leaves()

    def leaf_index(self) -> np.ndarray:
        """(dim x number of leaves) array: index of each basis vector in every leaf."""
        cache = self.__dict__.get("_leaf_index")
        if cache is None:
            if self.factors is None:
                cache = np.arange(self.dim, dtype=np.int64)[:, None]
            else:
                L, R = self.factors
                li, ri = L.leaf_index(), R.leaf_index()
                kron = np.concatenate(
                    [np.repeat(li, R.dim, axis=0), np.tile(ri, (L.dim, 1))], axis=1
                )
                cache = np.empty_like(kron)
                cache[self.kron_pos] = kron
            object.__setattr__(self, "_leaf_index", cache)
        return cache

    def generators(self):
        """Yield (letter, k, shift, matrix) for every stored generator."""
        for k, g in enumerate(self.gens_e):
            yield "e", k, 2 * self.p**k, g
        for k, g in enumerate(self.gens_f):
            yield "f", k, -2 * self.p**k, g

    def __repr__(self) -> str:
        return f"WeightModule(p={self.p}, dim={self.dim}, {self.provenance})"

    # -- serialization ---------------------------------------------------------

    def to_json(self) -> dict:
        from ..verify.encoding import encode_matrix

        wd = self.weight_dims()
        return {
            "p": self.p,
            "weights": [[w, d] for w, d in wd.items()],
            "gens_e": [encode_matrix(g, self.p) for g in self.gens_e],
            "gens_f": [encode_matrix(g, self.p) for g in self.gens_f],
            "provenance": self.provenance,
        }

    @classmethod
    def from_json(cls, data: dict) -> "WeightModule":
        from ..verify.encoding import decode_matrix

        weights = [w for w, d in data["weights"] for _ in range(d)]
        return cls(
            int(data["p"]),
            np.asarray(weights, dtype=np.int64),
            tuple(decode_matrix(g) for g in data["gens_e"]),
            tuple(decode_matrix(g) for g in data["gens_f"]),
            data.get("provenance", "?"),
        )


@dataclass(frozen=True, eq=False)
class ModuleMap:
    source: WeightModule
    target: WeightModule
    matrix: np.ndarray  # target.dim x source.dim

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.int64) % self.source.p
        object.__setattr__(self, "matrix", m)
        if self.source.p != self.target.p:
            raise ShapeMismatch("maps between modules over different fields")
        if m.shape != (self.target.dim, self.source.dim):
            raise ShapeMismatch(
                f"matrix shape {m.shape} does not match {self.target.dim}x{self.source.dim}"
            )

    @property
    def p(self) -> int:
        return self.source.p

    def __matmul__(self, other: "ModuleMap") -> "ModuleMap":
        """Composition ``self o other``."""
        if other.target is not self.source and other.target.dim != self.source.dim:
            raise ShapeMismatch("maps are not composable")
        return ModuleMap(other.source, self.target, linalg.mat_mul(self.matrix, other.matrix, self.p))

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(self.source, self.target, self.matrix + other.matrix)

    def __sub__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(self.source, self.target, self.matrix - other.matrix)

    def scale(self, c: int) -> "ModuleMap":
        return ModuleMap(self.source, self.target, self.matrix * (c % self.p))

    def is_zero(self) -> bool:
        return not self.matrix.any()

    def rank(self) -> int:
        return linalg.rank(self.matrix, self.p)

    def as_ffmatrix(self) -> FFMatrix:
        return FFMatrix.from_array(self.matrix, self.p)

    def is_weight_preserving(self) -> bool:
        tw, sw = self.target.weights, self.source.weights
        rows, cols = np.nonzero(self.matrix)
        return bool((tw[rows] == sw[cols]).all())

    def intertwiner_residual(self) -> int:
        """Number of nonzero entries in all commutator defects (0 for module maps)."""
        if not self.is_weight_preserving():
            return -1
        bad = 0
        S, T = self.source, self.target
        for k in range(max(S.K, T.K) + 1):
            for letter in "ef":
                gs = divided_power_action(S, letter, S.p**k)
                gt = divided_power_action(T, letter, T.p**k)
                d = (linalg.mat_mul(self.matrix, gs, self.p) - linalg.mat_mul(gt, self.matrix, self.p)) % self.p
                bad += int(np.count_nonzero(d))
        return bad

    def is_intertwiner(self) -> bool:
        return self.intertwiner_residual() == 0


def identity_map(M: WeightModule) -> ModuleMap:
    return ModuleMap(M, M, np.eye(M.dim, dtype=np.int64))


def zero_map(S: WeightModule, T: WeightModule) -> ModuleMap:
    return ModuleMap(S, T, np.zeros((T.dim, S.dim), dtype=np.int64))


# -- divided powers ---------------------------------------------------------------


def divided_power_action(M: WeightModule, letter: str, r: int) -> np.ndarray:
    """Matrix of e^{(r)} or f^{(r)} via the Lucas factorization over base-p digits."""
    if letter not in ("e", "f"):
        raise ValueError("letter must be 'e' or 'f'")
    p = M.p
    if r == 0:
        return np.eye(M.dim, dtype=np.int64)
    if 2 * r > M.span:
        return np.zeros((M.dim, M.dim), dtype=np.int64)
    gens = M.gens_e if letter == "e" else M.gens_f
    cache = M.__dict__.setdefault("_dp_cache", {})
    key = (letter, r)
    if key in cache:
        return cache[key]
    out = None
    for k, d in enumerate(base_p_digits(r, p)):
        if d == 0:
            continue
        g = gens[k] if k < len(gens) else np.zeros((M.dim, M.dim), dtype=np.int64)
        term = np.eye(M.dim, dtype=np.int64)
        for _ in range(d):
            term = linalg.mat_mul(term, g, p)
        term = term * pow(factorial(d), p - 2, p) % p
        out = term if out is None else linalg.mat_mul(out, term, p)
    cache[key] = out
    return out


def all_divided_powers(M: WeightModule, letter: str) -> list[np.ndarray]:
    """[e^{(0)}, e^{(1)}, ..., e^{(R)}] with R = span // 2."""
    return [divided_power_action(M, letter, r) for r in range(M.span // 2 + 1)]


# -- constructors -------------------------------------------------------------------


def _module(p, weights, gens_e, gens_f, provenance, **kw) -> WeightModule:
    weights = np.asarray(weights, dtype=np.int64)
    span = int(weights.max() - weights.min()) if weights.size else 0
    n = num_generators(p, span)
    dim = weights.size

    def fit(gs):
        gs = list(gs)[:n]
        while len(gs) < n:
            gs.append(np.zeros((dim, dim), dtype=np.int64))
        return tuple(np.asarray(g, dtype=np.int64) % p for g in gs)

    return WeightModule(p, weights, fit(gens_e), fit(gens_f), provenance, **kw)


def trivial_module(p: int) -> WeightModule:
    require_odd_prime(p)
    z = np.zeros((1, 1), dtype=np.int64)
    return _module(p, [0], [z], [z], "1")


def zero_module(p: int) -> WeightModule:
    z = np.zeros((0, 0), dtype=np.int64)
    return _module(p, np.zeros(0, dtype=np.int64), [z], [z], "0")


def natural_module(p: int) -> WeightModule:
    require_odd_prime(p)
    e = np.array([[0, 1], [0, 0]], dtype=np.int64)
    f = np.array([[0, 0], [1, 0]], dtype=np.int64)
    return _module(p, [1, -1], [e], [f], "V1")


def _sort_perm(weights: np.ndarray) -> np.ndarray:
    """order[new_position] = old index, stable descending by weight."""
    return np.argsort(-weights, kind="stable")


def tensor(M: WeightModule, N: WeightModule) -> WeightModule:
    """M (x) N with Delta e^{(r)} = sum_{i+j=r} e^{(i)} (x) e^{(j)}."""
    if M.p != N.p:
        raise ShapeMismatch("tensor of modules over different fields")
    p = M.p
    dim = M.dim * N.dim
    check_dim(f"tensor({M.provenance}, {N.provenance})", dim)
    kw = (M.weights[:, None] + N.weights[None, :]).ravel()
    order = _sort_perm(kw)
    pos = np.empty_like(order)
    pos[order] = np.arange(order.size)
    weights = kw[order]
    span = int(weights[0] - weights[-1]) if dim else 0
    n = num_generators(p, span)
    gens = {}
    for letter in "ef":
        dm = all_divided_powers(M, letter)
        dn = all_divided_powers(N, letter)
        out = []
        for k in range(n):
            r = p**k
            acc = np.zeros((dim, dim), dtype=np.float64)
            for i in range(max(0, r - len(dn) + 1), min(r, len(dm) - 1) + 1):
                acc += np.kron(dm[i].astype(np.float64), dn[r - i].astype(np.float64))
            acc = linalg.fmod(acc, p).astype(np.int64)
            out.append(acc[np.ix_(order, order)])
        gens[letter] = out
    return WeightModule(
        p,
        weights,
        tuple(gens["e"]),
        tuple(gens["f"]),
        f"({M.provenance} ⊗ {N.provenance})",
        factors=(M, N),
        kron_pos=pos,
    )


def tensor_power(M: WeightModule, k: int) -> WeightModule:
    """Left-nested M^{(x)k}; k = 0 gives the trivial module."""
    if k == 0:
        return trivial_module(M.p)
    out = M
    for _ in range(k - 1):
        out = tensor(out, M)
    return out


def tensor_many(mods: Sequence[WeightModule]) -> WeightModule:
    out = mods[0]
    for m in mods[1:]:
        out = tensor(out, m)
    return out


def dual(M: WeightModule) -> WeightModule:
    """Contragredient module; e^{(r)} acts by (-1)^r times the transpose."""
    order = np.argsort(M.weights, kind="stable")  # ascending old weight = descending new
    gens = {}
    for letter, src in (("e", M.gens_e), ("f", M.gens_f)):
        out = []
        for g in src:
            # p^k is odd, so the sign is -1
            out.append((-g.T[np.ix_(order, order)]) % M.p)
        gens[letter] = out
    return _module(
        M.p,
        -M.weights[order],
        gens["e"],
        gens["f"],
        f"{M.provenance}*",
        dual_of=M,
        dual_index=order,
    )


def frobenius_twist(M: WeightModule) -> WeightModule:
    p = M.p
    z = np.zeros((M.dim, M.dim), dtype=np.int64)
    return _module(
        p,
        M.weights * p,
        [z, *M.gens_e],
        [z, *M.gens_f],
        f"Fr({M.provenance})",
    )


def direct_sum(mods: Sequence[WeightModule], provenance: str | None = None):
    """Direct sum with its canonical inclusions and projections."""
    p = mods[0].p
    cat_w = np.concatenate([m.weights for m in mods]) if mods else np.zeros(0, dtype=np.int64)
    order = _sort_perm(cat_w)
    dim = cat_w.size
    check_dim("direct sum", dim)
    span = int(cat_w.max() - cat_w.min()) if dim else 0
    n = num_generators(p, span)
    gens = {}
    for letter in "ef":
        out = []
        for k in range(n):
            big = np.zeros((dim, dim), dtype=np.int64)
            off = 0
            for m in mods:
                big[off: off + m.dim, off: off + m.dim] = divided_power_action(m, letter, p**k)
                off += m.dim
            out.append(big[np.ix_(order, order)])
        gens[letter] = out
    S = WeightModule(
        p, cat_w[order], tuple(gens["e"]), tuple(gens["f"]),
        provenance or " ⊕ ".join(m.provenance for m in mods),
    )
    pos = np.empty_like(order)
    pos[order] = np.arange(dim)
    incs, projs = [], []
    off = 0
    for m in mods:
        mat = np.zeros((dim, m.dim), dtype=np.int64)
        mat[pos[off: off + m.dim], np.arange(m.dim)] = 1
        incs.append(ModuleMap(m, S, mat))
        projs.append(ModuleMap(S, m, mat.T.copy()))
        off += m.dim
    return S, incs, projs


# -- maps built from tensor structure -------------------------------------------


def tensor_maps(f: ModuleMap, g: ModuleMap, source: WeightModule, target: WeightModule) -> ModuleMap:
    """f (x) g as a map source -> target, both tensor modules of matching shape."""
    if source.factors is None or target.factors is None:
        raise ShapeMismatch("tensor_maps needs tensor-product modules")
    if (source.factors[0].dim, source.factors[1].dim) != (f.source.dim, g.source.dim):
        raise ShapeMismatch("source factors do not match the maps")
    if (target.factors[0].dim, target.factors[1].dim) != (f.target.dim, g.target.dim):
        raise ShapeMismatch("target factors do not match the maps")
    k = np.kron(f.matrix.astype(np.float64), g.matrix.astype(np.float64))
    out = np.zeros((target.dim, source.dim), dtype=np.int64)
    out[np.ix_(target.kron_pos, source.kron_pos)] = k.astype(np.int64) % f.p
    return ModuleMap(source, target, out)


def leaf_codes(M: WeightModule, leaf_order: Sequence[int] | None = None) -> np.ndarray:
    """Mixed-radix code of each basis vector's leaf tuple (optionally reordered)."""
    li = M.leaf_index()
    dims = [l.dim for l in M.leaves()]
    if leaf_order is None:
        leaf_order = range(len(dims))
    code = np.zeros(M.dim, dtype=np.int64)
    for j in leaf_order:
        code = code * dims[j] + li[:, j]
    return code


def leaf_permutation(source: WeightModule, target: WeightModule, perm: Sequence[int]) -> ModuleMap:
    """Braiding/associativity map: target leaf j is source leaf perm[j].

    Both modules must be iterated tensor products (any bracketing) whose leaves
    agree up to the permutation.
    """
    sl, tl = source.leaves(), target.leaves()
    if len(sl) != len(tl) or sorted(perm) != list(range(len(sl))):
        raise ShapeMismatch("leaf permutation does not match the modules")
    for j, i in enumerate(perm):
        if sl[i].dim != tl[j].dim:
            raise ShapeMismatch("permuted leaves have different dimensions")
    scode = leaf_codes(source, perm)
    tcode = leaf_codes(target)
    where = np.empty(target.dim, dtype=np.int64)
    where[tcode] = np.arange(target.dim)
    mat = np.zeros((target.dim, source.dim), dtype=np.int64)
    mat[where[scode], np.arange(source.dim)] = 1
    return ModuleMap(source, target, mat)


# -- submodules and quotients -----------------------------------------------------


def submodule(M: WeightModule, basis: np.ndarray, left_inverse: np.ndarray, provenance: str):
    """Submodule spanned by weight-homogeneous columns of ``basis``.

    ``left_inverse`` must satisfy ``left_inverse @ basis = I``.  Columns are
    reordered by descending weight; returns (module, inclusion, retraction).
    """
    p = M.p
    basis = np.asarray(basis, dtype=np.int64) % p
    left_inverse = np.asarray(left_inverse, dtype=np.int64) % p
    k = basis.shape[1]
    if k:
        wcol = np.array([M.weights[np.flatnonzero(basis[:, j])[0]] for j in range(k)], dtype=np.int64)
    else:
        wcol = np.zeros(0, dtype=np.int64)
    order = _sort_perm(wcol)
    B = basis[:, order]
    Q = left_inverse[order]
    gens = {}
    for letter, src in (("e", M.gens_e), ("f", M.gens_f)):
        gens[letter] = [linalg.mat_mul(Q, linalg.mat_mul(g, B, p), p) for g in src]
    S = _module(p, wcol[order], gens["e"], gens["f"], provenance)
    return S, ModuleMap(S, M, B), ModuleMap(M, S, Q)


def _block_columns(maps: Sequence[ModuleMap], target: WeightModule, w: int) -> np.ndarray:
    cols = []
    sl = target.blocks()[w]
    for f in maps:
        sb = f.source.blocks().get(w)
        if sb is not None:
            cols.append(f.matrix[sl, sb])
    if not cols:
        return np.zeros((sl.stop - sl.start, 0), dtype=np.int64)
    return np.concatenate(cols, axis=1)


def cokernel(maps: Sequence[ModuleMap], target: WeightModule, provenance: str):
    """Quotient of ``target`` by the sum of the images of ``maps``.

    Returns (module, quotient map, section); the section picks standard basis
    vectors of ``target`` outside the pivot coordinates of the image.
    """
    p = target.p
    for f in maps:
        if f.target.dim != target.dim:
            raise ShapeMismatch("map does not land in the target")
    q = np.zeros((0, target.dim), dtype=np.int64)
    qrows = []
    keep = []
    for w, sl in target.blocks().items():
        A = _block_columns(maps, target, w)
        n = sl.stop - sl.start
        if A.shape[1]:
            R, piv = linalg.rref(A.T, p)
            R = R[: len(piv)]
        else:
            R, piv = np.zeros((0, n), dtype=np.int64), []
        nonpiv = np.setdiff1d(np.arange(n), piv)
        # q v = v_N - R[:, N]^T v_P
        block = np.zeros((nonpiv.size, target.dim), dtype=np.int64)
        block[np.arange(nonpiv.size), sl.start + nonpiv] = 1
        if piv:
            block[:, sl.start + np.asarray(piv)] = (-R[:, nonpiv].T) % p
        qrows.append(block)
        keep.extend((sl.start + nonpiv).tolist())
    if qrows:
        q = np.concatenate(qrows, axis=0)
    sec = np.zeros((target.dim, len(keep)), dtype=np.int64)
    sec[keep, np.arange(len(keep))] = 1
    C, section, quotient = quotient_module(target, q, sec, provenance)
    return C, quotient, section


def quotient_module(M: WeightModule, q: np.ndarray, sec: np.ndarray, provenance: str):
    """Quotient module with generators q G sec; returns (module, section, quotient)."""
    p = M.p
    wts = M.weights[np.flatnonzero(sec.any(axis=1))] if sec.size else np.zeros(0, dtype=np.int64)
    # sec columns are standard vectors in increasing position, hence weight-sorted
    gens = {}
    for letter, src in (("e", M.gens_e), ("f", M.gens_f)):
        gens[letter] = [linalg.mat_mul(q, linalg.mat_mul(g, sec, p), p) for g in src]
    C = _module(p, wts, gens["e"], gens["f"], provenance)
    return C, ModuleMap(C, M, sec), ModuleMap(M, C, q)


def kernel(f: ModuleMap, provenance: str | None = None):
    """Kernel submodule with inclusion and a retraction (coordinate selection)."""
    S, T = f.source, f.target
    p = f.p
    cols = []
    free_all = []
    tb = T.blocks()
    for w, sl in S.blocks().items():
        n = sl.stop - sl.start
        tsl = tb.get(w)
        if tsl is None:
            basis, free = np.eye(n, dtype=np.int64), np.arange(n)
        else:
            basis, free = linalg.nullspace_with_free(f.matrix[tsl, sl], p)
        full = np.zeros((S.dim, basis.shape[1]), dtype=np.int64)
        full[sl] = basis
        cols.append(full)
        free_all.extend((sl.start + free).tolist())
    B = np.concatenate(cols, axis=1) if cols else np.zeros((S.dim, 0), dtype=np.int64)
    Q = np.zeros((B.shape[1], S.dim), dtype=np.int64)
    Q[np.arange(B.shape[1]), free_all] = 1
    return submodule(S, B, Q, provenance or f"ker({S.provenance} → {T.provenance})")


def image_rank_by_weight(f: ModuleMap) -> int:
    total = 0
    tb = f.target.blocks()
    for w, sl in f.source.blocks().items():
        tsl = tb.get(w)
        if tsl is not None:
            total += linalg.rank(f.matrix[tsl, sl], f.p)
    return total
