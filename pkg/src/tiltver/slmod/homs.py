"""Hom spaces, split epimorphisms, exactness, evaluation maps."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InternalConsistencyError, NotAnEpimorphism, ShapeMismatch
from ..exactcore import linalg
from .module import (
    ModuleMap,
    WeightModule,
    divided_power_action,
    dual,
    identity_map,
    image_rank_by_weight,
    tensor,
    tensor_maps,
    trivial_module,
    zero_map,
)


@dataclass(frozen=True, eq=False)
class HomSpace:
    """Hom(source, target) as coordinates over the weight blocks.

    ``coords`` has one column per basis map; rows enumerate the entries of the
    blocks phi_w : source_w -> target_w (row-major) for every common weight w
    in descending order.
    """

    source: WeightModule
    target: WeightModule
    layout: tuple[tuple[int, int, slice, slice], ...]  # (weight, offset, target slice, source slice)
    coords: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.coords.shape[1])

    def matrix(self, c) -> np.ndarray:
        """Full matrix of sum_t c[t] basis[t]."""
        p = self.source.p
        v = linalg.mat_mul(self.coords, np.asarray(c, dtype=np.int64).reshape(-1, 1), p)[:, 0]
        out = np.zeros((self.target.dim, self.source.dim), dtype=np.int64)
        for w, off, ts, ss in self.layout:
            n, m = ts.stop - ts.start, ss.stop - ss.start
            out[ts, ss] = v[off: off + n * m].reshape(n, m)
        return out

    def element(self, c) -> ModuleMap:
        return ModuleMap(self.source, self.target, self.matrix(c))

    def basis(self) -> list[ModuleMap]:
        eye = np.eye(self.dim, dtype=np.int64)
        return [self.element(eye[t]) for t in range(self.dim)]

    def block_stack(self, w: int) -> np.ndarray | None:
        """Array (dim, n_w, m_w) of the weight-w blocks of all basis maps."""
        for w2, off, ts, ss in self.layout:
            if w2 == w:
                n, m = ts.stop - ts.start, ss.stop - ss.start
                return self.coords[off: off + n * m].T.reshape(self.dim, n, m)
        return None


def _layout(M: WeightModule, N: WeightModule):
    mb, nb = M.blocks(), N.blocks()
    layout = []
    off = 0
    for w, ss in mb.items():
        ts = nb.get(w)
        if ts is None:
            continue
        layout.append((w, off, ts, ss))
        off += (ts.stop - ts.start) * (ss.stop - ss.start)
    return tuple(layout), off


def hom_space(M: WeightModule, N: WeightModule) -> HomSpace:
    """All weight-preserving maps M -> N commuting with every e^{(p^k)}, f^{(p^k)}."""
    if M.p != N.p:
        raise ShapeMismatch("Hom between modules over different fields")
    p = M.p
    layout, U = _layout(M, N)
    K = np.eye(U, dtype=np.int64)
    by_w = {w: (off, ts, ss) for w, off, ts, ss in layout}
    mb, nb = M.blocks(), N.blocks()
    levels = max(M.K, N.K) + 1
    for k in range(levels):
        for letter, sign in (("e", 1), ("f", -1)):
            if K.shape[1] == 0:
                break
            d = sign * 2 * p**k
            GM = divided_power_action(M, letter, p**k)
            GN = divided_power_action(N, letter, p**k)
            if not GM.any() and not GN.any():
                continue
            r = K.shape[1]
            Kf = K.astype(np.float64)
            rows = []
            for lam, ss in mb.items():
                tgt = nb.get(lam + d)
                if tgt is None:
                    continue
                n2 = tgt.stop - tgt.start
                m1 = ss.stop - ss.start
                res = np.zeros((r, n2, m1))
                hi = by_w.get(lam + d)
                if hi is not None:
                    off, ts, ss2 = hi
                    gm = GM[ss2, ss].astype(np.float64)
                    if gm.any():
                        phi = Kf[off: off + n2 * (ss2.stop - ss2.start)].T.reshape(r, n2, -1)
                        res += phi @ gm
                lo = by_w.get(lam)
                if lo is not None:
                    off, ts, _ = lo
                    gn = GN[tgt, ts].astype(np.float64)
                    if gn.any():
                        phi = Kf[off: off + (ts.stop - ts.start) * m1].T.reshape(r, -1, m1)
                        res -= gn @ phi
                rows.append(res.reshape(r, n2 * m1).T)
            if not rows:
                continue
            E = linalg.fmod(np.concatenate(rows, axis=0), p)
            E = E[E.any(axis=1)]
            if E.shape[0] == 0:
                continue
            null = linalg.nullspace(E, p)
            K = linalg.mat_mul(K, null, p)
    return HomSpace(M, N, layout, K)


def end_space(M: WeightModule) -> HomSpace:
    return hom_space(M, M)


# -- split epimorphisms -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SplitResult:
    split: bool
    section: ModuleMap | None
    hom_dim: int


def is_split_epi(pi: ModuleMap) -> SplitResult:
    """Look for sigma with pi o sigma = id by an affine solve over Hom(target, source)."""
    M, N = pi.source, pi.target
    p = pi.p
    if image_rank_by_weight(pi) != N.dim:
        raise NotAnEpimorphism(f"map {M.provenance} → {N.provenance} is not surjective")
    H = hom_space(N, M)
    if H.dim == 0:
        return SplitResult(N.dim == 0, zero_map(N, M) if N.dim == 0 else None, 0)
    mb = M.blocks()
    cols = []
    rhs = []
    for w, ts in N.blocks().items():
        stack = H.block_stack(w)  # (r, M_w, N_w)
        n = ts.stop - ts.start
        if stack is None:
            return SplitResult(False, None, H.dim)
        pw = pi.matrix[ts, mb[w]].astype(np.float64)
        prod = linalg.fmod(pw @ stack.astype(np.float64), p)  # (r, n, n)
        cols.append(prod.reshape(H.dim, n * n).T)
        rhs.append(np.eye(n, dtype=np.int64).ravel())
    A = np.concatenate(cols, axis=0).astype(np.int64)
    b = np.concatenate(rhs)
    c = linalg.solve(A, b, p)
    if c is None:
        return SplitResult(False, None, H.dim)
    sigma = H.element(c)
    if not np.array_equal((pi @ sigma).matrix, np.eye(N.dim, dtype=np.int64)):
        raise InternalConsistencyError("section does not compose to the identity")
    return SplitResult(True, sigma, H.dim)


def lift_map(f: ModuleMap, g: ModuleMap) -> ModuleMap | None:
    """A module map h : g.source -> f.source with f o h = g, or None if there is none."""
    if f.target.dim != g.target.dim:
        raise ShapeMismatch("f and g must have the same target")
    p = f.p
    H = hom_space(g.source, f.source)
    if H.dim == 0:
        return zero_map(g.source, f.source) if not g.matrix.any() else None
    cols = np.stack(
        [linalg.mat_mul(f.matrix, b.matrix, p).ravel() for b in H.basis()], axis=1
    )
    c = linalg.solve(cols, g.matrix.ravel(), p)
    if c is None:
        return None
    return H.element(c)


# -- presentations and exactness ---------------------------------------------------


@dataclass(frozen=True, eq=False)
class PresentationSequence:
    """X2 --a--> X1 --b--> X0 (-> 0)."""

    terms: tuple[WeightModule, WeightModule, WeightModule]
    maps: tuple[ModuleMap, ModuleMap]

    def __post_init__(self):
        a, b = self.maps
        X2, X1, X0 = self.terms
        if a.source is not X2 or a.target is not X1 or b.source is not X1 or b.target is not X0:
            raise ShapeMismatch("maps do not match the terms of the sequence")


@dataclass(frozen=True)
class ExactnessReport:
    exact: bool
    composite_zero: bool
    rank_left: int
    rank_right: int
    dims: tuple[int, int, int]

    @property
    def cokernel_dim_left(self) -> int:
        return self.dims[1] - self.rank_left

    def to_json(self) -> dict:
        return {
            "exact": self.exact,
            "composite_zero": self.composite_zero,
            "rank_left": self.rank_left,
            "rank_right": self.rank_right,
            "dims": list(self.dims),
        }


def check_exact(seq: PresentationSequence, ends_in_zero: bool = True) -> ExactnessReport:
    a, b = seq.maps
    X2, X1, X0 = seq.terms
    comp = b @ a
    ra = image_rank_by_weight(a)
    rb = image_rank_by_weight(b)
    zero = comp.is_zero()
    exact = zero and ra + rb == X1.dim
    if ends_in_zero:
        exact = exact and rb == X0.dim
    return ExactnessReport(exact, zero, ra, rb, (X2.dim, X1.dim, X0.dim))


def tensor_sequence(S: WeightModule, seq: PresentationSequence) -> PresentationSequence:
    """S (x) seq, termwise."""
    X2, X1, X0 = seq.terms
    a, b = seq.maps
    Y2, Y1, Y0 = tensor(S, X2), tensor(S, X1), tensor(S, X0)
    idS = identity_map(S)
    return PresentationSequence(
        (Y2, Y1, Y0), (tensor_maps(idS, a, Y2, Y1), tensor_maps(idS, b, Y1, Y0))
    )


# -- duality ---------------------------------------------------------------------------


def evaluation_morphism(M: WeightModule, D: WeightModule | None = None,
                        DM: WeightModule | None = None) -> ModuleMap:
    """ev : M* (x) M -> 1, alpha (x) v |-> alpha(v)."""
    D = D if D is not None else dual(M)
    if D.dual_of is not M:
        raise ShapeMismatch("D must be the dual of M built by dual()")
    DM = DM if DM is not None else tensor(D, M)
    if DM.factors is None or DM.factors[0] is not D or DM.factors[1] is not M:
        raise ShapeMismatch("DM must be tensor(D, M)")
    one = trivial_module(M.p)
    mat = np.zeros((1, DM.dim), dtype=np.int64)
    i = np.arange(D.dim)
    mat[0, DM.kron_pos[i * M.dim + D.dual_index]] = 1
    ev = ModuleMap(DM, one, mat)
    if not ev.is_intertwiner():
        raise InternalConsistencyError("evaluation pairing is not a module map")
    return ev


def coevaluation_space(M: WeightModule) -> HomSpace:
    """Hom(1, M (x) M*), solved rather than written down."""
    return hom_space(trivial_module(M.p), tensor(M, dual(M)))
