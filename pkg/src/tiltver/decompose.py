"""Certified direct-sum decompositions of tilting modules.

Summands are peeled off in the order predicted by the character.  A copy of
T_m inside N is detected through the residue pairing: End(T_m) is local and
u |-> u[0, 0] (the action on the top weight vector) is its residue map, so
pi o iota is invertible exactly when (pi o iota)[0, 0] != 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .characters import CellIndex, cell_index, decompose_tilting
from .errors import Inconclusive, InternalConsistencyError
from .exactcore import linalg
from .exactcore.gf import GF
from .slmod.homs import HomSpace, end_space, hom_space
from .slmod.module import ModuleMap, WeightModule, kernel
from .slmod.named import tilting_module

DEFAULT_BUDGET = 200
EXTENSION_DEGREES = (1, 2, 4)


def _residue_pairing(H_in: HomSpace, H_out: HomSpace, top_w: int) -> np.ndarray:
    """P[b, a] = (pi_b o iota_a)[0, 0] for the Hom bases."""
    p = H_in.source.p
    sin = H_in.block_stack(top_w)  # (r, N_w, 1 [top column only matters])
    sout = H_out.block_stack(top_w)  # (s, 1, N_w)
    if sin is None or sout is None:
        return np.zeros((H_out.dim, H_in.dim), dtype=np.int64)
    col = sin[:, :, 0].astype(np.float64)  # (r, N_w)
    row = sout[:, 0, :].astype(np.float64)  # (s, N_w)
    return linalg.fmod(row @ col.T, p).astype(np.int64)


@dataclass
class SplitAttempt:
    status: str  # "found" | "provably-none" | "not-found"
    inclusion: ModuleMap | None = None
    projection: ModuleMap | None = None
    trials: list = field(default_factory=list)
    reason: str = ""

    def to_json(self) -> dict:
        return {"status": self.status, "trials": self.trials, "reason": self.reason}


def split_summand(M: WeightModule, m: int, seed: int = 0, budget: int = DEFAULT_BUDGET,
                  rng: np.random.Generator | None = None) -> SplitAttempt:
    """Find iota: T_m -> M and pi: M -> T_m with pi o iota = id."""
    p = M.p
    T = tilting_module(p, m)
    rng = rng if rng is not None else np.random.default_rng(seed)
    H_in = hom_space(T, M)
    H_out = hom_space(M, T)
    if H_in.dim == 0 or H_out.dim == 0:
        return SplitAttempt("provably-none", reason=f"dim Hom = ({H_in.dim}, {H_out.dim})")
    P = _residue_pairing(H_in, H_out, m)
    if not P.any():
        return SplitAttempt("provably-none", reason="residue pairing vanishes")
    trials = []
    for e in EXTENSION_DEGREES:
        F = GF(p, e)
        Pe = F.embed(P)
        for t in range(1, budget + 1):
            c = F.random_elements(rng, H_in.dim)
            d = F.random_elements(rng, H_out.dim)
            val = F.matmul(F.matmul(d[None, :], Pe), c[:, None])[0, 0]
            if val == 0:
                continue
            trials.append({"ext_degree": e, "samples": t})
            if e == 1:
                iota, pi = H_in.element(c), H_out.element(d)
            else:
                # an extension-field witness forces a nonzero base-field entry
                b, a = (int(x[0]) for x in np.nonzero(P))
                iota = H_in.element(np.eye(H_in.dim, dtype=np.int64)[a])
                pi = H_out.element(np.eye(H_out.dim, dtype=np.int64)[b])
            u = (pi @ iota).matrix
            pi = ModuleMap(M, T, linalg.mat_mul(linalg.inverse(u, p), pi.matrix, p))
            return SplitAttempt("found", iota, pi, trials)
        trials.append({"ext_degree": e, "samples": budget, "hit": False})
    return SplitAttempt("not-found", trials=trials, reason="trial budget exhausted")


# -- full decompositions -----------------------------------------------------------------


@dataclass
class Summand:
    m: int
    inclusion: ModuleMap
    projection: ModuleMap
    trials: list


@dataclass
class DecompositionCertificate:
    module: WeightModule
    summands: list[Summand]
    residual: int
    seed: int

    def multiset(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for s in self.summands:
            out[s.m] = out.get(s.m, 0) + 1
        return dict(sorted(out.items(), reverse=True))

    def check(self) -> list[str]:
        """Exact re-check of every certificate identity; returns failures."""
        return check_certificate_data(
            self.module,
            {s.m: tilting_module(self.module.p, s.m) for s in self.summands},
            [(s.m, s.inclusion.matrix, s.projection.matrix) for s in self.summands],
            self.residual,
        )

    def to_json(self, with_witness: bool = True) -> dict:
        from .verify.encoding import encode_matrix

        p = self.module.p
        out = {
            "p": p,
            "module": self.module.to_json() if with_witness else {"provenance": self.module.provenance},
            "seed": self.seed,
            "multiset": {str(m): c for m, c in self.multiset().items()},
            "residual": self.residual,
        }
        if with_witness:
            out["tilting_modules"] = {
                str(m): tilting_module(p, m).to_json() for m in self.multiset()
            }
            out["summands"] = [
                {
                    "m": s.m,
                    "inclusion": encode_matrix(s.inclusion.matrix, p),
                    "projection": encode_matrix(s.projection.matrix, p),
                    "trials": s.trials,
                }
                for s in self.summands
            ]
        else:
            out["summands"] = [{"m": s.m, "trials": s.trials} for s in self.summands]
        return out


def _is_intertwiner(mat: np.ndarray, S: WeightModule, T: WeightModule) -> bool:
    return ModuleMap(S, T, mat).is_intertwiner()


def check_certificate_data(M: WeightModule, tiltings: dict, summands, residual: int) -> list[str]:
    p = M.p
    errs = []
    if residual != 0:
        errs.append(f"residual dimension {residual}")
    total = np.zeros((M.dim, M.dim), dtype=np.int64)
    for idx, (m, inc, proj) in enumerate(summands):
        T = tiltings[m]
        if not np.array_equal(linalg.mat_mul(proj, inc, p), np.eye(T.dim, dtype=np.int64)):
            errs.append(f"summand {idx}: projection o inclusion != id")
        if not _is_intertwiner(inc, T, M):
            errs.append(f"summand {idx}: inclusion is not a module map")
        if not _is_intertwiner(proj, M, T):
            errs.append(f"summand {idx}: projection is not a module map")
        for jdx, (m2, inc2, _) in enumerate(summands):
            if jdx != idx and linalg.mat_mul(proj, inc2, p).any():
                errs.append(f"summands {idx},{jdx} are not orthogonal")
        total = (total + linalg.mat_mul(inc, proj, p)) % p
    if not np.array_equal(total, np.eye(M.dim, dtype=np.int64)):
        errs.append("idempotents do not sum to the identity")
    return errs


def decompose_module(M: WeightModule, seed: int = 0, budget: int = DEFAULT_BUDGET) -> DecompositionCertificate:
    """Split M into indecomposable tilting summands with explicit idempotents."""
    p = M.p
    predicted = decompose_tilting(p, M.character())
    rng = np.random.default_rng(seed)
    N = M
    j = np.eye(M.dim, dtype=np.int64)  # N -> M
    q = np.eye(M.dim, dtype=np.int64)  # M -> N
    summands: list[Summand] = []
    for m, mult in predicted.entries:
        for _ in range(mult):
            att = split_summand(N, m, budget=budget, rng=rng)
            if att.status != "found":
                raise Inconclusive(
                    f"splitting T{m} off {M.provenance} failed ({att.status}: {att.reason})",
                    att.trials,
                )
            iota, pi = att.inclusion.matrix, att.projection.matrix
            summands.append(
                Summand(
                    m,
                    ModuleMap(tilting_module(p, m), M, linalg.mat_mul(j, iota, p)),
                    ModuleMap(M, tilting_module(p, m), linalg.mat_mul(pi, q, p)),
                    att.trials,
                )
            )
            # complement: ker pi, with projection Q0 (id - iota pi)
            A, inc, ret = kernel(att.projection)
            comp = (np.eye(N.dim, dtype=np.int64) - linalg.mat_mul(iota, pi, p)) % p
            q_new = linalg.mat_mul(ret.matrix, comp, p)
            j = linalg.mat_mul(j, inc.matrix, p)
            q = linalg.mat_mul(q_new, q, p)
            N = A
    cert = DecompositionCertificate(M, summands, N.dim, seed)
    errs = cert.check()
    if errs:
        raise InternalConsistencyError("; ".join(errs))
    return cert


# -- endomorphism rings and isomorphism ------------------------------------------------


@dataclass
class EndRing:
    space: HomSpace
    table: np.ndarray  # table[a, b] = coordinates of basis[a] o basis[b]

    @property
    def dim(self) -> int:
        return self.space.dim

    def residue_kernel_dim(self) -> int:
        """Dimension of {u : u[0, 0] = 0}, the radical when M is indecomposable tilting."""
        p = self.space.source.p
        tops = np.array([b.matrix[0, 0] for b in self.space.basis()], dtype=np.int64)[None, :]
        return self.dim - linalg.rank(tops, p)


def end_ring(M: WeightModule) -> EndRing:
    H = end_space(M)
    p = M.p
    basis = H.basis()
    r = H.dim
    table = np.zeros((r, r, r), dtype=np.int64)
    for a in range(r):
        for b in range(r):
            prod = (basis[a] @ basis[b]).matrix
            vec = np.concatenate([prod[ts, ss].ravel() for _, _, ts, ss in H.layout])
            c = linalg.solve(H.coords, vec, p)
            if c is None:
                raise InternalConsistencyError("End(M) is not closed under composition")
            table[a, b] = c
    return EndRing(H, table)


@dataclass
class IsoResult:
    isomorphic: bool
    witness: ModuleMap | None
    reason: str
    ext_degree: int = 1


def is_isomorphic(M: WeightModule, N: WeightModule, seed: int = 0,
                  budget: int = DEFAULT_BUDGET) -> IsoResult:
    if M.character() != N.character():
        return IsoResult(False, None, "characters differ")
    if M.dim == 0:
        return IsoResult(True, ModuleMap(M, N, np.zeros((0, 0), dtype=np.int64)), "zero modules")
    H = hom_space(M, N)
    if H.dim == 0:
        return IsoResult(False, None, "Hom(M, N) = 0")
    rng = np.random.default_rng(seed)
    p = M.p
    for e in EXTENSION_DEGREES:
        F = GF(p, e)
        for _ in range(budget):
            c = F.random_elements(rng, H.dim)
            if e == 1:
                phi = H.matrix(c)
                if linalg.rank(phi, p) == M.dim:
                    return IsoResult(True, ModuleMap(M, N, phi), "invertible element of Hom(M, N)")
                continue
            # assemble sum_t c_t phi_t over F_q block by block and test rank
            full_rank = True
            for w, off, ts, ss in H.layout:
                n_, m_ = ts.stop - ts.start, ss.stop - ss.start
                stack = H.block_stack(w)
                blk = np.zeros((n_, m_), dtype=np.int64)
                for t in range(H.dim):
                    blk = F.add[blk, F.mul[c[t], F.embed(stack[t])]]
                if len(F.rref(blk)[1]) != n_:
                    full_rank = False
                    break
            if full_rank:
                return IsoResult(
                    True, None,
                    f"invertible element over F_{p}^{e}; base-field isomorphism by Noether-Deuring",
                    e,
                )
    raise Inconclusive("no invertible element found in Hom(M, N)")


def object_cell(M: WeightModule, seed: int = 0) -> CellIndex:
    cert = decompose_module(M, seed=seed)
    if not cert.summands:
        raise ValueError("the zero module has no cell")
    return CellIndex(min(cell_index(M.p, s.m).value for s in cert.summands))
