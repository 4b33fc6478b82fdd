"""Explicit splittings of right-exact sequences X2 -> X1 -> X0 -> 0 of tilting modules.

Both sections are assembled summand by summand: each indecomposable summand
T_m of the target is lifted through the epimorphism by an affine solve over
Hom(T_m, source), which stays small even when the modules are large.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..decompose import decompose_module
from ..errors import Inconclusive, NotTiltingCharacter
from ..exactcore import linalg
from ..slmod.homs import PresentationSequence, lift_map
from ..slmod.module import ModuleMap, kernel


@dataclass
class SequenceSplitting:
    """h0: X0 -> X1 and h1: X1 -> X2 with b h0 = id and a h1 + h0 b = id."""

    h0: ModuleMap
    h1: ModuleMap


def section_of(f: ModuleMap, seed: int = 0) -> ModuleMap | None:
    """sigma with f o sigma = id for an epimorphism f onto a tilting module."""
    S, T = f.source, f.target
    p = f.p
    if T.dim == 0:
        return ModuleMap(T, S, np.zeros((S.dim, 0), dtype=np.int64))
    try:
        cert = decompose_module(T, seed=seed)
    except (NotTiltingCharacter, Inconclusive):
        return None
    sigma = np.zeros((S.dim, T.dim), dtype=np.int64)
    for summand in cert.summands:
        mu = lift_map(f, summand.inclusion)
        if mu is None:
            return None
        sigma = (sigma + linalg.mat_mul(mu.matrix, summand.projection.matrix, p)) % p
    return ModuleMap(T, S, sigma)


def split_sequence(seq: PresentationSequence, seed: int = 0) -> SequenceSplitting | None:
    a, b = seq.maps
    X2, X1, X0 = seq.terms
    p = X1.p
    h0 = section_of(b, seed)
    if h0 is None:
        return None
    # projection of X1 onto K = ker b along the image of h0
    K, inc, ret = kernel(b)
    proj = (np.eye(X1.dim, dtype=np.int64) - linalg.mat_mul(h0.matrix, b.matrix, p)) % p
    pi_K = ModuleMap(X1, K, linalg.mat_mul(ret.matrix, proj, p))
    # a lands in K by exactness; split its corestriction
    a_K = ModuleMap(X2, K, linalg.mat_mul(ret.matrix, a.matrix, p))
    if not np.array_equal(linalg.mat_mul(inc.matrix, a_K.matrix, p), a.matrix):
        return None
    tau = section_of(a_K, seed)
    if tau is None:
        return None
    h1 = ModuleMap(X1, X2, linalg.mat_mul(tau.matrix, pi_K.matrix, p))
    return SequenceSplitting(h0, h1)


def splitting_residuals(a: np.ndarray, b: np.ndarray, h0: np.ndarray, h1: np.ndarray, p: int) -> dict:
    """Exact residual checks for a splitting; every entry must be True."""
    n1 = b.shape[1]
    n0 = b.shape[0]
    return {
        "b_a_zero": not linalg.mat_mul(b, a, p).any(),
        "b_h0_identity": bool(np.array_equal(linalg.mat_mul(b, h0, p), np.eye(n0, dtype=np.int64))),
        "homotopy_identity": bool(np.array_equal(
            (linalg.mat_mul(a, h1, p) + linalg.mat_mul(h0, b, p)) % p, np.eye(n1, dtype=np.int64)
        )),
    }
