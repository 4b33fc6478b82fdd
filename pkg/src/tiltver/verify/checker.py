"""Re-validate serialized reports and certificates without re-running any search.

Matrices and modules are decoded from JSON and every identity a report relies
on is re-checked exactly.  Cheap character-level claims are recomputed.
"""

from __future__ import annotations

import numpy as np

from ..characters import Character, exterior_char, simple_char, symmetric_char, tilting_char
from ..decompose import check_certificate_data
from ..errors import TiltverError
from ..exactcore import linalg
from ..slmod.homs import evaluation_morphism
from ..slmod.module import ModuleMap, WeightModule, dual, tensor, tensor_power, trivial_module
from ..slmod.powers import adjacent_swap, tensor_map_chain
from .encoding import decode_matrix
from .report import canonical_json


def check_certificate_json(d: dict) -> list[str]:
    """Exact re-check of a decomposition certificate serialized with witnesses."""
    if "tilting_modules" not in d:
        return ["certificate was serialized without witnesses"]
    M = WeightModule.from_json(d["module"])
    tiltings = {int(k): WeightModule.from_json(v) for k, v in d["tilting_modules"].items()}
    summands = [
        (s["m"], decode_matrix(s["inclusion"]), decode_matrix(s["projection"])) for s in d["summands"]
    ]
    errs = []
    for m, T in tiltings.items():
        if T.character() != tilting_char(M.p, m):
            errs.append(f"T{m} in the certificate has the wrong character")
    total = Character.from_weights([])
    counts: dict[int, int] = {}
    for m, inc, proj in summands:
        if inc.shape != (M.dim, tiltings[m].dim) or proj.shape != (tiltings[m].dim, M.dim):
            return errs + [f"summand T{m}: matrix shapes do not match"]
        total = total + tiltings[m].character()
        counts[m] = counts.get(m, 0) + 1
    if total != M.character():
        errs.append("summand characters do not add up to the module character")
    if {str(k): v for k, v in sorted(counts.items(), reverse=True)} != d["multiset"]:
        errs.append("recorded multiset does not match the summands")
    errs += check_certificate_data(M, tiltings, summands, int(d["residual"]))
    return errs


def _map(d: dict, S: WeightModule, T: WeightModule) -> ModuleMap:
    return ModuleMap(S, T, decode_matrix(d))


def _check_splitpres(rep: dict) -> list[str]:
    prm, w = rep["params"], rep["witnesses"]
    p, j, m = prm["p"], prm["j"], prm["m"]
    L = simple_char(p, m - 1)
    St = simple_char(p, p**j - 1)
    errs = []
    rows = w["sequences"]
    if [r["i"] for r in rows] != list(range(2, prm["imax"] + 1)):
        errs.append("sequence indices do not cover 2..imax")
    for r in rows:
        i = r["i"]
        if not r["split"]:
            if rep["status"] == "pass":
                errs.append(f"i={i}: passing report without a splitting")
            continue
        if "modules" not in r:
            errs.append(f"i={i}: witness matrices missing")
            continue
        X2, X1, X0 = (WeightModule.from_json(r["modules"][k]) for k in ("X2", "X1", "X0"))
        expect = (
            St * symmetric_char(L, 2) * exterior_char(L, i - 2),
            St * L * exterior_char(L, i - 1),
            St * exterior_char(L, i),
        )
        for name, M, ch in zip(("X2", "X1", "X0"), (X2, X1, X0), expect):
            if M.character() != ch:
                errs.append(f"i={i}: {name} has the wrong character")
        a = _map(r["maps"]["a"], X2, X1)
        b = _map(r["maps"]["b"], X1, X0)
        h0 = _map(r["maps"]["h0"], X0, X1)
        h1 = _map(r["maps"]["h1"], X1, X2)
        for name, f in (("a", a), ("b", b), ("h0", h0), ("h1", h1)):
            if not f.is_intertwiner():
                errs.append(f"i={i}: {name} is not a module map")
        if (b @ a).matrix.any():
            errs.append(f"i={i}: b o a != 0")
        if not np.array_equal((b @ h0).matrix, np.eye(X0.dim, dtype=np.int64)):
            errs.append(f"i={i}: b o h0 != id")
        if not np.array_equal(((a @ h1) + (h0 @ b)).matrix, np.eye(X1.dim, dtype=np.int64)):
            errs.append(f"i={i}: a o h1 + h0 o b != id")
    return errs


def _check_thm_w(rep: dict) -> list[str]:
    prm, w = rep["params"], rep["witnesses"]
    p, n, m = prm["p"], prm["n"], prm["m"]
    L = simple_char(p, m - 1)
    St = simple_char(p, p ** (n - 1) - 1)
    errs = []
    for r in w["exterior"]:
        i = r["i"]
        ch = exterior_char(L, i)
        if ch.dim != r["dim"]:
            errs.append(f"i={i}: recorded dimension disagrees with the character")
        if r["dim"] == 0:
            continue
        cert = r.get("certificate")
        if cert is None:
            if rep["status"] == "pass":
                errs.append(f"i={i}: passing report without a certificate")
            continue
        if "tilting_modules" not in cert:
            errs.append(f"i={i}: certificate serialized without witnesses")
            continue
        if WeightModule.from_json(cert["module"]).character() != St * ch:
            errs.append(f"i={i}: certified module has the wrong character")
        errs += [f"i={i}: {e}" for e in check_certificate_json(cert)]
    top = w["top"]
    if rep["status"] == "pass":
        if "module" not in top:
            errs.append("top exterior power witness missing")
        else:
            Tm = WeightModule.from_json(top["module"])
            iso = _map(top["iso"], Tm, trivial_module(p))
            if Tm.character() != exterior_char(L, m):
                errs.append("top exterior power has the wrong character")
            if Tm.dim != 1 or linalg.rank(iso.matrix, p) != 1 or not iso.is_intertwiner():
                errs.append("top exterior power is not shown to be trivial")
        if w["above_top_dim"] != 0 or not exterior_char(L, m + 1).is_zero():
            errs.append("exterior power above the top does not vanish")
    return errs


def _check_diagram(rep: dict) -> list[str]:
    w = rep["witnesses"]
    if "lift" not in w:
        return ["diagram witness missing"] if rep["status"] == "pass" else []
    V = WeightModule.from_json(w["V"])
    p, m = V.p, w["m"]
    D = dual(V)
    X = tensor(D, V)
    T = tensor_power(X, m)
    t = decode_matrix(w["lift"])
    errs = []
    if t.shape != (T.dim, 1):
        return ["lift has the wrong shape"]
    if (T.weights[t[:, 0] != 0] != 0).any():
        errs.append("lift is not of weight zero")
    # the presentation of S^m X: images of 1 - s_k
    eye = np.eye(T.dim, dtype=np.int64)
    Im = np.concatenate([(eye - adjacent_swap(T, X, m, k).matrix) % p for k in range(m - 1)], axis=1)
    base = linalg.rank(Im, p)
    for letter, k, _, G in T.generators():
        v = linalg.mat_mul(G, t, p)
        if v.any() and linalg.rank(np.concatenate([Im, v], axis=1), p) != base:
            errs.append(f"{letter}^(p^{k}) moves the lift outside the relations: not invariant in S^m")
    ev = evaluation_morphism(V, D, X)
    F, src, _ = tensor_map_chain([ev] * m)
    # src and T are both the left-nested m-th tensor power of X
    val = int(linalg.mat_mul(F.matrix, t, p)[0, 0])
    if val != 1:
        errs.append(f"ev^(x m) of the lift is {val}, not 1")
    return errs


def _recompute(rep: dict) -> list[str]:
    from . import claims

    prm = rep["params"]
    fn = {
        "gl-vanishing": lambda: claims.verify_gl_vanishing(prm["p"], prm["m"], prm["smax"]),
        "example-w": lambda: claims.verify_example_w(prm["p"], prm["n"]),
        "rem-mn": lambda: claims.verify_rem_mn(prm["p"], prm["n"]),
        "staysl2": lambda: claims.verify_staysl2_bound(prm["p"], prm["s"], prm["j"], prm["imax"]),
    }[rep["claim"]]
    fresh = fn().to_json()
    errs = []
    if fresh["status"] != rep["status"]:
        errs.append(f"status {rep['status']} does not match recomputed {fresh['status']}")
    if canonical_json(fresh["witnesses"]) != canonical_json(rep["witnesses"]):
        if rep["claim"] != "staysl2":
            errs.append("witnesses do not match the recomputation")
        else:
            # the optional module-level column is not recomputed
            keep = [{k: v for k, v in r.items() if k != "module_split"} for r in rep["witnesses"]["per_i"]]
            if canonical_json(keep) != canonical_json(fresh["witnesses"]["per_i"]):
                errs.append("witnesses do not match the recomputation")
    return errs


def _check_gr(rep: dict) -> list[str]:
    errs = []
    for name, sub in rep["witnesses"]["subreports"].items():
        if "claim" in sub:
            errs += [f"{name}: {e}" for e in check_report(sub)]
        elif rep["status"] == "pass":
            errs.append(f"{name}: passing report with a skipped sub-check")
    return errs


_CHECKERS = {
    "splitpres": _check_splitpres,
    "thm-w": _check_thm_w,
    "diagram": _check_diagram,
    "gr": _check_gr,
    "gl-vanishing": _recompute,
    "example-w": _recompute,
    "rem-mn": _recompute,
    "staysl2": _recompute,
}


def check_report(rep: dict) -> list[str]:
    """Failures found when re-validating a serialized report (empty means sound)."""
    fn = _CHECKERS.get(rep.get("claim"))
    if fn is None:
        return [f"unknown claim {rep.get('claim')!r}"]
    try:
        return fn(rep)
    except (KeyError, TypeError, ValueError, TiltverError) as exc:
        # a witness that cannot even be decoded is a failed check, not a crash
        return [f"malformed witness: {type(exc).__name__}: {exc}"]
