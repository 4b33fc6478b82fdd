"""Acceptance criteria 1-10, exact throughout (tolerance 0).

Each test prints one ``criterion N: PASS|FAIL`` line; the terminal summary
(see conftest.py) repeats them in order after the run.
"""

from __future__ import annotations

import json
import os
import resource
import subprocess
import sys
import time
from pathlib import Path

import pytest

from report_suite import SPLITPRES_CASES, THM_W_CASES
from tiltver.characters import (
    decompose_tilting,
    exterior_char,
    simple_char,
    symmetric_char,
    threshold_cell,
    tilting_char,
    weyl_char,
)
from tiltver.characters import cell_index
from tiltver.decompose import decompose_module
from tiltver.slmod import (
    natural_module,
    simple_module,
    sym2,
    sym_power,
    tensor_power,
    tilting_module,
    trivial_module,
    wedge_power,
)
from tiltver.verify import check_certificate_json, check_report
from tiltver.verify.claims import (
    verify_example_w,
    verify_gl_vanishing,
    verify_rem_mn,
    verify_splitpres,
    verify_thm_w,
)
from tiltver.verify.diagram import verify_diagram_split

SEED = 0
# canonical report JSON produced in this process, compared across processes in criterion 10
PRODUCED: dict[str, str] = {}


def announce(n: int, ok: bool, detail: str) -> None:
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")


@pytest.fixture
def criterion(record_property):
    """Attach a short summary to the test report for the terminal summary."""

    def note(text: str) -> None:
        record_property("criterion_detail", text)

    return note


def tensor_power_exponents(p: int):
    k = 0
    while 2**k <= 200:
        yield k
        k += 1


def test_criterion_01_character_consistency(criterion):
    t0 = time.perf_counter()
    checked = 0
    for p in (3, 5):
        V = natural_module(p)
        for k in tensor_power_exponents(p):
            M = tensor_power(V, k) if k else trivial_module(p)
            assert M.character() == weyl_char(1).underlying ** k
            checked += 1
        for m in range(p * p + 1):
            assert simple_module(p, m).character() == simple_char(p, m)
            checked += 1
        for m in range(2 * p + 1):
            assert tilting_module(p, m).character() == tilting_char(p, m)
            checked += 1
        # exterior powers used by the splitting and exterior-power criteria, plus S^2 L
        for m in range(2, 6 if p == 5 else 4):
            L = simple_module(p, m - 1)
            ch = L.character()
            for i in range(m + 3):
                assert wedge_power(L, i).character() == exterior_char(ch, i)
                checked += 1
            assert sym2(L)[0].character() == symmetric_char(ch, 2)
            assert sym_power(L, 2).character() == symmetric_char(ch, 2)
            checked += 2
    elapsed = time.perf_counter() - t0
    ok = elapsed < 120
    criterion(f"{checked} modules, {elapsed:.1f}s")
    announce(1, ok, f"{checked} module characters equal the character engine in {elapsed:.1f}s")
    assert ok


def test_criterion_02_decomposition_oracle(criterion):
    t0 = time.perf_counter()
    rows = []
    for p in (3, 5):
        V = natural_module(p)
        for k in tensor_power_exponents(p):
            if k == 0:
                continue
            M = tensor_power(V, k)
            cert = decompose_module(M, seed=SEED)
            assert cert.multiset() == decompose_tilting(p, M.character()).as_dict()
            assert cert.check() == []
            assert check_certificate_json(json.loads(json.dumps(cert.to_json()))) == []
            rows.append((p, k))
    elapsed = time.perf_counter() - t0
    ok = elapsed < 300
    announce(2, ok, f"{len(rows)} tensor powers decomposed with valid certificates in {elapsed:.1f}s")
    criterion(f"{len(rows)} certificates")
    assert ok


def test_criterion_03_cell_cross_check(criterion):
    t0 = time.perf_counter()
    count = 0
    for p in (3, 5):
        for m in range(p**3):
            assert cell_index(p, m).value == threshold_cell(p, m)
            count += 1
    elapsed = time.perf_counter() - t0
    ok = elapsed < 60
    announce(3, ok, f"{count} tilting modules: cyclotomic cell equals threshold rule ({elapsed:.1f}s)")
    criterion(f"{count} cells")
    assert ok


def test_criterion_04_g_vanishing(criterion):
    cases = 0
    for p in (3, 5):
        for m in range(2, 9):
            rep = verify_gl_vanishing(p, m, 3)
            PRODUCED[f"gl-vanishing {p} {m}"] = rep.dumps()
            assert rep.passed, rep.notes
            for row in rep.witnesses["g_at_roots"]:
                assert row["vanishes"] == (p ** row["s"] <= m - 1)
                cases += 1
    announce(4, True, f"g(omega_p^s) = 0 iff p^s <= m-1 on {cases} cases")
    criterion(f"{cases} cases")


def test_criterion_05_exterior_powers(criterion):
    t0 = time.perf_counter()
    for p, n, m in THM_W_CASES:
        rep = verify_thm_w(p, n, m, m + 2, seed=SEED)
        PRODUCED[f"thm-w {p} {n} {m}"] = rep.dumps()
        assert rep.passed, rep.notes
        w = rep.witnesses
        assert w["top"]["dim"] == 1 and w["top"]["isomorphic_to_trivial"]
        assert w["above_top_dim"] == 0
        for row in w["exterior"]:
            assert row["char_match"]
            if row["dim"]:
                assert row["certificate"]["residual"] == 0
        assert check_report(json.loads(rep.dumps())) == []
    elapsed = time.perf_counter() - t0
    ok = elapsed < 600
    announce(5, ok, f"{len(THM_W_CASES)} instances pass with re-checked certificates in {elapsed:.1f}s")
    criterion(f"{elapsed:.1f}s")
    assert ok


def test_criterion_06_split_presentations(criterion):
    t0 = time.perf_counter()
    for p, j, m, imax in SPLITPRES_CASES:
        rep = verify_splitpres(p, j, m, imax, seed=SEED)
        PRODUCED[f"splitpres {p} {j} {m} {imax}"] = rep.dumps()
        assert rep.passed, rep.notes
        for row in rep.witnesses["sequences"]:
            assert row["split"] and all(row["residuals"].values())
            assert "maps" in row
        assert check_report(json.loads(rep.dumps())) == []
    elapsed = time.perf_counter() - t0
    ok = elapsed < 900
    announce(6, ok, f"{len(SPLITPRES_CASES)} instances split with explicit witnesses in {elapsed:.1f}s")
    criterion(f"{elapsed:.1f}s")
    assert ok


def test_criterion_07_diagram_split(criterion):
    t0 = time.perf_counter()
    rep = verify_diagram_split(3, 2)
    elapsed = time.perf_counter() - t0
    PRODUCED["diagram 3 2"] = rep.dumps()
    peak_gb = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 2**20
    assert rep.passed, rep.notes
    w = rep.witnesses
    assert all(w["checks"].values())
    assert w["dims"]["X^m"] == 729 and w["dims"]["S^m"] == 165
    assert w["dims"]["cokernel"] == 1 and w["checks"]["bottom_cokernel_trivial"]
    assert w["raw_scalar"] != 0 and w["checks"]["normalized_composite_identity"]
    assert check_report(json.loads(rep.dumps())) == []
    ok = elapsed < 600 and peak_gb < 4
    announce(7, ok, f"squares commute, cokernel is trivial of dim 1, section normalized "
                    f"(raw scalar {w['raw_scalar']}); {elapsed:.1f}s, peak RSS {peak_gb:.2f} GB")
    criterion(f"{elapsed:.1f}s")
    assert ok


def test_criterion_08_padic_dimensions(criterion):
    ex = verify_example_w(3, 2)
    mn = verify_rem_mn(3, 2)
    PRODUCED["example-w 3 2"] = ex.dumps()
    PRODUCED["rem-mn 3 2"] = mn.dumps()
    assert ex.passed and mn.passed
    assert ex.witnesses["dim_minus"] == {"V0": 1, "V1": 2, "V2": 3}
    for case in mn.witnesses["cases"]:
        assert case["S^k_nonzero"] and case["S^(k+1)_zero"]
    announce(8, True, "Dim_- = {V0:1, V1:2, V2:3}; symmetric-power vanishing pattern confirmed")
    criterion("example-w and rem-mn")


def test_criterion_09_property_suites(criterion):
    from test_characters import test_e_h_duality_to_order_8
    from test_decompose import test_certificate_json_revalidates
    from test_exactcore import (
        test_evaluation_is_a_ring_homomorphism,
        test_ring_axioms_against_naive_convolution,
    )
    from test_slmod import test_hom_adjunction

    t0 = time.perf_counter()
    suites = [
        test_ring_axioms_against_naive_convolution,
        test_evaluation_is_a_ring_homomorphism,
        test_e_h_duality_to_order_8,
        test_hom_adjunction,
        test_certificate_json_revalidates,
    ]
    for fn in suites:
        fn()
    elapsed = time.perf_counter() - t0
    ok = elapsed < 300
    announce(9, ok, f"{len(suites)} property suites green in {elapsed:.1f}s")
    criterion(f"{elapsed:.1f}s")
    assert ok


def _suite_in_subprocess(hash_seed: str) -> dict[str, str]:
    here = Path(__file__).parent
    env = dict(os.environ, PYTHONHASHSEED=hash_seed)
    res = subprocess.run(
        [sys.executable, str(here / "report_suite.py"), "--seed", str(SEED)],
        capture_output=True, text=True, env=env, check=True,
    )
    return dict(line.split("\t", 1) for line in res.stdout.splitlines())


def test_criterion_10_determinism(criterion):
    first = _suite_in_subprocess("1")
    second = _suite_in_subprocess("2")
    assert first.keys() == second.keys() and len(first) > 0
    differing = [k for k in first if first[k] != second[k]]
    # reports produced earlier in this process must agree byte for byte as well
    differing += [k for k, v in PRODUCED.items() if first.get(k) != v]
    ok = not differing
    announce(10, ok, f"{len(first)} reports byte-identical across 2 processes"
                     + (f" and {len(PRODUCED)} in-process reports" if PRODUCED else "")
                     + (f"; differing: {differing}" if differing else ""))
    criterion(f"{len(first)} reports")
    assert ok
