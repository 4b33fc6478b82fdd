from __future__ import annotations

import re

import pytest
from hypothesis import strategies as st

from tiltver.exactcore import LaurentPoly


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    # never let a test touch a cache directory in the working tree
    monkeypatch.setenv("TILTVER_CACHE_DIR", str(tmp_path / "cache"))


def naive_mul(a: dict[int, int], b: dict[int, int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, 0) + x * y
    return {k: v for k, v in out.items() if v}


coeff_maps = st.dictionaries(
    st.integers(-12, 12), st.integers(-10**30, 10**30), max_size=8
)
laurent = coeff_maps.map(LaurentPoly)


@st.composite
def bar_invariant_nonneg(draw, max_weight: int = 6, max_mult: int = 3):
    """A bar-invariant Laurent polynomial with nonnegative coefficients."""
    half = draw(st.dictionaries(st.integers(0, max_weight), st.integers(0, max_mult), max_size=4))
    c: dict[int, int] = {}
    for k, v in half.items():
        c[k] = c.get(k, 0) + v
        if k:
            c[-k] = c.get(-k, 0) + v
    return LaurentPoly(c)


def pytest_terminal_summary(terminalreporter):
    """One pass/fail line per acceptance criterion, in order."""
    rows = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            m = re.search(r"test_criterion_(\d+)", getattr(rep, "nodeid", ""))
            if not m or (rep.when != "call" and outcome == "passed"):
                continue
            n = int(m.group(1))
            detail = dict(getattr(rep, "user_properties", [])).get("criterion_detail", "")
            if rows.get(n, ("PASS",))[0] == "PASS":
                rows[n] = ("PASS" if outcome == "passed" else "FAIL", detail)
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(rows):
        status, detail = rows[n]
        terminalreporter.write_line(f"criterion {n}: {status}" + (f" ({detail})" if detail else ""))
