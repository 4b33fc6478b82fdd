from __future__ import annotations

import json
import os
import subprocess
import sys

import pytest

from tiltver import __version__
from tiltver.cache import ResultCache, request_key
from tiltver.cli import UsageError, parse_module, run
from tiltver.verify import check_report


def call(capsys, *argv) -> tuple[int, str, str]:
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# -- commands ----------------------------------------------------------------------------


def test_char_tilting(capsys):
    code, out, _ = call(capsys, "char", "tilting", "--p", "3", "--m", "3")
    assert code == 0
    assert out.strip() == '{"3":1,"1":2,"-1":2,"-3":1}'


def test_char_kinds(capsys):
    assert json.loads(call(capsys, "char", "weyl", "--m", "2")[1]) == {"2": 1, "0": 1, "-2": 1}
    assert json.loads(call(capsys, "char", "simple", "--p", "3", "--m", "3")[1]) == {"3": 1, "-3": 1}
    g = json.loads(call(capsys, "char", "gl-restriction", "--p", "5", "--m", "2")[1])
    assert g == {str(k): 1 for k in range(4, -5, -2)}


def test_char_text_format(capsys):
    code, out, _ = call(capsys, "char", "tilting", "--p", "3", "--m", "3", "--format", "text")
    assert code == 0 and out.strip() == "χ3 + χ1"


def test_cell(capsys):
    code, out, _ = call(capsys, "cell", "--p", "3", "--m", "8")
    assert code == 0 and out.strip() == '{"cell":2}'
    code, out, _ = call(capsys, "cell", "--p", "3", "--module", "V1*V1")
    assert code == 0 and json.loads(out) == {"cell": 0}


def test_padic_dim(capsys):
    code, out, _ = call(capsys, "padic-dim", "--p", "3", "--m", "2")
    d = json.loads(out)
    assert code == 0 and d["value"] == 3 and d["digits"] == [0, 1]


def test_decompose(capsys):
    code, out, _ = call(capsys, "decompose", "--p", "3", "--m", "3", "--no-witness")
    d = json.loads(out)
    assert code == 0 and d["multiset"] == {"3": 1, "1": 1}
    code, out, _ = call(capsys, "decompose", "--p", "3", "--module", "St1*St1")
    d = json.loads(out)
    assert code == 0 and d["multiset"] == {"4": 1, "2": 1}
    from tiltver.verify import check_certificate_json

    assert check_certificate_json(d) == []


def test_verify_thm_w(capsys):
    code, out, _ = call(capsys, "verify", "thm-w", "--p", "3", "--n", "2", "--m", "3", "--imax", "4")
    rep = json.loads(out)
    assert code == 0 and rep["status"] == "pass"
    assert list(rep) == ["claim", "params", "status", "witnesses", "timing_ms"]
    assert check_report(rep) == []


def test_verify_text_output(capsys):
    code, out, _ = call(capsys, "verify", "example-w", "--p", "3", "--n", "2", "--format", "text")
    assert code == 0 and "pass" in out


# -- exit codes ----------------------------------------------------------------------------


def test_usage_errors(capsys):
    code, _, err = call(capsys, "char", "tilting", "--p", "3")
    assert code == 2 and "--m" in err
    code, _, err = call(capsys, "verify", "splitpres", "--p", "3", "--j", "1", "--m", "4", "--imax", "3")
    assert code == 2 and err
    assert call(capsys, "bogus")[0] == 2
    assert call(capsys, "char", "tilting", "--p", "4", "--m", "1")[0] == 2
    assert call(capsys, "decompose", "--p", "3", "--module", "W7")[0] == 2


def test_mathematical_failure_exit_code(capsys):
    # L3 at p=3 has character chi3 - chi1, which is not a tilting character
    code, _, err = call(capsys, "decompose", "--p", "3", "--module", "L3")
    assert code == 1 and "not tilting" in err


def test_budget_exit_code(capsys):
    code, _, err = call(capsys, "verify", "diagram", "--p", "5", "--n", "2")
    assert code == 3 and "budget" in err
    code, _, _ = call(capsys, "decompose", "--p", "3", "--m", "6", "--dim-cap", "10")
    assert code == 3


def test_inconclusive_gr_exit_code(capsys):
    code, out, _ = call(capsys, "verify", "gr", "--p", "5", "--n", "2", "--no-witness")
    assert code == 1 and json.loads(out)["status"] == "inconclusive"


def test_parse_module():
    assert parse_module(3, "V1^3").dim == 8
    assert parse_module(3, "Fr(V1)*T3").dim == 12
    assert parse_module(5, "St1").dim == 5
    assert parse_module(3, "1").dim == 1
    with pytest.raises(UsageError):
        parse_module(3, "V1**")


# -- cache --------------------------------------------------------------------------------


def test_cached_and_fresh_are_byte_identical(capsys, tmp_path):
    argv = ["verify", "splitpres", "--p", "3", "--j", "1", "--m", "3", "--imax", "3",
            "--cache-dir", str(tmp_path)]
    code1, first, _ = call(capsys, *argv)
    entries = list(tmp_path.glob("*/*/*.json"))
    assert code1 == 0 and len(entries) == 1
    code2, second, _ = call(capsys, *argv)
    assert code2 == 0 and first == second
    code3, fresh, _ = call(capsys, *argv, "--no-cache")
    assert fresh == first


def test_format_shares_the_cache_entry(capsys, tmp_path):
    base = ["char", "tilting", "--p", "5", "--m", "9", "--cache-dir", str(tmp_path)]
    call(capsys, *base)
    call(capsys, *base, "--format", "text")
    assert len(list(tmp_path.glob("*/*/*.json"))) == 1


def test_seed_changes_the_key(capsys, tmp_path):
    base = ["decompose", "--p", "3", "--m", "2", "--cache-dir", str(tmp_path), "--no-witness"]
    call(capsys, *base, "--seed", "1")
    call(capsys, *base, "--seed", "2")
    assert len(list(tmp_path.glob("*/*/*.json"))) == 2


def test_cache_get_put(tmp_path):
    cache = ResultCache(tmp_path)
    req = {"command": "char", "sub": "weyl", "params": {"m": 1}, "seed": 0, "version": __version__}
    key = request_key(req)
    assert cache.get(key) is None
    cache.put(req, {"1": 1, "-1": 1})
    cache.put(req, {"1": 1, "-1": 1})
    assert cache.get(key).payload == {"1": 1, "-1": 1}
    assert len(list(tmp_path.glob("*/*/*.json"))) == 1
    assert key == request_key(dict(reversed(list(req.items()))))


def test_corrupt_entry_is_a_miss(tmp_path, caplog):
    cache = ResultCache(tmp_path)
    req = {"command": "cell", "sub": None, "params": {"p": 3, "m": 2}, "seed": 0, "version": __version__}
    cache.put(req, {"cell": 1})
    path = cache.path(request_key(req))
    path.write_text("{not json", encoding="utf-8")
    assert cache.get(request_key(req)) is None
    assert "corrupt" in caplog.text
    assert cache.gc() == 1 and not path.exists()


def test_tampered_report_is_not_served(capsys, tmp_path):
    argv = ["verify", "splitpres", "--p", "3", "--j", "1", "--m", "2", "--imax", "2",
            "--cache-dir", str(tmp_path)]
    _, first, _ = call(capsys, *argv)
    path = next(tmp_path.glob("*/*/*.json"))
    entry = json.loads(path.read_text())
    entry["payload"]["witnesses"]["sequences"][0]["maps"]["h0"] = {"shape": [1, 1], "p": 3, "entries": []}
    path.write_text(json.dumps(entry))
    _, second, _ = call(capsys, *argv)
    assert second == first
    assert check_report(json.loads(second)) == []


def test_cache_ls_and_gc(capsys, tmp_path):
    call(capsys, "cell", "--p", "3", "--m", "2", "--cache-dir", str(tmp_path))
    code, out, _ = call(capsys, "cache", "ls", "--cache-dir", str(tmp_path))
    assert code == 0 and "cell" in out
    (tmp_path / "ab" / "cd").mkdir(parents=True)
    (tmp_path / "ab" / "cd" / ".tmp-x.json").write_text("")
    code, out, _ = call(capsys, "cache", "gc", "--cache-dir", str(tmp_path))
    assert code == 0 and "1" in out


def test_env_var_sets_default_cache(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("TILTVER_CACHE_DIR", str(tmp_path / "env"))
    call(capsys, "cell", "--p", "5", "--m", "4")
    assert list((tmp_path / "env").glob("*/*/*.json"))


def test_console_script_runs(tmp_path):
    env = dict(os.environ, TILTVER_CACHE_DIR=str(tmp_path))
    res = subprocess.run(
        [sys.executable, "-m", "tiltver.cli", "cell", "--p", "3", "--m", "8"],
        capture_output=True, text=True, env=env, check=False,
    )
    assert res.returncode == 0 and res.stdout.strip() == '{"cell":2}'
