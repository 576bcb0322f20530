import json
import subprocess
import sys
import time

import pytest

from yangflag.cli import main
from yangflag.suite import FAMILY_GROUPS, SuiteConfig, all_families, plan


def _run(*args, cwd=None):
    return subprocess.run([sys.executable, "-m", "yangflag", *args], capture_output=True, text=True, cwd=cwd)


def test_exit_zero_and_report(tmp_path):
    out = tmp_path / "r.jsonl"
    assert main(["--families", "commuting", "--n", "2", "--report", str(out)]) == 0
    lines = [json.loads(x) for x in out.read_text().splitlines()]
    assert lines and all(x["status"] == "pass" and x["residual_terms"] == 0 for x in lines)
    assert all("elapsed_ms" not in x for x in lines)


def test_exit_one_on_failure(tmp_path):
    # flag checks run at order 3, so a strict order-4 request cannot be met
    out = tmp_path / "r.jsonl"
    assert main(["--families", "bialgebra", "--n", "2", "--strict-windows", "--report", str(out)]) == 1
    line = json.loads(out.read_text().splitlines()[0])
    assert line["status"] == "fail" and "narrower" in line["counterexample"]
    assert main(["--families", "bialgebra", "--n", "2", "--order", "3", "--strict-windows",
                 "--report", str(out)]) == 0


@pytest.mark.parametrize("args", [
    ["--n", "5"],
    ["--order", "7"],
    ["--n", "3", "--gamma", "2,2"],
    ["--families", "nope"],
    ["--eval-k", "5"],
    ["--expr", "t[1;1](u"],
])
def test_exit_two_on_config_error(args, tmp_path):
    assert main(args + ["--report", str(tmp_path / "r.jsonl")]) == 2


def test_bad_flag_value_is_usage_error():
    r = _run("--gamma", "a,b")
    assert r.returncode == 2


def test_expression_mode():
    r = _run("--expr", "inv(t[1;1](u))*t[1;2](u)", "--n", "2", "--order", "2")
    assert r.returncode == 0 and "t1_12" in r.stdout
    r = _run("--expr", "t[1,2;1](u)")
    assert r.returncode == 2 and "column 1" in r.stderr


def test_stdout_report_and_table_split():
    r = _run("--families", "commuting", "--n", "2", "--report", "-")
    assert r.returncode == 0
    assert all(json.loads(x)["family"] == "commuting" for x in r.stdout.splitlines())
    assert "TOTAL" in r.stderr


def test_same_seed_is_byte_identical_across_jobs():
    args = ["--n", "3", "--families", "minors,skew", "--points", "3", "--report", "-"]
    a = _run(*args, "--jobs", "1").stdout
    b = _run(*args, "--jobs", "4").stdout
    c = _run(*args, "--jobs", "1").stdout
    assert a == b == c and a


def test_seed_changes_skew_points():
    args = ["--n", "3", "--families", "qp_cyclic", "--points", "2", "--report", "-"]
    a = _run(*args, "--seed", "1").stdout
    b = _run(*args, "--seed", "2").stdout
    assert a != b


def test_every_family_is_planned():
    names = {t[0] for t in plan(SuiteConfig())}
    assert names == set(all_families())
    assert set(all_families()) == {f for g in FAMILY_GROUPS.values() for f in g}


def test_flag_families_skip_at_n4(tmp_path):
    out = tmp_path / "r.jsonl"
    assert main(["--n", "4", "--families", "coaction,c_ideal", "--report", str(out)]) == 0
    lines = [json.loads(x) for x in out.read_text().splitlines()]
    assert lines and all(x["status"] == "skipped" and x["notes"]["reason"] for x in lines)


def test_small_run_is_fast(tmp_path):
    t0 = time.perf_counter()
    assert main(["--families", "commuting", "--n", "2", "--report", str(tmp_path / "r.jsonl")]) == 0
    assert time.perf_counter() - t0 < 1.0


def test_timings_flag_adds_elapsed(tmp_path):
    out = tmp_path / "r.jsonl"
    main(["--families", "commuting", "--n", "2", "--timings", "--report", str(out)])
    assert all("elapsed_ms" in json.loads(x) for x in out.read_text().splitlines())
