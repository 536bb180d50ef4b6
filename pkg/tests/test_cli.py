from __future__ import annotations

import csv
import json
import subprocess
import sys

import pytest

from lincontract.cli import main
from lincontract.core import format_rational
from lincontract.serialize import load_instance

from conftest import INSTANCES

TWO_ACTIONS = str(INSTANCES / "two_actions.json")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve_two_actions(capsys):
    code, out, _ = run(capsys, "solve", TWO_ACTIONS)
    assert code == 0
    assert out.splitlines()[0] == "alpha* = 1/2, principal utility = 1/5"
    assert "≈ 0.2" in out


def test_solve_zero_cost(capsys):
    code, out, _ = run(capsys, "solve", str(INSTANCES / "zero_cost.json"))
    assert code == 0 and out.startswith("alpha* = 0,")


def test_solve_json(capsys):
    code, out, _ = run(capsys, "solve", TWO_ACTIONS, "--json")
    data = json.loads(out)
    assert data["optimal"]["alpha"] == "1/2"
    assert [b["alpha"] for b in data["breakpoints"]] == [0, "1/4", "1/2", "3/4"]


def test_solve_matches_brute_force_on_random_file(capsys, tmp_path):
    out_file = tmp_path / "r.json"
    assert main(["gen", "--family", "explicit-table", "--seed", "9", "--n", "3", "--out", str(out_file)]) == 0
    _, a, _ = run(capsys, "solve", str(out_file), "--json")
    from lincontract import reference as ref

    fs, cs = load_instance(out_file).table()
    expected = ref.envelope_breakpoints(fs, cs)
    got = json.loads(a)["breakpoints"]
    assert [(b["alpha"], b["demanded"]) for b in got] == [
        (format_rational(x), [i for i in range(3) if bits >> i & 1]) for x, bits in expected
    ]


def test_enumerate_two_actions(capsys):
    code, out, _ = run(capsys, "enumerate", TWO_ACTIONS, "--check", "--json")
    data = json.loads(out)
    assert code == 0 and len(data["breakpoints"]) == 3
    assert data["queries"] <= 2 * 3 + 2


def test_enumerate_empty_segment(capsys):
    code, out, _ = run(capsys, "enumerate", TWO_ACTIONS, "--segment", "0", "1/5", "--json")
    assert code == 0 and json.loads(out)["breakpoints"] == []


def test_enumerate_bad_segment(capsys):
    code, _, err = run(capsys, "enumerate", TWO_ACTIONS, "--segment", "1/2", "2")
    assert code == 4 and "segment" in err


def test_curve_csv(capsys, tmp_path):
    target = tmp_path / "c.csv"
    assert main(["curve", TWO_ACTIONS, "--samples", "5", "--csv", str(target)]) == 0
    rows = list(csv.DictReader(target.open()))
    assert {"alpha_exact": "1/2", "u_agent_exact": "1/20", "u_principal_exact": "1/5"}.items() <= rows[2].items()


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "solve", str(tmp_path / "missing.json"))[0] == 2
    assert run(capsys, "solve", TWO_ACTIONS, "--oracle", "matching")[0] == 3
    assert run(capsys, "solve", str(INSTANCES / "three_edges_one_sided.json"), "--oracle", "matching")[0] == 4
    bad = tmp_path / "bad.json"
    bad.write_text('{"kind": "contract", "n": 1, "reward": {"type": "table", "values": [0, 2]}, "cost": {"type": "additive", "weights": [0]}}')
    assert run(capsys, "solve", str(bad))[0] == 4
    assert run(capsys, "gen", "--family", "matching-random", "--edges", "99")[0] == 2


def test_reduce_pipeline(capsys, tmp_path):
    m = tmp_path / "m.json"
    d = tmp_path / "d.json"
    assert main(["reduce", "path-to-matching", str(INSTANCES / "path_fan.json"), "--out", str(m)]) == 0
    assert main(["reduce", "matching-to-demand", str(m), "--alpha2", "1/10", "--out", str(d)]) == 0
    code, out, _ = run(capsys, "enumerate", str(d), "--oracle", "matching", "--segment", "1/10", "1", "--json")
    assert code == 0
    assert [b["alpha"] for b in json.loads(out)["breakpoints"]] == ["1/3", "4/7", "3/4"]
    assert run(capsys, "reduce", "matching-to-demand", str(m))[0] == 2
    assert run(capsys, "reduce", "matching-to-demand", str(m), "--alpha2", "0")[0] == 4
    assert run(capsys, "reduce", "path-to-matching", TWO_ACTIONS)[0] == 2


def test_reduce_one_sided(capsys, tmp_path):
    src = tmp_path / "g.json"
    assert main(["gen", "--family", "matching-one-sided", "--seed", "4", "--out", str(src)]) == 0
    code, out, _ = run(capsys, "reduce", "one-sided-to-vertex", str(src))
    assert code == 0 and json.loads(out)["kind"] == "contract"
    assert run(capsys, "reduce", "one-sided-to-vertex", TWO_ACTIONS)[0] == 2


def test_gen_round_trip(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for target in (a, b):
        assert main(["gen", "--family", "parametric-path-random", "--seed", "5", "--n", "5", "--out", str(target)]) == 0
    assert a.read_bytes() == b.read_bytes()
    obj = load_instance(a)
    c = tmp_path / "c.json"
    from lincontract.serialize import save_instance

    save_instance(obj, c)
    assert c.read_bytes() == a.read_bytes()


def test_verify_suite(capsys):
    code, out, _ = run(capsys, "verify", "envelope", "--count", "5")
    assert code == 0 and out.startswith("PASS envelope: 5 instances")


def test_verify_reports_violations(capsys):
    code, out, _ = run(capsys, "verify", "reductions", "--count", "10")
    assert code == 1
    assert "FAIL transform:" in out and "seed=9" in out
    assert "PASS transform-scaled" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "lincontract", "solve", TWO_ACTIONS], capture_output=True, text=True)
    assert proc.returncode == 0 and "alpha* = 1/2" in proc.stdout


@pytest.mark.parametrize("suite", ["matching", "counting"])
def test_verify_other_suites_pass(capsys, suite):
    assert run(capsys, "verify", suite, "--count", "5", "--jobs", "2")[0] == 0
