import json
import subprocess
import sys

import pytest

from multitrans.cli import int_list, main, UsageError

GOLDEN = {"kind": "sft", "vertices": 2, "edges": [[0, 0], [0, 1], [1, 0]]}
CYCLE3 = {"kind": "finite_map", "table": [1, 2, 0]}


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, doc in {"golden": GOLDEN, "cycle3": CYCLE3,
                      "empty": {"kind": "sft", "vertices": 2, "edges": []},
                      "power": {"kind": "power", "base": GOLDEN, "exponent": 2},
                      "spacing": {"kind": "spacing_shift", "gaps": list(range(2, 80, 2)), "horizon": 80}}.items():
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(doc))
        paths[name] = str(p)
    bad = tmp_path / "bad.json"
    bad.write_text('{"kind": ')
    paths["bad"] = str(bad)
    return paths


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_int_list():
    assert int_list("1,2,3") == (1, 2, 3)
    assert int_list("011") == (0, 1, 1)
    assert int_list("12 3") == (12, 3)
    with pytest.raises(UsageError):
        int_list("a,b")


def test_hitting_golden(capsys, files):
    code, out = run(capsys, "hitting", "--system", files["golden"], "--u", "1", "--v", "1")
    assert code == 0
    assert out.strip() == '{"exact":{"exceptional":[],"modulus":1,"residues":[0],"threshold":2}}'


def test_family_odds(capsys):
    code, out = run(capsys, "family", "--kind", "vec", "--a", "1,2", "--set", "odds")
    assert code == 0 and json.loads(out) == {"verdict": "fails", "witness": [0, 0]}
    code, _ = run(capsys, "family", "--kind", "vec", "--a", "1,2", "--set", "odds", "--fatal")
    assert code == 1


def test_family_query_file(capsys, tmp_path):
    q = tmp_path / "q.json"
    q.write_text(json.dumps({"family": {"kind": "vec", "a": [1, 2]},
                             "set": {"exact": {"exceptional": [], "modulus": 1, "residues": [0],
                                               "threshold": 1}},
                             "bounds": {"n_max": 16, "k_max": 1000}}))
    code, out = run(capsys, "family", "--query", str(q))
    assert code == 0 and json.loads(out) == {"verdict": "holds"}


def test_analyze(capsys, files):
    code, out = run(capsys, "analyze", "--system", files["golden"])
    assert code == 0 and json.loads(out)["mixing"]["verdict"] == "holds"
    code, out = run(capsys, "analyze", "--system", files["cycle3"])
    doc = json.loads(out)
    assert doc["transitive"]["verdict"] == "holds" and doc["weakly_mixing"]["verdict"] == "fails"


def test_exit_codes(capsys, files):
    assert main(["analyze", "--system", files["empty"]]) == 3
    assert main(["analyze", "--system", files["bad"]]) == 2
    assert main(["analyze", "--system", files["power"]]) == 4
    assert main(["hitting", "--system", files["golden"], "--u", "1,1", "--v", "0"]) == 3
    assert main(["hitting", "--system", files["spacing"], "--u", "1", "--v", "1",
                 "--horizon", "500"]) == 2
    assert main(["family", "--kind", "vec", "--set", "primes"]) == 2
    with pytest.raises(SystemExit) as info:
        main(["hitting"])
    assert info.value.code == 2


def test_transitive_and_chaos(capsys, files):
    code, out = run(capsys, "transitive", "--system", files["cycle3"], "--a", "1,2")
    assert json.loads(out)["verdict"] == "fails"
    code, out = run(capsys, "chaos", "--system", files["golden"], "--horizon", "64")
    assert json.loads(out)["verdict"] == "holds"


def test_verify_writes_reports(capsys, tmp_path):
    out_dir = tmp_path / "rep"
    code, out = run(capsys, "verify", "--theorem", "thm42", "--corpus", "sft2", "--out", str(out_dir))
    assert code == 0 and json.loads(out)["all_agree"]
    report = json.loads((out_dir / "report.json").read_text())
    assert report["summary"]["cases"] == len(report["cases"])
    assert (out_dir / "summary.csv").read_text().startswith("index,check")


def test_module_entry_point(files):
    res = subprocess.run([sys.executable, "-m", "multitrans", "hitting", "--system", files["golden"],
                          "--u", "0", "--v", "1"], capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["exact"]["residues"] == [0]
