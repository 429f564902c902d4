import json
import subprocess
import sys

import pytest

from bfcensus.cli import main
from bfcensus.store import header_of, read_set, read_signed
from bfcensus.bfcore import signature


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_enumerate_monotone(capsys):
    code, out, _ = run(capsys, "enumerate", "--class", "monotone", "--n", "4")
    assert code == 0 and out.strip() == "168"


def test_enumerate_balanced_monotone(capsys):
    code, out, _ = run(capsys, "enumerate", "--class", "balanced-monotone", "--n", "6")
    assert code == 0 and out.strip() == "492288"


def test_enumerate_weights(capsys):
    code, out, _ = run(capsys, "enumerate", "--class", "unate", "--n", "3", "--weights",
                       "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["count"] == "104"
    assert sum(int(w) for w in data["weights"]) == 104 and data["weights_symmetric"]


def test_enumerate_writes_fset(capsys, tmp_path):
    out = tmp_path / "bu4.fset"
    code, _, _ = run(capsys, "enumerate", "--class", "balanced-unate", "--n", "4",
                     "--out", str(out), "--threads", "2")
    assert code == 0 and header_of(out).count == 296


def test_enumerate_signatures(capsys, tmp_path):
    out = tmp_path / "u3.fset"
    code, _, _ = run(capsys, "enumerate", "--class", "unate", "--n", "3", "--nondegenerate",
                     "--out", str(out), "--signatures")
    pairs = read_signed(out)
    assert code == 0 and len(pairs) == 72
    assert all(signature(f) == s for f, s in pairs)


def test_count_transform(capsys):
    code, out, _ = run(capsys, "count", "--class", "unate", "--n", "9", "--via", "transform")
    assert code == 0 and out.strip() == "146629927766168786368451678290041110762316052"
    code, out, _ = run(capsys, "count", "--class", "balanced-unate", "--n", "7", "--via", "transform")
    assert code == 0 and out.strip() == "10393772159334"


def test_count_enumerate(capsys):
    code, out, _ = run(capsys, "count", "--class", "monotone", "--n", "3", "--via", "enumerate")
    assert code == 0 and out.strip() == "20"


def test_nondegenerate_both_routes_agree(capsys):
    for cls in ("monotone", "unate", "balanced-monotone", "balanced-unate"):
        vals = []
        for via in ("enumerate", "transform"):
            code, out, _ = run(capsys, "count", "--class", cls, "--n", "4", "--via", via,
                               "--nondegenerate")
            assert code == 0
            vals.append(out.strip())
        assert vals[0] == vals[1], cls


def test_count_json_round_trip(capsys):
    code, out, _ = run(capsys, "count", "--class", "unate", "--n", "9", "--format", "json")
    data = json.loads(out)
    assert int(data["count"]) == 146629927766168786368451678290041110762316052
    assert [int(v) for v in data["values"]][:4] == [2, 4, 14, 104]


def test_count_csv(capsys):
    code, out, _ = run(capsys, "count", "--class", "monotone", "--n", "4", "--format", "csv")
    assert out.splitlines() == ["n,value", "0,2", "1,3", "2,6", "3,20", "4,168"]


@pytest.mark.parametrize("cls,n,expected", [
    ("balanced-monotone", "6", "951"),
    ("balanced-unate", "5", "254"),
    ("unate", "4", "200"),
])
def test_classes(capsys, cls, n, expected):
    code, out, _ = run(capsys, "classes", "--class", cls, "--n", n)
    assert code == 0 and out.strip() == expected


def test_classes_both_and_sidecar(capsys, tmp_path):
    out = tmp_path / "bu5.fset"
    code, text, _ = run(capsys, "classes", "--class", "balanced-unate", "--n", "5",
                        "--method", "both", "--out", str(out), "--format", "json")
    data = json.loads(text)
    assert code == 0 and data["methods"] == {"filter": "254", "canonical": "254"}
    side = json.loads(out.with_name("bu5.fset.json").read_text())
    assert side["classCount"] == 254 and side["sourceSize"] == 18202
    assert len(read_set(out)) == 254


def test_classes_guarded(capsys):
    code, _, err = run(capsys, "classes", "--class", "unate", "--n", "6")
    assert code == 3 and "allow-large" in err


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify", "--n-max", "4")
    assert code == 0 and "FAIL" not in out


def test_verify_n5_adds_rows(capsys):
    code, out, _ = run(capsys, "verify", "--n-max", "5", "--format", "json")
    data = json.loads(out)
    assert code == 0 and any(c["n"] == 5 and c["group"] == "table" for c in data["checks"])


def test_verify_corrupted_table(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"BU": ["0", "2", "4", "14", "296", "18202", "31392428",
                                      "10393772159335"]}))
    code, out, _ = run(capsys, "verify", "--n-max", "3", "--tables", str(bad))
    assert code == 4
    failing = [line for line in out.splitlines() if line.startswith("FAIL")]
    assert failing and all("BU" in line and "n=7" in line for line in failing)


@pytest.mark.parametrize("argv", [
    ["enumerate", "--class", "bogus", "--n", "2"],
    ["enumerate", "--class", "monotone"],
    ["enumerate", "--class", "monotone", "--n", "-1"],
    ["enumerate", "--class", "monotone", "--n", "3", "--signatures", "--out", "x.fset"],
    ["count", "--class", "unate", "--n", "10", "--via", "transform"],
    ["enumerate", "--class", "monotone", "--n", "3", "--threads", "0"],
    ["verify", "--n-max", "9"],
    ["enumerate", "--class", "monotone", "--n", "12", "--allow-large"],
])
def test_usage_errors(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_guard_exit(capsys):
    code, _, _ = run(capsys, "enumerate", "--class", "monotone", "--n", "7")
    assert code == 3


def test_fset_tools(capsys, tmp_path):
    a, b = tmp_path / "m4.fset", tmp_path / "bm4.fset"
    run(capsys, "enumerate", "--class", "monotone", "--n", "4", "--out", str(a))
    run(capsys, "enumerate", "--class", "balanced-monotone", "--n", "4", "--out", str(b))
    code, out, _ = run(capsys, "fset", "merge", str(a), str(b), "--out", str(tmp_path / "u.fset"))
    assert code == 0 and out.strip() == "168"
    code, out, _ = run(capsys, "fset", "sort", str(a), "--out", str(tmp_path / "s.fset"))
    assert code == 0 and (tmp_path / "s.fset").read_bytes() == a.read_bytes()
    code, out, _ = run(capsys, "fset", "info", str(a), "--format", "json")
    assert json.loads(out) == {"n": 4, "count": 168, "sorted": True, "signatures": False}


def test_fset_info_bad_file(capsys, tmp_path):
    p = tmp_path / "junk.fset"
    p.write_bytes(b"junk")
    code, _, err = run(capsys, "fset", "info", str(p))
    assert code == 1 and "error" in err


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "bfcensus", "enumerate", "--class", "monotone",
                        "--n", "3"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip() == "20"
