import json
import subprocess
import sys

import pytest

from coarsedim.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    report = json.loads(out.out) if out.out.strip() else None
    return code, report, out.err


def test_norm_commands(capsys):
    code, rep, _ = run(capsys, "norm", "--space", "Q", "--value", "1/2")
    assert code == 0 and rep["ok"] is True
    assert rep["value"] == {"lin": "1/2", "log_arg": "2"}
    code, rep, _ = run(capsys, "norm", "--space", "Qp", "--p", "2", "--value", "0")
    assert rep["value"] == {"zero": True}
    code, rep, _ = run(capsys, "norm", "--space", "QmodZ", "--value", "2/3")
    assert rep["value"] == {"lin": "1/3", "log_arg": "3"}
    code, rep, _ = run(capsys, "norm", "--space", "induced", "--value", "3/4")
    assert rep["value"] == "5/1"


def test_norm_with_weight_file(capsys, tmp_path):
    wfile = tmp_path / "w.json"
    wfile.write_text(json.dumps([{"gen": "1/2", "w": "3"}, {"gen": "-1/2", "w": "3"},
                                 {"gen": "1", "w": "1"}, {"gen": "-1", "w": "1"}]))
    code, rep, _ = run(capsys, "norm", "--space", "induced", "--weights", str(wfile), "--value", "3/2")
    assert code == 0 and rep["value"] == "4/1"


def test_cover_build_and_verify(capsys, tmp_path):
    cover = tmp_path / "cover.json"
    spec = tmp_path / "sample.json"
    spec.write_text(json.dumps({"denominator_max": 40, "window": ["-10", "10"]}))
    code, _, _ = run(capsys, "--out", str(cover), "cover", "build", "--kind", "interval", "--scale", "1")
    assert code == 0
    built = json.loads(cover.read_text())
    assert built["result"]["params"] == {"R": 2, "M": 3, "N": "6"}
    code, rep, _ = run(capsys, "cover", "verify", "--cover", str(cover), "--sample-spec", str(spec))
    assert code == 0 and rep["ok"] is True
    assert rep["result"]["verification"]["sample_size"] > 9000


def test_cover_refusals_and_domain_errors(capsys):
    code, rep, err = run(capsys, "cover", "build", "--kind", "interval", "--scale", "9")
    assert code == 2 and rep is None and "refused" in err
    code, rep, _ = run(capsys, "cover", "build", "--kind", "coset", "--scale", "3", "--cap", "1000")
    assert code == 1 and rep["ok"] is False
    assert rep["error"]["type"] == "NotLocallyFinite"
    code, _, _ = run(capsys, "cover", "build", "--kind", "coset", "--scale", "-1")
    assert code == 2


def test_lower_bound(capsys):
    code, rep, _ = run(capsys, "lower-bound", "--space", "Z", "--scale", "2", "--range", "1000")
    assert code == 0
    assert rep["result"]["n_components"] == 1
    assert rep["result"]["max_diameter"] == {"lin": "1000/1", "log_arg": "1"}


@pytest.mark.parametrize("kind,spec,extra", [
    ("sandwich-q", {"denominator_max": 60, "window": ["-1", "1"], "open": [True, True]}, []),
    ("sandwich-quotient", {"denominator_max": 60, "window": ["-1", "1"], "open": [True, True]}, []),
    ("sandwich-padic", {"p": 3, "max_exp": 5, "window": ["-1", "1"], "open": [True, True], "exclude_zero": True},
     ["--p", "3"]),
    ("distortion", {"p": 2, "max_exp": 6, "window": ["0", "1"], "open": [False, True]}, ["--p", "2"]),
    ("profile", {"denominator_max": 20, "window": ["0", "1"], "open": [False, True]}, []),
    ("closeness", {"denominator_max": 20, "window": ["-2", "2"]}, ["--pair", "i_after_p"]),
])
def test_coarse_checks(capsys, tmp_path, kind, spec, extra):
    f = tmp_path / "s.json"
    f.write_text(json.dumps(spec))
    code, rep, _ = run(capsys, "coarse-check", "--kind", kind, "--sample-spec", str(f), *extra)
    assert code == 0 and rep["ok"] is True


def test_coarse_check_outside_domain(capsys, tmp_path):
    f = tmp_path / "s.json"
    f.write_text(json.dumps({"points": ["3/2"]}))
    code, _, err = run(capsys, "coarse-check", "--kind", "sandwich-q", "--sample-spec", str(f))
    assert code == 2 and "outside" in err


def test_graph_commands(capsys, tmp_path):
    g = tmp_path / "g.json"
    code, rep, _ = run(capsys, "graph", "build", "--window", "4", "--depth", "7", "--out", str(g))
    assert code == 0 and rep["result"]["vertices"] == 2 * 4 * 2**7 + 1
    adjacency = json.loads(g.read_text())
    assert {"u", "v", "len"} == set(adjacency[0])
    code, rep, _ = run(capsys, "graph", "dist", "--graph", str(g), "--from", "0", "--to", "1/64")
    assert rep["result"]["distance"] == 64
    code, _, _ = run(capsys, "graph", "dist", "--graph", str(g), "--from", "0", "--to", "1/1024")
    assert code == 2


def test_usage_errors(capsys):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "norm", "--space", "Q", "--value", "1/0")[0] == 2
    assert run(capsys, "norm", "--space", "Qp", "--value", "1")[0] == 2
    assert run(capsys, "cover", "verify", "--cover", "/nonexistent", "--sample-spec", "/nonexistent")[0] == 2


def test_reports_are_reproducible(capsys):
    def strip(rep):
        rep.pop("timing")
        return rep
    a = strip(run(capsys, "--seed", "3", "suite", "prop1")[1])
    b = strip(run(capsys, "--seed", "3", "suite", "prop1")[1])
    assert a["ok"] is True
    for rep in (a, b):
        for check in rep["result"]["checks"]:
            check.pop("seconds")
    assert json.dumps(a) == json.dumps(b)
    assert a["seed"] == 3


def test_module_entry_point(tmp_path):
    out = tmp_path / "r.json"
    proc = subprocess.run([sys.executable, "-m", "coarsedim", "--out", str(out), "norm", "--space", "Q",
                           "--value", "-3/4"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == ""
    assert json.loads(out.read_text())["value"] == {"lin": "3/4", "log_arg": "4"}
