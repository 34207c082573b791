import json
import subprocess
import sys

import pytest

from shadowlab import __version__
from shadowlab.cli import CHECKS, main
from shadowlab.io import fmt_float, load_polytope, loads_polytope, polytope_to_dict, InputError
from shadowlab.polytope import Zonotope, hypercube


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_build_hypercube(capsys):
    code, out, _ = run(capsys, "build", "hypercube", "--n", "3")
    d = json.loads(out)
    assert code == 0 and len(d["vertices"]) == 8 and d["n"] == 3 and len(d["edges"]) == 12


def test_build_augmented_permutahedron(capsys, tmp_path):
    p = tmp_path / "ap.json"
    assert run(capsys, "build", "augmented_permutahedron", "--n", "3", "-o", str(p))[0] == 0
    d = json.loads(p.read_text())
    assert len(d["generators"]) == 4
    z = load_polytope(p)
    assert isinstance(z, Zonotope)


def test_build_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        run(capsys, "build", "zn_basis", "--n", "3", "--eps", "0.01", "--seed", "7", "-o", str(path))
    assert a.read_bytes() == b.read_bytes()
    run(capsys, "build", "zn_basis", "--n", "3", "--eps", "0.01", "--seed", "8", "-o", str(b))
    assert a.read_bytes() != b.read_bytes()


def test_build_bad_params(capsys):
    assert run(capsys, "build", "hypercube", "--n", "40")[0] == 2
    assert run(capsys, "build", "zn_parallel")[0] == 2


def test_shadow_json(capsys):
    code, out, _ = run(capsys, "shadow", "--family", "hypercube", "--n", "4", "--trials", "10000",
                       "--seed", "3", "--threads", "1")
    d = json.loads(out)
    assert code == 0 and d["seed"] == 3 and d["version"] == __version__
    assert abs(d["mean"] - 8) <= 3 * d["std_error"] + 1e-12


def test_shadow_exact(capsys, tmp_path):
    p = tmp_path / "z.json"
    run(capsys, "build", "augmented_permutahedron", "--n", "4", "-o", str(p))
    code, out, _ = run(capsys, "shadow", "--input", str(p), "--exact")
    assert code == 0 and out == "14\n"
    assert run(capsys, "shadow", "--family", "hypercube", "--n", "3", "--exact")[0] == 2


def test_shadow_csv_thread_invariant(capsys):
    outs = []
    for t in ("1", "4", "8"):
        code, out, _ = run(capsys, "shadow", "--family", "birkhoff", "--n", "3", "--trials", "500",
                           "--seed", "11", "--csv", "--threads", t)
        outs.append(out)
    assert outs[0] == outs[1] == outs[2]
    lines = outs[0].split("\n")
    assert lines[0] == "trial_index,vertex_count,degenerate" and "\r" not in outs[0]
    assert len(lines) == 502 and lines[-1] == ""


def test_seed_environment_fallback(capsys, monkeypatch):
    monkeypatch.setenv("SHADOWLAB_SEED", "5")
    _, a, _ = run(capsys, "shadow", "--family", "birkhoff", "--n", "3", "--trials", "50", "--csv")
    _, b, _ = run(capsys, "shadow", "--family", "birkhoff", "--n", "3", "--trials", "50", "--csv", "--seed", "5")
    _, c, _ = run(capsys, "shadow", "--family", "birkhoff", "--n", "3", "--trials", "50", "--csv", "--seed", "6")
    assert a == b != c
    monkeypatch.setenv("SHADOWLAB_SEED", "abc")
    assert run(capsys, "shadow", "--family", "birkhoff", "--n", "3", "--trials", "5")[0] == 2


def test_malformed_json_reports_position(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"n": 2,\n "vertices": [[0, 0],\n')
    code, _, err = run(capsys, "shadow", "--input", str(p))
    assert code == 2 and f"{p}:3:1" in err


def test_schema_errors():
    with pytest.raises(InputError):
        loads_polytope('{"n": 2, "vertices": [[0, 0, 0]]}')
    with pytest.raises(InputError):
        loads_polytope('{"vertices": [[0, 0]]}')
    with pytest.raises(InputError):
        loads_polytope('{"n": 2, "vertices": [[0, 0], [1, 0]], "edges": [[0, 5]]}')


def test_polytope_json_round_trip():
    p = hypercube(3)
    q = loads_polytope(json.dumps(polytope_to_dict(p)))
    assert (q.vertices == p.vertices).all() and q.edges == p.edges


def test_check_theorem(capsys):
    code, out, err = run(capsys, "check", "--family", "hypercube", "--n", "4", "--checks", "theorem_1_1",
                         "--trials", "2000")
    d = json.loads(out)
    assert code == 0 and d["results"][0]["passed"] and "PASS theorem_1_1" in err
    assert json.loads(json.dumps(d)) == d


def test_check_delta_augmented(capsys):
    code, out, _ = run(capsys, "check", "--family", "augmented_permutahedron", "--n", "4", "--checks", "delta")
    row = json.loads(out)["results"][0]
    assert code == 0 and row["passed"] and not row["matches_sum_form"]


def test_check_all_on_hypercube(capsys):
    code, out, _ = run(capsys, "check", "--family", "hypercube", "--n", "3", "--checks", ",".join(CHECKS),
                       "--trials", "1000")
    d = json.loads(out)
    assert code == 0 and [r["name"] for r in d["results"]] == list(CHECKS)


def test_check_unknown_name(capsys):
    code, _, err = run(capsys, "check", "--family", "hypercube", "--n", "3", "--checks", "bogus")
    assert code == 2 and "theorem_1_1" in err


def test_check_precondition_failure_exits_2(capsys):
    code, out, _ = run(capsys, "check", "--family", "birkhoff", "--n", "4", "--checks", "delta", "--trials", "10")
    assert code == 2 and "error" in json.loads(out)["results"][0]


def test_check_failure_exits_1(capsys, tmp_path):
    # at significance level 1 any p-value below 1 counts as a rejection
    p = tmp_path / "p.json"
    p.write_text(json.dumps({"n": 2, "vertices": [[0, 0], [1, 0], [0, 1]]}))
    code, out, _ = run(capsys, "check", "--input", str(p), "--checks", "lemma_2_1", "--trials", "50",
                       "--alpha-level", "1.0")
    assert code == 1


def test_check_report_is_byte_identical(capsys):
    args = ("check", "--family", "hypercube", "--n", "3", "--checks", "theorem_1_1,lemma_3_1", "--trials", "500",
            "--seed", "4")
    assert run(capsys, *args)[1] == run(capsys, *args)[1]


def test_sweeps(capsys):
    code, out, _ = run(capsys, "sweep", "zn_parallel", "--range", "2:10", "--trials", "10")
    rows = [line.split(",") for line in out.strip().split("\n")]
    assert code == 0 and rows[0][:3] == ["k", "measured_mean", "measured_se"]
    assert all(1 <= float(r[5]) <= 1.2 for r in rows[1:])
    _, out, _ = run(capsys, "sweep", "zn_basis", "--range", "2:8", "--eps", "0", "--trials", "10")
    rows = [line.split(",") for line in out.strip().split("\n")][1:]
    assert [float(r[1]) for r in rows] == [2.0 * n for n in range(2, 9)]
    _, out, _ = run(capsys, "sweep", "augmented_permutahedron", "--range", "3:5", "--trials", "10")
    rows = [line.split(",") for line in out.strip().split("\n")]
    assert rows[0][-2:] == ["delta", "measured_delta_over_n1.5"]
    assert all(0.5 < float(r[-1]) < 2 for r in rows[1:])
    assert run(capsys, "sweep", "hypercube", "--range", "x")[0] == 2


def test_float_format():
    assert fmt_float(0.1) == "0.10000000000000001"
    assert fmt_float(2.0) == "2"


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "shadowlab", "build", "hypercube", "--n", "2"],
                       capture_output=True, text=True, check=False)
    assert r.returncode == 0 and len(json.loads(r.stdout)["vertices"]) == 4
    r = subprocess.run([sys.executable, "-m", "shadowlab", "frobnicate"], capture_output=True, text=True)
    assert r.returncode == 2
