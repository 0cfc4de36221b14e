import io
import json
import subprocess
import sys

import pytest

from superw.chibra import AffinePVA
from superw.cli import (
    EXIT_FAIL,
    EXIT_FLOOR,
    EXIT_OK,
    EXIT_USAGE,
    RunConfig,
    cmd_generate,
    document,
    dumps,
    main,
    parse_document,
)
from superw.liesuper import AlgebraSpec, Family
from superw.wgen import generators


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_generate_gl_json():
    code, out, _ = run("generate", "--family", "gl", "--variant", "n+1", "--n", "1", "--format", "json")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["family"] == "gl(2|1)" and doc["n"] == 1 and doc["k"] == "1"
    assert len(doc["generators"]) == 3
    assert doc["generators"][0]["delta"] == "1/2"
    assert doc["verification"]["ok"] is True
    w1 = doc["generators"][0]
    assert sorted(t["monomial"][0]["basis"] for t in w1["terms"]) == ["e[1,1]", "e[2,2]", "e[3,3]"]


def test_generate_osp_even_text():
    code, out, _ = run("generate", "--family", "osp", "--variant", "2n|2n", "--n", "1")
    assert code == EXIT_OK
    assert "2 generators" in out
    assert "  w3  delta=3/2" in out and "  wt2  delta=1" in out


def test_generate_sl():
    code, out, _ = run("generate", "--family", "sl", "--variant", "n+1", "--n", "1", "--format", "json")
    assert code == EXIT_OK
    assert [g["label"] for g in json.loads(out)["generators"]] == ["w2", "w3"]


def test_verify_osp_odd():
    code, out, _ = run("verify", "--family", "osp", "--variant", "2n+1|2n", "--n", "1")
    assert code == EXIT_OK
    assert out.startswith("verify osp(3|2): PASS")


def test_check_axioms():
    code, out, _ = run("check-axioms", "--family", "gl", "--variant", "n-1", "--n", "2", "-v")
    assert code == EXIT_OK
    assert "skewsymmetry on 81 pairs" in out and "Jacobi identity on 729 triples" in out


def test_identities_note():
    code, out, _ = run("identities", "--family", "osp", "--variant", "2n|2n", "--n", "1", "--format", "json")
    assert code == EXIT_OK
    notes = json.loads(out)["verification"]["notes"]
    assert "constant term: 'b_m = (-1)^n a_m' holds" in notes
    assert "constant term: 'b_m = (-1)^(n+1) a_n' fails" in notes


def test_weights_command():
    code, out, _ = run("weights", "--family", "osp", "--variant", "2n+2|2n", "--n", "1", "--all")
    assert code == EXIT_OK
    assert "wt3: delta = 3/2" in out
    assert "w5: delta = 5/2" in out


@pytest.mark.parametrize("argv", [
    ["verify", "--family", "gl", "--variant", "n-1", "--n", "1"],
    ["verify", "--family", "gl", "--variant", "2n|2n", "--n", "1"],
    ["verify", "--family", "gl", "--variant", "n+1", "--n", "0"],
    ["verify", "--family", "gl", "--variant", "n+1", "--n", "1", "--floor", "2"],
    ["verify", "--family", "gl", "--variant", "n+1", "--n", "1", "--k", "0"],
    ["verify", "--family", "gl", "--variant", "n+1", "--n", "1", "--k", "x"],
    ["verify", "--family", "so", "--variant", "n+1", "--n", "1"],
    ["frobnicate"],
])
def test_usage_errors(argv, capsys):
    code, _, _ = run(*argv)
    assert code == EXIT_USAGE


def test_floor_exhausted():
    code, _, err = run("generate", "--family", "osp", "--variant", "2n|2n", "--n", "1", "--floor", "0")
    assert code == EXIT_FLOOR
    assert "floor exhausted" in err


def test_verification_failure_exit_code(monkeypatch):
    import superw.cli as cli
    from superw.wgen import Report

    def failing(*args, **kwargs):
        rep = Report("verify")
        rep.add("w2 in W", False, "residual")
        return rep

    monkeypatch.setattr(cli, "verify", failing)
    code, out, _ = run("verify", "--family", "gl", "--variant", "n+1", "--n", "1")
    assert code == EXIT_FAIL
    assert "first failure: w2 in W" in out


def test_json_roundtrip():
    spec = AlgebraSpec(Family.OSP_EVEN_PLUS, 1)
    gens = generators(spec)
    cfg = RunConfig(Family.OSP_EVEN_PLUS, 1, "generate", fmt="json")
    text = dumps(document(cfg, gens.items, None))
    back = parse_document(text, gens.pva)
    assert [g.label for g in back] == gens.labels
    for a, b in zip(back, gens.items):
        assert a.poly == b.poly and a.t == b.t
    assert dumps(document(cfg, back, None)) == text


def test_deterministic_output():
    argv = ["generate", "--family", "gl", "--variant", "n+1", "--n", "2", "--format", "json", "--all"]
    assert run(*argv)[1] == run(*argv)[1]


def test_k_deformation_flag():
    code, out, _ = run("generate", "--family", "gl", "--variant", "n+1", "--n", "1", "--k", "2", "--format", "json")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["k"] == "2" and doc["verification"]["ok"]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "superw", "verify", "--family", "gl", "--variant", "n+1", "--n", "1"],
        capture_output=True, text=True, timeout=300,
    )
    assert proc.returncode == 0, proc.stderr
    assert "PASS" in proc.stdout


def test_output_file(tmp_path):
    target = tmp_path / "gens.json"
    argv = ["generate", "--family", "gl", "--variant", "n+1", "--n", "1", "--format", "json"]
    code, out, _ = run(*argv, "--output", str(target))
    assert code == EXIT_OK and out == ""
    assert target.read_text() == run(*argv)[1]


def test_output_file_unwritable(tmp_path):
    code, _, err = run("weights", "--family", "gl", "--variant", "n+1", "--n", "1",
                       "-o", str(tmp_path / "missing" / "x.txt"))
    assert code == EXIT_USAGE and "cannot write" in err
