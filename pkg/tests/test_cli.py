import json

import pytest

from nogo.cli import main
from nogo.liealg import su2, to_json


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def jacobi_breaking_su2(path):
    data = to_json(su2())
    # [e1,e2] = e3 + e1 keeps antisymmetry but breaks Jacobi
    data["brackets"][0]["coeffs"].append({"k": 1, "v": "1"})
    path.write_text(json.dumps(data))
    return path


def test_algebra_check(capsys):
    code, out, _ = run(capsys, "algebra", "check", "--builtin", "su3")
    assert code == 0 and "compact semisimple, center 0" in out
    code, out, _ = run(capsys, "algebra", "check", "--builtin", "abelian2", "--format", "json")
    assert code == 1 and json.loads(out)["semisimple"] is False
    code, _, _ = run(capsys, "algebra", "check", "--builtin", "sl2r")
    assert code == 1


def test_algebra_check_bad_inputs(capsys, tmp_path):
    assert run(capsys, "algebra", "check", "--builtin", "g2")[0] == 2
    assert run(capsys, "algebra", "check")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "algebra", "check", "--algebra", str(bad))[0] == 2
    code, out, _ = run(capsys, "algebra", "check", "--algebra", str(jacobi_breaking_su2(tmp_path / "t.json")))
    assert code == 1 and "Jacobi" in out


def test_orbit(capsys, tmp_path):
    code, out, _ = run(capsys, "orbit", "--builtin", "su2", "--h", "0,0,1", "--out", str(tmp_path))
    assert code == 0 and "orbit dim 2, regular, minimal" in out
    assert (tmp_path / "minimality.json").exists()
    assert run(capsys, "verify", str(tmp_path / "minimality.json"))[0] == 0
    code, out, _ = run(capsys, "orbit", "--builtin", "so4", "--h", "0,0,1,0,0,0")
    assert code == 0 and "not regular" in out and "minimality check skipped" in out
    assert run(capsys, "orbit", "--builtin", "su2", "--h", "0,0,0")[0] == 2
    assert run(capsys, "orbit", "--builtin", "su2", "--h", "a,b,c")[0] == 2


def test_orbit_point_file(capsys, tmp_path):
    p = tmp_path / "pt.json"
    p.write_text(json.dumps({"algebra": "su2", "h": ["1/2", "0", "0"]}))
    code, out, _ = run(capsys, "orbit", "--algebra", str(p))
    assert code == 0 and "minimal" in out


def test_certify_and_verify(capsys, tmp_path):
    code, out, _ = run(capsys, "certify", "--builtin", "su2", "--sphere", "1", "--k", "2", "--out", str(tmp_path))
    assert code == 0
    files = sorted(p.name for p in tmp_path.glob("*.json"))
    assert files == ["ad_invariance.json", "derived_ideal.json", "gram_positivity.json",
                     "triviality_conclusion.json"]
    for f in files:
        code, out, _ = run(capsys, "verify", str(tmp_path / f), "--format", "json")
        assert code == 0 and json.loads(out)["valid"]


def test_verify_rejects_tampering(capsys, tmp_path):
    run(capsys, "certify", "--builtin", "su2", "--sphere", "1", "--k", "1", "--out", str(tmp_path))
    path = tmp_path / "gram_positivity.json"
    data = json.loads(path.read_text())
    data["payload"]["minors"][0] = "2"
    path.write_text(json.dumps(data))
    code, out, _ = run(capsys, "verify", str(path))
    assert code == 1 and out.startswith("INVALID")
    data["schema"] = "other/9"
    path.write_text(json.dumps(data))
    assert run(capsys, "verify", str(path))[0] == 2
    assert run(capsys, "verify", str(tmp_path / "missing.json"))[0] == 2


@pytest.mark.parametrize("argv,step", [
    (["--builtin", "abelian3", "--sphere", "1"], "semisimple"),
    (["--builtin", "su2"], "derived-ideal"),
])
def test_certify_negative_controls(capsys, tmp_path, argv, step):
    code, out, _ = run(capsys, "certify", *argv, "--k", "2", "--out", str(tmp_path), "--format", "json")
    assert code == 1 and json.loads(out)["failed_step"] == step
    assert not list(tmp_path.glob("*.json"))


def test_certify_tampered_algebra(capsys, tmp_path):
    alg = jacobi_breaking_su2(tmp_path / "alg.json")
    code, out, _ = run(capsys, "certify", "--algebra", str(alg), "--sphere", "1", "--k", "2",
                       "--out", str(tmp_path / "c"))
    assert code == 1 and "chain stops at step 'lie-algebra-axioms'" in out


def test_probe(capsys, tmp_path):
    code, out, _ = run(capsys, "probe", "--j", "1/2", "--k", "2", "--out", str(tmp_path))
    assert code == 0 and "verdict: Feasible" in out
    assert (tmp_path / "probe_j1_2_k2.json").exists()
    code, out, _ = run(capsys, "probe", "--j", "0", "--out", str(tmp_path))
    assert code == 0 and "trivial prequantization" in out
    assert run(capsys, "probe", "--j=-1/2")[0] == 2
    assert run(capsys, "probe", "--j", "1", "--k", "4")[0] == 2
    assert run(capsys, "probe", "--j", "1/3")[0] == 2
