import copy
import json

import pytest

from nogo import checker
from nogo.certificate import SCHEMA, Certificate, Kind
from nogo.chain import bracket_decomposition, derived_ideal_certificate, gram_positivity_certificate
from nogo.errors import CertificateFailure, ParseError, SchemaVersionError
from nogo.exact import QI
from nogo.orbit import OrbitPoint, minimality_witness
from nogo.poisson import variables
from nogo.probe import _cofactors, _feasible_point, feasibility_probe

x1, x2, x3 = variables(3)


def edited(cert, fn):
    p = copy.deepcopy(cert.payload)
    fn(p)
    return Certificate(cert.kind, p)


def test_digest_mismatch(S2):
    c = derived_ideal_certificate(S2)
    with pytest.raises(CertificateFailure) as info:
        checker.verify(edited(c, lambda p: p.update(rank=7)), c.digest)
    assert info.value.step == "digest"


def test_file_round_trip(tmp_path, S2):
    c = gram_positivity_certificate(S2)
    path = c.save(tmp_path / "g.json")
    v = checker.verify_file(path)
    assert v.kind == "GramPositivity"
    loaded, digest = Certificate.load(path)
    assert loaded.payload == c.payload and digest == c.digest


def test_schema_and_garbage(tmp_path, S2):
    data = derived_ideal_certificate(S2).to_dict()
    data["schema"] = "nogo-certificate/0"
    (tmp_path / "a.json").write_text(json.dumps(data))
    with pytest.raises(SchemaVersionError):
        checker.verify_file(tmp_path / "a.json")
    (tmp_path / "b.json").write_text("{")
    with pytest.raises(ParseError):
        checker.verify_file(tmp_path / "b.json")
    assert SCHEMA == "nogo-certificate/1"


@pytest.mark.parametrize("mutate,step", [
    (lambda p: p["laplacian"][1].__setitem__(1, "5"), "derived-ideal"),
    (lambda p: p["mean_vector"].__setitem__(0, "2"), "derived-ideal"),
    (lambda p: p["preimages"][0]["g"].__setitem__(-1, "9"), "derived-ideal"),
    # rescaled su2 is still a Lie algebra, but the sphere relation stops commuting
    (lambda p: p["algebra"]["brackets"][0]["coeffs"][0].__setitem__("v", "2"), "ideal"),
])
def test_derived_ideal_tampering(S2, mutate, step):
    c = derived_ideal_certificate(S2)
    with pytest.raises(CertificateFailure) as info:
        checker.verify(edited(c, mutate))
    assert info.value.step == step


def test_decomposition_tampering(S2):
    c = bracket_decomposition(x1 * x2, S2)
    with pytest.raises(CertificateFailure):
        checker.verify(edited(c, lambda p: p["pairs"].pop()))


def test_gram_tampering(S2):
    c = gram_positivity_certificate(S2)
    with pytest.raises(CertificateFailure):
        checker.verify(edited(c, lambda p: p["gram"][0].__setitem__(0, "2")))
    with pytest.raises(CertificateFailure, match="mean"):
        checker.verify(edited(c, lambda p: p["mean"]["values"].__setitem__("x1^2", "1/2")))


def test_minimality_tampering():
    c = minimality_witness(OrbitPoint.of(__import__("nogo").builtin("su2"), [0, 0, 1]))
    with pytest.raises(CertificateFailure):
        checker.verify(edited(c, lambda p: p.update(steps=[])))


def test_malformed_payload(S2):
    c = derived_ideal_certificate(S2)
    with pytest.raises(CertificateFailure) as info:
        checker.verify(edited(c, lambda p: p.pop("laplacian")))
    assert info.value.step == "payload"


def test_probe_tampering():
    c = feasibility_probe("1", 2)
    with pytest.raises(CertificateFailure):
        checker.verify(edited(c, lambda p: p["free_images"][0][0].__setitem__(0, ["5"])))
    with pytest.raises(CertificateFailure, match="spin"):
        checker.verify(edited(c, lambda p: p["fixed_images"]["matrices"][2][0].__setitem__(0, "7i")))
    fake = edited(c, lambda p: p.update(verdict="LinearInfeasible", dual={"0": "1"}))
    with pytest.raises(CertificateFailure, match="0 = 1"):
        checker.verify(fake)


def test_residual_obstruction_tampering():
    c = feasibility_probe("1/2", 3)
    assert c.payload["verdict"] == "ResidualObstruction"
    with pytest.raises(CertificateFailure):
        checker.verify(edited(c, lambda p: p["residual"][0].__setitem__(1, "0")))


def test_cofactor_search_on_inconsistent_system():
    # t0 = 0 and t0 = 1 have no common solution: 1 = (t0 + 1 - t0) -> cofactors exist
    polys = [{(1,): QI(1)}, {(1,): QI(1), (0,): QI(-1)}]
    status, _ = _feasible_point(polys, 1)
    assert status == "infeasible"
    cof = _cofactors(polys, 1)
    total = {}
    for c, r in zip(cof, polys):
        for e1, a in c.items():
            for e2, b in r.items():
                e = (e1[0] + e2[0],)
                total[e] = total.get(e, QI(0)) + a * b
    assert {e: v for e, v in total.items() if v} == {(0,): QI(1)}


def test_feasible_point_extension():
    # t0^2 + 1 = 0 has roots +-i in Q(i); t0^2 - 2 = 0 needs a quadratic extension
    status, (mod, vals) = _feasible_point([{(2,): QI(1), (0,): QI(1)}], 1)
    assert status == "point" and mod is None and vals[0][0] * vals[0][0] == QI(-1)
    status, (mod, vals) = _feasible_point([{(2,): QI(1), (0,): QI(-2)}], 1)
    assert status == "point" and len(mod) == 3


def test_kind_values():
    assert {k.value for k in Kind} >= {"DerivedIdeal", "BracketDecomposition", "GramPositivity",
                                       "TrivialityConclusion", "FeasibilityVerdict", "AdInvariance",
                                       "Minimality"}
