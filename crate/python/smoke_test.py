"""Smoke test for the pygradlca extension module.

Build and install first, e.g. `maturin develop -m crates/python/Cargo.toml`.
"""
import json

import pygradlca as g


def test_poly():
    p = g.Poly("(d + s)*(d + 2*s)", ["s"])
    assert str(p) == "d^2 + 3*s*d + 2*s^2"
    assert (p - p).is_zero()
    assert p * g.Poly("1") == p


def test_family_audits():
    cl2 = g.Algebra.family("cl2", [("b", "0")], (-3, 3))
    assert cl2.name == "CL2(b,s)"
    assert str(cl2.p(1, 2)) == "d + 3*x - s"
    assert cl2.audit_skew().passed
    assert cl2.audit_jacobi(-3, 3).passed
    assert cl2.audit_additivity(-3, 3).passed
    again = g.Algebra.from_json(cl2.to_json())
    assert again.to_json() == cl2.to_json()


def test_mutation_is_caught():
    v = json.loads(g.Algebra.family("v", [("s", "1")]).to_json())
    v["brackets"].insert(0, {"guard": "i == 1 && j == 1", "poly": "2*d + 4*x"})
    rep = g.Algebra.from_json(json.dumps(v)).audit_jacobi(-3, 3)
    assert not rep.passed
    assert any(check == "jacobi" for check, _ in rep.failures())


def test_classify_and_extend():
    ecl = g.Algebra.family("ecl", [("s", "3/5")], (-3, 3))
    st = json.loads(g.classify(ecl))
    assert st["tag"] == "ECL"
    assert st["s"] == "3/5"
    seed = {"p01": "c2", "p_neg1_1": "c1*d", "p11": "d + 2*x", "p_neg1_neg1": "d + 2*x", "p0_neg1": "-c2"}
    out = json.loads(g.extend(json.dumps(seed)))
    assert out["outcome"] == "impossible" and out["checked"]


def test_derived():
    vir = g.Algebra.family("vir", window=(0, 0))
    assert json.loads(vir.basic_lie_algebra(0, 0))["dim"] == 1
    modes = json.loads(vir.annihilation_truncation(4, 0, 0))
    assert modes["dim"] == 5


def test_errors():
    try:
        g.Algebra.family("nope")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown family accepted")


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_"):
            fn()
            print("ok", name)
