"""Smoke test for the `frob` extension: build it with maturin, then run this file."""

from pathlib import Path

import frob

FIXTURES = Path(__file__).resolve().parent.parent / "crates" / "core" / "fixtures"


def algebras():
    lt = frob.Algebra.lower_triangular(5, 2)
    assert (lt.dim, lt.num_points, lt.labels) == (3, 2, ["E11", "E21", "E22"])
    assert lt.mul([0, 1, 0], [1, 0, 0]) == [0, 1, 0]
    assert not lt.is_commutative() and not lt.is_local()
    f49 = frob.Algebra.field_extension(7, [-3, 0, 1])
    assert f49.is_local() and f49.is_commutative()
    try:
        frob.Algebra.field_extension(7, [-2, 0, 1])
    except frob.FrobError as e:
        assert "ReduciblePolynomial" in str(e)
    else:
        raise AssertionError("t^2 - 2 splits over F_7")


def triangular():
    m = frob.Bimodule.triangular()
    pair = m.adjoint_pair()
    r = pair.rank_report()
    assert r["rrk"] == [[1], [1]] and r["lrk"] == [[0, 1]]
    c = pair.classify()
    # points are 0-based here, unlike the 1-based CLI reports
    assert c["faithful_f"] == {"holds": False, "witness": {"Simple": 0}}
    assert not pair.equivalence()["equivalent"]
    # the two duals differ in dimension, so no certificate exists
    try:
        m.frobenius_check()
    except frob.FrobError as e:
        assert "DualsNotIsomorphic" in str(e)
    else:
        raise AssertionError("expected DualsNotIsomorphic")


def certificates():
    k = frob.Algebra.ground(5)
    delta = frob.Bimodule.diagonal(k)
    cert = delta.frobenius_check()
    assert all(cert.zigzags.values())
    c = cert.classify()
    assert c["left_localizing"]["holds"] and not c["right_localizing"]["holds"]

    f49 = frob.Algebra.field_extension(7, [-3, 0, 1])
    twisted = frob.Bimodule.twist(f49, [[1, 0], [0, 6]])
    regular = frob.Bimodule.regular(f49)
    assert not twisted.is_isomorphic(regular)
    assert twisted.tensor(twisted).is_isomorphic(regular)

    lt = frob.Algebra.lower_triangular(5, 2)
    cert = frob.Bimodule.regular(lt).frobenius_check()
    for killed in ([], [0], [1]):
        assert cert.restrict(killed)["frobenius"]
    assert cert.partition()["lambdas"] == [1]


def documents():
    for path in sorted(FIXTURES.glob("*.frob")):
        report = frob.run_document(path.read_text(), "report-all")
        assert report["expectations_met"], path.name
    try:
        frob.run_document("field 4\n")
    except ValueError as e:
        assert "modulus 4 is not prime" in str(e)
    else:
        raise AssertionError("F_4 is not a prime field")


if __name__ == "__main__":
    for check in (algebras, triangular, certificates, documents):
        check()
        print(f"ok  {check.__name__}")
