from fractions import Fraction

import pytest

import hopfcyc


def test_point_cyclic_dims():
    src = hopfcyc.fixture_path("trivial")
    assert hopfcyc.cohomology(src, cap=4) == [1, 0, 1, 0, 1]
    assert hopfcyc.cohomology(src, cap=4, mode="hochschild") == [1, 0, 0, 0, 0]


def test_validate_flags():
    reps = {r["object"]: r for r in hopfcyc.validate(hopfcyc.fixture_path("kz2_twisted"))}
    assert reps["sayd g_sign"]["pass"]
    assert reps["sayd g_sign"]["flags"]["stable"] is False
    broken = {r["object"]: r for r in hopfcyc.validate(hopfcyc.fixture_path("coalgebras"))}
    assert not broken["coalgebra broken"]["pass"]


def test_weil_point():
    d = hopfcyc.weil(hopfcyc.fixture_path("trivial"), max_degree=7, n=1)
    assert d["full"] == [0] * 6
    assert d["tower"] == [0, 0, 1, 0, 1, 0]


def test_factors():
    f = hopfcyc.comparison_factors([(0, 0), (0, 1), (0, 2)])
    assert [x["measured"] for x in f] == [Fraction(1), Fraction(1, 2), Fraction(1, 3)]
    assert all(x["matches"] for x in f)


def test_run_matches_cli_report():
    code, rep = hopfcyc.run("pair", hopfcyc.fixture_path("trivial"), max_degree=5)
    assert code == 0
    assert rep["scalars"]["factor m=0 n=1"] == "1/2"
    code2, rep2 = hopfcyc.run("pair", hopfcyc.fixture_path("trivial"), max_degree=5)
    assert rep == rep2


def test_errors():
    with pytest.raises(hopfcyc.HopfcycError):
        hopfcyc.validate("{ not json")
    code, _ = hopfcyc.run("validate", "/nonexistent.json")
    assert code == 2
