import json
from fractions import Fraction

import pytest

import mockpadic


def test_expand_g():
    c = mockpadic.coefficients("g", prec=20)
    assert c[1] == 1
    assert c[4] == -8
    assert c[7] == 20
    assert all(n % 3 == 1 for n in c)


def test_expand_eta_tokens_matches_catalog():
    assert mockpadic.expand("3:8", prec=30)["terms"] == mockpadic.expand("g", prec=30)["terms"]


def test_unknown_form_raises():
    with pytest.raises(mockpadic.InvalidInput):
        mockpadic.expand("nosuch")


def test_representative_normalization():
    phi = mockpadic.representative(1)
    assert phi["pole_order"] == 1
    assert Fraction(phi["pairing_with_g"]) == 1
    terms = dict((n, Fraction(c)) for n, c in phi["series"]["terms"])
    assert terms[-1] == -1
    assert 0 not in terms


def test_representative_rejects_pole_zero():
    with pytest.raises(mockpadic.InvalidInput):
        mockpadic.representative(0)


def test_delta_p5():
    reports = mockpadic.delta(5, m_max=3)
    assert [r["representative"] for r in reports] == ["Phi_1", "Phi_2"]
    for r in reports:
        assert r["delta_nonzero"] is True
        assert r["delta_valuation"] == 0
        assert [d["value"] for d in r["differences"]] == [3, 6, 9]
        assert r["delta"]["unit"] == "3549"


def test_delta_rejects_split_prime():
    with pytest.raises(mockpadic.InvalidInput):
        mockpadic.delta(7)


def test_suites():
    assert "hecke" in mockpadic.suite_names()
    r = mockpadic.suite("hecke")
    assert r["passed"] and r["checks"] == 10


def test_cli_in_process(tmp_path):
    code, out, _ = mockpadic.run(["--cache-dir", str(tmp_path), "expand", "g", "--prec", "8"])
    assert code == 0
    assert json.loads(out)["terms"][1] == [4, "-8"]
    code, _, err = mockpadic.run(["--no-cache", "--p", "7", "delta"])
    assert code == 2
    assert "splits" in err
