import pytest

from nakajima_curves.reproduce.census import EXAMPLES, Claim, CensusReport, census, run_census


@pytest.fixture(scope="module")
def hyperelliptic_q4():
    return census("6.3", q=4)


@pytest.fixture(scope="module")
def product_q4():
    return census("6.4", q=4)


@pytest.fixture(scope="module")
def bielliptic_k1():
    return census("6.1a")


def _status(rep: CensusReport, name: str) -> str:
    return rep.claim(name).status


def test_report_bookkeeping():
    rep = CensusReport("x", claims=[Claim("a", 1, 1, "matched"), Claim("b", 1, 2, "mismatched")])
    assert rep.counts()["matched"] == 1
    assert rep.counts()["mismatched"] == 1
    assert rep.has_mismatch()
    assert rep.to_json()["claims"][1] == {
        "claim": "b",
        "expected": 1,
        "computed": 2,
        "status": "mismatched",
        "detail": "",
    }
    with pytest.raises(KeyError):
        rep.claim("c")


def test_unknown_example():
    with pytest.raises(ValueError):
        census("7.1")


def test_hyperelliptic_family(hyperelliptic_q4):
    rep = hyperelliptic_q4
    assert _status(rep, "sum of 1/(X + a) = 1/(X^q + X)") == "matched"
    # the curve has genus q, one more than printed
    assert rep.claim("genus (Hurwitz)").computed == 4
    assert _status(rep, "genus (Hurwitz)") == "mismatched"
    assert _status(rep, "plane genus = Hurwitz genus") == "matched"
    assert rep.claim("genus (plane model)").computed == 4
    assert _status(rep, "group order") == "matched"
    assert _status(rep, "group type") == "matched"
    assert _status(rep, "|S| = 2g + 2") == "mismatched"
    assert rep.has_mismatch()


def test_product_family(product_q4):
    rep = product_q4
    assert _status(rep, "X_inf ordinary of multiplicity q") == "matched"
    assert _status(rep, "Y_inf ordinary of multiplicity q") == "matched"
    assert _status(rep, "no affine singular point") == "matched"
    assert rep.claim("genus (plane model)").computed == 9
    assert _status(rep, "genus (Y^q + Y = 1/(X^q + X))") == "matched"
    assert _status(rep, "phi and rho preserve C") == "matched"
    assert rep.claim("group order").computed == 32
    assert rep.claim("central involutions").computed == 3
    assert _status(rep, "|S| = 2(g - 1) + 4q - 2") == "mismatched"
    assert _status(rep, "Nakajima equality only for q = 4") == "matched"
    assert _status(rep, "u = phi[1,1] fixes no place") == "matched"
    # rho fixes the points of C on the diagonal X = Y
    assert _status(rep, "no non-trivial element fixes a place") == "mismatched"
    assert rep.findings["fixed_places"]["rho"] > 0


def test_bielliptic_k1_claims(bielliptic_k1):
    rep = bielliptic_k1
    assert all(c.status != "error" for c in rep.claims), [c.to_json() for c in rep.claims]
    for name in ("genus", "2-rank", "iota fixes n places", "group order", "group type", "|S| = 4(g - 1)"):
        assert _status(rep, name) == "matched", name
    assert rep.claim("group type").computed == "dihedral"


def test_bielliptic_k1_printed_forms(bielliptic_k1):
    rep = bielliptic_k1
    assert _status(rep, "printed plane model (bielliptic_k1)") == "matched"
    assert rep.params["mu_exp"] in (1, 7)
    assert rep.params["generator_multiple"] in (1, 3, 5, 7)
    assert rep.findings["golden_match"]["exponent"] is not None
    assert _status(rep, "printed e_1") == "matched"
    assert _status(rep, "plane genus = Hurwitz genus") == "matched"


@pytest.mark.slow
def test_bielliptic_alternative_d():
    rep = census("6.1b")
    assert all(c.status != "error" for c in rep.claims)
    # <rho, psi> is semidihedral once psi^2 = iota
    assert rep.claim("group type").computed == "semidihedral"
    assert _status(rep, "group type") == "mismatched"
    assert _status(rep, "group order") == "matched"
    assert _status(rep, "e_is_square") == "not-computed"

def test_semidihedral_quotient():
    rep = census("6.6q")
    assert _status(rep, "f3 = f1 + f2") == "matched"
    assert _status(rep, "genus of Z^2 + (f1 + f2)Z + f4 = 0") != "error"
    for name in ("genus", "2-rank", "automorphism group semidihedral of order 32"):
        assert _status(rep, name) == "not-computed"


def test_run_census_keeps_example_order():
    reports = run_census(["6.6q", "6.3"], q=4, workers=1)
    assert [r.example for r in reports] == ["6.3", "6.6q"]
    assert reports[0].params["q"] == 4


@pytest.mark.slow
def test_inductive_chain():
    rep = census("6.5")
    assert rep.claim("F16-rational points of X/<u>").computed == 28
    assert rep.claim("short orbits of S/<u> on rational points").computed == [8, 4]
    assert rep.claim("genus of X/<u>").computed == 5
    assert rep.claim("quartic genus").computed == 3
    assert rep.claim("hyperelliptic genus").computed == 3
    assert rep.claim("hyperelliptic 2-rank").computed == 3


@pytest.mark.slow
def test_full_census_completes():
    reports = run_census(workers=1)
    assert [r.example for r in reports] == list(EXAMPLES)
    for rep in reports:
        assert all(c.name != "run" for c in rep.claims), rep.example
