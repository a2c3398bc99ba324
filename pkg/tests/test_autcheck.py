import pytest

from nakajima_curves.modules.autcheck import (
    TowerAut,
    aut_compose,
    construct_main_family,
    dihedral_relations,
    find_good_k,
    group_structure,
    identity_aut,
    is_automorphism,
    main_family_with_data,
    rho_psi,
    setup_torsion,
    verify_lemmas,
)
from nakajima_curves.modules.funcfield import STANDARD_D_IDENTITIES, BaseMap, FFElem, WittData, witt_identities


def test_main_family_invariants(main_family):
    report, _ = main_family
    assert report["status"] == "success", report["failed"]
    assert report["genus"] == 9
    assert report["prank"] == 9
    assert report["iota_fixed"] == 8
    assert report["group_order"] == 32
    assert report["group_type"] == "dihedral"
    assert report["rho_is_automorphism"] and report["psi_is_automorphism"]
    assert report["nakajima_equality"]
    assert report["k"] % 2 == 1


def test_identities_hold(main_family):
    report, _ = main_family
    assert report["identities"] == {name: True for name in report["identities"]}


def test_dihedral_relations(main_family):
    _, W = main_family
    rho, psi = rho_psi(W)
    relations = dihedral_relations(rho, psi, W.action)
    assert relations == {name: True for name in relations}


def test_identity_and_non_automorphism(main_family):
    _, W = main_family
    action = W.action
    ident = identity_aut(action)
    rho, _ = rho_psi(W)
    assert aut_compose(ident, rho, action) == rho
    assert aut_compose(rho, ident, action) == rho
    ok, _ = is_automorphism(ident, W.e, action)
    assert ok
    # g alone, without the correcting shift d, does not lift
    bare = TowerAut(BaseMap(2, 0), FFElem.zero(action.curve))
    ok, residual = is_automorphism(bare, W.e, action)
    assert not ok
    assert residual == W.a


def test_cyclic_subgroup(main_family):
    _, W = main_family
    rho, _ = rho_psi(W)
    desc = group_structure([rho], W.action)
    assert desc.order == 16
    assert desc.group_type == "cyclic"
    assert desc.element_orders.get(16) == 8


def test_wrong_k_rejected(main_family):
    _, W = main_family
    with pytest.raises(ValueError):
        WittData(W.action, 2)
    with pytest.raises(ValueError):
        WittData(W.action, 1, "other")


def test_setup_torsion_validates_n():
    with pytest.raises(ValueError):
        setup_torsion(4)
    with pytest.raises(ValueError):
        setup_torsion(12)


def test_verify_lemmas(main_family):
    _, W = main_family
    claims = verify_lemmas(W.action, W.k, random_combinations=20)
    assert claims == {name: True for name in claims}


@pytest.mark.slow
def test_main_family_n16():
    report = construct_main_family(16)
    assert report["status"] == "success"
    assert (report["genus"], report["prank"]) == (17, 17)
    assert report["group_order"] == 64
    assert report["group_type"] == "dihedral"


def test_partial_sum_identities_through_translation(main_family):
    _, W = main_family
    checks = witt_identities(W)
    assert checks["partial_sums_shift"]
    assert checks["partial_sums_difference"]


@pytest.fixture(scope="module")
def alternative_family(main_family):
    _, W = main_family
    return main_family_with_data(8, k=7, d_variant="alternative", action=W.action)


def test_alternative_d_identities(alternative_family):
    report, _ = alternative_family
    assert report["status"] == "success", report["failed"]
    assert report["identities"]["phi_d_is_d_plus_1"]
    assert report["identities"]["phi_c_is_g_c"]
    assert "e_is_square" not in report["identities"]
    assert report["identities_not_computed"] == list(STANDARD_D_IDENTITIES)


def test_alternative_d_group_is_semidihedral(alternative_family):
    report, W = alternative_family
    rho, psi = rho_psi(W)
    relations = dihedral_relations(rho, psi, W.action, "alternative")
    assert relations == {name: True for name in relations}
    assert "psi^2 = iota" in relations
    assert "psi^2 = 1" not in relations
    assert report["group_order"] == 32
    assert report["group_type"] == "semidihedral"


def test_alternative_d_needs_k_minus_one(main_family):
    _, W = main_family
    with pytest.raises(ValueError):
        WittData(W.action, 1, "alternative")


def test_with_generator(main_family):
    _, W = main_family
    action = W.action
    assert action.with_generator(1) is action
    moved = action.with_generator(3)
    assert moved.P0 == action.point(3)
    assert moved.order == action.order
    with pytest.raises(ValueError):
        action.with_generator(2)


def test_torsion_n16_without_slow_marker():
    action = setup_torsion(16)
    assert action.order == 32
    assert not (action.P0 * 16).is_infinity()
    assert (action.P0 * 32).is_infinity()
    k, _ = find_good_k(action)
    W = WittData(action, k)
    act = W.action
    assert act.g(W.e) + W.e == W.a
    assert act.phi(W.d) == W.d
