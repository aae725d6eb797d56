"""Automorphism backtracking oracle, the tuple-counting cross-check, and the
restricted/central automorphism machinery."""

import numpy as np
import pytest

from pgaut.automorphism import (
    AutCapError,
    AutTablesUnavailable,
    adney_yen_check,
    automorphism_group,
    count_by_generating_tuples,
    homs_to_center,
    hom_count_abelian,
    inner_automorphisms,
    out_order,
    p_part,
    restricted_aut,
)
from pgaut.engine import enumerate_group
from pgaut.presentation import direct_product_presentation, parse_corpus
from pgaut.structure import (
    AbelianInvariants,
    StructureError,
    center,
    full_subgroup,
    second_center,
    subgroup_generated,
    trivial_subgroup,
)

# (|Aut|, |Inn|) for every builtin; |Aut| dual-verified against the
# generating-tuple count wherever the tuple space fits the cap.
AUT_ORDERS = {
    "C8": (4, 1),
    "C4xC2": (8, 1),
    "C2xC2xC2": (168, 1),
    "D8": (8, 4),
    "Q8": (24, 4),
    "C16": (8, 1),
    "C8xC2": (16, 1),
    "C4xC4": (96, 1),
    "C4xC2xC2": (192, 1),
    "C2xC2xC2xC2": (20160, 1),
    "D16": (32, 8),
    "SD16": (16, 8),
    "Q16": (32, 8),
    "M4_2": (16, 4),
    "D8xC2": (64, 4),
    "Q8xC2": (192, 4),
    "Pauli16": (48, 4),
    "C4rtC4": (32, 4),
    "C22rtC4": (32, 4),
    "C27": (18, 1),
    "C9xC3": (108, 1),
    "C3xC3xC3": (11232, 1),
    "Heis27": (432, 9),
    "M27": (54, 9),
    "C125": (100, 1),
    "C25xC5": (2000, 1),
    "C5xC5xC5": (1488000, 1),
    "Heis125": (12000, 25),
    "M125": (500, 25),
}

# Image of Aut_Z(G) (automorphisms fixing the centre pointwise) in Out(G);
# Webb's theorem says p divides each of these.
OUT_Z = {
    "D8": 2, "Q8": 6, "D16": 4, "SD16": 2, "Q16": 4, "M4_2": 2,
    "D8xC2": 8, "Q8xC2": 24, "Pauli16": 6, "C4rtC4": 8, "C22rtC4": 4,
    "Heis27": 24, "M27": 3, "Heis125": 120, "M125": 5,
}

# |Hom(G, Z(G))| with G' in the kernel.
HOMS_TO_CENTER = {
    "D8": 4, "Q8": 4, "D16": 4, "M4_2": 8,
    "Heis27": 9, "M27": 9, "Pauli16": 8, "C4rtC4": 16,
}

# Adney-Yen equality |Aut^Z(G)| = |Hom(G/G', Z(G))| on groups without an
# abelian direct factor.
ADNEY_ELIGIBLE = {
    "D8": 4, "Q8": 4, "D16": 4, "SD16": 4, "Q16": 4, "M4_2": 8,
    "Pauli16": 8, "C4rtC4": 16, "C22rtC4": 16,
    "Heis27": 9, "M27": 9, "Heis125": 25, "M125": 25,
}


@pytest.mark.parametrize("name", sorted(AUT_ORDERS))
def test_aut_order(builtin, name):
    G = builtin[name]
    want_aut, want_inn = AUT_ORDERS[name]
    assert automorphism_group(G).order == want_aut
    assert G.size // center(G).order == want_inn


@pytest.mark.parametrize("name", ["D8", "Q8", "C2xC2xC2", "Heis27", "M27", "C27"])
def test_dual_route_small(builtin, name):
    G = builtin[name]
    assert count_by_generating_tuples(G) == automorphism_group(G).order


@pytest.mark.parametrize(
    "name",
    ["C16", "C8xC2", "C4xC4", "D16", "SD16", "Q16", "M4_2",
     "D8xC2", "Q8xC2", "Pauli16", "C4rtC4", "C22rtC4"],
)
def test_dual_route_order16(builtin, name):
    G = builtin[name]
    assert count_by_generating_tuples(G) == automorphism_group(G).order


def test_tuple_count_cap(builtin):
    # 125^3 tuples exceed the default cap; the cross-check refuses rather
    # than silently subsampling
    with pytest.raises(AutCapError):
        count_by_generating_tuples(builtin["Heis125"])


def test_node_budget_cap(builtin):
    with pytest.raises(AutCapError):
        automorphism_group(builtin["D8"], node_budget=1)


def test_inner_automorphisms_are_automorphisms(builtin):
    G = builtin["D8"]
    inn = inner_automorphisms(G)
    assert inn.shape == (4, G.size)
    mult = G.mult
    for row in inn:
        assert np.array_equal(row[mult], mult[np.ix_(row, row)])


@pytest.mark.parametrize("name", ["D8", "Q8", "D16", "Heis27", "M125"])
def test_out_order(builtin, name):
    aut, inn = AUT_ORDERS[name]
    assert out_order(builtin[name]) == aut // inn


@pytest.mark.parametrize("name", sorted(OUT_Z))
def test_webb_out_z_image(builtin, name):
    G = builtin[name]
    ra = restricted_aut(G, full_subgroup(G), center(G))
    assert ra.out_image_order == OUT_Z[name]
    assert ra.out_image_order % G.p == 0


def test_restricted_aut_central_quotient(builtin):
    # trivial mod Z and trivial on Z: for D8 exactly the inner ones
    G = builtin["D8"]
    ra = restricted_aut(G, center(G), center(G))
    assert ra.order == 4
    assert ra.inner_meet_order == 4
    assert ra.out_image_order == 1


def test_restricted_aut_rejects_non_normal(builtin):
    G = builtin["D8"]
    Z = center(G)
    refl = next(
        i for i in range(1, G.size) if not Z.mask[i] and G.mult[i, i] == 0
    )
    S = subgroup_generated(G, [refl])
    assert not S.is_normal()
    with pytest.raises(StructureError):
        restricted_aut(G, S, S)


def test_restricted_aut_storage_cap(builtin):
    # C5^3 has |Aut| = 1488000, past the stored-matrix cap
    G = builtin["C5xC5xC5"]
    with pytest.raises(AutTablesUnavailable):
        restricted_aut(G, full_subgroup(G), center(G))


@pytest.mark.parametrize("name", sorted(HOMS_TO_CENTER))
def test_homs_to_center(builtin, name):
    assert homs_to_center(builtin[name]).count == HOMS_TO_CENTER[name]


def test_hom_count_abelian():
    inv = lambda p, exps: AbelianInvariants(p=p, exponents=exps, basis=())
    # |Hom(C4 x C2, C2 x C2)| = 4 * 4
    assert hom_count_abelian(inv(2, (2, 1)), inv(2, (1, 1))) == 16
    assert hom_count_abelian(inv(2, (1,)), inv(2, (2,))) == 2
    assert hom_count_abelian(inv(3, (2, 1)), inv(3, (1,))) == 9
    assert hom_count_abelian(inv(5, ()), inv(5, (1,))) == 1
    with pytest.raises(ValueError):
        hom_count_abelian(inv(2, (1,)), inv(3, (1,)))


@pytest.mark.parametrize("name", sorted(ADNEY_ELIGIBLE))
def test_adney_yen_equality(builtin, name):
    res = adney_yen_check(builtin[name])
    assert res.central_aut_order == ADNEY_ELIGIBLE[name]
    assert res.hom_count == ADNEY_ELIGIBLE[name]
    assert res.equal


@pytest.mark.parametrize("name", ["C8", "C4xC2", "D8xC2", "Q8xC2"])
def test_adney_yen_rejects_ineligible(builtin, name):
    # abelian groups and groups with an abelian direct factor are out of scope
    with pytest.raises(StructureError):
        adney_yen_check(builtin[name])


@pytest.mark.parametrize("name", ["D8", "Q8", "D16", "M4_2", "Heis27", "M27"])
def test_central_aut_meets_inner_in_z2(builtin, name):
    # |Aut^Z(G) meet Inn(G)| = |Z2(G)/Z(G)|
    G = builtin[name]
    ra = restricted_aut(G, center(G), trivial_subgroup(G))
    assert ra.inner_meet_order == second_center(G).order // center(G).order


def test_otto_bound_constructed_product(builtin):
    # D8 x C2 as built: abelian factor C2, complement D8
    aut = automorphism_group(builtin["D8xC2"]).order
    assert aut % (2 * p_part(automorphism_group(builtin["D8"]).order, 2)) == 0

    h27 = parse_corpus(_HEIS27_TEXT)[0]
    c3 = parse_corpus("group C3\nprime 3\nrank 1\n")[0]
    prod = enumerate_group(direct_product_presentation(h27, c3, "Heis27xC3"))
    aut = automorphism_group(prod).order
    assert aut == 23328
    k_aut = automorphism_group(enumerate_group(h27)).order
    assert aut % (3 * p_part(k_aut, 3)) == 0


def test_p_part():
    assert p_part(432, 3) == 27
    assert p_part(432, 2) == 16
    assert p_part(1, 2) == 1
    assert p_part(196608, 2) == 65536


def test_aut_matrix_rows_are_bijections(builtin):
    G = builtin["Q8"]
    ag = automorphism_group(G)
    assert ag.stored
    assert ag.matrix.shape == (24, G.size)
    for row in ag.matrix:
        assert sorted(row) == list(range(G.size))
        assert row[0] == 0


_HEIS27_TEXT = """\
group Heis27
prime 3
rank 3
conj g2 ^ g1 = g2*g3
"""
