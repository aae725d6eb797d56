"""Subgroup machinery against an independently frozen structural table."""

import numpy as np
import pytest

from pgaut.structure import (
    StructureError,
    abelian_direct_factor_split,
    abelian_invariants,
    agemo,
    center,
    center_of_subgroup,
    central_product_decomposition,
    centralizer,
    derived_subgroup,
    frattini,
    intersect,
    is_abelian_group,
    maximal_subgroups,
    omega1,
    quotient,
    second_center,
    subgroup_as_group,
    subgroup_generated,
    trivial_subgroup,
)

# name -> (|Z|, |G'|, |Phi|, |Z2|, abelianization exponents, #maximals,
#          |Omega1(Z)|, |agemo1|)
TABLE = {
    "C8": (8, 1, 4, 8, (3,), 1, 2, 4),
    "C4xC2": (8, 1, 2, 8, (2, 1), 3, 4, 2),
    "C2xC2xC2": (8, 1, 1, 8, (1, 1, 1), 7, 8, 1),
    "D8": (2, 2, 2, 8, (1, 1), 3, 2, 2),
    "Q8": (2, 2, 2, 8, (1, 1), 3, 2, 2),
    "C16": (16, 1, 8, 16, (4,), 1, 2, 8),
    "C8xC2": (16, 1, 4, 16, (3, 1), 3, 4, 4),
    "C4xC4": (16, 1, 4, 16, (2, 2), 3, 4, 4),
    "C4xC2xC2": (16, 1, 2, 16, (2, 1, 1), 7, 8, 2),
    "C2xC2xC2xC2": (16, 1, 1, 16, (1, 1, 1, 1), 15, 16, 1),
    "D16": (2, 4, 4, 4, (1, 1), 3, 2, 4),
    "SD16": (2, 4, 4, 4, (1, 1), 3, 2, 4),
    "Q16": (2, 4, 4, 4, (1, 1), 3, 2, 4),
    "M4_2": (4, 2, 4, 16, (2, 1), 3, 2, 4),
    "D8xC2": (4, 2, 2, 16, (1, 1, 1), 7, 4, 2),
    "Q8xC2": (4, 2, 2, 16, (1, 1, 1), 7, 4, 2),
    "Pauli16": (4, 2, 2, 16, (1, 1, 1), 7, 2, 2),
    "C4rtC4": (4, 2, 4, 16, (2, 1), 3, 4, 4),
    "C22rtC4": (4, 2, 4, 16, (2, 1), 3, 4, 4),
    "C27": (27, 1, 9, 27, (3,), 1, 3, 9),
    "C9xC3": (27, 1, 3, 27, (2, 1), 4, 9, 3),
    "C3xC3xC3": (27, 1, 1, 27, (1, 1, 1), 13, 27, 1),
    "Heis27": (3, 3, 3, 27, (1, 1), 4, 3, 1),
    "M27": (3, 3, 3, 27, (1, 1), 4, 3, 3),
    "C125": (125, 1, 25, 125, (3,), 1, 5, 25),
    "C25xC5": (125, 1, 5, 125, (2, 1), 6, 25, 5),
    "C5xC5xC5": (125, 1, 1, 125, (1, 1, 1), 31, 125, 1),
    "Heis125": (5, 5, 5, 125, (1, 1), 6, 5, 1),
    "M125": (5, 5, 5, 125, (1, 1), 6, 5, 5),
}


def test_structural_table(builtin):
    assert set(TABLE) == set(builtin)
    for name, want in TABLE.items():
        G = builtin[name]
        der = derived_subgroup(G)
        abq = G if der.is_trivial else quotient(G, der).group
        got = (
            center(G).order,
            der.order,
            frattini(G).order,
            second_center(G).order,
            abelian_invariants(abq).exponents,
            len(maximal_subgroups(G)),
            omega1(center(G)).order,
            agemo(G, 1).order,
        )
        assert got == want, name


def test_frattini_is_intersection_of_maximals(builtin):
    for G in builtin.values():
        maxes = maximal_subgroups(G)
        mask = np.ones(G.size, dtype=bool)
        for M in maxes:
            mask &= M.mask
        assert np.array_equal(frattini(G).mask, mask), G.name


def test_frattini_is_derived_times_powers(builtin):
    for G in builtin.values():
        gens = list(derived_subgroup(G).gens) + list(agemo(G, 1).gens)
        span = subgroup_generated(G, [int(g) for g in gens])
        assert span == frattini(G), G.name


def test_subgroup_sandwiches(builtin):
    for G in builtin.values():
        Z = center(G)
        assert derived_subgroup(G) <= frattini(G), G.name
        assert Z <= second_center(G), G.name
        assert Z <= centralizer(G, Z), G.name
        assert centralizer(G, trivial_subgroup(G)).order == G.size


def test_maximal_count_matches_generator_rank(builtin):
    for G in builtin.values():
        d = len(abelian_invariants(quotient(G, frattini(G)).group).exponents)
        assert len(maximal_subgroups(G)) == (G.p**d - 1) // (G.p - 1), G.name


def test_maximals_are_index_p_and_normal(builtin):
    for name in ("D8", "M27", "Pauli16", "Heis125"):
        G = builtin[name]
        for M in maximal_subgroups(G):
            assert M.order * G.p == G.size
            assert M.is_normal()
            assert frattini(G) <= M


def test_quotient_histograms(builtin):
    D8 = builtin["D8"]
    q = quotient(D8, center(D8)).group
    assert q.order_histogram() == {1: 1, 2: 3}
    for name in ("D16", "SD16", "Q16"):
        G = builtin[name]
        q = quotient(G, center(G)).group
        assert q.order_histogram() == builtin["D8"].order_histogram(), name
    hq = quotient(builtin["Heis27"], center(builtin["Heis27"])).group
    assert hq.order_histogram() == {1: 1, 3: 8}


def test_quotient_map_is_homomorphism(builtin):
    G = builtin["M4_2"]
    qm = quotient(G, derived_subgroup(G))
    pi = qm.proj
    assert np.array_equal(pi[G.mult], qm.group.mult[np.ix_(pi, pi)])


def test_subgroup_as_group_embedding(builtin):
    G = builtin["M4_2"]
    emb = subgroup_as_group(center(G))
    assert emb.group.order_histogram() == {1: 1, 2: 1, 4: 2}
    back = emb.to_parent[emb.from_parent[center(G).elements()]]
    assert np.array_equal(back, center(G).elements())


def test_centralizer_of_rotation(builtin):
    D8 = builtin["D8"]
    r = int(D8.gens[1])
    R = subgroup_generated(D8, [r])
    assert R.order == 4
    assert centralizer(D8, R) == R
    assert center_of_subgroup(R).order == 4


def test_abelian_invariants_reject_nonabelian(builtin):
    with pytest.raises(StructureError):
        abelian_invariants(builtin["D8"])


def test_abelian_invariants_orders(builtin):
    inv = abelian_invariants(builtin["C8xC2"])
    assert inv.exponents == (3, 1)
    assert tuple(inv.orders) == (8, 2)


def test_omega_and_agemo_on_homocyclic(builtin):
    G = builtin["C4xC4"]
    assert omega1(center(G)).order == 4
    assert agemo(G, 1).order == 4
    assert agemo(G, 2).order == 1


def test_abelian_direct_factor_split(builtin):
    for name in ("D8", "Q8", "D16", "M27", "Heis27", "Pauli16", "C4rtC4"):
        assert abelian_direct_factor_split(builtin[name]) is None, name
    for name in ("D8xC2", "Q8xC2"):
        H, K = abelian_direct_factor_split(builtin[name])
        assert (H.order, K.order) == (2, 8), name
        assert is_abelian_group(subgroup_as_group(H).group)
        assert intersect(H, K).order == 1
    H, K = abelian_direct_factor_split(builtin["C4xC2"])
    assert (H.order, K.order) == (8, 1)


def test_central_product_decomposition(builtin):
    for name, r_order, s_order in (
        ("D8", 8, 2), ("Q8", 8, 2), ("Heis27", 27, 3),
        ("M27", 27, 3), ("Pauli16", 16, 4), ("D8xC2", 16, 4),
    ):
        G = builtin[name]
        data = central_product_decomposition(G)
        assert data is not None and data.error is None, name
        assert (data.R.order, data.S.order) == (r_order, s_order), name
        Z = center(G)
        assert intersect(data.R, data.S) == Z
        assert centralizer(G, data.R) == data.S
        assert center_of_subgroup(data.R) == Z
    for name in ("D16", "SD16", "Q16"):
        assert central_product_decomposition(builtin[name]) is None, name
