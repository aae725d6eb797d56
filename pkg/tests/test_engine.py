"""Enumeration, group arithmetic, and the consistency oracle."""

import numpy as np
import pytest

from pgaut.engine import consistency_check, enumerate_group
from pgaut.presentation import PcPresentation, Word, parse_presentation

HISTOGRAMS = {
    "C8": {1: 1, 2: 1, 4: 2, 8: 4},
    "C4xC2": {1: 1, 2: 3, 4: 4},
    "C2xC2xC2": {1: 1, 2: 7},
    "D8": {1: 1, 2: 5, 4: 2},
    "Q8": {1: 1, 2: 1, 4: 6},
    "D16": {1: 1, 2: 9, 4: 2, 8: 4},
    "SD16": {1: 1, 2: 5, 4: 6, 8: 4},
    "Q16": {1: 1, 2: 1, 4: 10, 8: 4},
    "M4_2": {1: 1, 2: 3, 4: 4, 8: 8},
    "D8xC2": {1: 1, 2: 11, 4: 4},
    "Q8xC2": {1: 1, 2: 3, 4: 12},
    "Pauli16": {1: 1, 2: 7, 4: 8},
    "C4rtC4": {1: 1, 2: 3, 4: 12},
    "C22rtC4": {1: 1, 2: 7, 4: 8},
    "Heis27": {1: 1, 3: 26},
    "M27": {1: 1, 3: 8, 9: 18},
    "C9xC3": {1: 1, 3: 8, 9: 18},
    "Heis125": {1: 1, 5: 124},
    "M125": {1: 1, 5: 24, 25: 100},
}


def test_sizes_and_identity(builtin):
    assert len(builtin) == 29
    for G in builtin.values():
        assert G.size == G.p**G.n
        assert G.identity == 0
        assert G.element_order(0) == 1


def test_order_histograms(builtin):
    for name, hist in HISTOGRAMS.items():
        assert builtin[name].order_histogram() == hist, name


def test_group_axioms_exhaustive(builtin):
    for G in builtin.values():
        if G.size > 27:
            continue
        m = G.mult.astype(np.int64)
        assert np.array_equal(m[m], m[:, m]), G.name  # associativity
        ar = np.arange(G.size)
        assert (m[ar, G.inv] == 0).all() and (m[G.inv, ar] == 0).all()


def test_latin_square_property(builtin):
    for G in builtin.values():
        m = G.mult
        ar = np.arange(G.size)
        assert (np.sort(m, axis=0) == ar[:, None]).all(), G.name
        assert (np.sort(m, axis=1) == ar[None, :]).all(), G.name


def test_generator_layout(builtin):
    D8 = builtin["D8"]
    assert list(D8.gens) == [4, 2, 1]
    assert [D8.vector(g) for g in D8.gens] == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]


def test_arithmetic_on_dihedral(builtin):
    D8 = builtin["D8"]
    s, r, z = (int(g) for g in D8.gens)
    assert D8.multiply(s, r) == 6
    assert D8.conjugate(r, s) == 3  # r^s = r z
    assert D8.commutator(r, s) == z
    assert D8.eval_word(Word(((0, 1), (1, 1)))) == 6
    assert D8.element_order(r) == 4 and D8.element_order(s) == 2
    assert list(D8.pow_table(2)) == [0, 0, 1, 1, 0, 0, 0, 0]


def test_index_word_round_trips(builtin):
    for name in ("D8", "Heis27", "M4_2"):
        G = builtin[name]
        for x in range(G.size):
            assert G.index_of(G.vector(x)) == x
            assert G.eval_word(G.word_of(x)) == x
            assert G.power(x, G.element_order(x)) == 0


def test_pow_table_matches_power(builtin):
    G = builtin["M27"]
    t = G.pow_table(3)
    assert all(int(t[x]) == G.power(x, 3) for x in range(G.size))


def test_all_builtins_consistent(builtin):
    for G in builtin.values():
        rep = consistency_check(G)
        assert rep.consistent, (G.name, rep.failures())


def test_doctored_relations_flagged():
    # g2^g1 = g3 with all squares trivial collapses g2 into g3
    bad = PcPresentation(
        name="Bad", p=2, n=3, power=(Word(), Word(), Word()),
        conj={(0, 1): Word(((2, 1),))},
    )
    rep = consistency_check(enumerate_group(bad))
    assert not rep.consistent
    assert any("associativity" in f or "Latin" in f for f in rep.failures())


def test_enumeration_matches_presentation_order():
    pres = parse_presentation("group C9\nprime 3\nrank 2\npow g1 = g2\n")
    G = enumerate_group(pres)
    assert G.size == pres.order() == 9
    assert G.order_histogram() == {1: 1, 3: 2, 9: 6}
