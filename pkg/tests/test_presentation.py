"""Grammar, validation, round trips, and presentation combinators."""

import pytest

from pgaut.cli import builtin_texts
from pgaut.engine import consistency_check, enumerate_group
from pgaut.presentation import (
    PcPresentation,
    PresentationError,
    Word,
    central_product_presentation,
    direct_product_presentation,
    parse_corpus,
    parse_presentation,
    serialize_presentation,
)

D8_TEXT = """\
group D8
prime 2
rank 3
pow g2 = g3
conj g2 ^ g1 = g2*g3
"""

C2_TEXT = "group C2\nprime 2\nrank 1\n"


def test_builtin_files_parse_with_expected_counts():
    counts = [len(parse_corpus(t)) for t in builtin_texts()]
    assert counts == [5, 14, 5, 5]


def test_builtin_names_unique_across_files():
    names = [p.name for t in builtin_texts() for p in parse_corpus(t)]
    assert len(names) == len(set(names)) == 29


def test_parse_relations_and_defaults():
    pres = parse_presentation(D8_TEXT)
    assert (pres.name, pres.p, pres.n) == ("D8", 2, 3)
    assert pres.power[0].is_identity
    assert pres.power[1] == Word(((2, 1),))
    assert pres.power[2].is_identity
    assert pres.conj == {(0, 1): Word(((1, 1), (2, 1)))}
    assert pres.conjugate_word(0, 2) == Word(((2, 1),))


def test_identity_word_and_zero_exponent():
    pres = parse_presentation(
        "group T\nprime 3\nrank 2\npow g1 = 1\nconj g2 ^ g1 = g2*g2^0\n"
    )
    assert pres.power[0].is_identity
    # g2*g2^0 collapses to the default relation and is dropped
    assert pres.conj == {}


def test_comments_and_blank_lines():
    text = (
        "# corpus header\n\n"
        "group A  # trailing comment\nprime 2\nrank 1\n"
        "# comment-only lines do not split a block\npow g1 = 1\n\n"
        "group B\nprime 2\nrank 1\n"
    )
    names = [p.name for p in parse_corpus(text)]
    assert names == ["A", "B"]


def test_round_trip_through_serialize():
    for text in builtin_texts():
        for pres in parse_corpus(text):
            assert parse_presentation(serialize_presentation(pres)) == pres


def test_serializer_drops_defaults():
    out = serialize_presentation(parse_presentation(D8_TEXT))
    assert "pow g1" not in out and "pow g3" not in out
    assert out.count("conj") == 1


@pytest.mark.parametrize(
    "text",
    [
        "",  # nothing at all
        "group X\nprime 2\n",  # missing rank
        "group X\nrank 1\n",  # missing prime
        "prime 2\nrank 1\n",  # missing name
        "group X\nprime 2\nrank 1\ngroup Y\n",  # header after header is fine, dup name line
        "group X\nprime 6\nrank 1\n",  # composite prime
        "group X\nprime 2\nrank 0\n",  # rank too small
        "group X\nprime 2\nrank 13\n",  # rank too large
        "group X\nprime 7\nrank 5\n",  # order above the element cap
        "group bad name\nprime 2\nrank 1\n",  # name fails the regex
        "group X\nprime 2\nrank 2\npow g1 =\n",  # empty right-hand side
        "group X\nprime 2\nrank 2\npow g1 = g3\n",  # generator out of range
        "group X\nprime 2\nrank 2\npow g1 = g1\n",  # power word not over later gens
        "group X\nprime 2\nrank 2\npow g1 = g2^2\n",  # exponent at p
        "group X\nprime 2\nrank 2\npow g1 = g2\npow g1 = g2\n",  # duplicate pow
        "group X\nprime 2\nrank 2\nconj g1 ^ g2 = g1\n",  # needs i < j
        "group X\nprime 2\nrank 2\nconj g2 ^ g2 = g2\n",  # i = j
        "group X\nprime 2\nrank 3\nconj g3 ^ g1 = g2\n",  # conj word below g_j
        "group X\nprime 2\nrank 2\nconj g2 ^ g1 = g2\nconj g2 ^ g1 = g2\n",
        "group X\nprime 2\nrank 2\nspam g1 = g2\n",  # unknown directive
        "group X\nprime 2\nrank 2\npow g1 = g2 g2\n",  # missing * separator
        "group X\nprime 2\nrank 1\n\ngroup X\nprime 2\nrank 1\n",  # dup names
        "pow g1 = g2\ngroup X\nprime 2\nrank 2\n",  # relation before header
    ],
)
def test_malformed_inputs_rejected(text):
    with pytest.raises(PresentationError):
        parse_corpus(text)


def test_error_carries_line_number():
    with pytest.raises(PresentationError) as exc:
        parse_presentation("group X\nprime 2\nrank 2\npow g1 =\n")
    assert exc.value.line == 4


def test_parse_presentation_wants_exactly_one_block():
    with pytest.raises(PresentationError):
        parse_presentation(D8_TEXT + "\n" + C2_TEXT)


def test_constructor_validates_power_word_count():
    with pytest.raises(PresentationError):
        PcPresentation(name="X", p=2, n=2, power=(Word(),))


def test_rank_twelve_boundary_is_accepted():
    PcPresentation(name="X", p=2, n=12, power=(Word(),) * 12)


def test_direct_product_matches_builtin(builtin):
    d8 = parse_presentation(D8_TEXT)
    c2 = parse_presentation(C2_TEXT)
    prod = enumerate_group(direct_product_presentation(d8, c2, "D8xC2.made"))
    assert consistency_check(prod).consistent
    assert prod.order_histogram() == builtin["D8xC2"].order_histogram()


def test_direct_product_needs_common_prime():
    c2 = parse_presentation(C2_TEXT)
    c3 = parse_presentation("group C3\nprime 3\nrank 1\n")
    with pytest.raises(PresentationError):
        direct_product_presentation(c2, c3, "bad")


def test_central_product_gives_pauli_group(builtin):
    d8 = parse_presentation(D8_TEXT)
    q8 = parse_presentation(
        "group Q8\nprime 2\nrank 3\npow g1 = g3\npow g2 = g3\nconj g2 ^ g1 = g2*g3\n"
    )
    c4 = parse_presentation("group C4\nprime 2\nrank 2\npow g1 = g2\n")
    za = Word(((1, 1),))
    for b in (d8, q8):
        cp = enumerate_group(central_product_presentation(b, c4, za, "CP"))
        assert consistency_check(cp).consistent
        assert cp.size == 16
        assert cp.order_histogram() == builtin["Pauli16"].order_histogram()


def test_central_product_rejects_bad_identifications():
    c4 = parse_presentation("group C4\nprime 2\nrank 2\npow g1 = g2\n")
    c9 = parse_presentation("group C9\nprime 3\nrank 2\npow g1 = g2\n")
    twisted = parse_presentation(
        "group T27\nprime 3\nrank 3\nconj g3 ^ g1 = g3^2\n"
    )
    d8 = parse_presentation(D8_TEXT)
    with pytest.raises(PresentationError):  # non-central last generator
        central_product_presentation(twisted, c9, Word(((1, 1),)), "bad")
    with pytest.raises(PresentationError):  # multi-syllable identification
        central_product_presentation(d8, c4, Word(((0, 1), (1, 1))), "bad")
    with pytest.raises(PresentationError):  # identified element of order 4
        central_product_presentation(d8, c4, Word(((0, 1),)), "bad")
    with pytest.raises(PresentationError):  # prime mismatch
        central_product_presentation(d8, c9, Word(((1, 1),)), "bad")
