import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kgroups.perms import Perm, PermGroup
from kgroups.words import (
    Presentation,
    PresentationSyntaxError,
    Word,
    commutator,
    format_presentation,
    parse_presentation,
    parse_word,
    reduce,
    triple_commutator,
)
from kgroups.abelian import FgAbelianGroup

raw_words = st.lists(st.tuples(st.sampled_from("abc"), st.sampled_from([-2, -1, 1, 2])), max_size=12)


def naive_reduce(letters):
    """Cancel adjacent inverse letters until nothing changes."""
    letters = list(letters)
    changed = True
    while changed:
        changed = False
        for i in range(len(letters) - 1):
            (g, e), (h, f) = letters[i], letters[i + 1]
            if g == h and e == -f:
                del letters[i : i + 2]
                changed = True
                break
    return letters


def expand(syllables):
    return [(g, 1 if e > 0 else -1) for g, e in syllables for _ in range(abs(e))]


@settings(max_examples=200)
@given(raw_words)
def test_reduction_is_idempotent_and_shortens(syllables):
    w = Word(syllables)
    assert reduce(w) == w
    assert reduce(reduce(w)) == reduce(w)
    assert len(w) <= sum(abs(e) for _, e in syllables)
    assert w.letters() == naive_reduce(expand(syllables))


@settings(max_examples=100)
@given(raw_words, raw_words)
def test_group_laws(x, y):
    a, b = Word(x), Word(y)
    assert (a * a.inverse()).is_identity()
    assert (a * b).inverse() == b.inverse() * a.inverse()
    # exponent sums are additive, so commutators die in the abelianization
    for g in "abc":
        assert commutator(a, b).exponent_sum(g) == 0
        assert triple_commutator(a, b).exponent_sum(g) == a.exponent_sum(g) - b.exponent_sum(g)


def test_commutator_examples():
    a, b = Word.gen("a"), Word.gen("b")
    assert str(commutator(a, b)) == "a b a^-1 b^-1"
    assert str(triple_commutator(a, b)) == "a b a b^-1 a^-1 b^-1"
    assert commutator(a, a).is_identity()
    assert triple_commutator(a, a).is_identity()
    assert str(Word.identity()) == "1"
    assert str(a ** 2 * b) == "a^2 b"


def test_evaluate_in_s3():
    p = parse_presentation("# S3\ngens: a, b\nrels: a^2, b^3, (ab)^2\n")
    a, b = Perm.from_cycles([(0, 1)], 3), Perm.from_cycles([(0, 1, 2)], 3)
    one = Perm.identity(3)
    for r in p.relators:
        assert r.evaluate({"a": a, "b": b}, one).is_identity()
    assert PermGroup(3, [a, b]).order() == 6
    assert p.abelianization() == FgAbelianGroup([2])


def test_parser_forms():
    p = parse_presentation("gens: x, y; rels: [x, y], <x, y>, x^(-3) y^2, 1")
    x, y = Word.gen("x"), Word.gen("y")
    assert p.generators == ("x", "y")
    assert p.relators == (commutator(x, y), triple_commutator(x, y), x ** -3 * y ** 2, Word())
    assert parse_word("x*y*x^-1", ["x", "y"]) == x * y * x.inverse()
    assert parse_presentation("gens: a").relators == ()


def test_round_trip():
    p = parse_presentation("gens: a, b\nrels: a^2, b^3, (a b)^2, [a, b]")
    assert parse_presentation(format_presentation(p)) == p


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("gens: a\nrels: a^0", 2, 9),
        ("gens: a\nrels: a c", 2, 9),
        ("gens: a\nrels: [a, a", 2, 12),
        ("gns: a", 1, 1),
        ("gens: a\nrels: a $", 2, 9),
    ],
)
def test_positional_errors(text, line, column):
    with pytest.raises(PresentationSyntaxError) as info:
        parse_presentation(text)
    assert (info.value.line, info.value.column) == (line, column)


def test_presentation_validation():
    with pytest.raises(ValueError):
        Presentation(("a",), (Word.gen("b"),))
    with pytest.raises(ValueError):
        Presentation(("a", "a"), ())
