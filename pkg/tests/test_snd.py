from math import comb, factorial

import pytest

from kgroups.kernel import phi_word
from kgroups.perms import Perm, transposition
from kgroups.snd import (
    EWord,
    SLetter,
    ecommutator,
    etriple_commutator,
    family_counts,
    generate_snd_relators,
    perm_word,
    s,
)


def expected_counts(n, d):
    """Relator counts by direct combinatorics, with sigma over all of Sym(n)."""
    completions = factorial(n - 2)
    disjoint_pairs = (n - 2) * (n - 3)  # ordered (sigma(1), sigma(2)) avoiding {1, 2}
    one_shared = 4 * (n - 2)
    return {
        "square": d,
        "identify": 1,
        "commute-tau": d * comb(n - 2, 2),
        "braid-tau": d * 2 * (n - 2),
        "commute-conj": d * d * disjoint_pairs * completions,
        "braid-conj": d * d * one_shared * completions,
    }


def test_small_counts():
    counts = family_counts(generate_snd_relators(3, 1))
    assert [counts[f] for f in ("square", "identify", "commute-tau", "braid-tau")] == [1, 1, 0, 2]


@pytest.mark.parametrize("n", [3, 4, 5])
@pytest.mark.parametrize("d", [1, 2, 3])
def test_counts_match_recount(n, d):
    assert family_counts(generate_snd_relators(n, d)) == expected_counts(n, d)


def test_disjoint_transpositions_n5():
    rels = [r for r in generate_snd_relators(5, 1) if r.family == "commute-tau"]
    taus = {r.detail.split("tau=")[1] for r in rels}
    assert taus == {"(3 4)", "(3 5)", "(4 5)"}


def test_pairs_mode_covers_every_image_pair():
    full = generate_snd_relators(5, 2, sigma_mode="full")
    pairs = generate_snd_relators(5, 2, sigma_mode="pairs")
    assert {str(r.word) for r in pairs} <= {str(r.word) for r in full}
    assert len(generate_snd_relators(7, 1)) == len(generate_snd_relators(7, 1, sigma_mode="pairs"))


def test_rejects_bad_parameters():
    with pytest.raises(ValueError):
        generate_snd_relators(2, 1)
    with pytest.raises(ValueError):
        generate_snd_relators(5, 0)


def test_eword_reduction():
    t = transposition(0, 1, 4)
    w = EWord([SLetter(1, 1), SLetter(1, -1), t, t])
    assert len(w) == 0
    assert (s(2) * s(2, -1)) == EWord()
    x = s(1) * perm_word(t) * s(2, 2)
    assert (x * x.inverse()) == EWord()


def test_negative_controls():
    n = 5
    # s_2 does not commute with a transposition meeting {1, 2}
    bad = ecommutator(s(2), perm_word(Perm.parse("(1 3)", n)))
    assert not phi_word(bad, n).is_identity()
    # two different s_i do not commute
    assert not phi_word(ecommutator(s(2), s(3)), n).is_identity()
    # s_2 and s_3 are not equal
    assert not phi_word(s(2) * s(3, -1), n).is_identity()
    # nor do s_2 and s_3 braid
    assert not phi_word(etriple_commutator(s(2), s(3)), n).is_identity()
