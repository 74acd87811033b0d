import itertools
import json
import random

import pytest

from kgroups.abelian import FgAbelianGroup
from kgroups.kernel import (
    EElement,
    KTildeDescriptor,
    TupleElement,
    VerificationReport,
    commutator_with_symmetric,
    e_inverse,
    e_multiply,
    is_isomorphic,
    k_group_abelian,
    k_group_brute_force_order,
    k_group_finite,
    ktilde_structure,
    phi_word,
    psi_map,
    recover_quotient,
    verify_phi_relators,
)
from kgroups.perms import (
    Perm,
    abelianization,
    cyclic_group,
    dihedral_group,
    klein_four,
    named_group,
    quaternion_group,
    symmetric_group,
)
from kgroups.snd import s


def test_psi_examples():
    z6 = cyclic_group(6)
    c = z6.generators[0]
    assert psi_map(TupleElement((c, c, c)), z6) == (3,)
    assert psi_map(TupleElement((c, c, c.inverse())), z6) == (1,)
    s3 = symmetric_group(3)
    t = Perm.parse("(1 2)", 3)
    assert psi_map(TupleElement((t, t, t)), s3) == (1,)
    assert psi_map(TupleElement((t, Perm.parse("(2 3)", 3), t)), s3) == (1,)
    with pytest.raises(ValueError):
        psi_map(TupleElement((Perm.parse("(1 2)", 3),) * 3), cyclic_group(3))


@pytest.mark.parametrize("name", ["Z/2", "Z/4", "V4", "S3", "D4", "Q8"])
@pytest.mark.parametrize("n", [3, 4])
def test_k_order(name, n):
    g = named_group(name)
    k = k_group_finite(g, n)
    assert k.order() * abelianization(g).order() == g.order() ** n


def test_k_brute_force_small():
    g = symmetric_group(3)
    assert k_group_brute_force_order(g, 3) == k_group_finite(g, 3).order() == 108


def test_k_members_have_trivial_psi():
    g = dihedral_group(4)
    k = k_group_finite(g, 3)
    for x in k:
        assert all(v == 0 for v in psi_map(k.to_tuple(x), g))


def test_first_coordinate_is_onto():
    for g in (quaternion_group(), symmetric_group(3), klein_four()):
        k = k_group_finite(g, 3)
        assert {k.first_coordinate(x) for x in k} == set(g.elements())


def test_symmetric_action_preserves_k():
    g = symmetric_group(3)
    k = k_group_finite(g, 4)
    elems = k.elements()
    sample = random.Random(1).sample(sorted(elems), 40)
    for sigma in itertools.permutations(range(4)):
        sigma = Perm(sigma)
        for x in sample:
            assert k.act(sigma, x) in elems


def test_tuple_round_trip():
    g = quaternion_group()
    k = k_group_finite(g, 3)
    for x in list(k)[:20]:
        assert k.from_tuple(k.to_tuple(x)) == x


def test_semidirect_law():
    g = symmetric_group(3)
    rng = random.Random(5)
    els = sorted(g.elements())
    sigmas = [Perm(p) for p in itertools.permutations(range(3))]

    def rand():
        return EElement(TupleElement(tuple(rng.choice(els) for _ in range(3))), rng.choice(sigmas))

    one = EElement.identity(3, g.identity)
    for _ in range(100):
        x, y, z = rand(), rand(), rand()
        assert e_multiply(e_multiply(x, y), z) == e_multiply(x, e_multiply(y, z))
        assert e_multiply(x, e_inverse(x)) == one
        assert e_multiply(e_inverse(x), x) == one
        assert e_multiply(one, x) == x


def test_semidirect_example():
    a = Perm.parse("(1 2 3)", 3)
    i = Perm.identity(3)
    x = EElement(TupleElement((i, i, i)), Perm.parse("(1 2)", 3))
    y = EElement(TupleElement((a, i, i)), i)
    # (1, s)(h, 1) = (s(h), s): the entry in position 1 moves to position 2
    assert e_multiply(x, y).tuple == TupleElement((i, a, i))


def test_commutator_with_symmetric():
    # for abelian G the stabiliser of coordinate 1 kills everything except the first entry
    k = k_group_finite(cyclic_group(4), 3)
    c = commutator_with_symmetric(k, fix_first=True)
    assert k.order() // c.order() == 4
    full = commutator_with_symmetric(k, fix_first=False)
    assert full.order() == k.order()
    assert c.is_normal_in(k)


@pytest.mark.parametrize("name", ["Z/2", "Z/4", "V4", "S3", "D4", "Q8"])
def test_recover(name):
    g = named_group(name)
    q = recover_quotient(g, 3)
    assert q.order() == g.order()
    assert abelianization(q) == abelianization(g)
    assert q.exponent() == g.exponent()
    assert is_isomorphic(q, g)


def test_isomorphism_negative():
    assert not is_isomorphic(dihedral_group(4), quaternion_group())
    assert not is_isomorphic(cyclic_group(4), klein_four())
    assert not is_isomorphic(cyclic_group(6), symmetric_group(3))
    assert is_isomorphic(cyclic_group(6), named_group("Z/6"))


def test_k_abelian():
    assert k_group_abelian(FgAbelianGroup([5]), 25) == FgAbelianGroup([5] * 24)
    assert k_group_abelian(FgAbelianGroup([], 2), 6) == FgAbelianGroup([], 10)
    with pytest.raises(ValueError):
        k_group_abelian(FgAbelianGroup([2]), 2)


def test_ktilde():
    d = ktilde_structure(FgAbelianGroup([2, 2]), 3)
    assert d.h2 == FgAbelianGroup([2])
    assert d.k_part == FgAbelianGroup([2, 2, 2, 2])
    assert d.order == 32
    assert d.exact_iso is None
    c = ktilde_structure(FgAbelianGroup([7]), 5)
    assert c.h2.is_trivial() and c.exact_iso == FgAbelianGroup([7] * 4)
    z2 = ktilde_structure(FgAbelianGroup([], 2), 4)
    assert z2.order is None and z2.h2 == FgAbelianGroup([], 1)
    for desc in (d, c, z2):
        assert KTildeDescriptor.from_json(json.loads(json.dumps(desc.to_json()))) == desc


def test_phi_on_generators():
    e = phi_word(s(1), 5)
    assert e.perm == Perm.parse("(1 2)", 5) and e.tuple.is_identity()
    e2 = phi_word(s(2) * s(2), 5)
    assert e2.is_identity()


def test_verify_small_and_report_round_trip():
    rep = verify_phi_relators(5, 1)
    assert rep.all_identity and rep.relator_count == 119
    back = VerificationReport.from_json(json.loads(rep.dumps()))
    assert back == rep
    with pytest.raises(ValueError):
        verify_phi_relators(4, 1)
    with pytest.warns(UserWarning):
        assert verify_phi_relators(4, 2, allow_small_n=True).relator_count == 93


def test_commutator_tuple_is_product_of_pair_elements():
    # ([h1, h2], 1, 1) = (h1, h1^-1, 1)(h2, 1, h2^-1)(h1^-1, h1, 1)(h2^-1, 1, h2) in a free group
    from kgroups.words import Word, commutator

    h1, h2, one = Word.gen("x"), Word.gen("y"), Word()
    factors = [
        TupleElement((h1, h1.inverse(), one)),
        TupleElement((h2, one, h2.inverse())),
        TupleElement((h1.inverse(), h1, one)),
        TupleElement((h2.inverse(), one, h2)),
    ]
    product = factors[0]
    for f in factors[1:]:
        product = product * f
    assert product == TupleElement((commutator(h1, h2), one, one))
