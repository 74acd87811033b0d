import itertools
import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from kgroups.abelian import (
    AbHom,
    FgAbelianGroup,
    IntMatrix,
    cokernel,
    determinant,
    direct_power,
    exterior_square,
    format_abelian,
    hom_image,
    hom_kernel,
    integer_kernel,
    parse_abelian,
    parse_matrix,
    quotient_by_diagonal,
    smith_normal_form,
)
from oracles import determinantal_divisors_diagonal, finite_abelian_matches, vector_scale

small_matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(
            st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r
        )
    )
)


def check_snf(rows):
    m = IntMatrix.from_rows(rows)
    u, s, v = smith_normal_form(m)
    assert u @ m @ v == s
    assert abs(determinant(u)) == 1 and abs(determinant(v)) == 1
    for i in range(s.rows):
        for j in range(s.cols):
            if i != j:
                assert s[i, j] == 0
    diag = s.diagonal_entries()
    assert all(x >= 0 for x in diag)
    nonzero = [x for x in diag if x]
    assert diag[: len(nonzero)] == nonzero
    for a, b in zip(nonzero, nonzero[1:]):
        assert b % a == 0
    return nonzero


def test_snf_example():
    u, s, v = smith_normal_form(parse_matrix("2,4;6,8"))
    assert s.diagonal_entries() == [2, 4]


def test_snf_zero_and_identity():
    assert check_snf([[0, 0], [0, 0]]) == []
    assert check_snf([[1, 0, 0], [0, 1, 0]]) == [1, 1]


@settings(max_examples=300, deadline=None)
@given(small_matrices)
def test_snf_properties(rows):
    check_snf(rows)


@settings(max_examples=150, deadline=None)
@given(small_matrices)
def test_snf_matches_minor_gcds(rows):
    assert check_snf(rows) == determinantal_divisors_diagonal(rows)


def test_determinant_against_sympy():
    rng = random.Random(7)
    for _ in range(200):
        n = rng.randint(1, 5)
        rows = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
        assert determinant(IntMatrix.from_rows(rows)) == int(sympy.Matrix(rows).det())


def test_integer_kernel():
    m = parse_matrix("1,2,3;4,5,6")
    k = integer_kernel(m)
    assert k.cols == 1
    assert (m @ k).is_zero()
    assert [abs(r[0]) for r in k.to_rows()] == [1, 2, 1]


def test_group_normalisation():
    a = FgAbelianGroup([2, 4, 3], 1)
    assert a.torsion == (2, 12)
    assert a.free_rank == 1
    assert FgAbelianGroup([6]) == FgAbelianGroup([2, 3])
    assert FgAbelianGroup([1, 1]) == FgAbelianGroup.trivial()
    assert FgAbelianGroup([0, 5]) == FgAbelianGroup([5], 1)
    assert a.order() is None
    assert FgAbelianGroup([2, 4]).order() == 8
    assert FgAbelianGroup([2, 4]).exponent() == 4


@pytest.mark.parametrize(
    "group, text",
    [
        (FgAbelianGroup(), "1"),
        (FgAbelianGroup([3]), "Z/3"),
        (FgAbelianGroup([], 1), "Z"),
        (FgAbelianGroup([5] * 23, 10), "(Z/5)^23 + Z^10"),
        (FgAbelianGroup([2, 4]), "Z/2 + Z/4"),
    ],
)
def test_format_and_parse(group, text):
    assert format_abelian(group) == text
    assert parse_abelian(text) == group
    assert FgAbelianGroup.from_json(group.to_json()) == group


def test_cokernel_examples():
    assert cokernel(parse_matrix("2,4;6,8")) == FgAbelianGroup([2, 4])
    assert cokernel(parse_matrix("2,0;0,0")) == FgAbelianGroup([2], 1)
    assert cokernel(parse_matrix("1,1")) == FgAbelianGroup.trivial()
    assert cokernel(parse_matrix("1;1")) == FgAbelianGroup([], 1)


def _cokernel_brute(rows):
    """Enumerate Z^r / im(M) inside (Z/D)^r for D = |det M|; M square, non-singular."""
    n = len(rows)
    big = abs(int(sympy.Matrix(rows).det()))
    lattice = set()
    frontier = [tuple([0] * n)]
    lattice.add(frontier[0])
    cols = [[rows[i][j] % big for i in range(n)] for j in range(n)]
    cols += [[big if i == k else 0 for i in range(n)] for k in range(n)]
    while frontier:
        x = frontier.pop()
        for c in cols:
            y = tuple((a + b) % big for a, b in zip(x, c))
            if y not in lattice:
                lattice.add(y)
                frontier.append(y)
    reps = {}
    for x in itertools.product(range(big), repeat=n):
        key = min(tuple((a - b) % big for a, b in zip(x, l)) for l in lattice)
        reps[key] = True
    return list(reps), big, lattice


def test_cokernel_against_enumeration():
    rng = random.Random(3)
    done = 0
    while done < 25:
        rows = [[rng.randint(-4, 4) for _ in range(2)] for _ in range(2)]
        det = abs(int(sympy.Matrix(rows).det()))
        if det == 0 or det > 12:
            continue
        reps, big, lattice = _cokernel_brute(rows)
        assert len(reps) == det
        g = cokernel(IntMatrix.from_rows(rows))
        assert g.order() == det

        def scale(k, x):
            y = tuple((k * a) % big for a in x)
            return min(tuple((a - b) % big for a, b in zip(y, l)) for l in lattice)

        zero = tuple([0] * 2)
        assert finite_abelian_matches(reps, scale, zero, g.torsion)
        done += 1


def test_hom_kernel_and_image():
    # Z/4 -> Z/2, 1 -> 1
    f = AbHom(FgAbelianGroup([4]), FgAbelianGroup([2]), IntMatrix.from_rows([[1]]))
    assert hom_kernel(f) == FgAbelianGroup([2])
    assert hom_image(f) == FgAbelianGroup([2])
    # Z^2 -> Z, (x, y) -> x + y
    g = AbHom(FgAbelianGroup([], 2), FgAbelianGroup([], 1), IntMatrix.from_rows([[1, 1]]))
    assert hom_kernel(g) == FgAbelianGroup([], 1)
    assert hom_image(g) == FgAbelianGroup([], 1)


def test_hom_rejects_ill_defined_map():
    with pytest.raises(ValueError):
        AbHom(FgAbelianGroup([2]), FgAbelianGroup([3]), IntMatrix.from_rows([[1]]))


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.sampled_from([2, 3, 4, 6]), min_size=1, max_size=3),
    st.sampled_from([2, 3, 4, 6, 12]),
    st.data(),
)
def test_kernel_times_image_is_source(src_orders, tgt, data):
    source = FgAbelianGroup(src_orders)
    # a generator of order d may only go to multiples of tgt / gcd(d, tgt)
    from math import gcd

    row = []
    for d in source.torsion:
        step = tgt // gcd(d, tgt)
        row.append(step * data.draw(st.integers(0, tgt)))
    f = AbHom(source, FgAbelianGroup([tgt]), IntMatrix.from_rows([row], source.ngens))
    assert hom_kernel(f).order() * hom_image(f).order() == source.order()


def test_exterior_square():
    assert exterior_square(FgAbelianGroup([2, 4])) == FgAbelianGroup([2])
    assert exterior_square(FgAbelianGroup([], 2)) == FgAbelianGroup([], 1)
    assert exterior_square(FgAbelianGroup([5])) == FgAbelianGroup.trivial()
    assert exterior_square(FgAbelianGroup([2, 2, 2])) == FgAbelianGroup([2, 2, 2])
    assert exterior_square(FgAbelianGroup([3], 1)) == FgAbelianGroup([3])


def test_quotient_by_diagonal_examples():
    assert quotient_by_diagonal(FgAbelianGroup([6]), 3, sub_order=3) == FgAbelianGroup([2, 6, 6])
    assert quotient_by_diagonal(FgAbelianGroup([], 1), 2, sub_order=2) == FgAbelianGroup([2], 1)
    with pytest.raises(ValueError):
        quotient_by_diagonal(FgAbelianGroup([6]), 1, sub_order=3)


def test_quotient_by_diagonal_brute_force():
    # (Z/6)^3 / <(2, 2, 2)>
    mods = (6, 6, 6)
    sub = {tuple((k * 2) % 6 for _ in range(3)) for k in range(3)}

    def key(x):
        return min(tuple((a - b) % 6 for a, b in zip(x, h)) for h in sub)

    cosets = {key(x) for x in itertools.product(range(6), repeat=3)}
    scale = lambda k, x: key(vector_scale(mods)(k, x))
    expected = quotient_by_diagonal(FgAbelianGroup([6]), 3, sub_order=3)
    assert finite_abelian_matches(cosets, scale, key((0, 0, 0)), expected.torsion)


def test_direct_power():
    assert direct_power(FgAbelianGroup([5]), 24) == FgAbelianGroup([5] * 24)
    assert direct_power(FgAbelianGroup([2], 1), 3) == FgAbelianGroup([2, 2, 2], 3)
