"""The groups K(G, n), E(G, n) = K(G, n) x| Sym(n) and K~(G, n).

``K(G, n)`` is the kernel of ``G^n -> G^ab``, ``(g_1..g_n) -> g_1...g_n mod [G,G]``.
For a finite permutation group ``G`` it is realised as a permutation group on
``n`` disjoint copies of the domain of ``G``.  ``Sym(n)`` acts by permuting
coordinates: ``sigma`` moves the entry in position ``i`` to ``sigma(i)``.
"""

from __future__ import annotations

import itertools
import json
import warnings
from dataclasses import dataclass, field
from math import prod
from typing import Any, Sequence

from .abelian import FgAbelianGroup, direct_power, exterior_square
from .perms import (
    AbelianizationMap,
    Perm,
    PermGroup,
    abelianization,
    quotient_group,
    subgroup_from_candidates,
    transposition,
)
from .snd import EWord, SLetter, generate_snd_relators
from .words import Word

MIN_N = 3


def _check_n(n: int) -> None:
    if n < MIN_N:
        raise ValueError(f"n must be at least {MIN_N}, got {n}")


@dataclass(frozen=True)
class TupleElement:
    """An element ``(g_1, ..., g_n)`` of ``G^n``; coordinates are Perms or Words."""

    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(self.coords))

    @property
    def n(self) -> int:
        return len(self.coords)

    def __mul__(self, other: TupleElement) -> TupleElement:
        if other.n != self.n:
            raise ValueError("tuples of different length")
        return TupleElement(tuple(a * b for a, b in zip(self.coords, other.coords)))

    def inverse(self) -> TupleElement:
        return TupleElement(tuple(a.inverse() for a in self.coords))

    def permuted(self, sigma: Perm) -> TupleElement:
        """``sigma . t``: the entry in position ``i`` moves to ``sigma(i)``."""
        if sigma.degree != self.n:
            raise ValueError("permutation degree does not match tuple length")
        out = [None] * self.n
        for i, x in enumerate(self.coords):
            out[sigma(i)] = x
        return TupleElement(tuple(out))

    def is_identity(self) -> bool:
        return all(c.is_identity() for c in self.coords)

    def __str__(self):
        return "(" + ", ".join(map(str, self.coords)) + ")"


@dataclass(frozen=True)
class EElement:
    """``(t, sigma)`` in ``G^n x| Sym(n)`` with ``(g, s)(h, t) = (g . s(h), s t)``."""

    tuple: TupleElement
    perm: Perm

    def __post_init__(self):
        if self.perm.degree != self.tuple.n:
            raise ValueError("permutation degree does not match tuple length")

    @classmethod
    def identity(cls, n: int, one) -> EElement:
        return cls(TupleElement((one,) * n), Perm.identity(n))

    def __mul__(self, other: EElement) -> EElement:
        return e_multiply(self, other)

    def inverse(self) -> EElement:
        return e_inverse(self)

    def is_identity(self) -> bool:
        return self.tuple.is_identity() and self.perm.is_identity()

    def __str__(self):
        return f"({self.tuple}, {self.perm})"


def e_multiply(x: EElement, y: EElement) -> EElement:
    if x.tuple.n != y.tuple.n:
        raise ValueError("elements of different length")
    return EElement(x.tuple * y.tuple.permuted(x.perm), x.perm * y.perm)


def e_inverse(x: EElement) -> EElement:
    si = x.perm.inverse()
    return EElement(x.tuple.inverse().permuted(si), si)


# --- psi and K(G, n) for finite G -------------------------------------------

def psi_map(t: TupleElement, g: PermGroup, ab: AbelianizationMap | None = None) -> tuple[int, ...]:
    """Class of ``g_1 ... g_n`` in ``g^ab``, as coordinates on ``ab.target``."""
    ab = ab or AbelianizationMap(g)
    for c in t.coords:
        if c not in g:
            raise ValueError(f"coordinate {c} is not in the group")
    product = g.identity
    for c in t.coords:
        product = product * c
    return ab(product)


class KGroup(PermGroup):
    """``K(G, n)`` acting on ``n`` disjoint copies of the domain of ``G``."""

    def __init__(self, base: PermGroup, n: int, generators: Sequence[Perm], cap: int):
        super().__init__(base.degree * n, generators, cap=cap)
        self.base = base
        self.n = n

    def from_tuple(self, t: TupleElement | Sequence[Perm]) -> Perm:
        coords = t.coords if isinstance(t, TupleElement) else tuple(t)
        if len(coords) != self.n:
            raise ValueError("wrong tuple length")
        m = self.base.degree
        img = []
        for k, c in enumerate(coords):
            img += [k * m + j for j in c.images]
        return Perm(img)

    def to_tuple(self, x: Perm) -> TupleElement:
        m = self.base.degree
        return TupleElement(
            tuple(Perm(tuple(j - k * m for j in x.images[k * m:(k + 1) * m])) for k in range(self.n))
        )

    def act(self, sigma: Perm, x: Perm) -> Perm:
        return self.from_tuple(self.to_tuple(x).permuted(sigma))

    def first_coordinate(self, x: Perm) -> Perm:
        m = self.base.degree
        return Perm(x.images[:m])


def _pair_element(base: PermGroup, n: int, g: Perm, i: int, j: int) -> list[Perm]:
    coords = [base.identity] * n
    coords[i] = g
    coords[j] = g.inverse()
    return coords


def k_group_finite(g: PermGroup, n: int) -> KGroup:
    """``K(g, n)`` generated by ``(x, x^-1, 1, ..., 1)`` and its coordinate permutations.

    For ``n >= 3`` these elements with ``x`` running over generators of ``g``
    already generate the whole kernel; the order is checked against
    ``|g|^n / |g^ab|`` anyway.
    """
    _check_n(n)
    shell = KGroup(g, n, [], cap=g.cap)
    gens = [
        shell.from_tuple(_pair_element(g, n, x, i, j))
        for x in g.generators
        for i, j in itertools.permutations(range(n), 2)
    ]
    k = KGroup(g, n, gens, cap=g.cap)
    expected = g.order() ** n // abelianization(g).order()
    if k.order() != expected:
        raise RuntimeError(f"realised K(G,{n}) has order {k.order()}, expected {expected}")
    return k


def k_group_brute_force_order(g: PermGroup, n: int) -> int:
    """Count tuples in ``g^n`` with trivial ``psi``-image by enumerating all of them."""
    ab = AbelianizationMap(g)
    els = list(g.elements())
    classes = [ab(x) for x in els]
    zero = (0,) * len(ab.target.torsion)
    target_orders = ab.target.torsion
    count = 0
    for combo in itertools.product(range(len(els)), repeat=n):
        total = [0] * len(zero)
        for idx in combo:
            for c, v in enumerate(classes[idx]):
                total[c] += v
        if all(t % d == 0 for t, d in zip(total, target_orders)):
            count += 1
    return count


def k_group_abelian(a: FgAbelianGroup, n: int) -> FgAbelianGroup:
    """``K(a, n) = a^(n-1)`` for abelian ``a``."""
    _check_n(n)
    return direct_power(a, n - 1)


def point_stabilizer_perms(n: int, fixed: int = 0) -> list[Perm]:
    """All permutations of ``{0..n-1}`` fixing ``fixed``."""
    rest = [i for i in range(n) if i != fixed]
    out = []
    for images in itertools.permutations(rest):
        img = list(range(n))
        for src, dst in zip(rest, images):
            img[src] = dst
        out.append(Perm(img))
    return out


def commutator_with_symmetric(k: KGroup, fix_first: bool = True) -> PermGroup:
    """``[K, S]`` generated by ``x . sigma(x^-1)``.

    ``S`` is the stabiliser of the first coordinate (``fix_first``) or all of
    ``Sym(n)``.
    """
    if fix_first:
        sigmas = point_stabilizer_perms(k.n, 0)
    else:
        sigmas = [Perm(p) for p in itertools.permutations(range(k.n))]
    sigmas = [s for s in sigmas if not s.is_identity()]
    candidates = (x * k.act(s, x.inverse()) for x in sorted(k.elements()) for s in sigmas)
    return subgroup_from_candidates(k, candidates)


def recover_quotient(g: PermGroup, n: int) -> PermGroup:
    """``K(g, n) / [K(g, n), Sym(n-1)]`` as a regular permutation group."""
    k = k_group_finite(g, n)
    c = commutator_with_symmetric(k, fix_first=True)
    return quotient_group(k, c)


def is_isomorphic(g: PermGroup, h: PermGroup) -> bool:
    """Brute-force isomorphism test for small groups.

    Tries every assignment of the generators of ``g`` to elements of ``h``
    of matching order and checks that it extends to a bijective
    homomorphism.
    """
    if g.order() != h.order():
        return False
    gens = list(g.generators)
    if not gens:
        return True
    h_els = sorted(h.elements())
    choices = [[y for y in h_els if y.order() == x.order()] for x in gens]
    g_els = sorted(g.elements())
    for images in itertools.product(*choices):
        phi = _extend_hom(g, gens, images, h.identity)
        if phi is not None and len(set(phi.values())) == len(g_els):
            return True
    return False


def _extend_hom(g: PermGroup, gens, images, h_identity) -> dict | None:
    phi = {g.identity: h_identity}
    queue = [g.identity]
    while queue:
        x = queue.pop()
        for s, t in zip(gens, images):
            y = x * s
            fy = phi[x] * t
            if y in phi:
                if phi[y] != fy:
                    return None
            else:
                phi[y] = fy
                queue.append(y)
    return phi


# --- K~(G, n) for abelian G ---------------------------------------------------

@dataclass(frozen=True)
class KTildeDescriptor:
    base_group: FgAbelianGroup
    n: int
    h2: FgAbelianGroup
    k_part: FgAbelianGroup
    abelianization: FgAbelianGroup
    order: int | None
    exact_iso: FgAbelianGroup | None

    def order_text(self) -> str:
        return "infinite" if self.order is None else str(self.order)

    def to_json(self) -> dict:
        return {
            "base_group": self.base_group.to_json(),
            "n": self.n,
            "h2": self.h2.to_json(),
            "k_part": self.k_part.to_json(),
            "abelianization": self.abelianization.to_json(),
            "order": self.order_text(),
            "exact_iso": None if self.exact_iso is None else self.exact_iso.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> KTildeDescriptor:
        return cls(
            base_group=FgAbelianGroup.from_json(data["base_group"]),
            n=data["n"],
            h2=FgAbelianGroup.from_json(data["h2"]),
            k_part=FgAbelianGroup.from_json(data["k_part"]),
            abelianization=FgAbelianGroup.from_json(data["abelianization"]),
            order=None if data["order"] == "infinite" else int(data["order"]),
            exact_iso=None if data["exact_iso"] is None else FgAbelianGroup.from_json(data["exact_iso"]),
        )


def ktilde_structure(a: FgAbelianGroup, n: int) -> KTildeDescriptor:
    """Layers of the central extension ``0 -> H_2(a) -> K~(a, n) -> K(a, n) -> 1``."""
    _check_n(n)
    h2 = exterior_square(a)
    k_part = k_group_abelian(a, n)
    order = None
    if h2.is_finite() and k_part.is_finite():
        order = h2.order() * k_part.order()
    return KTildeDescriptor(
        base_group=a,
        n=n,
        h2=h2,
        k_part=k_part,
        abelianization=k_part,
        order=order,
        exact_iso=k_part if a.is_cyclic() else None,
    )


# --- the map phi : S_n(d) -> (F_{d-1})^n x| Sym(n) ------------------------------

def free_generator_name(i: int) -> str:
    return f"f{i}"


def phi_letter(letter, n: int) -> EElement:
    """Image of one letter of ``S_n(d)``; ``s_i -> (f_i, f_i^-1, 1..1)(1 2)`` for ``i >= 2``."""
    one = Word()
    if isinstance(letter, Perm):
        return EElement(TupleElement((one,) * n), letter)
    t12 = transposition(0, 1, n)
    coords = [one] * n
    if letter.index >= 2:
        f = Word.gen(free_generator_name(letter.index))
        coords[0], coords[1] = f, f.inverse()
    x = EElement(TupleElement(tuple(coords)), t12)
    if letter.exponent < 0:
        x = e_inverse(x)
    out = EElement.identity(n, one)
    for _ in range(abs(letter.exponent)):
        out = e_multiply(out, x)
    return out


def phi_word(word: EWord, n: int) -> EElement:
    out = EElement.identity(n, Word())
    for letter in word:
        out = e_multiply(out, phi_letter(letter, n))
    return out


@dataclass
class VerificationReport:
    n: int
    d: int
    relator_count: int
    failures: list[dict] = field(default_factory=list)

    @property
    def all_identity(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "relator_count": self.relator_count,
            "failures": list(self.failures),
            "all_identity": self.all_identity,
        }

    @classmethod
    def from_json(cls, data: dict) -> VerificationReport:
        rep = cls(data["n"], data["d"], data["relator_count"], list(data["failures"]))
        if rep.all_identity != data["all_identity"]:
            raise ValueError("all_identity disagrees with the failure list")
        return rep

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def verify_phi_relators(n: int, d: int, allow_small_n: bool = False,
                        sigma_mode: str | None = None) -> VerificationReport:
    """Push every relator of ``S_n(d)`` through ``phi`` and collect non-trivial images.

    The isomorphism onto ``E(F_{d-1}, n)`` is only claimed for ``n >= 5``;
    smaller ``n`` is refused unless ``allow_small_n`` is set.
    """
    if n < 5:
        if not allow_small_n:
            raise ValueError(f"n = {n} < 5: the presentation is only valid for n >= 5")
        warnings.warn(f"n = {n} < 5: checking relators outside the proven range", stacklevel=2)
    relators = generate_snd_relators(n, d, sigma_mode=sigma_mode)
    report = VerificationReport(n, d, len(relators))
    for idx, rel in enumerate(relators):
        image = phi_word(rel.word, n)
        if not image.is_identity():
            report.failures.append({"index": idx, "relator": str(rel), "image": str(image)})
    return report
