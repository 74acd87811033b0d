"""Finite permutation groups by brute-force enumeration.

This is the oracle layer: groups are small, so everything is computed from
the full element set.  Points are 0-based internally and 1-based in cycle
notation.  ``p * q`` is composition of functions, ``(p * q)(i) = p(q(i))``.
"""

from __future__ import annotations

import re
from collections import deque
from typing import Iterable, Sequence

from .abelian import FgAbelianGroup, IntMatrix, smith_normal_form

DEFAULT_CAP = 100_000


class CapExceeded(RuntimeError):
    """Raised when an enumeration would exceed the element cap."""


class Perm:
    __slots__ = ("images", "_hash")

    def __init__(self, images: Sequence[int]):
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation: {images}")
        self.images = images
        self._hash = hash(images)

    @classmethod
    def _raw(cls, images: tuple[int, ...]) -> Perm:
        p = object.__new__(cls)
        p.images = images
        p._hash = hash(images)
        return p

    @classmethod
    def identity(cls, degree: int) -> Perm:
        return cls._raw(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> Perm:
        """Build from 0-based cycles."""
        img = list(range(degree))
        seen = set()
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                if a in seen or not 0 <= a < degree:
                    raise ValueError(f"bad cycle {cyc}")
                seen.add(a)
                img[a] = b
        return cls(img)

    @classmethod
    def parse(cls, text: str, degree: int | None = None) -> Perm:
        """Parse 1-based disjoint-cycle notation such as ``(1 2)(3 4 5)``."""
        text = text.strip()
        if not re.fullmatch(r"(\(\s*(\d+(\s*[ ,]\s*\d+)*)?\s*\))+", text):
            raise ValueError(f"cannot parse permutation {text!r}")
        cycles = [
            [int(x) - 1 for x in re.split(r"[ ,]+", body.strip())]
            for body in re.findall(r"\(([^)]*)\)", text)
            if body.strip()
        ]
        top = max((max(c) + 1 for c in cycles), default=0)
        if degree is None:
            degree = top
        elif top > degree:
            raise ValueError(f"point {top} exceeds degree {degree}")
        return cls.from_cycles(cycles, degree)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: Perm) -> Perm:
        a = self.images
        return Perm._raw(tuple(a[j] for j in other.images))

    def inverse(self) -> Perm:
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm._raw(tuple(inv))

    def __pow__(self, k: int) -> Perm:
        base = self if k >= 0 else self.inverse()
        out = Perm.identity(self.degree)
        for _ in range(abs(k)):
            out = out * base
        return out

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def support(self) -> frozenset[int]:
        return frozenset(i for i, j in enumerate(self.images) if i != j)

    def cycles(self) -> list[tuple[int, ...]]:
        seen, out = set(), []
        for i in range(self.degree):
            if i in seen or self.images[i] == i:
                continue
            cyc = [i]
            seen.add(i)
            j = self.images[i]
            while j != i:
                cyc.append(j)
                seen.add(j)
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def order(self) -> int:
        from math import lcm

        return lcm(*(len(c) for c in self.cycles())) if self.cycles() else 1

    def extend(self, degree: int) -> Perm:
        if degree < self.degree:
            raise ValueError("cannot shrink a permutation")
        return Perm._raw(self.images + tuple(range(self.degree, degree)))

    def shift(self, offset: int, degree: int) -> Perm:
        """This permutation moved to points ``offset .. offset+deg-1`` of a larger domain."""
        img = list(range(degree))
        for i, j in enumerate(self.images):
            img[offset + i] = offset + j
        return Perm._raw(tuple(img))

    def __eq__(self, other):
        return isinstance(other, Perm) and self.images == other.images

    def __lt__(self, other: Perm):
        return self.images < other.images

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Perm({str(self)!r})"

    def __str__(self):
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(str(i + 1) for i in c) + ")" for c in cyc)


def transposition(i: int, j: int, degree: int) -> Perm:
    """The transposition of 0-based points ``i`` and ``j``."""
    return Perm.from_cycles([(i, j)], degree)


def commutator(a: Perm, b: Perm) -> Perm:
    """``[a, b] = a b a^-1 b^-1``."""
    return a * b * a.inverse() * b.inverse()


class PermGroup:
    """A permutation group given by generators, enumerated on demand."""

    def __init__(self, degree: int, generators: Iterable[Perm] = (), cap: int = DEFAULT_CAP):
        gens = []
        for g in generators:
            if g.degree != degree:
                raise ValueError(f"generator {g} has degree {g.degree}, expected {degree}")
            if not g.is_identity() and g not in gens:
                gens.append(g)
        self.degree = degree
        self.generators = tuple(gens)
        self.cap = cap
        self._elements: frozenset[Perm] | None = None

    def __repr__(self):
        gens = ", ".join(map(str, self.generators))
        return f"PermGroup(degree={self.degree}, gens=[{gens}])"

    @property
    def identity(self) -> Perm:
        return Perm.identity(self.degree)

    def elements(self) -> frozenset[Perm]:
        if self._elements is None:
            self._elements = frozenset(closure(self.identity, self.generators, self.cap))
        return self._elements

    def order(self) -> int:
        return len(self.elements())

    def __len__(self):
        return self.order()

    def __contains__(self, p: Perm) -> bool:
        return p in self.elements()

    def __iter__(self):
        return iter(sorted(self.elements()))

    def is_trivial(self) -> bool:
        return not self.generators

    def is_abelian(self) -> bool:
        gens = self.generators
        return all(a * b == b * a for i, a in enumerate(gens) for b in gens[i + 1:])

    def is_subgroup_of(self, other: PermGroup) -> bool:
        return all(g in other for g in self.generators)

    def is_normal_in(self, other: PermGroup) -> bool:
        els = self.elements()
        return all(g * h * g.inverse() in els for g in other.generators for h in self.generators)

    def same_as(self, other: PermGroup) -> bool:
        return self.elements() == other.elements()

    def subgroup(self, elems: Iterable[Perm]) -> PermGroup:
        return subgroup_generated(self, list(elems))

    def exponent(self) -> int:
        from math import lcm

        return lcm(*(p.order() for p in self.elements()))


def closure(identity: Perm, generators: Sequence[Perm], cap: int) -> set[Perm]:
    """Breadth-first closure of ``generators`` under right multiplication."""
    seen = {identity}
    queue = deque([identity])
    gens = [g.images for g in generators]
    while queue:
        x = queue.popleft().images
        for g in gens:
            y = Perm._raw(tuple(x[j] for j in g))
            if y not in seen:
                seen.add(y)
                if len(seen) > cap:
                    raise CapExceeded(f"group order exceeds element cap {cap}")
                queue.append(y)
    return seen


def elements(g: PermGroup) -> frozenset[Perm]:
    return g.elements()


def subgroup_generated(g: PermGroup, elems: Sequence[Perm]) -> PermGroup:
    for e in elems:
        if e.degree != g.degree:
            raise ValueError(f"{e} has the wrong degree")
    return PermGroup(g.degree, elems, cap=g.cap)


def subgroup_from_candidates(g: PermGroup, candidates: Iterable[Perm]) -> PermGroup:
    """Subgroup generated by ``candidates``, keeping only non-redundant generators."""
    h = PermGroup(g.degree, [], cap=g.cap)
    for c in candidates:
        if c not in h.elements():
            h = PermGroup(g.degree, list(h.generators) + [c], cap=g.cap)
    return h


def normal_closure(g: PermGroup, elems: Sequence[Perm]) -> PermGroup:
    """Smallest normal subgroup of ``g`` containing ``elems``."""
    gens = [e for e in elems if not e.is_identity()]
    h = PermGroup(g.degree, gens, cap=g.cap)
    while True:
        els = h.elements()
        new = []
        for x in g.generators:
            xi = x.inverse()
            for y in h.generators:
                c = x * y * xi
                if c not in els and c not in new:
                    new.append(c)
        if not new:
            return h
        h = PermGroup(g.degree, list(h.generators) + new, cap=g.cap)


def commutator_subgroup(g: PermGroup, h: PermGroup) -> PermGroup:
    """``[g, h]`` for ``h`` normal in ``g``: normal closure of generator commutators."""
    comms = [commutator(a, b) for a in g.generators for b in h.generators]
    return normal_closure(g, comms)


def derived_subgroup(g: PermGroup) -> PermGroup:
    return commutator_subgroup(g, g)


def lower_central_series(g: PermGroup) -> list[PermGroup]:
    """``[g, [g, g], [g, [g, g]], ...]`` up to the first repeated term.

    The last entry is trivial exactly when ``g`` is nilpotent.
    """
    series = [g]
    while True:
        nxt = commutator_subgroup(g, series[-1])
        if nxt.order() == series[-1].order():
            return series
        series.append(nxt)
        if nxt.is_trivial():
            return series


def nilpotency_class(g: PermGroup) -> int | None:
    """Nilpotency class (0 for the trivial group), ``None`` if not nilpotent."""
    series = lower_central_series(g)
    if series[-1].order() != 1:
        return None
    return len(series) - 1


def coset_key(x: Perm, n_elements: frozenset[Perm]) -> Perm:
    """Canonical representative of the left coset ``x N``."""
    return min(x * y for y in n_elements)


def quotient_group(g: PermGroup, n: PermGroup) -> PermGroup:
    """``g / n`` acting regularly on the left cosets of ``n``."""
    if not n.is_subgroup_of(g):
        raise ValueError("n is not a subgroup of g")
    if not n.is_normal_in(g):
        raise ValueError("subgroup is not normal")
    reps = quotient_representatives(g, n)
    index = {r: i for i, r in enumerate(reps)}
    n_els = n.elements()
    gens = []
    for x in g.generators:
        gens.append(Perm._raw(tuple(index[coset_key(x * r, n_els)] for r in reps)))
    return PermGroup(len(reps), gens, cap=g.cap)


def quotient_representatives(g: PermGroup, n: PermGroup) -> list[Perm]:
    n_els = n.elements()
    reps = sorted({coset_key(x, n_els) for x in g.elements()})
    if len(reps) > g.cap:
        raise CapExceeded(f"index exceeds element cap {g.cap}")
    return reps


class AbelianInvariants:
    """Coordinates on a finite abelian permutation group.

    Writes the group as ``Z/d_1 + ... + Z/d_t`` and maps each element to its
    coordinate vector.
    """

    def __init__(self, g: PermGroup):
        if not g.is_abelian():
            raise ValueError("group is not abelian")
        gens = list(g.generators)
        k = len(gens)
        # spanning tree of the Cayley graph; non-tree edges give relations
        vec = {g.identity: (0,) * k}
        queue = deque([g.identity])
        relations = []
        while queue:
            x = queue.popleft()
            vx = vec[x]
            for j, s in enumerate(gens):
                y = x * s
                vy = list(vx)
                vy[j] += 1
                if y not in vec:
                    if len(vec) >= g.cap:
                        raise CapExceeded(f"group order exceeds element cap {g.cap}")
                    vec[y] = tuple(vy)
                    queue.append(y)
                else:
                    rel = [a - b for a, b in zip(vy, vec[y])]
                    if any(rel):
                        relations.append(rel)
        rel = IntMatrix.from_rows([[r[i] for r in relations] for i in range(k)], len(relations))
        u, s, _ = smith_normal_form(rel)
        diag = s.diagonal_entries() + [0] * (k - min(k, len(relations)))
        keep = [i for i, d in enumerate(diag) if d != 1]
        self.group = FgAbelianGroup([diag[i] for i in keep])
        self._orders = [diag[i] for i in keep]
        self._u_rows = [u.to_rows()[i] for i in keep]
        self._vec = vec

    def coordinates(self, x: Perm) -> tuple[int, ...]:
        v = self._vec[x]
        # diag entries are sorted so the kept coordinates already run d_1 | d_2 | ...
        return tuple(
            sum(a * b for a, b in zip(row, v)) % d for row, d in zip(self._u_rows, self._orders)
        )


class AbelianizationMap:
    """The projection ``g -> g^ab`` with explicit coordinates on ``g^ab``."""

    def __init__(self, g: PermGroup):
        self.source = g
        self.derived = derived_subgroup(g)
        self._derived_elements = self.derived.elements()
        reps = quotient_representatives(g, self.derived)
        self._index = {r: i for i, r in enumerate(reps)}
        self.quotient = quotient_group(g, self.derived)
        self._invariants = AbelianInvariants(self.quotient)
        self.target = self._invariants.group

    def __call__(self, x: Perm) -> tuple[int, ...]:
        if x not in self.source:
            raise ValueError(f"{x} is not an element of the group")
        i = self._index[coset_key(x, self._derived_elements)]
        # coset 0 is the identity coset; the action is regular, so exactly one
        # quotient element sends it to coset i
        return self._invariants.coordinates(self._regular_element(i))

    def _regular_element(self, i: int) -> Perm:
        cache = getattr(self, "_reg", None)
        if cache is None:
            cache = {p.images[0]: p for p in self.quotient.elements()}
            self._reg = cache
        return cache[i]


def abelianization(g: PermGroup) -> FgAbelianGroup:
    """Isomorphism type of ``g / [g, g]``."""
    d = derived_subgroup(g)
    return AbelianInvariants(quotient_group(g, d)).group


# A few standard groups --------------------------------------------------------

def cyclic_group(m: int, cap: int = DEFAULT_CAP) -> PermGroup:
    if m < 1:
        raise ValueError("cyclic group order must be positive")
    if m == 1:
        return PermGroup(1, [], cap=cap)
    return PermGroup(m, [Perm.from_cycles([tuple(range(m))], m)], cap=cap)


def symmetric_group(n: int, cap: int = DEFAULT_CAP) -> PermGroup:
    if n < 2:
        return PermGroup(max(n, 1), [], cap=cap)
    return PermGroup(n, [transposition(0, 1, n), Perm.from_cycles([tuple(range(n))], n)], cap=cap)


def klein_four(cap: int = DEFAULT_CAP) -> PermGroup:
    return PermGroup(4, [Perm.parse("(1 2)(3 4)"), Perm.parse("(1 3)(2 4)")], cap=cap)


def dihedral_group(m: int, cap: int = DEFAULT_CAP) -> PermGroup:
    """Symmetries of the ``m``-gon, order ``2m``."""
    r = Perm.from_cycles([tuple(range(m))], m)
    s = Perm([(-i) % m for i in range(m)])
    return PermGroup(m, [r, s], cap=cap)


def quaternion_group(cap: int = DEFAULT_CAP) -> PermGroup:
    """``Q_8`` in its regular representation on 8 points."""
    # elements 1,i,j,k,-1,-i,-j,-k -> 0..7; right multiplication by i and j
    return PermGroup(
        8,
        [Perm.parse("(1 2 5 6)(3 8 7 4)", 8), Perm.parse("(1 3 5 7)(2 4 6 8)", 8)],
        cap=cap,
    )


def direct_product(*groups: PermGroup, cap: int = DEFAULT_CAP) -> PermGroup:
    """Direct product on the disjoint union of the domains."""
    degree = sum(g.degree for g in groups)
    gens, offset = [], 0
    for g in groups:
        gens += [x.shift(offset, degree) for x in g.generators]
        offset += g.degree
    return PermGroup(degree, gens, cap=cap)


NAMED_GROUPS = {
    "V4": klein_four,
    "Q8": quaternion_group,
}


def named_group(name: str, cap: int = DEFAULT_CAP) -> PermGroup:
    """Look up ``Z/m``, ``Zm``, ``Sn``, ``Dm`` (order ``2m``), ``V4`` or ``Q8``."""
    key = name.strip().replace(" ", "")
    if key in NAMED_GROUPS:
        return NAMED_GROUPS[key](cap=cap)
    m = re.fullmatch(r"Z/?(\d+)", key)
    if m:
        return cyclic_group(int(m.group(1)), cap=cap)
    m = re.fullmatch(r"S(\d+)", key)
    if m:
        return symmetric_group(int(m.group(1)), cap=cap)
    m = re.fullmatch(r"D(\d+)", key)
    if m:
        return dihedral_group(int(m.group(1)), cap=cap)
    raise ValueError(f"unknown group {name!r}")


def parse_generators(text: str, degree: int | None = None, cap: int = DEFAULT_CAP) -> PermGroup:
    """A group from comma- or semicolon-separated cycle strings, e.g. ``"(1 2), (1 2 3)"``."""
    parts = [p for p in re.findall(r"(?:\([^)]*\))+", text)]
    if degree is None:
        degree = max((Perm.parse(p).degree for p in parts), default=1)
    return PermGroup(degree, [Perm.parse(p, degree) for p in parts], cap=cap)
