"""Relators of the group S_n(d) = (F(s_1..s_d) * Sym(n)) / R.

Words live in the free product of the free group on ``s_1, ..., s_d`` with
the symmetric group, so a letter is either an :class:`SLetter` or a
:class:`~kgroups.perms.Perm`.  Adjacent permutations multiply, adjacent
powers of the same ``s_i`` combine.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence, Union

from .perms import Perm, transposition


class SLetter(NamedTuple):
    index: int
    exponent: int

    def __str__(self):
        return f"s{self.index}" if self.exponent == 1 else f"s{self.index}^{self.exponent}"


Letter = Union[SLetter, Perm]


class EWord(tuple):
    """A reduced word in the free product, as a tuple of letters."""

    def __new__(cls, letters: Sequence[Letter] = ()):
        return super().__new__(cls, _reduce(letters))

    def __mul__(self, other: EWord) -> EWord:
        return EWord(tuple(self) + tuple(other))

    def inverse(self) -> EWord:
        return EWord(
            SLetter(x.index, -x.exponent) if isinstance(x, SLetter) else x.inverse()
            for x in reversed(self)
        )

    def s_indices(self) -> set[int]:
        return {x.index for x in self if isinstance(x, SLetter)}

    def __str__(self):
        return " ".join(map(str, self)) if self else "1"

    def __repr__(self):
        return f"EWord({str(self)!r})"


def _reduce(letters) -> tuple:
    stack: list = []
    for x in letters:
        if isinstance(x, SLetter):
            if not x.exponent:
                continue
            if stack and isinstance(stack[-1], SLetter) and stack[-1].index == x.index:
                e = stack.pop().exponent + x.exponent
                if e:
                    stack.append(SLetter(x.index, e))
            else:
                stack.append(x)
        elif isinstance(x, Perm):
            if stack and isinstance(stack[-1], Perm):
                x = stack.pop() * x
            if not x.is_identity():
                stack.append(x)
        else:
            raise TypeError(f"not a letter: {x!r}")
    return tuple(stack)


def s(i: int, exponent: int = 1) -> EWord:
    return EWord([SLetter(i, exponent)])


def perm_word(p: Perm) -> EWord:
    return EWord([p])


def ecommutator(a: EWord, b: EWord) -> EWord:
    return a * b * a.inverse() * b.inverse()


def etriple_commutator(a: EWord, b: EWord) -> EWord:
    ai, bi = a.inverse(), b.inverse()
    return a * b * a * bi * ai * bi


@dataclass(frozen=True)
class SndRelator:
    family: str
    word: EWord
    detail: str

    def __str__(self):
        return f"{self.family}[{self.detail}]: {self.word}"


FAMILIES = ("square", "identify", "commute-tau", "braid-tau", "commute-conj", "braid-conj")

FULL_SIGMA_MAX_DEGREE = 6


def transpositions(n: int) -> list[Perm]:
    return [transposition(a, b, n) for a, b in itertools.combinations(range(n), 2)]


def _sigma_range(n: int, mode: str) -> Iterator[Perm]:
    if mode == "full":
        for images in itertools.permutations(range(n)):
            yield Perm(images)
    elif mode == "pairs":
        # one permutation per ordered pair (sigma(1), sigma(2)); the image of
        # sigma s_i sigma^-1 in the semidirect product depends only on that pair
        for a, b in itertools.permutations(range(n), 2):
            rest = [x for x in range(n) if x not in (a, b)]
            yield Perm([a, b] + rest)
    else:
        raise ValueError(f"unknown sigma mode {mode!r}")


def generate_snd_relators(n: int, d: int, sigma_mode: str | None = None) -> list[SndRelator]:
    """All defining relators of ``S_n(d)``, in a fixed order.

    ``sigma_mode`` controls the conjugating permutations in the last two
    families: ``"full"`` runs over all of ``Sym(n)``, ``"pairs"`` over one
    permutation per ordered image pair of ``(1, 2)``.  By default the full
    range is used up to degree 6 and pairs above that.
    """
    if n < 3:
        raise ValueError("S_n(d) needs n >= 3")
    if d < 1:
        raise ValueError("S_n(d) needs d >= 1")
    if sigma_mode is None:
        sigma_mode = "full" if n <= FULL_SIGMA_MAX_DEGREE else "pairs"
    t12 = transposition(0, 1, n)
    base = t12.support()
    out: list[SndRelator] = []
    for i in range(1, d + 1):
        out.append(SndRelator("square", s(i, 2), f"i={i}"))
    out.append(SndRelator("identify", s(1) * perm_word(t12.inverse()), "i=1"))
    taus = transpositions(n)
    for i in range(1, d + 1):
        for tau in taus:
            if not tau.support() & base:
                out.append(SndRelator("commute-tau", ecommutator(s(i), perm_word(tau)), f"i={i} tau={tau}"))
    for i in range(1, d + 1):
        for tau in taus:
            if len(tau.support() & base) == 1:
                out.append(SndRelator("braid-tau", etriple_commutator(s(i), perm_word(tau)), f"i={i} tau={tau}"))
    sigmas = list(_sigma_range(n, sigma_mode))
    for family in ("commute-conj", "braid-conj"):
        for sigma in sigmas:
            conj_support = frozenset((sigma(0), sigma(1)))
            shared = len(conj_support & base)
            if shared == 2:
                continue
            if (family == "commute-conj") != (shared == 0):
                continue
            sw, swi = perm_word(sigma), perm_word(sigma.inverse())
            for i in range(1, d + 1):
                conj = sw * s(i) * swi
                for j in range(1, d + 1):
                    if family == "commute-conj":
                        word = ecommutator(conj, s(j))
                    else:
                        word = etriple_commutator(conj, s(j))
                    out.append(SndRelator(family, word, f"sigma={sigma} i={i} j={j}"))
    return out


def family_counts(relators: Sequence[SndRelator]) -> dict[str, int]:
    counts = dict.fromkeys(FAMILIES, 0)
    for r in relators:
        counts[r.family] += 1
    return counts
