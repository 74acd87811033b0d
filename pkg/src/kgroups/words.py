"""Free-group words and a small text format for group presentations.

A presentation looks like::

    # the symmetric group S3
    gens: a, b
    rels: a^2, b^3, (ab)^2

Words are products of generator names, powers ``x^k``, commutators
``[u, v]`` (``u v u^-1 v^-1``), triple commutators ``<u, v>``
(``u v u v^-1 u^-1 v^-1``) and parenthesised subwords.  Sections may be
separated by newlines or ``;``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence, TypeVar

T = TypeVar("T")


class Word:
    """A freely reduced word, stored as ``(name, exponent)`` syllables."""

    __slots__ = ("syllables",)

    def __init__(self, syllables: Iterable[tuple[str, int]] = ()):
        object.__setattr__(self, "syllables", _reduce_syllables(syllables))

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    @classmethod
    def gen(cls, name: str, exponent: int = 1) -> Word:
        return cls([(name, exponent)])

    @classmethod
    def identity(cls) -> Word:
        return cls()

    def __len__(self):
        return sum(abs(e) for _, e in self.syllables)

    def __bool__(self):
        return bool(self.syllables)

    def is_identity(self) -> bool:
        return not self.syllables

    def __mul__(self, other: Word) -> Word:
        return Word(self.syllables + other.syllables)

    def inverse(self) -> Word:
        return Word((g, -e) for g, e in reversed(self.syllables))

    def __pow__(self, k: int) -> Word:
        base = self if k >= 0 else self.inverse()
        return Word(base.syllables * abs(k))

    def letters(self) -> list[tuple[str, int]]:
        """Expanded form: one ``(name, +-1)`` pair per letter."""
        return [(g, 1 if e > 0 else -1) for g, e in self.syllables for _ in range(abs(e))]

    def generators(self) -> set[str]:
        return {g for g, _ in self.syllables}

    def exponent_sum(self, name: str) -> int:
        return sum(e for g, e in self.syllables if g == name)

    def evaluate(self, assignment: Mapping[str, T], identity: T,
                 inverse: Callable[[T], T] | None = None) -> T:
        """Multiply out the word with each generator replaced by ``assignment[name]``."""
        inverse = inverse or (lambda x: x.inverse())
        out = identity
        for g, e in self.syllables:
            x = assignment[g] if e > 0 else inverse(assignment[g])
            for _ in range(abs(e)):
                out = out * x
        return out

    def __eq__(self, other):
        return isinstance(other, Word) and self.syllables == other.syllables

    def __hash__(self):
        return hash(self.syllables)

    def __repr__(self):
        return f"Word({str(self)!r})"

    def __str__(self):
        if not self.syllables:
            return "1"
        return " ".join(g if e == 1 else f"{g}^{e}" for g, e in self.syllables)


def _reduce_syllables(syllables: Iterable[tuple[str, int]]) -> tuple[tuple[str, int], ...]:
    stack: list[tuple[str, int]] = []
    for g, e in syllables:
        if not e:
            continue
        if stack and stack[-1][0] == g:
            e += stack.pop()[1]
            if e:
                stack.append((g, e))
        else:
            stack.append((g, e))
    return tuple(stack)


def reduce(w: Word) -> Word:
    """Free reduction.  :class:`Word` is always stored reduced, so this is a copy."""
    return Word(w.syllables)


def commutator(a: Word, b: Word) -> Word:
    """``[a, b] = a b a^-1 b^-1``."""
    return a * b * a.inverse() * b.inverse()


def triple_commutator(a: Word, b: Word) -> Word:
    """``<a, b> = a b a b^-1 a^-1 b^-1``; trivial iff ``a b a = b a b``."""
    ai, bi = a.inverse(), b.inverse()
    return a * b * a * bi * ai * bi


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...]

    def __post_init__(self):
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("duplicate generator names")
        known = set(self.generators)
        for r in self.relators:
            extra = r.generators() - known
            if extra:
                raise ValueError(f"relator {r} uses undeclared generators {sorted(extra)}")

    def __str__(self):
        return format_presentation(self)

    def exponent_matrix(self):
        """Relator exponent sums as an integer matrix (one column per relator)."""
        from .abelian import IntMatrix

        return IntMatrix.from_rows(
            [[r.exponent_sum(g) for r in self.relators] for g in self.generators],
            len(self.relators),
        )

    def abelianization(self):
        from .abelian import cokernel

        return cokernel(self.exponent_matrix())


def format_presentation(p: Presentation) -> str:
    rels = ", ".join(_format_word_ascii(r) for r in p.relators)
    return f"gens: {', '.join(p.generators)}\nrels: {rels}\n"


def _format_word_ascii(w: Word) -> str:
    if w.is_identity():
        return "1"
    return "*".join(g if e == 1 else f"{g}^{e}" for g, e in w.syllables)


class PresentationSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<comment>\#[^\n]*)|(?P<nl>\n)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<int>-?\d+)|(?P<op>[\^\[\]<>(),;:*])"
)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise PresentationSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            toks.append(_Tok("sep", "\n", line, pos - line_start + 1))
            line += 1
            line_start = m.end()
        elif kind == "op" and m.group() == ";":
            toks.append(_Tok("sep", ";", line, pos - line_start + 1))
        elif kind not in ("ws", "comment"):
            toks.append(_Tok(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.gens: list[str] = []

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.peek()
        raise PresentationSyntaxError(msg, tok.line, tok.col)

    def expect(self, kind: str, text: str | None = None) -> _Tok:
        t = self.peek()
        if t.kind != kind or (text is not None and t.text != text):
            want = text or kind
            self.error(f"expected {want!r}, found {t.text or t.kind!r}")
        return self.next()

    def skip_seps(self):
        while self.peek().kind == "sep":
            self.next()

    def section(self, keyword: str) -> None:
        self.skip_seps()
        t = self.peek()
        if t.kind != "name" or t.text != keyword:
            self.error(f"expected section {keyword!r}")
        self.next()
        self.expect("op", ":")

    def parse(self) -> Presentation:
        self.section("gens")
        if self.peek().kind == "name":
            self.gens.append(self.next().text)
            while self.peek().kind == "op" and self.peek().text == ",":
                self.next()
                self.gens.append(self.expect("name").text)
        if len(set(self.gens)) != len(self.gens):
            self.error("duplicate generator name")
        rels: list[Word] = []
        self.skip_seps()
        if self.peek().kind != "eof":
            self.section("rels")
            if self.peek().kind not in ("sep", "eof"):
                rels.append(self.word())
                while self.peek().kind == "op" and self.peek().text == ",":
                    self.next()
                    self.skip_seps()
                    rels.append(self.word())
        self.skip_seps()
        if self.peek().kind != "eof":
            self.error(f"unexpected {self.peek().text!r}")
        return Presentation(tuple(self.gens), tuple(rels))

    def word(self) -> Word:
        out = Word()
        factors = 0
        while True:
            t = self.peek()
            if t.kind == "op" and t.text == "*":
                self.next()
                continue
            if t.kind == "name" or t.kind == "int" and t.text == "1" or (
                t.kind == "op" and t.text in "[<("
            ):
                out = out * self.power()
                factors += 1
            else:
                break
        if not factors:
            self.error("expected a word")
        return out

    def power(self) -> Word:
        base = self.atom()
        while self.peek().kind == "op" and self.peek().text == "^":
            self.next()
            t = self.peek()
            if t.kind == "int":
                k = int(self.next().text)
            elif t.kind == "op" and t.text == "(":
                self.next()
                k = int(self.expect("int").text)
                self.expect("op", ")")
            else:
                self.error("expected an integer exponent")
            if k == 0:
                self.error("exponent must be nonzero", t)
            base = base ** k
        return base

    def atom(self) -> Word:
        t = self.next()
        if t.kind == "int":
            return Word()
        if t.kind == "name":
            return self.split_name(t)
        if t.text == "(":
            w = self.word()
            self.expect("op", ")")
            return w
        close = "]" if t.text == "[" else ">"
        a = self.word()
        self.expect("op", ",")
        b = self.word()
        self.expect("op", close)
        return commutator(a, b) if close == "]" else triple_commutator(a, b)

    def split_name(self, tok: _Tok) -> Word:
        # juxtaposed names like "ab" are split greedily into declared generators
        text, pos, out = tok.text, 0, []
        while pos < len(text):
            match = max((g for g in self.gens if text.startswith(g, pos)), key=len, default=None)
            if match is None:
                raise PresentationSyntaxError(
                    f"undeclared generator in {text!r}", tok.line, tok.col + pos
                )
            out.append((match, 1))
            pos += len(match)
        return Word(out)


def parse_presentation(text: str) -> Presentation:
    return _Parser(text).parse()


def parse_word(text: str, generators: Sequence[str]) -> Word:
    """Parse a single word over the given generator names."""
    p = _Parser(text)
    p.gens = list(generators)
    w = p.word()
    p.skip_seps()
    if p.peek().kind != "eof":
        p.error(f"unexpected {p.peek().text!r}")
    return w
