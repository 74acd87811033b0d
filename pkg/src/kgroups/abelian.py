"""Integer linear algebra and finitely generated abelian groups.

Everything here works with plain Python ints, so there is no overflow to
worry about.  Matrices act on column vectors: an ``m x n`` matrix maps
``Z^n -> Z^m``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, prod
from typing import Iterable, Sequence


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix dimension")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def diagonal(cls, diag: Sequence[int], rows: int | None = None, cols: int | None = None) -> IntMatrix:
        rows = len(diag) if rows is None else rows
        cols = len(diag) if cols is None else cols
        out = [[0] * cols for _ in range(rows)]
        for i, d in enumerate(diag):
            out[i][i] = d
        return cls.from_rows(out, cols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def to_rows(self) -> list[list[int]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def transpose(self) -> IntMatrix:
        return IntMatrix.from_rows(
            [[self[i, j] for i in range(self.rows)] for j in range(self.cols)], self.rows
        )

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        a, b = self.to_rows(), other.to_rows()
        out = [
            [sum(a[i][k] * b[k][j] for k in range(self.cols)) for j in range(other.cols)]
            for i in range(self.rows)
        ]
        return IntMatrix.from_rows(out, other.cols)

    def apply(self, v: Sequence[int]) -> list[int]:
        if len(v) != self.cols:
            raise ValueError("vector length does not match matrix columns")
        return [sum(self[i, j] * v[j] for j in range(self.cols)) for i in range(self.rows)]

    def hstack(self, other: IntMatrix) -> IntMatrix:
        if self.rows != other.rows:
            raise ValueError("row counts differ")
        a, b = self.to_rows(), other.to_rows()
        return IntMatrix.from_rows([ra + rb for ra, rb in zip(a, b)], self.cols + other.cols)

    def diagonal_entries(self) -> list[int]:
        return [self[i, i] for i in range(min(self.rows, self.cols))]

    def is_zero(self) -> bool:
        return not any(self.entries)


def parse_matrix(text: str) -> IntMatrix:
    """Parse ``"2,4;6,8"`` (rows split on ``;``, entries on ``,``)."""
    text = text.strip()
    if not text:
        return IntMatrix(0, 0, ())
    rows = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        rows.append([int(x) for x in chunk.split(",")] if chunk else [])
    return IntMatrix.from_rows(rows)


def determinant(m: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    n = m.rows
    a = m.to_rows()
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(u, s, v)`` with ``u @ m @ v == s``.

    ``u`` and ``v`` are unimodular, ``s`` is diagonal with non-negative
    entries and each diagonal entry divides the next.  Pivots are always the
    entry of smallest absolute value in the remaining block, which makes the
    output deterministic.
    """
    R, C = m.rows, m.cols
    a = m.to_rows()
    u = [[int(i == j) for j in range(R)] for i in range(R)]
    v = [[int(i == j) for j in range(C)] for i in range(C)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        if q:
            ra, rs = a[dst], a[src]
            for k in range(C):
                ra[k] += q * rs[k]
            ua, us = u[dst], u[src]
            for k in range(R):
                ua[k] += q * us[k]

    def add_col(dst, src, q):
        if q:
            for row in a:
                row[dst] += q * row[src]
            for row in v:
                row[dst] += q * row[src]

    for t in range(min(R, C)):
        while True:
            best = None
            for i in range(t, R):
                row = a[i]
                for j in range(t, C):
                    x = row[j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
                        if best[0] == 1:
                            break
                if best is not None and best[0] == 1:
                    break
            if best is None:
                break
            _, bi, bj = best
            if bi != t:
                swap_rows(t, bi)
            if bj != t:
                swap_cols(t, bj)
            p = a[t][t]
            dirty = False
            for i in range(t + 1, R):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, C):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    dirty = dirty or a[t][j] != 0
            if dirty:
                continue
            # Row and column t are clear; enforce divisibility of the rest.
            bad = next(
                (i for i in range(t + 1, R) if any(a[i][j] % p for j in range(t + 1, C))),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if t < R and t < C and a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]

    return (
        IntMatrix.from_rows(u, R),
        IntMatrix.from_rows(a, C),
        IntMatrix.from_rows(v, C),
    )


def integer_kernel(m: IntMatrix) -> IntMatrix:
    """A basis of ``{x in Z^cols : m x = 0}`` as the columns of the result."""
    _, s, v = smith_normal_form(m)
    rank = sum(1 for d in s.diagonal_entries() if d)
    rows = v.to_rows()
    return IntMatrix.from_rows([r[rank:] for r in rows], m.cols - rank)


class FgAbelianGroup:
    """A finitely generated abelian group ``Z/d_1 + ... + Z/d_t + Z^r``.

    The torsion coefficients are stored in invariant-factor form
    (``d_i | d_{i+1}``, all ``d_i >= 2``).  Any list of cyclic orders is
    accepted and normalised; an order of ``0`` means an infinite cyclic
    factor.  Equality is equality of the normalised invariants, i.e. it
    compares isomorphism types.
    """

    __slots__ = ("torsion", "free_rank")

    def __init__(self, torsion: Iterable[int] = (), free_rank: int = 0):
        torsion = [int(d) for d in torsion]
        if free_rank < 0:
            raise ValueError("free rank must be non-negative")
        if any(d < 0 for d in torsion):
            raise ValueError("cyclic orders must be non-negative")
        free_rank += sum(1 for d in torsion if d == 0)
        object.__setattr__(self, "torsion", tuple(_invariant_factors([d for d in torsion if d > 1])))
        object.__setattr__(self, "free_rank", int(free_rank))

    def __setattr__(self, name, value):
        raise AttributeError("FgAbelianGroup is immutable")

    @classmethod
    def trivial(cls) -> FgAbelianGroup:
        return cls()

    @classmethod
    def cyclic(cls, d: int) -> FgAbelianGroup:
        """``Z/d``; ``d = 0`` gives ``Z``."""
        return cls([d])

    @classmethod
    def free(cls, rank: int) -> FgAbelianGroup:
        return cls((), rank)

    @property
    def ngens(self) -> int:
        return len(self.torsion) + self.free_rank

    @property
    def orders(self) -> tuple[int, ...]:
        """Cyclic order of each generator, ``0`` for free generators."""
        return self.torsion + (0,) * self.free_rank

    def is_trivial(self) -> bool:
        return self.ngens == 0

    def is_finite(self) -> bool:
        return self.free_rank == 0

    def is_cyclic(self) -> bool:
        return self.ngens <= 1

    def order(self) -> int | None:
        """Group order, or ``None`` if infinite."""
        return prod(self.torsion) if self.is_finite() else None

    def exponent(self) -> int | None:
        if not self.is_finite():
            return None
        return self.torsion[-1] if self.torsion else 1

    def torsion_subgroup(self) -> FgAbelianGroup:
        return FgAbelianGroup(self.torsion)

    def __add__(self, other: FgAbelianGroup) -> FgAbelianGroup:
        return direct_sum(self, other)

    def __pow__(self, k: int) -> FgAbelianGroup:
        return direct_power(self, k)

    def __eq__(self, other):
        if not isinstance(other, FgAbelianGroup):
            return NotImplemented
        return self.torsion == other.torsion and self.free_rank == other.free_rank

    def __hash__(self):
        return hash((self.torsion, self.free_rank))

    def __repr__(self):
        return f"FgAbelianGroup({list(self.torsion)}, free_rank={self.free_rank})"

    def __str__(self):
        return format_abelian(self)

    def to_json(self) -> dict:
        return {"torsion": list(self.torsion), "rank": self.free_rank}

    @classmethod
    def from_json(cls, data: dict) -> FgAbelianGroup:
        return cls(data["torsion"], data["rank"])


def _invariant_factors(orders: list[int]) -> list[int]:
    # Split into prime powers, then recombine largest-with-largest.
    by_prime: dict[int, list[int]] = {}
    for d in orders:
        p = 2
        while p * p <= d:
            if d % p == 0:
                q = 1
                while d % p == 0:
                    d //= p
                    q *= p
                by_prime.setdefault(p, []).append(q)
            p += 1
        if d > 1:
            by_prime.setdefault(d, []).append(d)
    length = max((len(v) for v in by_prime.values()), default=0)
    out = [1] * length
    for powers in by_prime.values():
        powers.sort(reverse=True)
        for i, q in enumerate(powers):
            out[length - 1 - i] *= q
    return out


def format_abelian(a: FgAbelianGroup) -> str:
    """Canonical text such as ``(Z/5)^23 + Z^10``; the trivial group is ``1``."""
    parts = []
    i = 0
    tors = a.torsion
    while i < len(tors):
        j = i
        while j < len(tors) and tors[j] == tors[i]:
            j += 1
        k = j - i
        parts.append(f"Z/{tors[i]}" if k == 1 else f"(Z/{tors[i]})^{k}")
        i = j
    if a.free_rank == 1:
        parts.append("Z")
    elif a.free_rank > 1:
        parts.append(f"Z^{a.free_rank}")
    return " + ".join(parts) if parts else "1"


def parse_abelian(text: str) -> FgAbelianGroup:
    """Inverse of :func:`format_abelian`."""
    text = text.strip()
    if text == "1":
        return FgAbelianGroup()
    torsion, free = [], 0
    for part in text.split("+"):
        part = part.strip()
        base, _, power = part.partition("^")
        k = int(power) if power else 1
        base = base.strip("()")
        if base == "Z":
            free += k
        elif base.startswith("Z/"):
            torsion += [int(base[2:])] * k
        else:
            raise ValueError(f"cannot parse abelian group summand {part!r}")
    return FgAbelianGroup(torsion, free)


def direct_sum(*groups: FgAbelianGroup) -> FgAbelianGroup:
    return FgAbelianGroup(
        [d for g in groups for d in g.torsion], sum(g.free_rank for g in groups)
    )


def direct_power(a: FgAbelianGroup, k: int) -> FgAbelianGroup:
    if k < 0:
        raise ValueError("negative power")
    return FgAbelianGroup(list(a.torsion) * k, a.free_rank * k)


def cokernel(m: IntMatrix) -> FgAbelianGroup:
    """``Z^rows / (column span of m)`` in invariant-factor form."""
    _, s, _ = smith_normal_form(m)
    diag = s.diagonal_entries()
    return FgAbelianGroup(diag + [0] * (m.rows - len(diag)))


def relation_matrix(a: FgAbelianGroup) -> IntMatrix:
    """Diagonal relation matrix presenting ``a`` on its standard generators."""
    return IntMatrix.diagonal(a.orders)


@dataclass(frozen=True)
class AbHom:
    """A homomorphism between finitely generated abelian groups.

    Column ``j`` of ``matrix`` holds the target coordinates of the image of
    source generator ``j``.
    """

    source: FgAbelianGroup
    target: FgAbelianGroup
    matrix: IntMatrix

    def __post_init__(self):
        if self.matrix.rows != self.target.ngens or self.matrix.cols != self.source.ngens:
            raise ValueError(
                f"matrix is {self.matrix.rows}x{self.matrix.cols}, expected "
                f"{self.target.ngens}x{self.source.ngens}"
            )
        # image of a generator of order d must be killed by d
        for j, d in enumerate(self.source.orders):
            col = [d * self.matrix[i, j] for i in range(self.matrix.rows)]
            if not _is_zero_in(self.target, col):
                raise ValueError(f"image of source generator {j} does not respect its order {d}")

    def __call__(self, x: Sequence[int]) -> tuple[int, ...]:
        return reduce_element(self.target, self.matrix.apply(list(x)))


def _is_zero_in(a: FgAbelianGroup, coords: Sequence[int]) -> bool:
    return all((c % d == 0) if d else c == 0 for c, d in zip(coords, a.orders))


def reduce_element(a: FgAbelianGroup, coords: Sequence[int]) -> tuple[int, ...]:
    """Normal form of an element given in the standard generators of ``a``."""
    if len(coords) != a.ngens:
        raise ValueError("coordinate vector has the wrong length")
    return tuple(c % d if d else c for c, d in zip(coords, a.orders))


def _solve_in_lattice(basis: IntMatrix, y: Sequence[int]) -> list[int]:
    """Coefficients ``c`` with ``basis @ c == y`` (basis has full column rank)."""
    u, s, v = smith_normal_form(basis)
    uy = u.apply(list(y))
    w = []
    for i, sigma in enumerate(s.diagonal_entries()):
        if uy[i] % sigma:
            raise ValueError("vector is not in the lattice")
        w.append(uy[i] // sigma)
    if any(uy[len(w):]):
        raise ValueError("vector is not in the lattice")
    return v.apply(w)


def hom_kernel(f: AbHom) -> FgAbelianGroup:
    """Isomorphism type of ``ker f``.

    The preimage lattice ``L = {x : f x in im(D_target)}`` is the kernel of
    ``[M | D_target]`` projected to the source coordinates; ``ker f`` is
    then ``L / im(D_source)``.
    """
    src, tgt = f.source, f.target
    s_n = src.ngens
    aug = f.matrix.hstack(relation_matrix(tgt))
    kern = integer_kernel(aug)
    # project onto source coordinates, then take a basis of the projection
    proj = IntMatrix.from_rows(kern.to_rows()[:s_n], kern.cols)
    basis = _column_basis(proj)
    if basis.cols == 0:
        return FgAbelianGroup()
    rels = []
    for j, d in enumerate(src.orders):
        if d:
            e = [0] * s_n
            e[j] = d
            rels.append(_solve_in_lattice(basis, e))
    rel_matrix = IntMatrix.from_rows(
        [[r[i] for r in rels] for i in range(basis.cols)], len(rels)
    )
    return cokernel(rel_matrix)


def _column_basis(m: IntMatrix) -> IntMatrix:
    """A basis (as columns) of the lattice spanned by the columns of ``m``."""
    # m @ v = u^-1 s, so the first `rank` columns of m @ v span the column lattice
    _, s, v = smith_normal_form(m)
    rank = sum(1 for d in s.diagonal_entries() if d)
    mv = (m @ v).to_rows()
    return IntMatrix.from_rows([r[:rank] for r in mv], rank)


def hom_image(f: AbHom) -> FgAbelianGroup:
    """Isomorphism type of ``im f``, computed as ``source / ker f``."""
    src = f.source
    kern = integer_kernel(f.matrix.hstack(relation_matrix(f.target)))
    proj = IntMatrix.from_rows(kern.to_rows()[: src.ngens], kern.cols)
    return cokernel(proj.hstack(relation_matrix(src)))


def exterior_square(a: FgAbelianGroup) -> FgAbelianGroup:
    """``Λ²a``; for abelian ``a`` this is the Schur multiplier ``H_2(a, Z)``."""
    t, r = a.torsion, a.free_rank
    torsion = [gcd(t[i], t[j]) for i in range(len(t)) for j in range(i + 1, len(t))]
    torsion += [d for d in t for _ in range(r)]
    return FgAbelianGroup(torsion, r * (r - 1) // 2)


def quotient_by_diagonal(
    a: FgAbelianGroup,
    copies: int,
    sub_order: int | None = None,
    element: Sequence[int] | None = None,
) -> FgAbelianGroup:
    """``a^copies / Δ(N)`` for a cyclic subgroup ``N = <x>`` of ``a``.

    ``x`` is given either explicitly as ``element`` (coordinates in the
    standard generators of ``a``) or by ``sub_order``: then ``x`` generates
    the subgroup of that order inside the largest torsion factor, or, when
    ``a`` is free, ``x = sub_order * e_1`` (so ``N = sub_order * Z``).
    The result is isomorphic to ``a^(copies-1) + a/N``.
    """
    if copies < 2:
        raise ValueError("copies must be at least 2")
    if element is None:
        if sub_order is None:
            raise ValueError("give sub_order or element")
        element = _distinguished_element(a, sub_order)
    element = list(element)
    if len(element) != a.ngens:
        raise ValueError("element has the wrong number of coordinates")
    k = a.ngens
    cols = []
    for c in range(copies):
        for j, d in enumerate(a.orders):
            if d:
                col = [0] * (k * copies)
                col[c * k + j] = d
                cols.append(col)
    cols.append(element * copies)
    m = IntMatrix.from_rows([[col[i] for col in cols] for i in range(k * copies)], len(cols))
    return cokernel(m)


def _distinguished_element(a: FgAbelianGroup, sub_order: int) -> list[int]:
    x = [0] * a.ngens
    if a.torsion:
        top = a.torsion[-1]
        if sub_order < 1 or top % sub_order:
            raise ValueError(f"no subgroup of order {sub_order} in Z/{top}")
        x[len(a.torsion) - 1] = top // sub_order
    elif a.free_rank:
        if sub_order < 0:
            raise ValueError("sub_order must be non-negative")
        x[0] = sub_order
    elif sub_order != 1:
        raise ValueError("the trivial group only has the trivial subgroup")
    return x
