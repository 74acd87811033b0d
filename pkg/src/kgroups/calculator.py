"""Fundamental-group quotients for Galois closures of generic projections.

Each surface family is reduced to two numbers, the degree ``n`` of the
projection (the self-intersection of the line bundle) and its divisibility
index ``d`` in the Picard group, plus the genus for products ``C x P^1``.
All answers are modulo the subgroups ``C^aff`` / ``C^proj``; every report
says so in its assumption list.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field, fields
from math import gcd
from typing import ClassVar, Union

from .abelian import (
    FgAbelianGroup,
    direct_power,
    direct_sum,
    format_abelian,
    quotient_by_diagonal,
)
from .kernel import ktilde_structure

CAFF_ASSUMPTION = "C^aff assumed trivial"
CAFF_KNOWN = "C^aff asserted trivial by the caller: the quotients are the fundamental groups themselves"

TOWER_LABELS = ("H2(pi1 affine)/Z", "ker kappa_{n-1}", "K(pi1(X), n)")


# --- surfaces -----------------------------------------------------------------

@dataclass(frozen=True)
class SurfaceSpec:
    family: ClassVar[str] = ""
    simply_connected: ClassVar[bool] = True

    def params(self) -> dict[str, int]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @property
    def genus(self) -> int:
        return 0

    def _positive(self, *names: str) -> None:
        for name in names:
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise ValueError(f"{type(self).__name__}: {name} must be a positive integer, got {value!r}")


@dataclass(frozen=True)
class ProjectivePlane(SurfaceSpec):
    """``P^2`` with ``O(k)``."""

    k: int
    family: ClassVar[str] = "p2"

    def __post_init__(self):
        self._positive("k")
        if self.k < 5:
            raise ValueError(f"O(k) on P^2 needs k >= 5, got k = {self.k}")


@dataclass(frozen=True)
class Quadric(SurfaceSpec):
    """``P^1 x P^1`` with ``O(a, b)``."""

    a: int
    b: int
    family: ClassVar[str] = "quadric"

    def __post_init__(self):
        self._positive("a", "b")
        if self.a < 5 or self.b < 5:
            raise ValueError(f"O(a,b) on P^1 x P^1 needs a, b >= 5, got ({self.a}, {self.b})")


@dataclass(frozen=True)
class Hirzebruch(SurfaceSpec):
    """``F_e`` with ``O(aH + bF)``."""

    e: int
    a: int
    b: int
    family: ClassVar[str] = "hirzebruch"

    def __post_init__(self):
        if not isinstance(self.e, int) or self.e < 0:
            raise ValueError(f"Hirzebruch: e must be a non-negative integer, got {self.e!r}")
        self._positive("a", "b")
        if self.a < 5 or self.b < 5:
            warnings.warn(
                f"Hirzebruch(e={self.e}, a={self.a}, b={self.b}): a, b < 5 may not be ample enough "
                "for a good generic projection",
                stacklevel=3,
            )


@dataclass(frozen=True)
class CurveCrossLine(SurfaceSpec):
    """``C x P^1`` for a genus ``g`` curve, with ``F (x) O(d)``, ``deg F = k``."""

    g: int
    d: int
    k: int
    family: ClassVar[str] = "cxp1"
    simply_connected: ClassVar[bool] = False

    def __post_init__(self):
        self._positive("g", "d", "k")
        if 2 * self.d * self.k < 5:
            raise ValueError(f"degree 2dk = {2 * self.d * self.k} < 5")

    @property
    def genus(self) -> int:
        return self.g


@dataclass(frozen=True)
class SimplyConnectedCustom(SurfaceSpec):
    """Any simply connected surface, given directly by degree ``n`` and divisibility ``div``."""

    n: int
    div: int
    family: ClassVar[str] = "custom"

    def __post_init__(self):
        self._positive("n", "div")
        if self.n < 5:
            raise ValueError(f"degree n must be at least 5, got {self.n}")
        if self.n % self.div:
            # the loop at infinity has order div and that order divides n
            warnings.warn(f"divisibility {self.div} does not divide the degree {self.n}", stacklevel=3)


FAMILIES = {
    cls.family: cls
    for cls in (ProjectivePlane, Quadric, Hirzebruch, CurveCrossLine, SimplyConnectedCustom)
}


def make_surface(family: str, **params: int) -> SurfaceSpec:
    try:
        cls = FAMILIES[family]
    except KeyError:
        raise ValueError(f"unknown family {family!r}; choose from {sorted(FAMILIES)}") from None
    names = [f.name for f in fields(cls)]
    missing = [f for f in names if params.get(f) is None]
    if missing:
        raise ValueError(f"family {family!r} needs {', '.join('--' + f for f in missing)}")
    return cls(**{f: params[f] for f in names})


# --- group descriptors --------------------------------------------------------

@dataclass(frozen=True)
class Extension:
    kernel: GroupDescriptor
    quotient: GroupDescriptor
    central: bool
    split: bool | None = None


@dataclass(frozen=True)
class GroupDescriptor:
    """What is known about a group.

    ``kind`` is ``"fg-abelian"`` (explicit ``abelian``), ``"extension"``
    (``extension`` populated), ``"named"`` (a group known only by ``label``
    and possibly its abelianisation) or ``"cyclic-quotient"`` (``abelian``
    modulo an undetermined cyclic subgroup).
    """

    kind: str
    abelian: FgAbelianGroup | None = None
    extension: Extension | None = None
    label: str | None = None
    abelianization: FgAbelianGroup | None = None
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind in ("fg-abelian", "cyclic-quotient"):
            ok = self.abelian is not None and self.extension is None
        elif self.kind == "extension":
            ok = self.extension is not None and self.abelian is None
        elif self.kind == "named":
            ok = self.label is not None and self.abelian is None and self.extension is None
        else:
            raise ValueError(f"unknown descriptor kind {self.kind!r}")
        if not ok:
            raise ValueError(f"inconsistent fields for a {self.kind!r} descriptor")
        if self.kind == "fg-abelian" and self.abelianization is None:
            object.__setattr__(self, "abelianization", self.abelian)

    @classmethod
    def of(cls, a: FgAbelianGroup, *notes: str) -> GroupDescriptor:
        return cls("fg-abelian", abelian=a, notes=notes)

    def is_finite(self) -> bool | None:
        if self.kind == "fg-abelian":
            return self.abelian.is_finite()
        if self.kind == "extension":
            k, q = self.extension.kernel.is_finite(), self.extension.quotient.is_finite()
            if k is False or q is False:
                return False
            return True if (k and q) else None
        if self.abelianization is not None and not self.abelianization.is_finite():
            return False
        return None

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.abelian is not None:
            out["abelian"] = self.abelian.to_json()
        if self.extension is not None:
            ext = self.extension
            out["extension"] = {
                "kernel": ext.kernel.to_json(),
                "quotient": ext.quotient.to_json(),
                "central": ext.central,
                "split": ext.split,
            }
        if self.label is not None:
            out["label"] = self.label
        if self.abelianization is not None and self.kind != "fg-abelian":
            out["abelianization"] = self.abelianization.to_json()
        if self.notes:
            out["notes"] = list(self.notes)
        return out

    @classmethod
    def from_json(cls, data: dict) -> GroupDescriptor:
        ext = None
        if "extension" in data:
            e = data["extension"]
            ext = Extension(cls.from_json(e["kernel"]), cls.from_json(e["quotient"]), e["central"], e["split"])
        return cls(
            kind=data["kind"],
            abelian=FgAbelianGroup.from_json(data["abelian"]) if "abelian" in data else None,
            extension=ext,
            label=data.get("label"),
            abelianization=FgAbelianGroup.from_json(data["abelianization"]) if "abelianization" in data else None,
            notes=tuple(data.get("notes", ())),
        )


@dataclass(frozen=True)
class ExtensionTower:
    """Successive central layers, top (innermost kernel) first."""

    layers: tuple[tuple[str, GroupDescriptor], ...]
    annotations: tuple[str, ...] = ()

    def __post_init__(self):
        labels = tuple(label for label, _ in self.layers)
        if labels != TOWER_LABELS:
            raise ValueError(f"tower labels must be {TOWER_LABELS}, got {labels}")

    def layer(self, label: str) -> GroupDescriptor:
        return dict(self.layers)[label]

    def is_finite(self) -> bool | None:
        flags = [g.is_finite() for _, g in self.layers]
        if False in flags:
            return False
        return True if all(flags) else None

    def to_json(self) -> dict:
        return {
            "kind": "tower",
            "layers": [{"label": label, "group": g.to_json()} for label, g in self.layers],
            "annotations": list(self.annotations),
        }

    @classmethod
    def from_json(cls, data: dict) -> ExtensionTower:
        return cls(
            tuple((layer["label"], GroupDescriptor.from_json(layer["group"])) for layer in data["layers"]),
            tuple(data.get("annotations", ())),
        )


GroupLike = Union[GroupDescriptor, ExtensionTower]


def group_from_json(data: dict) -> GroupLike:
    return ExtensionTower.from_json(data) if data.get("kind") == "tower" else GroupDescriptor.from_json(data)


# --- numeric invariants -------------------------------------------------------

def projection_degree(s: SurfaceSpec) -> int:
    """Self-intersection of the line bundle, i.e. the degree of the projection."""
    if isinstance(s, ProjectivePlane):
        return s.k ** 2
    if isinstance(s, Quadric):
        return 2 * s.a * s.b
    if isinstance(s, Hirzebruch):
        return 2 * s.a * s.b + s.e * s.a ** 2
    if isinstance(s, CurveCrossLine):
        return 2 * s.d * s.k
    if isinstance(s, SimplyConnectedCustom):
        return s.n
    raise TypeError(f"unsupported surface {s!r}")


def divisibility_index(s: SurfaceSpec) -> int:
    """Divisibility of the line bundle; for ``C x P^1`` the torsion order of ``H_1`` of the complement."""
    if isinstance(s, ProjectivePlane):
        return s.k
    if isinstance(s, (Quadric, Hirzebruch)):
        return gcd(s.a, s.b)
    if isinstance(s, CurveCrossLine):
        return gcd(s.k, s.d)
    if isinstance(s, SimplyConnectedCustom):
        return s.div
    raise TypeError(f"unsupported surface {s!r}")


def h1_surface(s: SurfaceSpec) -> FgAbelianGroup:
    """``H_1(X, Z)``."""
    return FgAbelianGroup.free(2 * s.genus)


def h1_affine(s: SurfaceSpec) -> FgAbelianGroup:
    """``H_1`` of the affine piece: ``Z/div + H_1(X)``."""
    return direct_sum(FgAbelianGroup.cyclic(divisibility_index(s)), h1_surface(s))


def _surface_group(g: int) -> GroupDescriptor:
    if g == 1:
        return GroupDescriptor.of(FgAbelianGroup.free(2), "pi1 of an elliptic curve")
    return GroupDescriptor(
        "named", label=f"pi1(C_{g})", abelianization=FgAbelianGroup.free(2 * g),
        notes=(f"surface group of genus {g}",),
    )


def pi1_affine_model(s: SurfaceSpec) -> GroupDescriptor:
    """``pi_1`` of the complement of a smooth hyperplane section."""
    if s.simply_connected:
        return GroupDescriptor.of(FgAbelianGroup.cyclic(divisibility_index(s)))
    assert isinstance(s, CurveCrossLine)
    split = True if s.k % s.d == 0 else None
    notes = ["central extension of pi1(C) by Z/d"]
    if split is None:
        notes.append("splitting not decided: d does not divide k")
    return GroupDescriptor(
        "extension",
        extension=Extension(
            kernel=GroupDescriptor.of(FgAbelianGroup.cyclic(s.d)),
            quotient=_surface_group(s.g),
            central=True,
            split=split,
        ),
        abelianization=h1_affine(s),
        notes=tuple(notes),
    )


def h2_affine(s: SurfaceSpec) -> FgAbelianGroup:
    """``H_2(pi_1(X^aff), Z)``: trivial for cyclic groups, ``(Z/d)^2g + Z`` for ``C x P^1``."""
    if s.simply_connected:
        return FgAbelianGroup()
    assert isinstance(s, CurveCrossLine)
    return FgAbelianGroup([s.d] * (2 * s.g), 1)


def kappa_kernel(d: int, target_order: int, m: int) -> FgAbelianGroup:
    """Kernel of ``(Z/d)^m -> Z/t``, ``(x_i) -> sum of the reductions of x_i``."""
    if d < 1 or target_order < 1 or m < 1:
        raise ValueError("d, target_order and m must be positive")
    if d % target_order:
        raise ValueError(f"target order {target_order} does not divide {d}")
    # in the basis e_1, e_i - e_1 the map only sees e_1, so the kernel is
    # <e_i - e_1> + <t e_1> = (Z/d)^(m-1) + Z/(d/t)
    return direct_sum(direct_power(FgAbelianGroup.cyclic(d), m - 1), FgAbelianGroup.cyclic(d // target_order))


def affine_galois_pi1(s: SurfaceSpec) -> GroupDescriptor:
    """``pi_1(X_gal^aff) / C^aff``, i.e. ``K~(pi_1(X^aff), n)``."""
    n = projection_degree(s)
    if s.simply_connected:
        desc = ktilde_structure(FgAbelianGroup.cyclic(divisibility_index(s)), n)
        return GroupDescriptor.of(desc.exact_iso)
    k_ab = direct_power(h1_affine(s), n - 1)
    return GroupDescriptor(
        "extension",
        extension=Extension(
            kernel=GroupDescriptor.of(h2_affine(s), "H2(pi1(X^aff), Z)"),
            quotient=GroupDescriptor("named", label="K(pi1(X^aff), n)", abelianization=k_ab),
            central=True,
        ),
        abelianization=k_ab,
        notes=("K~(pi1(X^aff), n); the H2 layer lies in the commutator subgroup",),
    )


def galois_tower(s: SurfaceSpec) -> ExtensionTower:
    """The three layers of ``pi_1(X_gal) / C^proj`` for any family."""
    n = projection_degree(s)
    div = divisibility_index(s)
    h2 = h2_affine(s)
    if h2.is_trivial():
        top = GroupDescriptor.of(h2, "H2 of a cyclic group vanishes")
    else:
        top = GroupDescriptor(
            "cyclic-quotient", abelian=h2,
            notes=("quotient of H2(pi1(X^aff)) by an undetermined cyclic subgroup Z",),
        )
    kernel_order = s.d if isinstance(s, CurveCrossLine) else div
    middle = GroupDescriptor.of(kappa_kernel(kernel_order, div, n - 1))
    if s.simply_connected:
        bottom = GroupDescriptor.of(FgAbelianGroup(), "K(1, n) is trivial")
    elif s.genus == 1:
        bottom = GroupDescriptor.of(FgAbelianGroup.free(2 * (n - 1)), "K(Z^2, n) = Z^(2(n-1))")
    else:
        bottom = GroupDescriptor(
            "named", label=f"K(pi1(C_{s.genus}), {n})",
            abelianization=FgAbelianGroup.free(2 * s.genus * (n - 1)),
        )
    notes = ["the order of the cyclic group Z is not determined"]
    if isinstance(s, CurveCrossLine) and s.g == 1 and s.d == 1:
        notes.append("in the computed cases Z kills the kernel, giving K(pi1(X), 2k) = Z^(4k-2)")
    return ExtensionTower(
        ((TOWER_LABELS[0], top), (TOWER_LABELS[1], middle), (TOWER_LABELS[2], bottom)),
        tuple(notes),
    )


def galois_h1(s: SurfaceSpec) -> FgAbelianGroup:
    """``H_1(X_gal) / C^proj-bar = H_1(X^aff)^(n-1) / diagonal <loop at infinity>``."""
    n = projection_degree(s)
    a = h1_affine(s)
    loop = [0] * a.ngens
    if a.torsion:
        loop[0] = 1  # generator of the cyclic Z/div summand
    return quotient_by_diagonal(a, n - 1, element=loop)


def affine_galois_h1(s: SurfaceSpec) -> FgAbelianGroup:
    """``H_1(X_gal^aff) / C^aff-bar = H_1(X^aff)^(n-1)``."""
    return direct_power(h1_affine(s), projection_degree(s) - 1)


def galois_pi1_quotient(s: SurfaceSpec) -> GroupLike:
    """``pi_1(X_gal) / C^proj``: explicit when abelian, otherwise the extension tower."""
    if s.simply_connected:
        return GroupDescriptor.of(galois_h1(s))
    return galois_tower(s)


def finite_check(s: SurfaceSpec) -> bool:
    """Whether ``pi_1(X)`` is finite; if so the computed quotient must be finite too."""
    finite = s.simply_connected
    if finite:
        result = galois_pi1_quotient(s)
        if result.is_finite() is not True:
            raise AssertionError(f"quotient for {s} should be finite")
    return finite


# --- reports ------------------------------------------------------------------

@dataclass(frozen=True)
class StructureReport:
    family: str
    params: dict
    degree_n: int
    divisibility: int
    affine_pi1: GroupDescriptor
    affine_galois_pi1: GroupDescriptor
    projective_galois_pi1: GroupLike
    h1_galois: FgAbelianGroup
    h1_affine_galois: FgAbelianGroup
    assumptions: tuple[str, ...] = (CAFF_ASSUMPTION,)
    annotations: tuple[str, ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "params": dict(self.params),
            "degree": self.degree_n,
            "divisibility": self.divisibility,
            "affine_pi1": self.affine_pi1.to_json(),
            "affine_galois": self.affine_galois_pi1.to_json(),
            "projective_galois": self.projective_galois_pi1.to_json(),
            "h1_galois": self.h1_galois.to_json(),
            "h1_affine_galois": self.h1_affine_galois.to_json(),
            "assumptions": list(self.assumptions),
            "annotations": list(self.annotations),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def from_json(cls, data: dict) -> StructureReport:
        return cls(
            family=data["family"],
            params=dict(data["params"]),
            degree_n=data["degree"],
            divisibility=data["divisibility"],
            affine_pi1=GroupDescriptor.from_json(data["affine_pi1"]),
            affine_galois_pi1=GroupDescriptor.from_json(data["affine_galois"]),
            projective_galois_pi1=group_from_json(data["projective_galois"]),
            h1_galois=FgAbelianGroup.from_json(data["h1_galois"]),
            h1_affine_galois=FgAbelianGroup.from_json(data["h1_affine_galois"]),
            assumptions=tuple(data["assumptions"]),
            annotations=tuple(data.get("annotations", ())),
        )


def structure_report(s: SurfaceSpec, known_trivial_caff: bool = False) -> StructureReport:
    n = projection_degree(s)
    report = StructureReport(
        family=s.family,
        params=s.params(),
        degree_n=n,
        divisibility=divisibility_index(s),
        affine_pi1=pi1_affine_model(s),
        affine_galois_pi1=affine_galois_pi1(s),
        projective_galois_pi1=galois_pi1_quotient(s),
        h1_galois=galois_h1(s),
        h1_affine_galois=affine_galois_h1(s),
        assumptions=(CAFF_ASSUMPTION, CAFF_KNOWN) if known_trivial_caff else (CAFF_ASSUMPTION,),
        annotations=(
            "loops Gamma_i, the loop at infinity delta and the branch curve are quotiented away",
        ),
    )
    rank = report.h1_galois.free_rank
    expected = (n - 1) * h1_surface(s).free_rank
    if rank != expected:
        raise AssertionError(f"rank of H1 is {rank}, expected {expected}")
    return report


def describe(g: GroupLike | FgAbelianGroup, indent: str = "") -> str:
    """Human-readable text for a group descriptor or tower."""
    if isinstance(g, FgAbelianGroup):
        return indent + format_abelian(g)
    if isinstance(g, ExtensionTower):
        lines = [indent + "extension tower (innermost kernel first):"]
        for label, layer in g.layers:
            lines.append(f"{indent}  {label}:")
            lines.append(describe(layer, indent + "    "))
        lines += [f"{indent}  note: {a}" for a in g.annotations]
        return "\n".join(lines)
    if g.kind == "fg-abelian":
        return indent + format_abelian(g.abelian)
    if g.kind == "cyclic-quotient":
        return f"{indent}({format_abelian(g.abelian)}) / Z, Z an undetermined cyclic subgroup"
    if g.kind == "named":
        text = indent + g.label
        if g.abelianization is not None:
            text += f"  [abelianization {format_abelian(g.abelianization)}]"
        return text
    ext = g.extension
    lines = [indent + ("central extension" if ext.central else "extension")
             + (", split" if ext.split else "")]
    lines.append(indent + "  kernel:")
    lines.append(describe(ext.kernel, indent + "    "))
    lines.append(indent + "  quotient:")
    lines.append(describe(ext.quotient, indent + "    "))
    if g.abelianization is not None:
        lines.append(f"{indent}  abelianization: {format_abelian(g.abelianization)}")
    return "\n".join(lines)
