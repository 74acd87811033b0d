"""Command-line front end.

Exit status: 0 on success, 1 when a computation fails (cap exceeded,
relator verification failure), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .abelian import FgAbelianGroup, format_abelian, parse_matrix, smith_normal_form
from .calculator import (
    FAMILIES,
    describe,
    finite_check,
    kappa_kernel,
    make_surface,
    structure_report,
)
from .kernel import (
    is_isomorphic,
    k_group_abelian,
    k_group_brute_force_order,
    k_group_finite,
    ktilde_structure,
    recover_quotient,
    verify_phi_relators,
)
from .perms import DEFAULT_CAP, CapExceeded, abelianization, named_group, nilpotency_class, parse_generators


class UsageError(Exception):
    pass


class ComputationFailed(Exception):
    pass


def format_group(g, mode: str = "text") -> str:
    """Render an abelian group, descriptor or tower as text or JSON."""
    if mode == "json":
        return json.dumps(g.to_json(), indent=2)
    if isinstance(g, FgAbelianGroup):
        return format_abelian(g)
    return describe(g)


def _int_list(text: str) -> list[int]:
    text = text.strip()
    return [int(x) for x in text.split(",")] if text else []


def _group_arg(args):
    if args.gens is not None:
        return parse_generators(args.gens, args.degree, cap=args.cap)
    return named_group(args.group, cap=args.cap)


def cmd_surface(args) -> tuple[dict, str]:
    params = {k: getattr(args, k) for k in ("k", "a", "b", "e", "g", "d", "n", "div")}
    spec = make_surface(args.family, **{k: v for k, v in params.items() if v is not None})
    report = structure_report(spec, known_trivial_caff=args.known_trivial_caff)
    finite = finite_check(spec)
    prefix = "pi1" if args.known_trivial_caff else "quotient of pi1"
    lines = [
        f"surface {spec.family} {spec.params()}",
        f"  degree n = {report.degree_n}, divisibility d = {report.divisibility}",
        f"  pi1(X^aff): " + describe(report.affine_pi1).strip(),
        f"  {prefix}(X_gal^aff): " + describe(report.affine_galois_pi1).strip(),
        f"  {prefix}(X_gal):",
        describe(report.projective_galois_pi1, "    "),
        f"  H1(X_gal): {format_abelian(report.h1_galois)}",
        f"  H1(X_gal^aff): {format_abelian(report.h1_affine_galois)}",
        f"  finite pi1(X): {'yes' if finite else 'no'}",
    ]
    lines += [f"  assumption: {a}" for a in report.assumptions]
    return report.to_json(), "\n".join(lines)


def cmd_kgroup(args) -> tuple[dict, str]:
    g = _group_arg(args)
    k = k_group_finite(g, args.n)
    g_ab = abelianization(g)
    k_ab = abelianization(k)
    expected_ab = k_group_abelian(g_ab, args.n)
    data = {
        "group_order": g.order(),
        "n": args.n,
        "order": k.order(),
        "formula_order": g.order() ** args.n // g_ab.order(),
        "abelianization": k_ab.to_json(),
        "expected_abelianization": expected_ab.to_json(),
        "nilpotency_class": nilpotency_class(k),
        "group_nilpotency_class": nilpotency_class(g),
    }
    if args.brute_force:
        data["brute_force_order"] = k_group_brute_force_order(g, args.n)
    cls = data["nilpotency_class"]
    lines = [
        f"K(G,{args.n}) for |G| = {g.order()}",
        f"  order {k.order()} (|G|^n/|G^ab| = {data['formula_order']})",
        f"  abelianization {format_abelian(k_ab)} (expected {format_abelian(expected_ab)})",
        f"  nilpotency class {'not nilpotent' if cls is None else cls}",
    ]
    if args.brute_force:
        lines.append(f"  brute-force count {data['brute_force_order']}")
    if k.order() != data["formula_order"] or k_ab != expected_ab or (
        args.brute_force and data["brute_force_order"] != k.order()
    ):
        raise ComputationFailed("\n".join(lines))
    return data, "\n".join(lines)


def cmd_ktilde(args) -> tuple[dict, str]:
    a = FgAbelianGroup(_int_list(args.torsion), args.free)
    desc = ktilde_structure(a, args.n)
    lines = [
        f"K~({format_abelian(a)}, {args.n})",
        f"  H2 layer: {format_abelian(desc.h2)}",
        f"  K layer: {format_abelian(desc.k_part)}",
        f"  abelianization: {format_abelian(desc.abelianization)}",
        f"  order: {desc.order_text()}",
    ]
    if desc.exact_iso is not None:
        lines.append(f"  isomorphic to {format_abelian(desc.exact_iso)}")
    return desc.to_json(), "\n".join(lines)


def cmd_recover(args) -> tuple[dict, str]:
    g = _group_arg(args)
    q = recover_quotient(g, args.n)
    iso = is_isomorphic(q, g) if g.order() <= args.iso_limit else None
    q_ab, g_ab = abelianization(q), abelianization(g)
    data = {
        "n": args.n,
        "group_order": g.order(),
        "quotient_order": q.order(),
        "quotient_abelianization": q_ab.to_json(),
        "group_abelianization": g_ab.to_json(),
        "quotient_exponent": q.exponent(),
        "group_exponent": g.exponent(),
        "isomorphic": iso,
    }
    lines = [
        f"K(G,{args.n}) / [K(G,{args.n}), S_{args.n - 1}]",
        f"  order {q.order()} (|G| = {g.order()})",
        f"  abelianization {format_abelian(q_ab)} (G^ab = {format_abelian(g_ab)})",
        f"  exponent {q.exponent()} (G: {g.exponent()})",
        f"  isomorphic to G: {'not checked' if iso is None else iso}",
    ]
    if q.order() != g.order() or q_ab != g_ab or q.exponent() != g.exponent() or iso is False:
        raise ComputationFailed("\n".join(lines))
    return data, "\n".join(lines)


def cmd_verify_snd(args) -> tuple[dict, str]:
    report = verify_phi_relators(args.n, args.d, allow_small_n=args.force, sigma_mode=args.sigma)
    text = f"all identity: {len(report.failures)} failures / {report.relator_count} relators"
    if not report.all_identity:
        shown = "\n".join(f"  {f['relator']} -> {f['image']}" for f in report.failures[:20])
        raise ComputationFailed(text + "\n" + shown)
    return report.to_json(), text


def cmd_snf(args) -> tuple[dict, str]:
    m = parse_matrix(args.matrix)
    u, s, v = smith_normal_form(m)
    diag = s.diagonal_entries()
    data = {"u": u.to_rows(), "s": s.to_rows(), "v": v.to_rows(), "diagonal": diag}
    return data, "diag(" + ",".join(map(str, diag)) + ")"


def cmd_kappa(args) -> tuple[dict, str]:
    ker = kappa_kernel(args.d, args.t, args.m)
    data = {"d": args.d, "t": args.t, "m": args.m, "kernel": ker.to_json(), "order": ker.order()}
    return data, f"ker kappa_{args.m}: {format_abelian(ker)} (order {ker.order()})"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kgroups", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--out", help="write the output to FILE instead of stdout")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="element cap for enumerations")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("surface", parents=[common], help="fundamental-group quotients for a surface family")
    p.add_argument("--family", required=True, choices=sorted(FAMILIES))
    for name in ("k", "a", "b", "e", "g", "d", "n", "div"):
        p.add_argument(f"--{name}", type=int)
    p.add_argument("--known-trivial-caff", action="store_true",
                   help="assert C^aff is trivial, so the quotients are the groups themselves")
    p.set_defaults(func=cmd_surface)

    def group_flags(p):
        p.add_argument("--group", default="S3", help="Z/m, Sn, Dm, V4 or Q8")
        p.add_argument("--gens", help='permutation generators, e.g. "(1 2),(1 2 3)"')
        p.add_argument("--degree", type=int, help="degree for --gens")
        p.add_argument("--n", type=int, default=3)

    p = sub.add_parser("kgroup", parents=[common], help="realise K(G,n) for a finite group")
    group_flags(p)
    p.add_argument("--brute-force", action="store_true", help="also count tuples exhaustively")
    p.set_defaults(func=cmd_kgroup)

    p = sub.add_parser("ktilde", parents=[common], help="layers of K~(A,n) for abelian A")
    p.add_argument("--torsion", default="", help="comma-separated cyclic orders")
    p.add_argument("--free", type=int, default=0, help="free rank")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_ktilde)

    p = sub.add_parser("recover", parents=[common], help="K(G,n)/[K(G,n),S_(n-1)] versus G")
    group_flags(p)
    p.add_argument("--iso-limit", type=int, default=8, help="full isomorphism test up to this order")
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("verify-snd", parents=[common], help="check that phi kills every relator of S_n(d)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--force", action="store_true", help="allow n < 5")
    p.add_argument("--sigma", choices=["full", "pairs"], help="range of conjugating permutations")
    p.set_defaults(func=cmd_verify_snd)

    p = sub.add_parser("snf", parents=[common], help="Smith normal form of an integer matrix")
    p.add_argument("--matrix", required=True, help='rows split by ";", entries by ","')
    p.set_defaults(func=cmd_snf)

    p = sub.add_parser("kappa", parents=[common], help="kernel of the sum map (Z/d)^m -> Z/t")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(func=cmd_kappa)
    return parser


def _emit(text: str, out: str | None, stream) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text, file=stream)


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        data, text = args.func(args)
    except ComputationFailed as exc:
        print(f"error: computation failed\n{exc}", file=stderr)
        return 1
    except CapExceeded as exc:
        print(f"error: {exc}", file=stderr)
        return 1
    except (ValueError, UsageError) as exc:
        print(f"usage error: {exc}", file=stderr)
        return 2
    _emit(json.dumps(data, indent=2) if args.json else text, args.out, stdout)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
