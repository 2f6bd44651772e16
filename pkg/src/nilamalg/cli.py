"""Command line interface: ``nilamalg <command> ...``.

Exit codes: 0 ok, 1 verdict differs from ``--expect``, 2 usage error,
3 enumeration cap exceeded, 4 internal check failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from . import catalog
from .constructions import BaseCounterexample, ConditionsHold, ConstructionError, IsBase, find_witness, witness_not_base
from .dominion import BPN, N2, dominion, is_absolutely_closed, is_amalgamation_base
from .even import even_amalgam_condition, even_weak_base_condition
from .fpgroup import DEFAULT_CAP, CapExceeded, FpGroup, Morphism, NotAHomomorphism, lift_variety
from .parser import ParseError, parse, parse_word_list
from .products import Amalgam, coproduct, is_strongly_embeddable, is_weakly_embeddable, maier_strong_check, special_amalgam
from .report import Report

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_CAP, EXIT_INTERNAL = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def _say(msg: str):
    print(msg, file=sys.stderr)


def load_group(arg: str, allow_even: bool, n: Optional[int] = None) -> FpGroup:
    """A catalog spec, inline presentation text, or @path to a presentation file."""
    if arg.startswith("@"):
        with open(arg[1:], encoding="utf-8") as fh:
            text = fh.read()
        G = FpGroup(parse(text, allow_even=allow_even))
    elif arg.lstrip().startswith("group"):
        G = FpGroup(parse(arg, allow_even=allow_even))
    else:
        try:
            G = catalog.group(arg)
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from None
    if G.params.p == 2 and not allow_even:
        raise UsageError(f"{G.name} has even exponent; pass --allow-even")
    if n is not None and n != G.params.n:
        if n < G.params.n:
            raise UsageError(f"--n {n} is below the group's exponent index {G.params.n}")
        G = lift_variety(G, n, f"{G.name}@{n}")
    return G


def _parse_expect(s: Optional[str]) -> Optional[bool]:
    if s is None:
        return None
    return s.lower() in ("true", "1", "yes")


# commands; each fills the report and returns its primary boolean verdict


def cmd_classify(args, rep: Report) -> bool:
    G = load_group(args.group, args.allow_even, args.n)
    rep.add_group(G, args.group)
    if G.params.p == 2:
        with rep.timed("even_conditions"):
            a = even_amalgam_condition(G, args.cap)
            w = even_weak_base_condition(G, args.cap)
        rep.verdict("even_amalgam_condition", a.holds)
        rep.verdict("even_weak_base_condition", w.holds)
        for r in (a, w):
            if r.failure:
                rep.certificates.append(r.failure)
        _say(f"{G.name}: even amalgam condition {a.holds}, Z(G) = G' and root condition {w.holds}")
        return a.holds
    with rep.timed("classify"):
        cr = is_absolutely_closed(G, args.variety, args.full_report, args.cap)
    rep.verdict("closed", cr.closed)
    rep.verdict("scan_complete", cr.complete)
    rep.certificates += [e.as_dict() for e in cr.failures]
    if args.full_report:
        rep.trace = {"entries": [e.as_dict() for e in cr.entries]}
    with rep.timed("base"):
        base = is_amalgamation_base(G, args.cap)
    rep.verdict("amalgamation_base", base.base)
    rep.verdict("center_is_derived", base.center_is_derived)
    if base.failure:
        rep.certificates.append({"base_failure": base.failure})
    where = "N_2" if args.variety == N2 else f"N_2 ∩ B_{G.params.q_gen}"
    _say(f"{G.name} (order {G.order()}): closed in {where}: {str(cr.closed).lower()}")
    for e in cr.failures[:3]:
        _say(f"  no condition holds for the pair ({e.x}, {e.y}) at i = {e.i}")
    _say(f"  amalgamation base: {str(base.base).lower()}")
    return cr.closed


def cmd_dominion(args, rep: Report) -> bool:
    K = load_group(args.group, False, args.n)
    rep.add_group(K, args.group)
    G = catalog.subgroup_of(K, args.sub)
    with rep.timed("dominion"):
        res = dominion(K, G)
    larger = not res.trivial
    rep.verdict("strictly_larger", larger)
    rep.verdict("subgroup_order", G.order())
    rep.verdict("dominion_order", res.subgroup.order())
    for r, s, q, d in res.certificates:
        rep.certificates.append(
            {"r": str(K.element(r)), "s": str(K.element(s)), "q": q, "bracket": f"[{K.element(r)},{K.element(s)}]^{q}",
             "value": str(d)}
        )
    _say(f"dom_{K.name}(<{args.sub}>): order {res.subgroup.order()} (subgroup order {G.order()})")
    for c in rep.certificates[:3]:
        _say(f"  {c['bracket']} = {c['value']} lies outside the subgroup")
    return larger


def cmd_coproduct(args, rep: Report) -> bool:
    A = load_group(args.left, args.allow_even, args.n)
    C = load_group(args.right, args.allow_even, args.n)
    rep.add_group(A, args.left)
    rep.add_group(C, args.right)
    try:
        with rep.timed("coproduct"):
            res = coproduct(A, C)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rep.verdict("machenry", True)
    rep.verdict("order", res.group.order())
    rep.certificates.append({"tensor": res.tensor, "left_ab": A.abelianization(), "right_ab": C.abelianization()})
    _say(f"|{A.name} ∐ {C.name}| = {res.group.order()} = {A.order()} * {C.order()} * |{res.tensor}|")
    return True


def cmd_amalgam(args, rep: Report) -> bool:
    A = load_group(args.left, False, args.n)
    rep.add_group(A, args.left)
    if args.right is None:
        am = special_amalgam(A, catalog.subgroup_of(A, args.sub))
    else:
        C = load_group(args.right, False, args.n)
        rep.add_group(C, args.right)
        B, phi_A = catalog.subgroup_of(A, args.sub).as_group(name="B")
        if not args.sub_right:
            raise UsageError("--sub-right is required with two groups")
        images = [C.evaluate(w) for w in parse_word_list(args.sub_right, C.names)]
        if len(images) != B.k:
            raise UsageError("--sub and --sub-right must list the same number of words")
        try:
            am = Amalgam(A, C, B, phi_A, Morphism(B, C, images))
        except (NotAHomomorphism, ValueError) as exc:
            raise UsageError(str(exc)) from None
    with rep.timed("weak"):
        weak = is_weakly_embeddable(am, args.cap)
    with rep.timed("strong"):
        strong = is_strongly_embeddable(am, args.cap) if weak else weak
    with rep.timed("maier"):
        maier = maier_strong_check(am, args.cap)
    rep.verdict("weakly_embeddable", weak.embeddable)
    rep.verdict("strongly_embeddable", strong.embeddable)
    rep.verdict("maier_condition", maier.holds)
    rep.certificates.append({"weak": weak.certificate, "strong": strong.certificate, "maier": maier.witness})
    if strong.embeddable != maier.holds:
        raise ConstructionError("Maier's condition disagrees with the amalgamated coproduct")
    _say(f"weak: {str(weak.embeddable).lower()}, strong: {str(strong.embeddable).lower()}, "
         f"Maier: {str(maier.holds).lower()}")
    return strong.embeddable


def cmd_witness(args, rep: Report) -> bool:
    G = load_group(args.group, False, args.n)
    rep.add_group(G, args.group)
    if args.kind == "base":
        with rep.timed("witness"):
            out = witness_not_base(G, args.cap)
        if isinstance(out, IsBase):
            rep.verdict("witness_found", False)
            _say(f"{G.name} is an amalgamation base; no counterexample exists")
            return False
        assert isinstance(out, BaseCounterexample)
        rep.verdict("witness_found", True)
        rep.certificates.append(out.certificate)
        rep.trace = {"summary": out.summary(), "stages": out.trace}
        _say(f"non-embeddable amalgam ({out.amalgam.A.name}, {out.amalgam.C.name}; {G.name}): {out.certificate['reason']}")
        return True
    with rep.timed("witness"):
        wit = find_witness(G, args.cap)
    if wit is None or isinstance(wit, ConditionsHold):
        rep.verdict("witness_found", False)
        _say(f"{G.name} is absolutely closed; no witness exists")
        return False
    s = wit.summary()
    rep.verdict("witness_found", True)
    rep.certificates.append({"d": s["d"], "x": s["x"], "y": s["y"], "i": s["i"]})
    rep.trace = s
    _say(f"overgroup {s['overgroup']} of order {s['overgroup_order']}: d = {s['d']} is dominated but not in {G.name}")
    return True


def cmd_catalog(args, rep: Report) -> bool:
    for spec in catalog.BUILTINS:
        _say(spec)
    rows = []
    for spec in catalog.ODD_CATALOG + ["e4"]:
        G = catalog.group(spec)
        rows.append({"spec": spec, "order": G.order(), "abelianization": G.abelianization()})
        _say(f"  {spec:<16} order {G.order():>6}  G/G' = {G.abelianization()}")
    rep.trace = {"builtins": catalog.BUILTINS, "groups": rows}
    rep.verdict("entries", len(rows))
    return True


def cmd_suite(args, rep: Report) -> bool:
    from .suite import SuiteConfig, run_suite

    nums = [int(x) for x in args.criteria.split(",")] if args.criteria else None
    results = run_suite(nums, SuiteConfig(), order_seed=args.seed)
    ok = True
    for r in results:
        _say(r.line())
        rep.verdict(f"criterion_{r.number}", r.passed, True)
        rep.timings[f"criterion_{r.number}"] = round(r.seconds, 6)
        if args.full_report:
            rep.certificates.append({"criterion": r.number, "detail": r.detail})
        ok &= r.passed
    return ok


COMMANDS = {
    "classify": cmd_classify,
    "dominion": cmd_dominion,
    "coproduct": cmd_coproduct,
    "amalgam-check": cmd_amalgam,
    "witness": cmd_witness,
    "catalog": cmd_catalog,
    "paper-suite": cmd_suite,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="write a JSON report to stdout")
    common.add_argument("--full-report", action="store_true")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="enumeration cap")
    common.add_argument("--seed", type=int, default=None, help="randomizes test order only")
    common.add_argument("--expect", choices=["true", "false"], default=None)
    common.add_argument("--allow-even", action="store_true")
    common.add_argument("--n", type=int, default=None, help="exponent index of the ambient variety")

    ap = argparse.ArgumentParser(prog="nilamalg", description="Amalgams and dominions in nilpotent class-2 groups.")
    sub = ap.add_subparsers(dest="command", required=True)
    p = sub.add_parser("classify", parents=[common])
    p.add_argument("group")
    p.add_argument("--variety", choices=[N2, BPN], default=BPN)
    p = sub.add_parser("dominion", parents=[common])
    p.add_argument("group")
    p.add_argument("--sub", required=True, help='generators, e.g. "a^3,b^3"')
    p = sub.add_parser("coproduct", parents=[common])
    p.add_argument("left")
    p.add_argument("right")
    p = sub.add_parser("amalgam-check", parents=[common])
    p.add_argument("left")
    p.add_argument("right", nargs="?")
    p.add_argument("--sub", required=True, help="core generators in the first group")
    p.add_argument("--sub-right", default=None, help="their images in the second group")
    p = sub.add_parser("witness", parents=[common])
    p.add_argument("group")
    p.add_argument("--kind", choices=["closed", "base"], default="closed")
    sub.add_parser("catalog", parents=[common])
    p = sub.add_parser("paper-suite", parents=[common])
    p.add_argument("--criteria", default=None, help="comma-separated criterion numbers")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    rep = Report(args.command)
    try:
        verdict = COMMANDS[args.command](args, rep)
    except (UsageError, ParseError, FileNotFoundError) as exc:
        _say(f"error: {exc}")
        return EXIT_USAGE
    except CapExceeded as exc:
        _say(f"cap exceeded: {exc}")
        return EXIT_CAP
    except (AssertionError, ConstructionError) as exc:
        _say(f"internal check failed: {exc}")
        return EXIT_INTERNAL
    if args.json:
        print(rep.to_json())
    expect = _parse_expect(args.expect)
    if args.command == "paper-suite" and not verdict:
        return EXIT_FALSE
    if expect is not None and bool(verdict) != expect:
        return EXIT_FALSE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
