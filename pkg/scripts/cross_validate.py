"""Cross-check the library against the brute-force oracles on small cases."""

import argparse
import sys

from nilamalg import catalog, oracles
from nilamalg.dominion import dominion, dominion_oracle


def check_dominions():
    """Dominions from the lattice description vs the element-wise definition."""
    bad = 0
    cases = [("free(2,3,2)", "a^3,b^3"), ("free(2,3,2)", "a^3"), ("cant(3,2)", "x^3"),
             ("heisenberg(3)", "x"), ("free(2,3,3)", "a^3,b^3"), ("abelian(9,3)", "a^3")]
    for spec, text in cases:
        K = catalog.group(spec)
        G = catalog.subgroup_of(K, text)
        d = dominion(K, G).subgroup
        ok = d == dominion_oracle(K, G)
        bad += not ok
        print(f"{'ok ' if ok else 'BAD'} dom_K(<{text}>) in {spec:<14} |dom| = {d.order()}")
    return bad


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    bad = 0
    mism = oracles.compare_with_rewriting(3)
    print(f"multiplication vs rewriting: {len(mism)} mismatches")
    bad += len(mism)
    lin = oracles.compare_linalg(args.trials, args.seed)
    print(f"kernel/solve vs enumeration over {args.trials} systems: {len(lin)} mismatches")
    bad += len(lin)
    for spec in ["cyclic(9)", "abelian(9,3)", "heisenberg(3)", "cant(3,2)", "higgins(3)", "free(2,3,2)"]:
        G = catalog.group(spec)
        o, b = G.order(), oracles.bfs_order(G)
        zc, zb = G.center().order(), len(oracles.brute_center(G))
        dc, db = G.derived_subgroup().order(), len(oracles.brute_derived(G))
        ok = (o, zc, dc) == (b, zb, db)
        bad += not ok
        print(f"{'ok ' if ok else 'BAD'} {spec:<14} |G| {o}/{b}  |Z| {zc}/{zb}  |G'| {dc}/{db}")
    bad += check_dominions()
    print("all agree" if not bad else f"{bad} disagreements")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
