"""Finite condition checkers for groups of exponent 2^N.

These only evaluate the stated conditions; no dominion or closure claims
are made at p = 2.  Write N = n + 1 for the exponent index of G.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .dominion import RootAdjunctionQuery, root_obstruction
from .fpgroup import DEFAULT_CAP, FpGroup, omega_subgroup


@dataclass
class EvenReport:
    group: str
    holds: bool
    failure: Optional[dict] = None

    def __bool__(self):
        return self.holds


def _check_even(G: FpGroup):
    if G.params.p != 2:
        raise ValueError("the even-exponent checkers need p = 2")
    if G.params.n < 2:
        raise ValueError("the exponent must be 2^(n+1) with n >= 1")


def even_amalgam_condition(G: FpGroup, cap: int = DEFAULT_CAP) -> EvenReport:
    """Ω^n(Z(G)) = G^(2^n)G' and, for 1 <= i <= n-1, one of (a)-(d) for every x."""
    _check_even(G)
    n = G.params.n - 1
    Z = G.center()
    om = omega_subgroup(G, n, Z, cap)
    P = G.power_subgroup(2**n)
    if om != P:
        return EvenReport(
            G.name, False, {"reason": "Omega^n(Z(G)) != G^(2^n)G'", "omega": om.order(), "power": P.order()}
        )
    for i in range(1, n):
        Pi = G.power_subgroup(2**i)
        for v in G.ab_classes(cap):
            x = G.element(v)
            # (a) read as x ∈ G^(2^i)G': with ∉ the identity would violate every group
            if x in Pi:
                continue
            if x ** (2 ** (n - i)) not in Z:
                continue
            if not (x ** (2**n)).is_identity():
                continue
            if root_obstruction(RootAdjunctionQuery([x], [2**i])) is not None:
                continue
            return EvenReport(G.name, False, {"reason": "all of (a)-(d) fail", "x": str(x), "i": i})
    return EvenReport(G.name, True)


def even_weak_base_condition(G: FpGroup, cap: int = DEFAULT_CAP) -> EvenReport:
    """G' = Z(G) and, for 1 <= i <= n, each g lies in G^(2^i)G' or admits no 2^i-th root."""
    _check_even(G)
    n = G.params.n - 1
    Z, D = G.center(), G.derived_subgroup()
    if Z != D:
        extra = next(g for g in Z.gens if g not in D)
        return EvenReport(G.name, False, {"reason": "Z(G) != G'", "element": str(extra)})
    for i in range(1, n + 1):
        Pi = G.power_subgroup(2**i)
        for v in G.ab_classes(cap):
            g = G.element(v)
            if g in Pi:
                continue
            if root_obstruction(RootAdjunctionQuery([g], [2**i])) is None:
                return EvenReport(G.name, False, {"reason": "root adjoinable outside G^qG'", "element": str(g), "i": i})
    return EvenReport(G.name, True)
