"""Coproducts and amalgamated coproducts in N_2 ∩ B_{p^n}.

Weak and strong embeddability of an amalgam are decided from their
definitions, by inspecting the canonical maps into the amalgamated
coproduct.  Maier's strong-embeddability condition is implemented
separately as a cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import words as W
from .fpgroup import DEFAULT_CAP, Element, FpGroup, Morphism, Presentation, Subgroup, cyclic_order
from .zmod import howell_form, kernel


def tensor_decomposition(d1: Sequence[int], d2: Sequence[int]) -> list[int]:
    """Cyclic decomposition of (⊕ Z/m_i) ⊗ (⊕ Z/n_j) = ⊕ Z/gcd(m_i, n_j)."""
    out = [min(m, n) for m in d1 for n in d2]
    return sorted((x for x in out if x > 1), reverse=True)


@dataclass
class CoproductResult:
    group: FpGroup
    lam_A: Morphism
    lam_C: Morphism
    tensor: list[int] = field(default_factory=list)


def _disjoint_names(a: Sequence[str], c: Sequence[str]) -> tuple[str, ...]:
    taken = set(a)
    out = []
    for x in c:
        y = x
        while y in taken:
            y = y + "_2"
        taken.add(y)
        out.append(y)
    return tuple(a) + tuple(out)


def _coproduct_presentation(A: FpGroup, C: FpGroup, name: str) -> Presentation:
    if A.params != C.params:
        raise ValueError(f"variety mismatch: {A.params} vs {C.params}")
    names = _disjoint_names(A.names, C.names)
    rels = A.presentation.relators + tuple(W.shift(r, A.k) for r in C.presentation.relators)
    return Presentation(A.params, names, rels, name)


def coproduct(A: FpGroup, C: FpGroup, name: str | None = None) -> CoproductResult:
    """A ∐ C in the variety, with the MacHenry order identity asserted."""
    M = FpGroup(_coproduct_presentation(A, C, name or f"{A.name}*{C.name}"))
    gens = M.gens()
    lam_A = Morphism(A, M, gens[: A.k])
    lam_C = Morphism(C, M, gens[A.k :])
    tensor = tensor_decomposition(A.abelianization(), C.abelianization())
    if M.order() != A.order() * C.order() * cyclic_order(tensor):
        raise AssertionError(
            f"|{M.name}| = {M.order()} disagrees with |A||C||A^ab ⊗ C^ab|"
        )
    return CoproductResult(M, lam_A, lam_C, tensor)


@dataclass
class Amalgam:
    """(A, C; B) with injective Φ_A: B → A, Φ_C: B → C."""

    A: FpGroup
    C: FpGroup
    B: FpGroup
    phi_A: Morphism
    phi_C: Morphism
    check: bool = True

    def __post_init__(self):
        if self.phi_A.domain is not self.B or self.phi_C.domain is not self.B:
            raise ValueError("the maps must have the core as domain")
        if self.phi_A.codomain is not self.A or self.phi_C.codomain is not self.C:
            raise ValueError("the maps must land in the sides")
        if self.check:
            for side, phi in (("A", self.phi_A), ("C", self.phi_C)):
                if not phi.is_injective():
                    raise ValueError(f"Φ_{side} is not injective")


def special_amalgam(K: FpGroup, sub: Subgroup) -> Amalgam:
    """(K, K; sub) with both maps the inclusion."""
    B, inc = sub.as_group(name=f"{K.name}_core")
    return Amalgam(K, K, B, inc, inc)


def amalgamated_coproduct(am: Amalgam, name: str | None = None) -> CoproductResult:
    A, C = am.A, am.C
    pres = _coproduct_presentation(A, C, name or f"{A.name}*_{am.B.name}{C.name}")
    extra = []
    for b in am.B.gens():
        wa = A.word_of(am.phi_A(b))
        wc = W.shift(C.word_of(am.phi_C(b)), A.k)
        extra.append(W.Product((wa, W.inverse(wc))))
    M = FpGroup(pres.with_relators(extra))
    gens = M.gens()
    return CoproductResult(M, Morphism(A, M, gens[: A.k]), Morphism(C, M, gens[A.k :]))


@dataclass
class EmbeddabilityResult:
    embeddable: bool
    certificate: dict = field(default_factory=dict)

    def __bool__(self):
        return self.embeddable


def is_weakly_embeddable(am: Amalgam, cap: int = DEFAULT_CAP, result: CoproductResult | None = None) -> EmbeddabilityResult:
    res = result or amalgamated_coproduct(am)
    for side, lam in (("A", res.lam_A), ("C", res.lam_C)):
        if not lam.is_injective():
            g = lam.kernel_element(cap)
            return EmbeddabilityResult(
                False,
                {
                    "reason": "collapse",
                    "side": side,
                    "element": str(g),
                    "identified_with": "1",
                    "image_order": lam.image_subgroup().order(),
                    "side_order": lam.domain.order(),
                },
            )
    return EmbeddabilityResult(True, {"reason": "both canonical maps injective"})


def is_strongly_embeddable(am: Amalgam, cap: int = DEFAULT_CAP) -> EmbeddabilityResult:
    res = amalgamated_coproduct(am)
    weak = is_weakly_embeddable(am, cap, res)
    if not weak:
        return weak
    imA, imC = res.lam_A.image_subgroup(), res.lam_C.image_subgroup()
    core = Subgroup(res.group, [res.lam_A(am.phi_A(b)) for b in am.B.gens()])
    meet = imA.intersection_order(imC)
    if meet == core.order():
        return EmbeddabilityResult(True, {"reason": "images meet exactly in the core", "core_order": meet})
    # only for the certificate: find an element of the intersection outside the core
    small, large = (imA, imC) if imA.order() <= imC.order() else (imC, imA)
    for m in small.enumerate(cap):
        if m in large and m not in core:
            return EmbeddabilityResult(
                False,
                {
                    "reason": "sides meet outside the core",
                    "element": str(m),
                    "core_order": core.order(),
                    "intersection_order": meet,
                },
            )
    raise AssertionError("intersection order disagrees with enumeration")


def maier_condition_i(am: Amalgam, cap: int = DEFAULT_CAP) -> Optional[dict]:
    """First violation of  A'∩B ⊆ Z(C)  and  C'∩B ⊆ Z(A),  or None."""
    dA, dC = am.A.derived_subgroup(), am.C.derived_subgroup()
    zA, zC = am.A.center(), am.C.center()
    for b in am.B.elements(cap):
        a, c = am.phi_A(b), am.phi_C(b)
        if a in dA and c not in zC:
            return {"condition": "i", "element": str(b), "detail": "commutator in A, not central in C"}
        if c in dC and a not in zA:
            return {"condition": "i", "element": str(b), "detail": "commutator in C, not central in A"}
    return None


@dataclass
class MaierResult:
    holds: bool
    witness: Optional[dict] = None

    def __bool__(self):
        return self.holds


def maier_strong_check(am: Amalgam, cap: int = DEFAULT_CAP) -> MaierResult:
    """Maier's criterion for strong embeddability, restricted to q = p^i, 1 <= i < n."""
    bad = maier_condition_i(am, cap)
    if bad:
        return MaierResult(False, bad)
    A, C, B = am.A, am.C, am.B
    if A.params.n != C.params.n:
        raise ValueError("sides must lie in the same variety")
    p, n = A.params.p, A.params.n
    belems = list(B.elements(cap))
    imgA = {b: am.phi_A(b) for b in belems}
    imgC = {b: am.phi_C(b) for b in belems}
    preA = {v: b for b, v in imgA.items()}
    bucketA: dict[tuple, list] = {}
    bucketC: dict[tuple, list] = {}
    for b in belems:
        bucketA.setdefault(imgA[b].a, []).append(b)
        bucketC.setdefault(imgC[b].a, []).append(b)
    # Condition (i) makes [Φ_C(b1), k] independent of b1 within its class
    # mod A' (and symmetrically for b2), so one b per class suffices.  Both
    # sides of (ii) are then bilinear in the classes of g and k, which range
    # over lattices; checking their Howell basis rows is enough.
    imA = howell_form([imgA[b].a for b in B.gens()] + list(A.U.rows), A.params.q_gen, A.k)
    imC = howell_form([imgC[b].a for b in B.gens()] + list(C.U.rows), C.params.q_gen, C.k)
    for i in range(1, n):
        q = p**i
        LA = kernel([[q * int(s == t) for t in range(A.k)] for s in range(A.k)], imA)
        LC = kernel([[q * int(s == t) for t in range(C.k)] for s in range(C.k)], imC)
        hitsA = [(g, bucketA[(g**q).a][0]) for g in map(A.element, LA.rows)]
        hitsC = [(k, bucketC[(k**q).a][0]) for k in map(C.element, LC.rows)]
        for k, b2 in hitsC:
            for g, b1 in hitsA:
                rhs = g.commutator(imgA[b2])
                h = preA.get(rhs)
                if h is None or imgC[h] != imgC[b1].commutator(k):
                    return MaierResult(
                        False,
                        {"condition": "ii", "q": q, "g": str(g), "k": str(k), "b1": str(b1), "b2": str(b2)},
                    )
    return MaierResult(True)
