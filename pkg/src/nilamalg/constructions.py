"""Overgroup constructions: central roots, commutator conversion, and the
checked witnesses for non-closed groups and non-bases (odd p).

Every constructed group is verified as it is built: embeddings by order
count, exponents by lowering the variety (which fails unless the order is
unchanged) and by sampling, memberships by canonical forms.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import words as W
from .dominion import (
    BPN,
    ClosureEntry,
    _PairSystem,
    _uu,
    dominion,
    evaluate_conditions,
    is_absolutely_closed,
    keylemma_check,
    root_obstruction,
    RootAdjunctionQuery,
)
from .fpgroup import (
    DEFAULT_CAP,
    Element,
    FpGroup,
    Morphism,
    Presentation,
    Subgroup,
    lower_variety,
)
from .products import Amalgam, EmbeddabilityResult, coproduct, is_weakly_embeddable


class ConstructionError(AssertionError):
    """A construction postcondition failed."""


def _ensure(cond: bool, msg: str):
    if not cond:
        raise ConstructionError(f"construction check failed: {msg}")


def _fresh(base: str, taken: set) -> str:
    name, t = base, 1
    while name in taken:
        t += 1
        name = f"{base}{t}"
    taken.add(name)
    return name


def _log(m: int, p: int) -> int:
    e = 0
    while m > 1:
        m //= p
        e += 1
    return e


def lifted_relators(G: FpGroup, n: int) -> tuple[W.Word, ...]:
    """G's relators plus the laws of its own variety, for use in a bigger variety."""
    rels = G.presentation.relators
    if n == G.params.n:
        return rels
    qg, qc = G.params.q_gen, G.params.q_comm
    extra = [W.Power(W.Gen(i), qg) for i in range(G.k)]
    extra += [W.Power(W.Commutator(W.Gen(j), W.Gen(i)), qc) for j, i in G.free.pairs]
    return rels + tuple(extra)


def _cmt(i: int, j: int) -> W.Word:
    return W.Commutator(W.Gen(i), W.Gen(j))


def _inclusion(G: FpGroup, K: FpGroup) -> Morphism:
    iota = Morphism(G, K, K.gens()[: G.k])
    _ensure(iota.is_injective(), f"{G.name} does not embed in {K.name}")
    return iota


def direct_product(G: FpGroup, H: FpGroup, name: str | None = None) -> tuple[FpGroup, Morphism, Morphism]:
    if G.params.p != H.params.p:
        raise ValueError("different primes")
    n = max(G.params.n, H.params.n)
    taken = set(G.names)
    names = G.names + tuple(_fresh(x, taken) for x in H.names)
    rels = list(lifted_relators(G, n)) + [W.shift(r, G.k) for r in lifted_relators(H, n)]
    rels += [_cmt(G.k + j, i) for i in range(G.k) for j in range(H.k)]
    K = FpGroup(Presentation(G.params.with_n(n), names, tuple(rels), name or f"{G.name}x{H.name}"))
    gens = K.gens()
    return K, Morphism(G, K, gens[: G.k]), Morphism(H, K, gens[G.k :])


def cyclic_group(params, m: int, name: str = "z") -> FpGroup:
    return FpGroup(Presentation(params, (name,), (W.Power(W.Gen(0), m),), f"C{m}"))


def free_product_cyclic(G: FpGroup, m: int):
    """G ∐ Z/m in G's variety, with both injections."""
    res = coproduct(G, cyclic_group(G.params, m), f"{G.name}*C{m}")
    return res.group, res.lam_A, res.lam_C


def adjoin_central_roots(G: FpGroup, pairs: Sequence[tuple[Element, int]], name: str | None = None):
    """(K, ι, roots) with roots[i] central in K and roots[i]^{n_i} = ι(g_i).

    K is G × ∏ Z/(n_i·|g_i|) modulo the g_i h_i^{-n_i}; its variety is
    enlarged if the cyclic factors need it.
    """
    p = G.params.p
    orders = []
    for g, m in pairs:
        if not g.is_central():
            raise ValueError(f"{g} is not central")
        orders.append(m * g.order())
    n = max([G.params.n] + [_log(o, p) for o in orders])
    taken = set(G.names)
    names = list(G.names)
    rels = list(lifted_relators(G, n))
    k0 = G.k
    for t, ((g, m), o) in enumerate(zip(pairs, orders)):
        names.append(_fresh("h", taken))
        h = k0 + t
        rels.append(W.Power(W.Gen(h), o))
        rels.append(W.Product((G.word_of(g), W.Power(W.Gen(h), -m))))
    total = len(names)
    for t in range(len(pairs)):
        h = k0 + t
        rels += [_cmt(h, u) for u in range(total) if u != h]
    K = FpGroup(Presentation(G.params.with_n(n), tuple(names), tuple(rels), name or f"{G.name}[roots]"))
    iota = _inclusion(G, K)
    roots = K.gens()[k0:]
    for (g, m), h in zip(pairs, roots):
        _ensure(h**m == iota(g), "root has the wrong power")
        _ensure(h.is_central(), "root is not central")
    return K, iota, roots


def central_to_commutator(G: FpGroup, elems: Sequence[Element], name: str | None = None):
    """(K, ι, [(q1, q2), ...]) with ι(g_i) = [q1, q2] and K in G's variety."""
    if G.params.p == 2:
        raise ValueError("exponent control is only guaranteed for odd p")
    for g in elems:
        if not g.is_central():
            raise ValueError(f"{g} is not central")
    taken = set(G.names)
    names = list(G.names)
    rels = list(G.presentation.relators)
    k0 = G.k
    for t, g in enumerate(elems):
        a = g.order()
        names += [_fresh("q", taken), _fresh("q", taken)]
        t1, t2 = k0 + 2 * t, k0 + 2 * t + 1
        rels += [W.Power(W.Gen(t1), a), W.Power(W.Gen(t2), a)]
        rels.append(W.Product((G.word_of(g), _cmt(t2, t1))))
    for t in range(len(elems)):
        mine = {k0 + 2 * t, k0 + 2 * t + 1}
        for u in mine:
            rels += [_cmt(u, v) for v in range(len(names)) if v not in mine]
    K = FpGroup(Presentation(G.params, tuple(names), tuple(rels), name or f"{G.name}[comm]"))
    iota = _inclusion(G, K)
    gens = K.gens()
    brackets = [(gens[k0 + 2 * t], gens[k0 + 2 * t + 1]) for t in range(len(elems))]
    for g, (q1, q2) in zip(elems, brackets):
        _ensure(iota(g) == q1.commutator(q2), "element did not become a commutator")
    return K, iota, brackets


def check_exponent(K: FpGroup, samples: int = 64, seed: int = 0) -> bool:
    """Generators of exponent p^n (odd p gives the whole group) plus random sampling."""
    q = K.params.q_gen
    if not all((g**q).is_identity() for g in K.gens()):
        return False
    rng = random.Random(seed)
    qg, qc = K.params.q_gen, K.params.q_comm
    for _ in range(samples):
        g = K.element([rng.randrange(qg) for _ in range(K.k)], [rng.randrange(qc) for _ in range(K.free.ncomm)])
        if not (g**q).is_identity():
            return False
    return True


# witnesses for non-closed groups


@dataclass
class ConditionsHold:
    entry: ClosureEntry

    def __bool__(self):
        return False


@dataclass
class WitnessExtension:
    group: FpGroup
    K: FpGroup
    iota: Morphism
    d: Element
    x: Element
    y: Element
    i: int
    trace: dict = field(default_factory=dict)
    keylemma_instances: int = 0

    def summary(self) -> dict:
        return {
            "group": self.group.name,
            "overgroup": self.K.name,
            "overgroup_order": self.K.order(),
            "x": str(self.x),
            "y": str(self.y),
            "i": self.i,
            "d": str(self.d),
            "stages": {k: v for k, v in self.trace.items() if isinstance(v, (int, str))},
            "keylemma_instances": self.keylemma_instances,
        }


def _step_groups(G: FpGroup, x: Element, y: Element, i: int, extra: int) -> WitnessExtension:
    p, n = G.params.p, G.params.n
    q = p**i
    N = n + i + extra
    trace: dict = {}
    taken = set(G.names)
    rname, sname = _fresh("r", taken), _fresh("s", taken)
    k = G.k
    R, S = k, k + 1
    # Step 1: roots r, s of x, y; finite cyclic surrogates for the two copies of Z
    rels = list(lifted_relators(G, N))
    rels += [W.Power(W.Gen(R), p**N), W.Power(W.Gen(S), p**N)]
    rels += [W.Product((G.word_of(x), W.Power(W.Gen(R), -q))), W.Product((G.word_of(y), W.Power(W.Gen(S), -q)))]
    pres0 = Presentation(G.params.with_n(N), G.names + (rname, sname), tuple(rels), "K0")
    K0 = FpGroup(pres0)
    iota0 = _inclusion(G, K0)
    r, s = K0.gen(R), K0.gen(S)
    d0 = r.commutator(s) ** q
    _ensure(d0 not in iota0.image_subgroup(), "[r,s]^q lies in G already in K0")
    trace["K0"] = K0.order()

    # Step 2: kill [r,s]^{p^n}
    K1, _ = K0.quotient([W.Power(W.Commutator(W.Gen(R), W.Gen(S)), p**n)], "K1")
    if 2 * i <= n:
        _ensure(K1.order() == K0.order(), "step 2 should be a no-op when 2i <= n")
    iota1 = _inclusion(G, K1)
    r, s = K1.gen(R), K1.gen(S)
    _ensure(r.commutator(s) ** q not in iota1.image_subgroup(), "[r,s]^q lies in G in K1")
    trace["K1"] = K1.order()

    # Step 3
    xc, yc = iota1(x) ** (p ** (n - i)), iota1(y) ** (p ** (n - i))
    _ensure(xc.is_central() and yc.is_central(), "x^{p^(n-i)}, y^{p^(n-i)} not central")

    # Step 4: central p^n-th roots t, v
    K2, j2, (t, v) = adjoin_central_roots(K1, [(xc, p**n), (yc, p**n)], "K2")
    iota2 = iota1.compose(j2)
    _ensure(iota2.is_injective(), "G does not embed in K2")
    _ensure(j2(r).commutator(j2(s)) ** q not in iota2.image_subgroup(), "[r,s]^q lies in G in K2")
    trace["K2"] = K2.order()

    # Step 5: t^{p^i}, v^{p^i} become commutators [q1,q2], [q3,q4]
    K3, j3, ((q1, q2), (q3, q4)) = central_to_commutator(K2, [t**q, v**q], "K3")
    iota3 = iota2.compose(j3)
    r3, s3, t3, v3 = j3(j2(r)), j3(j2(s)), j3(t), j3(v)
    _ensure(t3.is_central() and v3.is_central(), "t, v not central in K3")
    for g in (q1, q2, q3, q4):
        _ensure((g ** (p**n)).is_identity(), "q_i not of exponent p^n")
    trace["K3"] = K3.order()

    # Step 6: the subgroup on G, r t^-1, s v^-1, q1..q4, re-presented in the exponent-p^n variety
    rt, sv = r3 * t3.inverse(), s3 * v3.inverse()
    _ensure(rt**q * q1.commutator(q2) == iota3(x), "(r t^-1)^q [q1,q2] != x")
    _ensure(sv**q * q3.commutator(q4) == iota3(y), "(s v^-1)^q [q3,q4] != y")
    gens = [iota3(g) for g in G.gens()] + [rt, sv, q1, q2, q3, q4]
    names = G.names + tuple(_fresh(b, set(G.names)) for b in ("u", "w", "q1", "q2", "q3", "q4"))
    H, _ = Subgroup(K3, gens).as_group(names, "K4")
    try:
        K4 = lower_variety(H, n, "K4")
    except ValueError as exc:
        raise ConstructionError(f"construction check failed: {exc}") from None
    _ensure(check_exponent(K4), "K4 does not have exponent p^n")
    iota = _inclusion(G, K4)
    u, w = K4.gen(k), K4.gen(k + 1)
    d = u.commutator(w) ** q
    image = iota.image_subgroup()
    _ensure(d not in image, "d lies in G")
    _ensure(d in dominion(K4, image).subgroup, "d is not in the dominion")
    trace["K4"] = K4.order()
    trace["variety_step1"] = N
    return WitnessExtension(G, K4, iota, d, x, y, i, trace)


def _keylemma_instances(wit: WitnessExtension) -> int:
    """Run the key lemma on the homogeneous solutions (j = 0), and on the
    j = k p^(n-i) solutions when 2i > n, inside the witness group."""
    G, K, iota, i = wit.group, wit.K, wit.iota, wit.i
    p, n = G.params.p, G.params.n
    k = G.k
    u, w = K.gen(k), K.gen(k + 1)
    x, y = iota(wit.x), iota(wit.y)
    sysm = _PairSystem(G, wit.x.a, wit.y.a, p**i, _uu(G))
    cases = [(row, 0) for row in sysm.homogeneous.rows] or [((0,) * (3 + 2 * k), 0)]
    if 2 * i > n:
        for jj in range(1, p ** (2 * i - n) + 1):
            sol = sysm.solve_shift(jj * p ** (n - i))
            if sol is not None:
                cases.append((sol.particular, jj * p ** (n - i)))
    qg = G.params.q_gen
    # K' of the witness group, with K's root elements: x = u^q [q1,q2] etc.
    for v, j in cases:
        g1, g2 = iota(G.element(v[3 : 3 + k])), iota(G.element(v[3 + k :]))
        ok = keylemma_check(K, x, y, u, w, i, j, v[0], v[1], v[2], g1, g2)
        _ensure(ok, f"key lemma fails for j = {j}")
    return len(cases)


def witness_not_closed(G: FpGroup, x: Element, y: Element, i: int):
    """An exponent-p^n overgroup with [r,s]^{p^i} ∈ dom ∖ G, or ConditionsHold."""
    if G.params.p == 2:
        raise ValueError("witnesses are only built for odd p")
    entry = evaluate_conditions(G, x, y, i, BPN)
    if entry.condition != "none":
        return ConditionsHold(entry)
    last: Exception | None = None
    for extra in (0, 1):
        try:
            wit = _step_groups(G, x, y, i, extra)
            break
        except ConstructionError as exc:
            last = exc
    else:
        raise ConstructionError(str(last))
    wit.keylemma_instances = _keylemma_instances(wit)
    return wit


def find_witness(G: FpGroup, cap: int = DEFAULT_CAP):
    """Witness for the first failing (x, y, i) of the classifier, or None if G is closed."""
    rep = is_absolutely_closed(G, BPN, cap=cap)
    if rep.closed:
        return None
    e = rep.failures[0]
    return witness_not_closed(G, e.x, e.y, e.i)


# counterexamples to being a base


@dataclass
class BaseCounterexample:
    amalgam: Amalgam
    certificate: dict
    decision: EmbeddabilityResult
    trace: dict = field(default_factory=dict)

    def summary(self) -> dict:
        return {
            "K1": self.amalgam.A.name,
            "K1_order": self.amalgam.A.order(),
            "K2": self.amalgam.C.name,
            "K2_order": self.amalgam.C.order(),
            "certificate": self.certificate,
            "embeddable": self.decision.embeddable,
        }


@dataclass
class IsBase:
    group: str

    def __bool__(self):
        return False


def _counterexample(G, K1, i1, K2, i2, certificate, trace) -> BaseCounterexample:
    am = Amalgam(K1, K2, G, i1, i2)
    dec = is_weakly_embeddable(am)
    _ensure(not dec.embeddable, "counterexample amalgam embeds")
    return BaseCounterexample(am, {**certificate, "collapse": dec.certificate}, dec, trace)


def _root_overgroup(G: FpGroup, g: Element, i: int) -> tuple[FpGroup, Morphism, dict]:
    """Exponent-p^n overgroup in which g is a p^i-th power modulo the commutator."""
    p, n = G.params.p, G.params.n
    q = p**i
    N = n + i
    taken = set(G.names)
    rname = _fresh("r", taken)
    rels = list(lifted_relators(G, N))
    rels += [W.Power(W.Gen(G.k), p**N), W.Product((G.word_of(g), W.Power(W.Gen(G.k), -q)))]
    K0 = FpGroup(Presentation(G.params.with_n(N), G.names + (rname,), tuple(rels), "R0"))
    i0 = _inclusion(G, K0)
    r = K0.gen(G.k)
    gc = i0(g) ** (p ** (n - i))
    _ensure(gc in K0.derived_subgroup(), "g^{p^(n-i)} is not a commutator")
    K1, j1, (t,) = adjoin_central_roots(K0, [(gc, p**n)], "R1")
    K2, j2, ((q1, q2),) = central_to_commutator(K1, [t**q], "R2")
    i2 = i0.compose(j1).compose(j2)
    rt = j2(j1(r)) * j2(t).inverse()
    _ensure(rt**q * q1.commutator(q2) == i2(g), "g is not (r t^-1)^q [q1,q2]")
    gens = [i2(h) for h in G.gens()] + [rt, q1, q2]
    names = G.names + tuple(_fresh(b, set(G.names)) for b in ("u", "q1", "q2"))
    H, _ = Subgroup(K2, gens).as_group(names, "K2")
    try:
        K = lower_variety(H, n, "K2")
    except ValueError as exc:
        raise ConstructionError(f"construction check failed: {exc}") from None
    return K, _inclusion(G, K), {"R0": K0.order(), "R1": K1.order(), "R2": K2.order()}


def witness_not_base(G: FpGroup, cap: int = DEFAULT_CAP):
    """A non-embeddable amalgam (K1, K2; G) or IsBase."""
    if G.params.p == 2:
        raise ValueError("only for odd p")
    p, n = G.params.p, G.params.n
    Z, D = G.center(), G.derived_subgroup()
    if Z.order() != D.order():
        x = next(g for g in Z.gens if g not in D)
        K1, i1, ((q1, q2),) = central_to_commutator(G, [x], "K1")
        m = p**n
        K2, i2, lam = free_product_cyclic(G, m)
        z = lam.images[0]
        bad = i2(x).commutator(z)
        _ensure(not bad.is_identity(), "x stays central in K2")
        cert = {"reason": "central non-commutator", "x": str(x), "witness_bracket": str(bad)}
        return _counterexample(G, K1, i1, K2, i2, cert, {"K1": K1.order(), "K2": K2.order()})
    for i in range(1, n):
        q = p**i
        P = G.power_subgroup(q)
        for v in G.ab_classes(cap):
            g = G.element(v)
            if g in P or root_obstruction(RootAdjunctionQuery([g], [q])) is not None:
                continue
            K1, i1, lam = free_product_cyclic(G, q)
            K2, i2, trace = _root_overgroup(G, g, i)
            cert = {"reason": "root adjoinable outside G^qG'", "g": str(g), "q": q}
            return _counterexample(G, K1, i1, K2, i2, cert, trace)
    return IsBase(G.name)


# random overgroups, used to exercise the base classifier


def random_overgroup(G: FpGroup, rng: random.Random) -> tuple[FpGroup, Morphism]:
    """A small overgroup of G chosen from a few deterministic families."""
    p = G.params.p
    kind = rng.randrange(4)
    Z = [z for z in G.center().elements() if not z.is_identity()] or [G.identity]
    small = [z for z in Z if z.order() * p <= G.params.q_gen]
    if kind == 1 and small:
        # stay inside G's variety
        K, iota, _ = adjoin_central_roots(G, [(rng.choice(small), p)])
        return K, iota
    if kind == 1:
        kind = 0
    if kind == 2:
        z = rng.choice(Z)
        K, iota, _ = central_to_commutator(G, [z])
        return K, iota
    if kind == 0:
        K, iota, _ = direct_product(G, cyclic_group(G.params, p))
        return K, iota
    K, iota, _ = free_product_cyclic(G, p)
    return K, iota
