"""Dominions and the closure / base classifiers for odd p.

Every quantifier over "integers a, b, c and elements g1, g2" is turned into
a linear system over Z/p^n.  Commutators are bilinear in classes mod G',
so a commutator condition holds somewhere on a solution lattice iff it
holds on one of the lattice's Howell basis rows.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .fpgroup import DEFAULT_CAP, Element, FpGroup, Subgroup
from .products import amalgamated_coproduct, special_amalgam
from .zmod import Lattice, LinearSystem, howell_form, kernel, zero_lattice

N2 = "n2"
BPN = "bpn"


def _require_odd(G: FpGroup, what: str):
    if G.params.p == 2:
        raise ValueError(f"{what} is only available for odd p")


# dominions


@dataclass
class DominionResult:
    ambient: FpGroup
    base: Subgroup
    subgroup: Subgroup
    # (r class, s class, q, value of [r,s]^q) for brackets outside the base
    certificates: list[tuple[tuple, tuple, int, Element]] = field(default_factory=list)

    @property
    def trivial(self) -> bool:
        return self.subgroup.order() == self.base.order()


def power_class_lattice(K: FpGroup, G: Subgroup, q: int) -> Lattice:
    """{r̄ ∈ K/K' : r^q ∈ G·K'} as a lattice of a-vectors."""
    k = K.k
    scal = [[q * int(s == t) for t in range(k)] for s in range(k)]
    return kernel(scal, G.abelian_image())


def dominion(K: FpGroup, G: Subgroup) -> DominionResult:
    """dom_K(G) as G together with all [r,s]^{p^i} with r^{p^i}, s^{p^i} ∈ G·K'."""
    _require_odd(K, "the dominion description")
    if G.ambient is not K:
        raise ValueError("subgroup of a different group")
    p, n = K.params.p, K.params.n
    extra: list[Element] = []
    certs = []
    for i in range(1, n):
        q = p**i
        S = power_class_lattice(K, G, q)
        for r, s in itertools.combinations(S.rows, 2):
            d = K.element(r).commutator(K.element(s)) ** q
            if d.is_identity():
                continue
            extra.append(d)
            if d not in G:
                certs.append((tuple(r), tuple(s), q, d))
    D = G.join(extra) if extra else G
    return DominionResult(K, G, D, certs)


def dominion_oracle(K: FpGroup, G: Subgroup, cap: int = DEFAULT_CAP) -> Subgroup:
    """dom_K(G) read off the special amalgam K ∐_G K."""
    am = special_amalgam(K, G)
    res = amalgamated_coproduct(am)
    im2 = res.lam_C.image_subgroup()
    D = K.subgroup(G.gens)
    for g in K.elements(cap):
        if g not in D and res.lam_A(g) in im2:
            D = D.join([g])
    return D


# closure classification


@dataclass
class ConditionWitness:
    a: int = 0
    b: int = 0
    c: int = 0
    j: int = 0
    g1: Optional[Element] = None
    g2: Optional[Element] = None
    alpha: int = 0

    def as_dict(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "c": self.c,
            "j": self.j,
            "g1": None if self.g1 is None else str(self.g1),
            "g2": None if self.g2 is None else str(self.g2),
            "alpha": self.alpha,
        }


@dataclass
class ClosureEntry:
    x: Element
    y: Element
    i: int
    condition: str  # 'a'..'d', or 'none'
    witness: Optional[ConditionWitness] = None
    also: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "x": str(self.x),
            "y": str(self.y),
            "i": self.i,
            "condition": self.condition,
            "witness": None if self.witness is None else self.witness.as_dict(),
            "also": list(self.also),
        }


@dataclass
class ClosureReport:
    group: str
    variety: str
    n: int
    closed: bool
    entries: list[ClosureEntry] = field(default_factory=list)
    complete: bool = True

    @property
    def failures(self) -> list[ClosureEntry]:
        return [e for e in self.entries if e.condition == "none"]

    def __bool__(self):
        return self.closed


class _PairSystem:
    """Congruences g1^q ≡ x^a y^b, g2^q ≡ x^(b+j) y^c (mod G') for fixed x, y, q.

    Unknown vector v = (a, b, c, g1, g2) with g1, g2 as a-vectors.
    """

    def __init__(self, G: FpGroup, x: Sequence[int], y: Sequence[int], q: int, UU: Lattice):
        self.G = G
        self.x, self.y = list(x), list(y)
        k = G.k
        z = [0] * k
        neg = lambda v: [-t for t in v]
        rows = [neg(x) + z, neg(y) + neg(x), z + neg(y)]
        for m in range(k):
            rows.append([q * int(t == m) for t in range(k)] + z)
        for m in range(k):
            rows.append(z + [q * int(t == m) for t in range(k)])
        self.system = LinearSystem(rows, UU)

    @property
    def homogeneous(self) -> Lattice:
        return self.system.kernel

    def bracket(self, v: Sequence[int]) -> tuple[int, ...]:
        """c-part of [g1,x][g2,y] reduced mod W."""
        G, k = self.G, self.G.k
        free = G.free
        g1, g2 = v[3 : 3 + k], v[3 + k :]
        c1 = free.comm_vector(g1, self.x)
        c2 = free.comm_vector(g2, self.y)
        qc = G.params.q_comm
        return G.W.residue([(s + t) % qc for s, t in zip(c1, c2)])

    def nonzero_row(self, lat: Lattice) -> Optional[tuple]:
        for row in lat.rows:
            if any(self.bracket(row)):
                return tuple(row)
        return None

    def solve_shift(self, j: int):
        k = self.G.k
        return self.system.solve([0] * k + [j * t for t in self.x])

    def witness(self, v: Sequence[int], j: int, alpha: int = 0) -> ConditionWitness:
        G, k = self.G, self.G.k
        return ConditionWitness(
            a=v[0], b=v[1], c=v[2], j=j, g1=G.element(v[3 : 3 + k]), g2=G.element(v[3 + k :]), alpha=alpha
        )


def _uu(G: FpGroup) -> Lattice:
    k = G.k
    z = [0] * k
    rows = [list(u) + z for u in G.U.rows] + [z + list(u) for u in G.U.rows]
    return howell_form(rows, G.params.q_gen, 2 * k)


def evaluate_conditions(G: FpGroup, x: Element, y: Element, i: int, variety: str = BPN, full: bool = False) -> ClosureEntry:
    """Which of the closure conditions holds for (x̄, ȳ, p^i)."""
    p, n = G.params.p, G.params.n
    q = p**i
    sysm = _PairSystem(G, x.a, y.a, q, _uu(G))
    hits: list[tuple[str, ConditionWitness]] = []

    def done() -> bool:
        return bool(hits) and not full

    # (a): some homogeneous solution has [g1,x][g2,y] != e
    row = sysm.nonzero_row(sysm.homogeneous)
    if row is not None:
        hits.append(("a", sysm.witness(row, 0)))
    if variety == BPN and not done():
        alpha = max(0, n - 2 * i)
        if not (x.commutator(y) ** (p**alpha)).is_identity():
            hits.append(("b", ConditionWitness(alpha=alpha)))
        if not done() and 2 * i > n:
            step = p ** (n - i)
            for jj in range(1, p ** (2 * i - n) + 1):
                j = jj * step
                sol = sysm.solve_shift(j)
                if sol is None:
                    continue
                v = None
                if any(sysm.bracket(sol.particular)):
                    v = sol.particular
                elif row is not None:
                    v = tuple((s + t) % G.params.q_gen for s, t in zip(sol.particular, row))
                if v is not None:
                    hits.append(("c", sysm.witness(v, j, alpha)))
                    break
    if not done():
        sol = sysm.solve_shift(1)
        if sol is not None:
            hits.append(("d", sysm.witness(sol.particular, 1)))
    if not hits:
        return ClosureEntry(x, y, i, "none")
    return ClosureEntry(x, y, i, hits[0][0], hits[0][1], [h[0] for h in hits[1:]])


def is_absolutely_closed(G: FpGroup, variety: str = BPN, full_report: bool = False, cap: int = DEFAULT_CAP) -> ClosureReport:
    """Absolute closure of G in N_2 (variety='n2') or in N_2 ∩ B_{p^n} ('bpn').

    ``n`` is taken from G's presentation.  Pairs are visited up to the swap
    symmetry x <-> y; without ``full_report`` the scan stops at the first
    failing pair.
    """
    _require_odd(G, "the closure classification")
    if variety not in (N2, BPN):
        raise ValueError(f"unknown variety {variety!r}")
    n = G.params.n
    irange = range(1, n) if variety == BPN else range(1, n + 1)
    classes = [G.element(v) for v in G.ab_classes(cap)]
    report = ClosureReport(G.name, variety, n, True)
    for i in irange:
        for s, x in enumerate(classes):
            for y in classes[s:]:
                e = evaluate_conditions(G, x, y, i, variety, full_report)
                if full_report or e.condition == "none":
                    report.entries.append(e)
                if e.condition == "none":
                    report.closed = False
                    if not full_report:
                        report.complete = False
                        return report
    return report


def n2_levels_stabilize(G: FpGroup) -> bool:
    """The congruence lattices for p^n and p^(n+1) coincide for every pair of generators."""
    p, n = G.params.p, G.params.n
    UU = _uu(G)
    gens = [g.a for g in G.gens()] or [()]
    for x, y in itertools.product(gens, repeat=2):
        A = _PairSystem(G, x, y, p**n, UU).homogeneous
        B = _PairSystem(G, x, y, p ** (n + 1), UU).homogeneous
        if not (A.contains_lattice(B) and B.contains_lattice(A)):
            return False
    return True


# Saracino root adjunction


@dataclass
class RootAdjunctionQuery:
    elements: list[Element]
    degrees: list[int]
    allow_large: bool = False

    def __post_init__(self):
        if len(self.elements) != len(self.degrees) or not self.elements:
            raise ValueError("need m >= 1 elements with matching degrees")
        p = self.elements[0].group.params.p
        for d in self.degrees:
            m = d
            while m % p == 0:
                m //= p
            if m != 1 or d < 1:
                raise ValueError(f"degree {d} is not a power of {p}")
        if len(self.elements) > 2 and not self.allow_large:
            raise ValueError("m > 2 requires allow_large=True")


def _valp(d: int, p: int) -> int:
    e = 0
    while d % p == 0 and d > 1:
        d //= p
        e += 1
    return e


def root_obstruction(query: RootAdjunctionQuery) -> Optional[dict]:
    """A violating (c, y) for Saracino's criterion, or None if roots can be adjoined."""
    gs = query.elements
    G = gs[0].group
    p, qg = G.params.p, G.params.q_gen
    k, m = G.k, len(gs)
    es = [_valp(d, p) for d in query.degrees]
    # parameters: y_1..y_m (k each), diagonal c_jj, then one t per pair i<j
    pairs = [(s, t) for s in range(m) for t in range(s + 1, m)]
    nparams = m * k + m + len(pairs)
    # coefficient of each parameter in c_ij (i = source element, j = equation)
    cform: dict[tuple[int, int], tuple[int, int]] = {}
    for j in range(m):
        cform[(j, j)] = (m * k + j, 1)
    for s, (u, v) in enumerate(pairs):
        idx = m * k + m + s
        # n_u c_uv = n_v c_vu: put the free parameter on the side with the larger degree
        if es[u] <= es[v]:
            cform[(v, u)] = (idx, 1)
            cform[(u, v)] = (idx, p ** (es[v] - es[u]))
        else:
            cform[(u, v)] = (idx, 1)
            cform[(v, u)] = (idx, p ** (es[u] - es[v]))
    rows = [[0] * (m * k) for _ in range(nparams)]
    for j in range(m):
        for t in range(k):
            rows[j * k + t][j * k + t] = query.degrees[j] % qg
        for i in range(m):
            idx, coef = cform[(i, j)]
            for t in range(k):
                rows[idx][j * k + t] = (rows[idx][j * k + t] - coef * gs[i].a[t]) % qg
    target = howell_form(
        [[0] * (j * k) + list(u) + [0] * ((m - j - 1) * k) for j in range(m) for u in G.U.rows],
        qg,
        m * k,
    )
    lat = kernel(rows, target)
    free = G.free
    qc = G.params.q_comm
    for row in lat.rows:
        tot = [0] * free.ncomm
        for j in range(m):
            cv = free.comm_vector(row[j * k : (j + 1) * k], gs[j].a)
            tot = [(s + t) % qc for s, t in zip(tot, cv)]
        if any(G.W.residue(tot)):
            ys = [G.element(row[j * k : (j + 1) * k]) for j in range(m)]
            cs = {f"c{i + 1}{j + 1}": (row[cform[(i, j)][0]] * cform[(i, j)][1]) % qg for i in range(m) for j in range(m)}
            return {"y": [str(y) for y in ys], "c": cs}
    return None


def has_root_extension(query: RootAdjunctionQuery) -> bool:
    """Whether some N_2 overgroup has an n_i-th root of each g_i."""
    return root_obstruction(query) is None


# bases


@dataclass
class BaseReport:
    group: str
    base: bool
    center_is_derived: bool
    failure: Optional[dict] = None

    def __bool__(self):
        return self.base


def is_amalgamation_base(G: FpGroup, cap: int = DEFAULT_CAP) -> BaseReport:
    """Weak = strong amalgamation base (odd p): Z(G) = G' plus the per-element root disjunction."""
    _require_odd(G, "the base classification")
    Z, D = G.center(), G.derived_subgroup()
    if Z.order() != D.order():
        extra = next(g for g in Z.gens if g not in D)
        return BaseReport(G.name, False, False, {"reason": "Z(G) != G'", "element": str(extra)})
    p, n = G.params.p, G.params.n
    for i in range(1, n):
        q = p**i
        P = G.power_subgroup(q)
        for v in G.ab_classes(cap):
            g = G.element(v)
            if g in P:
                continue
            if root_obstruction(RootAdjunctionQuery([g], [q])) is None:
                return BaseReport(
                    G.name, False, True, {"reason": "root adjoinable outside G^qG'", "element": str(g), "q": q}
                )
    return BaseReport(G.name, True, True)


def keylemma_check(K: FpGroup, x: Element, y: Element, r: Element, s: Element, i: int, j: int,
                   a: int, b: int, c: int, g1: Element, g2: Element) -> bool:
    """Evaluate [r,s]^(j p^i) == [g1,x][g2,y] after checking the hypotheses mod K'."""
    q = K.params.p**i
    D = K.derived_subgroup()
    checks = {
        "x = r^q mod K'": x * (r**q).inverse(),
        "y = s^q mod K'": y * (s**q).inverse(),
        "g1^q = x^a y^b mod K'": g1**q * (x**a * y**b).inverse(),
        "g2^q = x^(b+j) y^c mod K'": g2**q * (x ** (b + j) * y**c).inverse(),
    }
    for label, e in checks.items():
        if e not in D:
            raise ValueError(f"key lemma hypothesis fails: {label}")
    return r.commutator(s) ** (j * q) == g1.commutator(x) * g2.commutator(y)


def dominion_closure_chain(K: FpGroup, G: Subgroup, variety: str = BPN):
    """(dom_K(G), closure report of the dominion)."""
    res = dominion(K, G)
    D, _ = res.subgroup.as_group(name=f"dom_{K.name}")
    return res, is_absolutely_closed(D, variety)
