"""Finitely presented groups in N_2 ∩ B_{p^n} as quotients F/N.

Every group here is the free group ``F`` of its variety modulo the normal
closure ``N`` of its relators.  In class two ``N = <R>[R, F]``, so ``N`` is
described by two lattices: the a-parts of ``N`` (with a concrete element of
``N`` lifting each basis row) and the central part ``N ∩ F'``.  Subgroups
use the same description for their preimage in ``F``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Optional, Sequence

from . import words as W
from .nil2 import FreeElement, FreeNil2, VarietyParams
from .zmod import Lattice, cyclic_invariants, howell_form, kernel, solve, zero_lattice

DEFAULT_CAP = 10**6


class CapExceeded(RuntimeError):
    """An enumeration would exceed the configured element cap."""


class NotAHomomorphism(ValueError):
    pass


@dataclass(frozen=True)
class Presentation:
    params: VarietyParams
    names: tuple[str, ...]
    relators: tuple[W.Word, ...] = ()
    name: str = "G"

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"repeated generator names in {self.names}")
        k = len(self.names)
        for r in self.relators:
            bad = [i for i in W.generators_used(r) if not 0 <= i < k]
            if bad:
                raise ValueError(f"relator references undeclared generator index {bad[0]}")

    @property
    def k(self) -> int:
        return len(self.names)

    def with_relators(self, extra: Iterable[W.Word], name: str | None = None) -> "Presentation":
        return Presentation(self.params, self.names, self.relators + tuple(extra), name or self.name)


def _prod_powers(free: FreeNil2, elems: Sequence[FreeElement], exps: Sequence[int]) -> FreeElement:
    out = free.identity
    for g, m in zip(elems, exps):
        if m:
            out = out * g**m
    return out


@dataclass(frozen=True)
class _Closure:
    """Structure of the subgroup <gens>·C of F, with C a central lattice.

    ``lifts[t]`` is an element of the subgroup whose a-part is exactly
    ``alat.rows[t]``; ``clat`` is the subgroup's intersection with F'.
    """

    free: FreeNil2
    alat: Lattice
    lifts: tuple[FreeElement, ...]
    clat: Lattice

    @staticmethod
    def build(free: FreeNil2, gens: Sequence[FreeElement], central: Iterable[Sequence[int]]) -> "_Closure":
        qg, qc = free.params.q_gen, free.params.q_comm
        k = free.k
        gmat = [g.a for g in gens]
        alat = howell_form(gmat, qg, k)
        lifts = []
        zero = zero_lattice(qg, k)
        for row in alat.rows:
            sol = solve(zero, gmat, row)
            assert sol is not None
            lifts.append(_prod_powers(free, gens, sol.particular))
        central_rows = [list(c) for c in central]
        for s, t in itertools.combinations(range(len(gens)), 2):
            central_rows.append(free.comm_vector(gens[s].a, gens[t].a))
        if gens:
            for x in kernel(gmat, zero).rows:
                z = _prod_powers(free, gens, x)
                assert not any(z.a)
                central_rows.append(z.c)
        clat = howell_form(central_rows, qc, free.ncomm)
        return _Closure(free, alat, tuple(lifts), clat)

    def order(self) -> int:
        return self.alat.order() * self.clat.order()

    def strip(self, g: FreeElement) -> FreeElement:
        """Divide ``g`` by lifts until its a-part is the canonical residue."""
        p = self.alat.p if self.alat.modulus > 1 else 1
        for (col, v), lift in zip(self.alat.pivots, self.lifts):
            f = g.a[col] // p**v
            if f:
                g = g * lift ** (-f)
        return g

    def reduce(self, g: FreeElement) -> FreeElement:
        g = self.strip(g)
        return FreeElement(g.a, self.clat.residue(g.c), self.free)

    def contains(self, g: FreeElement) -> bool:
        g = self.strip(g)
        return not any(g.a) and g.c in self.clat


def scaled_kernel(free: FreeNil2, rows: Sequence[Sequence[int]], target: Lattice) -> Lattice:
    """{x mod q_gen : x*rows in target}, where rows and target live mod q_comm.

    When ``q_comm < q_gen`` (p = 2) the commutator side is embedded in
    Z/q_gen by multiplication with ``q_gen / q_comm``.
    """
    qg, qc = free.params.q_gen, free.params.q_comm
    s = qg // qc
    mat = [[s * x for x in r] for r in rows]
    return kernel(mat, target.scaled(s, qg))


class FpGroup:
    """A group F/N given by a presentation in N_2 ∩ B_{p^n}."""

    def __init__(self, presentation: Presentation):
        self.presentation = presentation
        self.params = presentation.params
        self.free = FreeNil2(presentation.k, self.params)
        self.relator_elements = [self.free.evaluate_word(r) for r in presentation.relators]
        free = self.free
        normal_central = [
            free.comm_vector(r.a, e.a) for r in self.relator_elements for e in free.gens()
        ]
        self.normal = _Closure.build(free, self.relator_elements, normal_central)

    def __repr__(self):
        return f"FpGroup({self.name}, order={self.order()})"

    @property
    def name(self) -> str:
        return self.presentation.name

    @property
    def k(self) -> int:
        return self.free.k

    @property
    def names(self) -> tuple[str, ...]:
        return self.presentation.names

    @property
    def U(self) -> Lattice:
        return self.normal.alat

    @property
    def W(self) -> Lattice:
        return self.normal.clat

    def order(self) -> int:
        return self.free.order() // self.normal.order()

    # elements

    def reduce(self, g: FreeElement) -> "Element":
        r = self.normal.reduce(g)
        return Element(self, r.a, r.c)

    def element(self, a: Sequence[int], c: Sequence[int] | None = None) -> "Element":
        return self.reduce(self.free.element(a, c))

    @cached_property
    def identity(self) -> "Element":
        return self.reduce(self.free.identity)

    def gen(self, i: int) -> "Element":
        return self.reduce(self.free.gen(i))

    def gens(self) -> list["Element"]:
        return [self.gen(i) for i in range(self.k)]

    def gen_by_name(self, name: str) -> "Element":
        return self.gen(self.names.index(name))

    def basic_commutators(self) -> list["Element"]:
        return [self.reduce(self.free.basic_commutator(j, i)) for j, i in self.free.pairs]

    def evaluate(self, w: W.Word, env: Sequence["Element"] | None = None) -> "Element":
        return W.evaluate(w, self.gens() if env is None else env, self.identity)

    def word_of(self, g: "Element") -> W.Word:
        return element_word(g.a, g.c, self.free)

    def elements(self, cap: int = DEFAULT_CAP) -> Iterator["Element"]:
        return self.whole().enumerate(cap)

    # structural subgroups

    def whole(self) -> "Subgroup":
        return Subgroup(self, self.gens())

    def trivial(self) -> "Subgroup":
        return Subgroup(self, [])

    def subgroup(self, gens: Iterable["Element"]) -> "Subgroup":
        return Subgroup(self, list(gens))

    def derived_subgroup(self) -> "Subgroup":
        return Subgroup(self, self.basic_commutators())

    def power_subgroup(self, q: int) -> "Subgroup":
        """G^q G'."""
        m = q
        while m % self.params.p == 0:
            m //= self.params.p
        if m != 1:
            raise ValueError(f"{q} is not a power of {self.params.p}")
        return Subgroup(self, [g**q for g in self.gens()] + self.basic_commutators())

    def center(self) -> "Subgroup":
        free = self.free
        k, P = free.k, free.ncomm
        qc = self.params.q_comm
        rows = []
        for m in range(k):
            em = [int(t == m) for t in range(k)]
            row = []
            for l in range(k):
                el = [int(t == l) for t in range(k)]
                row += list(free.comm_vector(em, el))
            rows.append(row)
        target = howell_form(
            [[0] * (P * l) + list(w) + [0] * (P * (k - l - 1)) for l in range(k) for w in self.W.rows],
            qc,
            P * k,
        )
        ker = scaled_kernel(free, rows, target)
        gens = [self.element(r) for r in ker.rows] + self.basic_commutators()
        return Subgroup(self, gens)

    def abelianization(self) -> list[int]:
        """Cyclic factor orders of G/G' (largest first)."""
        return cyclic_invariants(self.U)

    def project_ab(self, g: "Element") -> tuple[int, ...]:
        """Image of ``g`` in G/G' as its canonical a-residue."""
        return g.a

    def ab_classes(self, cap: int = DEFAULT_CAP) -> list[tuple[int, ...]]:
        """Canonical a-residues of all classes of G/G', in a fixed order."""
        n = cyclic_order(self.abelianization())
        if n > cap:
            raise CapExceeded(f"G/G' has {n} elements, cap is {cap}")
        seen = {tuple([0] * self.k)}
        order = [tuple([0] * self.k)]
        frontier = list(order)
        gens = [[int(t == l) for t in range(self.k)] for l in range(self.k)]
        while frontier:
            nxt = []
            for v in frontier:
                for e in gens:
                    w = self.U.residue([x + y for x, y in zip(v, e)])
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
            order += nxt
            frontier = nxt
        assert len(order) == n
        return sorted(order)

    def quotient(self, extra: Iterable[W.Word], name: str | None = None) -> tuple["FpGroup", "Morphism"]:
        Q = FpGroup(self.presentation.with_relators(extra, name or f"{self.name}/N"))
        return Q, Morphism(self, Q, Q.gens())

    def exponent_bound(self) -> int:
        """Exponent of G computed from generator orders (valid for odd p)."""
        if self.params.p == 2:
            raise ValueError("generator orders bound the exponent only for odd p")
        return max([g.order() for g in self.gens()] + [1])

    def is_abelian(self) -> bool:
        return self.derived_subgroup().order() == 1


def cyclic_order(invariants: Sequence[int]) -> int:
    out = 1
    for x in invariants:
        out *= x
    return out


def element_word(a: Sequence[int], c: Sequence[int], free: FreeNil2) -> W.Word:
    """Normal-form word x^a prod [x_j,x_i]^c."""
    factors: list[W.Word] = []
    for i, x in enumerate(a):
        if x:
            factors.append(W.Power(W.Gen(i), x) if x != 1 else W.Gen(i))
    for (j, i), x in zip(free.pairs, c):
        if x:
            br = W.Commutator(W.Gen(j), W.Gen(i))
            factors.append(W.Power(br, x) if x != 1 else br)
    if len(factors) == 1:
        return factors[0]
    return W.Product(tuple(factors))


@dataclass(frozen=True)
class Element:
    group: FpGroup = field(compare=False, repr=False)
    a: tuple[int, ...]
    c: tuple[int, ...]

    def __hash__(self):
        return hash((self.a, self.c))

    def __eq__(self, other):
        return isinstance(other, Element) and self.group is other.group and self.a == other.a and self.c == other.c

    def as_free(self) -> FreeElement:
        return FreeElement(self.a, self.c, self.group.free)

    def __mul__(self, other: "Element") -> "Element":
        if other.group is not self.group:
            raise ValueError("elements of different groups")
        return self.group.reduce(self.as_free() * other.as_free())

    def __pow__(self, m: int) -> "Element":
        return self.group.reduce(self.as_free() ** m)

    def inverse(self) -> "Element":
        return self ** -1

    def commutator(self, other: "Element") -> "Element":
        if other.group is not self.group:
            raise ValueError("elements of different groups")
        return self.group.reduce(self.as_free().commutator(other.as_free()))

    def is_identity(self) -> bool:
        return not any(self.a) and not any(self.c)

    def order(self) -> int:
        p = self.group.params.p
        m, g = 1, self
        while not g.is_identity():
            g = g**p
            m *= p
        return m

    def is_central(self) -> bool:
        return all(self.commutator(x).is_identity() for x in self.group.gens())

    def word(self) -> W.Word:
        return self.group.word_of(self)

    def __str__(self):
        return W.format_word(self.word(), self.group.names)


class Subgroup:
    """The subgroup of ``ambient`` generated by ``gens``."""

    def __init__(self, ambient: FpGroup, gens: Sequence[Element]):
        self.ambient = ambient
        self.gens = [g for g in gens]
        for g in self.gens:
            if g.group is not ambient:
                raise ValueError("generator does not belong to the ambient group")
        G = ambient
        self.data = _Closure.build(
            G.free, [g.as_free() for g in self.gens] + G.relator_elements, G.W.rows
        )

    def __repr__(self):
        return f"Subgroup(order={self.order()}, of {self.ambient.name})"

    def order(self) -> int:
        return self.data.order() // self.ambient.normal.order()

    def __len__(self):
        return self.order()

    def __contains__(self, g: Element) -> bool:
        return self.data.contains(g.as_free())

    def membership(self, g: Element) -> bool:
        return g in self

    def contains_subgroup(self, other: "Subgroup") -> bool:
        return all(g in self for g in other.gens)

    def __eq__(self, other):
        if not isinstance(other, Subgroup) or other.ambient is not self.ambient:
            return NotImplemented
        return self.order() == other.order() and self.contains_subgroup(other)

    def __hash__(self):
        return hash((id(self.ambient), self.order()))

    def join(self, more: Iterable[Element]) -> "Subgroup":
        return Subgroup(self.ambient, self.gens + list(more))

    def abelian_image(self) -> Lattice:
        return self.data.alat

    def central_part(self) -> Lattice:
        """H ∩ G' pulled back to F'."""
        return self.data.clat

    def enumerate(self, cap: int = DEFAULT_CAP) -> Iterator[Element]:
        n = self.order()
        if n > cap:
            raise CapExceeded(f"subgroup of order {n} exceeds enumeration cap {cap}")
        G = self.ambient
        free = G.free
        data = self.data
        # cosets of U in the a-lattice and of W in the central lattice
        tops = []
        for a in data.alat.coset_representatives(G.U):
            coeffs = data.alat.coefficients(a)
            tops.append(G.reduce(_prod_powers(free, data.lifts, coeffs)))
        centrals = [
            G.reduce(free.element((0,) * free.k, c)) for c in data.clat.join(G.W).coset_representatives(G.W)
        ]
        count = 0
        for t in tops:
            for z in centrals:
                count += 1
                yield t * z
        assert count == n, (count, n)

    def intersection_order(self, other: "Subgroup") -> int:
        """|self ∩ other|, without enumeration.

        Over each a-class common to both preimages the two fibres are cosets
        of the central lattices Z1, Z2; they meet iff the offset between the
        chosen lifts lies in Z1 + Z2, and the offset is additive in the class.
        """
        if other.ambient is not self.ambient:
            raise ValueError("subgroups of different groups")
        G = self.ambient
        free = G.free
        d1, d2 = self.data, other.data
        common = d1.alat.meet(d2.alat)
        zsum = d1.clat.join(d2.clat)
        hits = 0
        for row in common.coset_representatives(G.U):
            l1 = _prod_powers(free, d1.lifts, d1.alat.coefficients(row))
            l2 = _prod_powers(free, d2.lifts, d2.alat.coefficients(row))
            off = l2.inverse() * l1
            assert not any(off.a)
            hits += off.c in zsum
        zmeet = d1.clat.order() * d2.clat.order() // zsum.order()
        # every U-coset of a-parts carries |U| classes of N, all with the same fibre
        return hits * G.U.order() * zmeet // G.normal.order()

    def elements(self, cap: int = DEFAULT_CAP) -> list[Element]:
        return list(self.enumerate(cap))

    def is_normal(self) -> bool:
        return all(g.commutator(x) in self for g in self.gens for x in self.ambient.gens())

    def as_group(self, names: Sequence[str] | None = None, name: str = "H") -> tuple[FpGroup, "Morphism"]:
        """A presentation of this subgroup on its generators, with the inclusion map."""
        G = self.ambient
        s = len(self.gens)
        names = tuple(names) if names is not None else tuple(f"h{t}" for t in range(s))
        Fs = FreeNil2(s, G.params)
        qg, qc = G.params.q_gen, G.params.q_comm
        hmat = [g.a for g in self.gens]
        level0 = kernel(hmat, G.U) if s else zero_lattice(qg, 0)
        cmat = [G.free.comm_vector(self.gens[j].a, self.gens[i].a) for j, i in Fs.pairs]

        def central_image(a: Sequence[int]) -> tuple[int, ...]:
            z = G.reduce(_prod_powers(G.free, [g.as_free() for g in self.gens], a))
            assert not any(z.a)
            return z.c

        zs = [central_image(b) for b in level0.rows]
        cspan = howell_form(list(G.W.rows) + cmat, qc, G.free.ncomm)
        ker_y = scaled_kernel(G.free, zs, cspan) if zs else zero_lattice(qg, 0)
        relators: list[W.Word] = []
        for y in ker_y.rows:
            a = [sum(yb * b[t] for yb, b in zip(y, level0.rows)) % qg for t in range(s)]
            z = central_image(a)
            sol = solve(G.W, cmat, [-x for x in z]) if cmat else None
            if cmat:
                assert sol is not None
                cstar = sol.particular
            else:
                assert not any(z) or not G.free.ncomm
                cstar = ()
            relators.append(element_word(a, cstar, Fs))
        if cmat:
            for cvec in kernel(cmat, G.W).rows:
                relators.append(element_word((0,) * s, cvec, Fs))
        pres = Presentation(G.params, names, tuple(relators), name)
        H = FpGroup(pres)
        inc = Morphism(H, G, self.gens)
        if H.order() != self.order():
            raise AssertionError(f"subgroup presentation has order {H.order()}, expected {self.order()}")
        return H, inc


class Morphism:
    """A homomorphism given by generator images, checked on every relator."""

    def __init__(self, domain: FpGroup, codomain: FpGroup, images: Sequence[Element], check: bool = True):
        if len(images) != domain.k:
            raise ValueError(f"need {domain.k} generator images, got {len(images)}")
        self.domain = domain
        self.codomain = codomain
        self.images = list(images)
        for g in self.images:
            if g.group is not codomain:
                raise ValueError("image not in codomain")
        if check:
            if domain.params != codomain.params:
                # the domain's variety laws are implicit; check them on the images
                qg, qc = domain.params.q_gen, domain.params.q_comm
                laws = [g**qg for g in self.images]
                laws += [self.images[j].commutator(self.images[i]) ** qc for j, i in domain.free.pairs]
                if not all(e.is_identity() for e in laws):
                    raise NotAHomomorphism(f"images violate the laws of {domain.params}")
            for w in domain.presentation.relators:
                if not codomain.evaluate(w, self.images).is_identity():
                    raise NotAHomomorphism(
                        f"relator {W.format_word(w, domain.names)} does not map to the identity"
                    )
        self._comm_images = {
            (j, i): self.images[j].commutator(self.images[i]) for j, i in domain.free.pairs
        }

    def __repr__(self):
        return f"Morphism({self.domain.name} -> {self.codomain.name})"

    def __call__(self, g: Element) -> Element:
        if g.group is not self.domain:
            raise ValueError("element not in domain")
        out = self.codomain.identity
        for img, x in zip(self.images, g.a):
            if x:
                out = out * img**x
        for pr, x in zip(self.domain.free.pairs, g.c):
            if x:
                out = out * self._comm_images[pr] ** x
        return out

    def image_subgroup(self) -> Subgroup:
        return Subgroup(self.codomain, self.images)

    def is_injective(self) -> bool:
        return self.image_subgroup().order() == self.domain.order()

    def compose(self, other: "Morphism") -> "Morphism":
        """``other ∘ self``."""
        return Morphism(self.domain, other.codomain, [other(g) for g in self.images], check=False)

    def kernel_element(self, cap: int = DEFAULT_CAP) -> Optional[Element]:
        """A nonidentity element mapping to the identity, if any."""
        if self.is_injective():
            return None
        # a nontrivial normal subgroup of a p-group meets the center
        for g in self.domain.center().enumerate(cap):
            if not g.is_identity() and self(g).is_identity():
                return g
        raise AssertionError("non-injective morphism without a kernel element")


def omega_subgroup(G: FpGroup, i: int, within: Subgroup | None = None, cap: int = DEFAULT_CAP) -> Subgroup:
    """Elements of ``within`` (default: the center) of order dividing p^i."""
    H = within if within is not None else G.center()
    q = G.params.p**i
    gens = [g for g in H.enumerate(cap) if (g**q).is_identity()]
    S = Subgroup(G, gens)
    if S.order() != len(gens):
        raise ValueError("the p^i-torsion of this subgroup is not a subgroup")
    return S


def hom(dom: FpGroup, cod: FpGroup, images: Sequence[Element]) -> Morphism:
    return Morphism(dom, cod, images)


def build_group(pres: Presentation) -> FpGroup:
    return FpGroup(pres)


def lift_variety(G: FpGroup, n: int, name: str | None = None) -> FpGroup:
    """Re-present G in N_2 ∩ B_{p^n} for n >= G's exponent index (odd p)."""
    params = G.params
    if n < params.n:
        raise ValueError("use lower_variety to shrink the exponent")
    if params.p == 2 and n != params.n:
        raise ValueError("changing the exponent is supported for odd p only")
    q = params.q_gen
    extra: list[W.Word] = [W.Power(W.Gen(i), q) for i in range(G.k)]
    extra += [W.Power(W.Commutator(W.Gen(j), W.Gen(i)), q) for j, i in G.free.pairs]
    pres = Presentation(params.with_n(n), G.names, G.presentation.relators + tuple(extra), name or G.name)
    H = FpGroup(pres)
    assert H.order() == G.order()
    return H


def lower_variety(G: FpGroup, n: int, name: str | None = None) -> FpGroup:
    """Re-present G in a smaller exponent variety; G must already have exponent dividing p^n."""
    pres = Presentation(G.params.with_n(n), G.names, G.presentation.relators, name or G.name)
    H = FpGroup(pres)
    if H.order() != G.order():
        raise ValueError(f"{G.name} does not have exponent dividing {G.params.p}^{n}")
    return H
