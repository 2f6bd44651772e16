"""Normal-form arithmetic in the relatively free group of N_2 ∩ B_{p^n}.

An element of the free group on ``k`` generators is written uniquely as

    x_1^{a_1} ... x_k^{a_k} * prod_{j>i} [x_j, x_i]^{c_(j,i)}

with ``a`` taken mod ``q_gen`` and ``c`` mod ``q_comm``.  Pairs ``(j, i)``
are ordered lexicographically, so the commutator basis for ``k = 3`` is
``[x2,x1], [x3,x1], [x3,x2]``.  With this orientation moving ``x_i^b`` left
past ``x_j^a`` (``j > i``) contributes exactly ``+a*b`` to ``c_(j,i)``, so
multiplication needs no signs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import comb
from typing import Sequence

from .words import Word, evaluate
from .zmod import prime_of


@dataclass(frozen=True)
class VarietyParams:
    """The variety N_2 ∩ B_{p^n}.

    For odd ``p`` commutators have the same modulus as generators.  For
    ``p = 2`` commutators in an exponent-``2^n`` group have exponent
    ``2^(n-1)``.
    """

    p: int
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"exponent index must be >= 1, got {self.n}")
        if prime_of(self.p) != self.p:
            raise ValueError(f"{self.p} is not a prime")

    @property
    def q_gen(self) -> int:
        return self.p**self.n

    @property
    def q_comm(self) -> int:
        return self.p**self.n if self.p != 2 else 2 ** (self.n - 1)

    @property
    def exponent(self) -> int:
        return self.q_gen

    def with_n(self, n: int) -> "VarietyParams":
        return VarietyParams(self.p, n)


def pair_list(k: int) -> list[tuple[int, int]]:
    return [(j, i) for j in range(k) for i in range(j)]


class FreeNil2:
    """The relatively free group F(k, p, n)."""

    def __init__(self, k: int, params: VarietyParams):
        if k < 0:
            raise ValueError("rank must be non-negative")
        self.k = k
        self.params = params
        self.pairs = pair_list(k)
        self.pair_index = {pr: t for t, pr in enumerate(self.pairs)}

    def __repr__(self):
        return f"F({self.k}, {self.params.p}, {self.params.n})"

    def __eq__(self, other):
        return isinstance(other, FreeNil2) and (self.k, self.params) == (other.k, other.params)

    def __hash__(self):
        return hash((self.k, self.params))

    @property
    def ncomm(self) -> int:
        return len(self.pairs)

    def order(self) -> int:
        return self.params.q_gen**self.k * self.params.q_comm**self.ncomm

    def element(self, a: Sequence[int], c: Sequence[int] | None = None) -> "FreeElement":
        qg, qc = self.params.q_gen, self.params.q_comm
        if len(a) != self.k:
            raise ValueError(f"a-part has length {len(a)}, rank is {self.k}")
        if c is None:
            c = (0,) * self.ncomm
        if len(c) != self.ncomm:
            raise ValueError(f"c-part has length {len(c)}, expected {self.ncomm}")
        return FreeElement(tuple(x % qg for x in a), tuple(x % qc for x in c), self)

    @cached_property
    def identity(self) -> "FreeElement":
        return self.element((0,) * self.k)

    def gen(self, i: int) -> "FreeElement":
        return self.element([int(j == i) for j in range(self.k)])

    def gens(self) -> list["FreeElement"]:
        return [self.gen(i) for i in range(self.k)]

    def basic_commutator(self, j: int, i: int) -> "FreeElement":
        """The basis element [x_j, x_i] for j > i."""
        c = [0] * self.ncomm
        c[self.pair_index[(j, i)]] = 1
        return self.element((0,) * self.k, c)

    def kappa(self, a: Sequence[int], b: Sequence[int]) -> list[int]:
        return [a[j] * b[i] for j, i in self.pairs]

    def comm_vector(self, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
        """c-coordinates of [u, v] where u, v have a-parts ``a``, ``b``."""
        qc = self.params.q_comm
        return tuple((a[j] * b[i] - b[j] * a[i]) % qc for j, i in self.pairs)

    def _check(self, u: "FreeElement"):
        if u.free != self:
            raise ValueError(f"element of {u.free} used in {self}")

    def multiply(self, u: "FreeElement", v: "FreeElement") -> "FreeElement":
        self._check(u)
        self._check(v)
        qg, qc = self.params.q_gen, self.params.q_comm
        a = tuple((x + y) % qg for x, y in zip(u.a, v.a))
        ua, va = u.a, v.a
        c = tuple(
            (cu + cv + ua[j] * va[i]) % qc for cu, cv, (j, i) in zip(u.c, v.c, self.pairs)
        )
        return FreeElement(a, c, self)

    def power(self, u: "FreeElement", m: int) -> "FreeElement":
        self._check(u)
        qg, qc = self.params.q_gen, self.params.q_comm
        b = comb(m, 2) if m >= 0 else (m * (m - 1)) // 2
        ua = u.a
        a = tuple(m * x % qg for x in ua)
        c = tuple((m * cu + b * ua[j] * ua[i]) % qc for cu, (j, i) in zip(u.c, self.pairs))
        return FreeElement(a, c, self)

    def commutator(self, u: "FreeElement", v: "FreeElement") -> "FreeElement":
        self._check(u)
        self._check(v)
        return FreeElement((0,) * self.k, self.comm_vector(u.a, v.a), self)

    def evaluate_word(self, w: Word, env: Sequence["FreeElement"] | None = None) -> "FreeElement":
        return evaluate(w, self.gens() if env is None else env, self.identity)

    def elements(self):
        import itertools

        qg, qc = self.params.q_gen, self.params.q_comm
        for a in itertools.product(range(qg), repeat=self.k):
            for c in itertools.product(range(qc), repeat=self.ncomm):
                yield FreeElement(a, c, self)


@dataclass(frozen=True)
class FreeElement:
    a: tuple[int, ...]
    c: tuple[int, ...]
    free: FreeNil2 = field(compare=False, repr=False)

    def __mul__(self, other: "FreeElement") -> "FreeElement":
        return self.free.multiply(self, other)

    def __pow__(self, m: int) -> "FreeElement":
        return self.free.power(self, m)

    def inverse(self) -> "FreeElement":
        return self.free.power(self, -1)

    def commutator(self, other: "FreeElement") -> "FreeElement":
        return self.free.commutator(self, other)

    def is_identity(self) -> bool:
        return not any(self.a) and not any(self.c)

    def is_central(self) -> bool:
        return not any(self.a)
