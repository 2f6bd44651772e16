"""Exact linear algebra over Z/p^e.

Row spans are stored in Howell form, the canonical echelon form over a
residue ring: pivots are powers of ``p``, entries above a pivot are reduced
modulo it, and every pivot row multiplied by its annihilator is spanned by
the rows below it.  That last property is what makes greedy reduction a
complete membership test and gives canonical coset representatives.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

Vector = tuple[int, ...]


def prime_of(modulus: int) -> int:
    """Return the prime ``p`` with ``modulus == p**e`` (``1`` for modulus 1)."""
    if modulus < 1:
        raise ValueError(f"modulus must be positive, got {modulus}")
    if modulus == 1:
        return 1
    d = 2
    while d * d <= modulus:
        if modulus % d == 0:
            break
        d += 1
    else:
        return modulus
    m = modulus
    while m % d == 0:
        m //= d
    if m != 1:
        raise ValueError(f"{modulus} is not a prime power")
    return d


def _valuation(x: int, p: int) -> int:
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


@dataclass(frozen=True)
class Lattice:
    """A submodule of (Z/modulus)^dim held by its Howell basis.

    ``pivots[k]`` is ``(column, valuation)`` of ``rows[k]``; the pivot entry
    equals ``p**valuation``.
    """

    modulus: int
    dim: int
    rows: tuple[Vector, ...]
    pivots: tuple[tuple[int, int], ...]

    @functools.cached_property
    def p(self) -> int:
        return prime_of(self.modulus)

    def order(self) -> int:
        out = 1
        for _, v in self.pivots:
            out *= self.modulus // self.p**v
        return out

    def __len__(self) -> int:
        return len(self.rows)

    def residue(self, vec: Sequence[int]) -> Vector:
        """Canonical representative of ``vec`` modulo the lattice."""
        if len(vec) != self.dim:
            raise ValueError(f"expected length {self.dim}, got {len(vec)}")
        q = self.modulus
        w = [x % q for x in vec]
        for (col, v), row in zip(self.pivots, self.rows):
            f = w[col] // self.p**v
            if f:
                w = [(a - f * b) % q for a, b in zip(w, row)]
        return tuple(w)

    def coefficients(self, vec: Sequence[int]) -> Optional[list[int]]:
        """Coefficients expressing ``vec`` over ``rows``, or None if not a member."""
        if len(vec) != self.dim:
            raise ValueError(f"expected length {self.dim}, got {len(vec)}")
        q = self.modulus
        w = [x % q for x in vec]
        coeffs = []
        for (col, v), row in zip(self.pivots, self.rows):
            pv = self.p**v
            if w[col] % pv:
                return None
            f = w[col] // pv
            coeffs.append(f)
            if f:
                w = [(a - f * b) % q for a, b in zip(w, row)]
        if any(w):
            return None
        return coeffs

    def __contains__(self, vec: Sequence[int]) -> bool:
        return not any(self.residue(vec))

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(row in self for row in other.rows)

    def elements(self) -> Iterator[Vector]:
        """Every element exactly once (coefficient tuples are unique in Howell form)."""
        q = self.modulus
        ranges = [range(q // self.p**v) for _, v in self.pivots]
        for coeffs in itertools.product(*ranges):
            w = [0] * self.dim
            for f, row in zip(coeffs, self.rows):
                if f:
                    w = [(a + f * b) % q for a, b in zip(w, row)]
            yield tuple(w)

    def coset_representatives(self, sub: "Lattice") -> list[Vector]:
        """Canonical residues mod ``sub`` of the elements of self, one per coset."""
        zero = sub.residue([0] * self.dim)
        seen = {zero}
        out = [zero]
        q = self.modulus
        for row in self.rows:
            step = sub.residue(row)
            if not any(step):
                continue
            frontier = list(out)
            while frontier:
                nxt = []
                for v in frontier:
                    w = sub.residue([(a + b) % q for a, b in zip(v, step)])
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
                out += nxt
                frontier = nxt
        return out

    def meet(self, other: "Lattice") -> "Lattice":
        """Intersection of two lattices in the same ambient module."""
        if (self.modulus, self.dim) != (other.modulus, other.dim):
            raise ValueError("lattices live in different modules")
        q = self.modulus
        ker = kernel(self.rows, other) if self.rows else zero_lattice(q, 0)
        imgs = [[sum(y[t] * self.rows[t][j] for t in range(len(y))) % q for j in range(self.dim)] for y in ker.rows]
        return howell_form(imgs, q, self.dim)

    def join(self, other: "Lattice") -> "Lattice":
        return howell_form(self.rows + other.rows, self.modulus, self.dim)

    def scaled(self, factor: int, modulus: int) -> "Lattice":
        """Image under x -> factor*x into (Z/modulus)^dim."""
        return howell_form([[factor * x for x in r] for r in self.rows], modulus, self.dim)


def howell_form(rows: Sequence[Sequence[int]], modulus: int, dim: int) -> Lattice:
    """Howell basis of the row span of ``rows`` in (Z/modulus)^dim."""
    q = modulus
    if q == 1:
        return Lattice(q, dim, (), ())
    p = prime_of(q)
    e = _valuation(q, p)
    work = []
    for r in rows:
        if len(r) != dim:
            raise ValueError(f"row of length {len(r)} in a lattice of dimension {dim}")
        r = [x % q for x in r]
        if any(r):
            work.append(r)
    basis: list[list[int]] = []
    pivots: list[tuple[int, int]] = []
    for col in range(dim):
        best, best_v = -1, e
        for idx, r in enumerate(work):
            if r[col]:
                v = _valuation(r[col], p)
                if v < best_v:
                    best, best_v = idx, v
                    if v == 0:
                        break
        if best < 0:
            continue
        piv = work.pop(best)
        pv = p**best_v
        inv = pow(piv[col] // pv, -1, q)
        piv = [x * inv % q for x in piv]
        nxt = []
        for r in work:
            if r[col]:
                f = r[col] // pv
                r = [(a - f * b) % q for a, b in zip(r, piv)]
            if any(r):
                nxt.append(r)
        ann = [x * (q // pv) % q for x in piv]
        if any(ann):
            nxt.append(ann)
        work = nxt
        basis.append(piv)
        pivots.append((col, best_v))
    # reduce entries above each pivot
    for k, (col, v) in enumerate(pivots):
        pv = p**v
        for j in range(k):
            f = basis[j][col] // pv
            if f:
                basis[j] = [(a - f * b) % q for a, b in zip(basis[j], basis[k])]
    return Lattice(q, dim, tuple(tuple(r) for r in basis), tuple(pivots))


def zero_lattice(modulus: int, dim: int) -> Lattice:
    return Lattice(modulus, dim, (), ())


def full_lattice(modulus: int, dim: int) -> Lattice:
    return howell_form([[int(i == j) for j in range(dim)] for i in range(dim)], modulus, dim)


def member(lat: Lattice, vec: Sequence[int]) -> bool:
    return vec in lat


def _augmented(A: Sequence[Sequence[int]], lat: Lattice, ncols: int) -> Lattice:
    m = len(A)
    q = lat.modulus
    aug = []
    for i, row in enumerate(A):
        if len(row) != ncols:
            raise ValueError("matrix rows must have the lattice's dimension")
        aug.append(list(row) + [int(i == j) for j in range(m)])
    for row in lat.rows:
        aug.append(list(row) + [0] * m)
    return howell_form(aug, q, ncols + m)


class LinearSystem:
    """The map x -> x*A modulo ``lat``, reduced once and reusable for many targets."""

    def __init__(self, A: Sequence[Sequence[int]], lat: Lattice):
        self.m, self.n = len(A), lat.dim
        self.modulus = lat.modulus
        self.H = _augmented(A, lat, self.n)
        n = self.n
        tails = [row[n:] for (col, _), row in zip(self.H.pivots, self.H.rows) if col >= n]
        self.kernel = howell_form(tails, self.modulus, self.m)

    def solve(self, t: Sequence[int]) -> Optional["Solution"]:
        n, q = self.n, self.modulus
        if len(t) != n:
            raise ValueError(f"target has length {len(t)}, expected {n}")
        H = self.H
        p = H.p if q > 1 else 1
        w = [x % q for x in t] + [0] * self.m
        for (col, v), row in zip(H.pivots, H.rows):
            if col >= n:
                break
            pv = p**v
            if w[col] % pv:
                return None
            f = w[col] // pv
            if f:
                w = [(a - f * b) % q for a, b in zip(w, row)]
        if any(w[:n]):
            return None
        return Solution(tuple(-a % q for a in w[n:]), self.kernel)


def kernel(A: Sequence[Sequence[int]], lat: Lattice) -> Lattice:
    """{x : x*A in lat}, as a lattice in (Z/q)^len(A)."""
    return LinearSystem(A, lat).kernel


@dataclass(frozen=True)
class Solution:
    """All solutions of x*A = t mod lat: ``particular + kernel``."""

    particular: Vector
    kernel: Lattice

    def elements(self) -> Iterator[Vector]:
        q = self.kernel.modulus
        for k in self.kernel.elements():
            yield tuple((a + b) % q for a, b in zip(self.particular, k))


def solve(lat: Lattice, A: Sequence[Sequence[int]], t: Sequence[int]) -> Optional[Solution]:
    """Solve x*A = t modulo ``lat``; returns None when insoluble."""
    return LinearSystem(A, lat).solve(t)


def cyclic_invariants(lat: Lattice) -> list[int]:
    """Orders of the cyclic factors of (Z/q)^dim / lat, largest first (trivial ones dropped)."""
    q, dim = lat.modulus, lat.dim
    if q == 1:
        return []
    p = lat.p
    e = _valuation(q, p)
    base = lat.order()
    sizes = []
    for j in range(e + 1):
        gens = [[p**j * int(a == b) for b in range(dim)] for a in range(dim)]
        sizes.append(howell_form(list(lat.rows) + gens, q, dim).order() // base)
    at_least = [0] + [_valuation(sizes[j - 1] // sizes[j], p) for j in range(1, e + 1)] + [0]
    out = []
    for j in range(e, 0, -1):
        out += [p**j] * (at_least[j] - at_least[j + 1])
    return out
