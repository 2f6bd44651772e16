"""Independent brute-force oracles.

None of these use Howell forms or the coordinate formulas of FreeNil2;
they exist to cross-check them on small cases.
"""

from __future__ import annotations

import itertools
import random
from typing import Iterable, Sequence

from .fpgroup import Element, FpGroup
from .nil2 import FreeNil2, VarietyParams

# naive collection in F(2,p,1): letters x, y and c = [y,x]


def collect(letters: str, p: int) -> str:
    """Rewrite a word in x, y, c to x^a y^b c^g using yx -> xyc, cx -> xc, cy -> yc and z^p -> e."""
    w = letters
    kill = {ch * p: "" for ch in "xyc"}
    while True:
        prev = w
        for pat, rep in kill.items():
            w = w.replace(pat, rep)
        w = w.replace("yx", "xyc", 1) if "yx" in w else w
        w = w.replace("cx", "xc").replace("cy", "yc")
        if w == prev:
            return w


def normal_word(a: int, b: int, g: int) -> str:
    return "x" * a + "y" * b + "c" * g


def word_coords(w: str) -> tuple[int, int, int]:
    return (w.count("x"), w.count("y"), w.count("c"))


def rewriting_product(u: tuple[int, int, int], v: tuple[int, int, int], p: int) -> tuple[int, int, int]:
    return word_coords(collect(normal_word(*u) + normal_word(*v), p))


def rewriting_table(p: int = 3) -> dict:
    """Cayley table of F(2,p,1) built purely by letter rewriting."""
    elems = list(itertools.product(range(p), repeat=3))
    return {(u, v): rewriting_product(u, v, p) for u in elems for v in elems}


def compare_with_rewriting(p: int = 3) -> list[tuple]:
    """Products where FreeNil2.multiply disagrees with rewriting; empty when all agree."""
    F = FreeNil2(2, VarietyParams(p, 1))
    bad = []
    for (u, v), w in rewriting_table(p).items():
        got = F.multiply(F.element(u[:2], u[2:]), F.element(v[:2], v[2:]))
        if (*got.a, *got.c) != w:
            bad.append((u, v, w, (*got.a, *got.c)))
    return bad


def table_is_group(table: dict) -> bool:
    elems = sorted({u for u, _ in table})
    e = (0,) * len(elems[0])
    if any(table[(e, u)] != u or table[(u, e)] != u for u in elems):
        return False
    for u in elems:
        if not any(table[(u, v)] == e for v in elems):
            return False
    return all(table[(table[(u, v)], w)] == table[(u, table[(v, w)])] for u in elems for v in elems for w in elems)


# brute-force modular linear algebra


def span(rows: Iterable[Sequence[int]], q: int, dim: int) -> set[tuple[int, ...]]:
    """All Z/q-combinations of ``rows``, by closure."""
    out = {(0,) * dim}
    frontier = list(out)
    gens = [tuple(x % q for x in r) for r in rows]
    while frontier:
        nxt = []
        for v in frontier:
            for g in gens:
                w = tuple((a + b) % q for a, b in zip(v, g))
                if w not in out:
                    out.add(w)
                    nxt.append(w)
        frontier = nxt
    return out


def _apply(x: Sequence[int], A: Sequence[Sequence[int]], q: int, dim: int) -> tuple[int, ...]:
    return tuple(sum(x[i] * A[i][j] for i in range(len(A))) % q for j in range(dim))


def brute_kernel(A: Sequence[Sequence[int]], gens: Sequence[Sequence[int]], q: int, dim: int) -> set:
    L = span(gens, q, dim)
    return {x for x in itertools.product(range(q), repeat=len(A)) if _apply(x, A, q, dim) in L}


def brute_solutions(A, gens, t, q: int, dim: int) -> set:
    L = span(gens, q, dim)
    out = set()
    for x in itertools.product(range(q), repeat=len(A)):
        r = _apply(x, A, q, dim)
        if tuple((a - b) % q for a, b in zip(r, t)) in L:
            out.add(x)
    return out


def random_system(rng: random.Random, q: int, m: int, dim: int, nlat: int):
    A = [[rng.randrange(q) for _ in range(dim)] for _ in range(m)]
    gens = [[rng.randrange(q) for _ in range(dim)] for _ in range(nlat)]
    t = [rng.randrange(q) for _ in range(dim)]
    return A, gens, t


def compare_linalg(trials: int = 60, seed: int = 0) -> list[dict]:
    """Random small systems where kernel/solve disagree with enumeration."""
    from .zmod import howell_form, kernel, solve

    rng = random.Random(seed)
    bad = []
    for _ in range(trials):
        q = rng.choice([2, 3, 4, 8, 9, 27])
        m, dim = rng.randint(1, 3), rng.randint(1, 3)
        A, gens, t = random_system(rng, q, m, dim, rng.randint(0, 2))
        lat = howell_form(gens, q, dim)
        if set(lat.elements()) != span(gens, q, dim):
            bad.append({"what": "span", "q": q, "gens": gens})
            continue
        if set(kernel(A, lat).elements()) != brute_kernel(A, gens, q, dim):
            bad.append({"what": "kernel", "q": q, "A": A, "gens": gens})
        sol = solve(lat, A, t)
        want = brute_solutions(A, gens, t, q, dim)
        got = set(sol.elements()) if sol is not None else set()
        if got != want:
            bad.append({"what": "solve", "q": q, "A": A, "gens": gens, "t": t})
    return bad


# groups by closure


def closure(gens: Sequence, identity, mul=lambda u, v: u * v) -> set:
    out = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                w = mul(h, g)
                if w not in out:
                    out.add(w)
                    nxt.append(w)
        frontier = nxt
    return out


def bfs_order(G: FpGroup) -> int:
    return len(closure(G.gens(), G.identity))


def free_bfs_order(k: int, p: int, n: int) -> int:
    F = FreeNil2(k, VarietyParams(p, n))
    return len(closure(F.gens(), F.identity))


def brute_center(G: FpGroup) -> set[Element]:
    gens = G.gens()
    elems = closure(gens, G.identity)
    return {z for z in elems if all(z * g == g * z for g in gens)}


def brute_derived(G: FpGroup) -> set[Element]:
    elems = list(closure(G.gens(), G.identity))
    comms = {u.inverse() * v.inverse() * u * v for u in elems for v in G.gens()}
    return closure(list(comms), G.identity)


def quotient_is_cyclic(big: set, small: set, p: int) -> bool:
    """Whether big/small is cyclic, for an abelian quotient of exponent dividing a power of p."""
    idx = len(big) // len(small)
    if idx == 1:
        return True
    for g in big:
        h, m = g, 1
        while h not in small:
            h = h * g
            m += 1
        if m == idx:
            return True
    return False


def g_mod_pg_cyclic(G: FpGroup) -> bool:
    """G/pG cyclic or trivial, for abelian G, by enumeration."""
    p = G.params.p
    elems = closure(G.gens(), G.identity)
    pth = {g**p for g in elems}
    return len(elems) // len(pth) <= p


def center_mod_derived_cyclic(G: FpGroup) -> bool:
    return quotient_is_cyclic(brute_center(G), brute_derived(G), G.params.p)
