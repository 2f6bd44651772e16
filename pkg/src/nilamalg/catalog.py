"""Built-in groups, addressed by short specs such as ``cant(3,2)``.

Recognised specs::

    cant(p,n)        <x,y | x^{p^n}, y^{p^n}, [x,y]^{p^{n-1}}>
    heisenberg(p)    <x,y | x^p, y^p, [x,y]^p>
    free(k,p,n)      relatively free group on a, b, c, ...
    higgins(p)       <x,y,z | x^p,y^p,z^p,[x,y]^p,[x,z],[y,z]>
    e4               <a,b,c | a^4,b^4,c^4,[a,b]^2,[a,c],[b,c], c^2=[a,b]>
    cyclic(m)        Z/m, m a prime power
    abelian(m1,...)  Z/m1 x Z/m2 x ..., all m_i powers of one prime
"""

from __future__ import annotations

import re

from .fpgroup import FpGroup, Presentation
from .parser import parse
from .zmod import prime_of

_LETTERS = "abcdefghijklmnopqrstuvw"


def _log(m: int, p: int) -> int:
    e = 0
    while m > 1:
        m //= p
        e += 1
    return e


def cant_text(p: int, n: int) -> str:
    return f"group cant_{p}_{n} p={p} n={n} gens x,y rels x^{p**n}, y^{p**n}, [x,y]^{p**(n - 1)};"


def heisenberg_text(p: int) -> str:
    return f"group heisenberg_{p} p={p} n=1 gens x,y rels x^{p}, y^{p}, [x,y]^{p};"


def free_text(k: int, p: int, n: int) -> str:
    names = ",".join(_LETTERS[:k])
    return f"group free_{k}_{p}_{n} p={p} n={n} gens {names};"


def higgins_text(p: int) -> str:
    return (
        f"group higgins_{p} p={p} n=1 gens x,y,z "
        f"rels x^{p}, y^{p}, z^{p}, [x,y]^{p}, [x,z], [y,z];"
    )


E4_TEXT = "group e4 p=2 n=2 gens a,b,c rels a^4, b^4, c^4, [a,b]^2, [a,c], [b,c], c^2 = [a,b];"


def abelian_text(*orders: int) -> str:
    if not orders:
        raise ValueError("need at least one cyclic factor")
    p = prime_of(orders[0])
    if any(prime_of(m) != p for m in orders) or p == 1:
        raise ValueError(f"orders {orders} are not powers of a single prime")
    n = max(_log(m, p) for m in orders)
    names = _LETTERS[: len(orders)]
    rels = [f"{g}^{m}" for g, m in zip(names, orders)]
    rels += [f"[{names[j]},{names[i]}]" for j in range(len(names)) for i in range(j)]
    tag = "_".join(map(str, orders))
    return f"group abelian_{tag} p={p} n={n} gens {','.join(names)} rels {', '.join(rels)};"


_SPEC = re.compile(r"^\s*([a-z0-9]+)\s*(?:\(([\d,\s]*)\))?\s*$")


def presentation_text(spec: str) -> str:
    m = _SPEC.match(spec)
    if not m:
        raise KeyError(f"unrecognised catalog spec {spec!r}")
    kind = m.group(1)
    args = [int(x) for x in m.group(2).split(",") if x.strip()] if m.group(2) else []
    try:
        if kind == "cant":
            return cant_text(*args)
        if kind == "heisenberg":
            return heisenberg_text(*args)
        if kind == "free":
            return free_text(*args)
        if kind == "higgins":
            return higgins_text(*args)
        if kind == "e4" and not args:
            return E4_TEXT
        if kind == "cyclic":
            return abelian_text(*args).replace("abelian_", "cyclic_", 1)
        if kind == "abelian":
            return abelian_text(*args)
    except TypeError:
        raise KeyError(f"wrong number of arguments in {spec!r}") from None
    raise KeyError(f"unrecognised catalog spec {spec!r}")


def presentation(spec: str) -> Presentation:
    text = presentation_text(spec)
    return parse(text, allow_even=True)


def group(spec: str) -> FpGroup:
    return FpGroup(presentation(spec))


BUILTINS = [
    "cant(p,n)",
    "heisenberg(p)",
    "free(k,p,n)",
    "higgins(p)",
    "e4",
    "cyclic(m)",
    "abelian(m1,m2,...)",
]

# Odd-p desk-scale catalog used by cross-validation tests and the acceptance suite.
ODD_CATALOG = [
    "cyclic(3)",
    "cyclic(9)",
    "abelian(3,3)",
    "abelian(9,3)",
    "abelian(9,9)",
    "abelian(3,3,3)",
    "heisenberg(3)",
    "cant(3,1)",
    "cant(3,2)",
    "higgins(3)",
    "free(2,3,1)",
    "free(2,3,2)",
    "free(3,3,1)",
]


def subgroup_of(K: FpGroup, text: str):
    """The subgroup of K generated by a comma-separated word list such as ``"a^3,b^3"``."""
    from .parser import parse_word_list

    return K.subgroup([K.evaluate(w) for w in parse_word_list(text, K.names)])


def resolve(spec_or_text: str, allow_even: bool = True) -> FpGroup:
    """A catalog spec, or presentation text in the ``group ... ;`` grammar."""
    if spec_or_text.lstrip().startswith("group"):
        return FpGroup(parse(spec_or_text, allow_even=allow_even))
    return group(spec_or_text)
