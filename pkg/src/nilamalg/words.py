"""Word syntax trees over numbered generators, and their evaluation.

Words are kept as trees and evaluated by the group arithmetic; nothing is
rewritten as text.  Generators are referenced by index so a word can be moved
between presentations with :func:`shift`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence, Union


@dataclass(frozen=True)
class Gen:
    index: int


@dataclass(frozen=True)
class Power:
    base: "Word"
    exponent: int


@dataclass(frozen=True)
class Commutator:
    left: "Word"
    right: "Word"


@dataclass(frozen=True)
class Product:
    factors: tuple["Word", ...]


Word = Union[Gen, Power, Commutator, Product]

IDENTITY = Product(())


def generators_used(w: Word) -> set[int]:
    if isinstance(w, Gen):
        return {w.index}
    if isinstance(w, Power):
        return generators_used(w.base)
    if isinstance(w, Commutator):
        return generators_used(w.left) | generators_used(w.right)
    out: set[int] = set()
    for f in w.factors:
        out |= generators_used(f)
    return out


def shift(w: Word, offset: int) -> Word:
    """Renumber every generator ``i`` to ``i + offset``."""
    return relabel(w, lambda i: i + offset)


def relabel(w: Word, f: Callable[[int], int]) -> Word:
    if isinstance(w, Gen):
        return Gen(f(w.index))
    if isinstance(w, Power):
        return Power(relabel(w.base, f), w.exponent)
    if isinstance(w, Commutator):
        return Commutator(relabel(w.left, f), relabel(w.right, f))
    return Product(tuple(relabel(x, f) for x in w.factors))


def inverse(w: Word) -> Word:
    return Power(w, -1)


def evaluate(w: Word, env: Sequence, identity):
    """Evaluate ``w`` with generator ``i`` bound to ``env[i]``.

    Elements must support ``*``, ``**`` (any integer) and ``.commutator``.
    """
    if isinstance(w, Gen):
        if not 0 <= w.index < len(env):
            raise IndexError(f"generator index {w.index} out of range for {len(env)} generators")
        return env[w.index]
    if isinstance(w, Power):
        return evaluate(w.base, env, identity) ** w.exponent
    if isinstance(w, Commutator):
        return evaluate(w.left, env, identity).commutator(evaluate(w.right, env, identity))
    out = identity
    for f in w.factors:
        out = out * evaluate(f, env, identity)
    return out


def has_nested_commutator(w: Word) -> bool:
    """True if a bracket has a bracket inside it (always trivial in class two)."""

    def inside(x: Word) -> bool:
        if isinstance(x, Commutator):
            return True
        if isinstance(x, Gen):
            return False
        if isinstance(x, Power):
            return inside(x.base)
        return any(inside(f) for f in x.factors)

    if isinstance(w, Gen):
        return False
    if isinstance(w, Power):
        return has_nested_commutator(w.base)
    if isinstance(w, Commutator):
        return inside(w.left) or inside(w.right)
    return any(has_nested_commutator(f) for f in w.factors)


def format_word(w: Word, names: Sequence[str]) -> str:
    if isinstance(w, Gen):
        return names[w.index]
    if isinstance(w, Power):
        b = w.base
        if isinstance(b, (Gen, Commutator)):
            inner = format_word(b, names)
        else:
            inner = f"({format_word(b, names)})"
        return f"{inner}^{w.exponent}"
    if isinstance(w, Commutator):
        return f"[{format_word(w.left, names)},{format_word(w.right, names)}]"
    if not w.factors:
        return "1"
    parts = []
    for f in w.factors:
        s = format_word(f, names)
        if isinstance(f, Product):
            s = f"({s})"
        parts.append(s)
    return " ".join(parts)
