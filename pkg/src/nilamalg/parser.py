"""Text format for presentations.

    group <name> p=<prime> n=<int> gens <id>,... rels <word>,... ;

A word is a juxtaposition of terms, optionally separated by ``*``; a term is
a generator, ``[word,word]``, ``(word)`` or ``1``, optionally raised to an
integer power with ``^``.  A relator may be written ``lhs = rhs``.  ``#``
starts a line comment.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass

from . import words as W
from .fpgroup import Presentation
from .nil2 import VarietyParams


class ParseError(ValueError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {msg}")
        self.line = line
        self.col = col


class NestedCommutatorWarning(UserWarning):
    pass


_TOKEN = re.compile(
    r"(?P<ws>[ \t\r\n]+)|(?P<comment>#[^\n]*)|(?P<int>-?\d+)|(?P<id>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<sym>[=\[\](),;^*])"
)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        s = m.group()
        if kind not in ("ws", "comment"):
            out.append(Token(kind, s, line, col))
        nl = s.count("\n")
        if nl:
            line += nl
            col = len(s) - s.rfind("\n")
        else:
            col += len(s)
        pos = m.end()
    out.append(Token("eof", "", line, col))
    return out


class _Parser:
    def __init__(self, text: str, allow_even: bool):
        self.toks = tokenize(text)
        self.i = 0
        self.allow_even = allow_even
        self.names: list[str] = []

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Token | None = None):
        t = tok or self.tok
        raise ParseError(msg, t.line, t.col)

    def take(self, kind: str, text: str | None = None) -> Token:
        t = self.tok
        if t.kind != kind or (text is not None and t.text != text):
            want = text or kind
            self.error(f"expected {want!r}, found {t.text or 'end of input'!r}")
        self.i += 1
        return t

    def at(self, kind: str, text: str | None = None) -> bool:
        t = self.tok
        return t.kind == kind and (text is None or t.text == text)

    def keyword_int(self, key: str) -> int:
        t = self.take("id")
        if t.text != key:
            self.error(f"expected {key}=", t)
        self.take("sym", "=")
        return int(self.take("int").text)

    def group(self) -> Presentation:
        kw = self.take("id")
        if kw.text != "group":
            self.error("expected 'group'", kw)
        name = self.take("id").text
        ptok = self.tok
        p = self.keyword_int("p")
        n = self.keyword_int("n")
        if p == 2 and not self.allow_even:
            self.error("p = 2 requires --allow-even", ptok)
        try:
            params = VarietyParams(p, n)
        except ValueError as exc:
            self.error(str(exc), ptok)
        kw = self.take("id")
        if kw.text != "gens":
            self.error("expected 'gens'", kw)
        self.names = []
        while True:
            t = self.take("id")
            if t.text in self.names:
                self.error(f"generator {t.text!r} declared twice", t)
            if t.text in ("rels", "group"):
                self.error(f"{t.text!r} cannot be a generator name", t)
            self.names.append(t.text)
            if not self.at("sym", ","):
                break
            self.i += 1
        rels: list[W.Word] = []
        if self.at("id", "rels"):
            self.i += 1
            if not self.at("sym", ";"):
                while True:
                    rels.append(self.relator())
                    if not self.at("sym", ","):
                        break
                    self.i += 1
        self.take("sym", ";")
        return Presentation(params, tuple(self.names), tuple(rels), name)

    def relator(self) -> W.Word:
        start = self.tok
        lhs = self.word()
        if self.at("sym", "="):
            self.i += 1
            rhs = self.word()
            lhs = W.Product((lhs, W.inverse(rhs)))
        if W.has_nested_commutator(lhs):
            warnings.warn(
                f"{start.line}:{start.col}: nested commutator evaluates to the identity in class two",
                NestedCommutatorWarning,
                stacklevel=3,
            )
        return lhs

    def _starts_term(self) -> bool:
        t = self.tok
        if t.kind == "id":
            return t.text not in ("rels", "group", "gens")
        if t.kind == "int":
            return t.text == "1"
        return t.kind == "sym" and t.text in "[("

    def word(self) -> W.Word:
        if not self._starts_term():
            self.error(f"expected a word, found {self.tok.text or 'end of input'!r}")
        terms = [self.term()]
        while True:
            if self.at("sym", "*"):
                self.i += 1
                terms.append(self.term())
            elif self._starts_term():
                terms.append(self.term())
            else:
                break
        return terms[0] if len(terms) == 1 else W.Product(tuple(terms))

    def term(self) -> W.Word:
        t = self.tok
        if t.kind == "id":
            if t.text not in self.names:
                self.error(f"unknown generator {t.text!r}", t)
            self.i += 1
            atom: W.Word = W.Gen(self.names.index(t.text))
        elif t.kind == "int" and t.text == "1":
            self.i += 1
            atom = W.IDENTITY
        elif self.at("sym", "["):
            self.i += 1
            left = self.word()
            self.take("sym", ",")
            right = self.word()
            self.take("sym", "]")
            atom = W.Commutator(left, right)
        elif self.at("sym", "("):
            self.i += 1
            inner = self.word()
            self.take("sym", ")")
            atom = inner
        else:
            self.error(f"unexpected {t.text!r}")
        while self.at("sym", "^"):
            self.i += 1
            atom = W.Power(atom, int(self.take("int").text))
        return atom


def parse_all(text: str, allow_even: bool = False) -> list[Presentation]:
    ps = _Parser(text, allow_even)
    out = []
    while not ps.at("eof"):
        out.append(ps.group())
    return out


def parse(text: str, allow_even: bool = False) -> Presentation:
    groups = parse_all(text, allow_even)
    if len(groups) != 1:
        raise ParseError(f"expected exactly one group, found {len(groups)}", 1, 1)
    return groups[0]


def parse_word(text: str, names: list[str] | tuple[str, ...]) -> W.Word:
    ps = _Parser(text, True)
    ps.names = list(names)
    w = ps.word()
    ps.take("eof")
    return w


def parse_word_list(text: str, names) -> list[W.Word]:
    ps = _Parser(text, True)
    ps.names = list(names)
    out = [ps.word()]
    while ps.at("sym", ","):
        ps.i += 1
        out.append(ps.word())
    ps.take("eof")
    return out


def format_presentation(pres: Presentation) -> str:
    gens = ",".join(pres.names)
    rels = ", ".join(W.format_word(r, pres.names) for r in pres.relators)
    head = f"group {pres.name} p={pres.params.p} n={pres.params.n} gens {gens}"
    return f"{head} rels {rels};" if rels else f"{head};"
