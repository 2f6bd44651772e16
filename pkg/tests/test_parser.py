import warnings

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nilamalg import catalog
from nilamalg.fpgroup import FpGroup
from nilamalg.parser import NestedCommutatorWarning, ParseError, format_presentation, parse, parse_all, parse_word
from nilamalg.words import Commutator, Gen, Power, Product, format_word


def test_cant_example():
    G = FpGroup(parse("group G p=3 n=2 gens x,y rels x^9, y^9, [x,y]^3;"))
    H = catalog.group("cant(3,2)")
    assert G.order() == H.order() == 243
    assert G.abelianization() == [9, 9]


def test_cyclic_example():
    G = FpGroup(parse("group T p=3 n=1 gens x rels x^3;"))
    assert G.order() == 3


def test_higgins_example():
    text = "group H p=3 n=1 gens x,y,z rels x^3,y^3,z^3,[x,y]^3,[x,z],[y,z];"
    G = FpGroup(parse(text))
    assert G.order() == 81 and G.abelianization() == [3, 3, 3]


def test_word_syntax():
    names = ("x", "y")
    assert parse_word("x", names) == Gen(0)
    assert parse_word("x^-2", names) == Power(Gen(0), -2)
    assert parse_word("[x,y]", names) == Commutator(Gen(0), Gen(1))
    assert parse_word("(x y)^3", names) == Power(Product((Gen(0), Gen(1))), 3)
    assert parse_word("x*y", names) == parse_word("x y", names)


def test_equation_relators():
    G = FpGroup(parse("group Q p=3 n=2 gens x,y rels x^3 = y^3, [x,y];"))
    x, y = G.gens()
    assert x**3 == y**3 and G.order() == 27


def test_comments_and_multiple_groups():
    text = "# two groups\ngroup A p=3 n=1 gens x; # trailing\ngroup B p=3 n=1 gens y rels y;\n"
    A, B = parse_all(text)
    assert (A.name, B.name) == ("A", "B")
    with pytest.raises(ParseError):
        parse(text)


@pytest.mark.parametrize(
    "text,line,col",
    [
        ("group G p=3 n=1 gens x rels x^^3;", 1, 31),
        ("group G p=3 n=1 gens x rels y;", 1, 29),
        ("group G p=3 n=1\n gens x rels [x,;", 2, 17),
        ("group G p=3 n=1 gens x,x;", 1, 24),
        ("group G p=3 n=1 gens x rels x$;", 1, 30),
        ("group G p=4 n=1 gens x;", 1, 9),
    ],
)
def test_error_locations(text, line, col):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert (info.value.line, info.value.col) == (line, col)


def test_even_gated():
    with pytest.raises(ParseError):
        parse("group E p=2 n=2 gens a rels a^4;")
    assert parse("group E p=2 n=2 gens a rels a^4;", allow_even=True).params.p == 2


def test_nested_commutator_lints():
    with pytest.warns(NestedCommutatorWarning):
        P = parse("group G p=3 n=1 gens x,y,z rels [[x,y],z];")
    assert FpGroup(P).order() == FpGroup(parse("group G p=3 n=1 gens x,y,z;")).order()
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        parse("group G p=3 n=1 gens x,y rels [x,y];")


@pytest.mark.parametrize("spec", catalog.ODD_CATALOG + ["e4"])
def test_catalog_round_trip(spec):
    P = catalog.presentation(spec)
    text = format_presentation(P)
    Q = parse(text, allow_even=True)
    assert Q == P
    assert format_presentation(Q) == text


_names = ("a", "b", "c")


def _words(depth=2):
    base = st.sampled_from([Gen(0), Gen(1), Gen(2)])
    return st.recursive(
        base,
        lambda w: st.one_of(
            st.builds(Power, w, st.integers(-12, 12)),
            st.builds(Commutator, w, w),
            st.builds(lambda a, b: Product((a, b)), w, w),
        ),
        max_leaves=6,
    )


@given(_words())
def test_word_round_trip_semantics(w):
    G = catalog.group("free(3,3,2)")
    text = format_word(w, _names)
    assert G.evaluate(parse_word(text, _names)) == G.evaluate(w)
