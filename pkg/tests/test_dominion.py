import pytest
from hypothesis import given
from hypothesis import strategies as st

from nilamalg import catalog
from nilamalg.constructions import direct_product
from nilamalg.dominion import (
    BPN,
    N2,
    RootAdjunctionQuery,
    dominion,
    dominion_closure_chain,
    dominion_oracle,
    has_root_extension,
    is_absolutely_closed,
    is_amalgamation_base,
    keylemma_check,
    n2_levels_stabilize,
    root_obstruction,
)
from nilamalg.fpgroup import Morphism, lift_variety
from nilamalg.parser import parse_word


def lifted(spec, n):
    return lift_variety(catalog.group(spec), n)


# dominions


def test_dominion_of_powers_in_free():
    K = catalog.group("free(2,3,2)")
    G = catalog.subgroup_of(K, "a^3,b^3")
    res = dominion(K, G)
    a, b = K.gens()
    d = a.commutator(b) ** 3
    assert res.subgroup.order() == 27 and G.order() == 9
    assert d in res.subgroup and d not in G
    assert [(r, s, q, str(v)) for r, s, q, v in res.certificates] == [((1, 0), (0, 1), 3, "[b,a]^6")]


def test_dominion_of_cant_image():
    K = catalog.group("free(2,3,3)")
    a, b = K.gens()
    iota = Morphism(lifted("cant(3,2)", 3), K, [a**3, b**3])
    G = iota.image_subgroup()
    assert iota.is_injective()
    D = dominion(K, G).subgroup
    assert a.commutator(b) ** 3 in D and a.commutator(b) ** 3 not in G
    assert (G.order(), D.order()) == (243, 729)


@pytest.mark.parametrize("spec", ["free(2,3,2)", "cant(3,2)", "abelian(9,9)"])
def test_dominion_trivial_cases(spec):
    K = catalog.group(spec)
    assert dominion(K, K.whole()).subgroup == K.whole()
    assert dominion(K, K.trivial()).subgroup.order() == 1


def test_abelian_dominions_are_trivial():
    K = catalog.group("abelian(9,9)")
    for gens in ["a^3,b^3", "a^3", "a*b^3"]:
        G = catalog.subgroup_of(K, gens)
        assert dominion(K, G).subgroup == G == dominion_oracle(K, G)


@st.composite
def subgroups(draw, specs=("free(2,3,2)", "cant(3,2)", "abelian(9,3)", "heisenberg(3)")):
    K = catalog.group(draw(st.sampled_from(specs)))
    el = sorted(K.elements(), key=lambda g: (g.a, g.c))
    idx = draw(st.lists(st.integers(0, len(el) - 1), max_size=3))
    return K, K.subgroup([el[i] for i in idx])


@given(subgroups())
def test_dominion_matches_oracle(case):
    K, G = case
    assert dominion(K, G).subgroup == dominion_oracle(K, G)


@given(subgroups())
def test_dominion_is_closure_operator(case):
    K, G = case
    res = dominion(K, G)
    D = res.subgroup
    assert D.contains_subgroup(G)
    assert dominion(K, D).subgroup == D
    for r, s, q, _ in res.certificates:
        for v in (r, s):
            assert K.element(v) ** q in G.join(K.derived_subgroup().gens)


@given(subgroups(("free(2,3,2)",)), st.integers(0, 728))
def test_dominion_monotone(case, extra):
    K, G = case
    g = sorted(K.elements(), key=lambda h: (h.a, h.c))[extra]
    assert dominion(K, G.join([g])).subgroup.contains_subgroup(dominion(K, G).subgroup)


def test_dominion_respects_products():
    G1, G2 = catalog.group("free(2,3,2)"), catalog.group("cant(3,2)")
    P, i1, i2 = direct_product(G1, G2)
    H1, H2 = catalog.subgroup_of(G1, "a^3,b^3"), catalog.subgroup_of(G2, "x^3,y^3")
    Hp = P.subgroup([i1(g) for g in H1.gens] + [i2(g) for g in H2.gens])
    want = P.subgroup([i1(g) for g in dominion(G1, H1).subgroup.gens] + [i2(g) for g in dominion(G2, H2).subgroup.gens])
    assert dominion(P, Hp).subgroup == want


def test_dominion_respects_quotient_by_derived():
    K = catalog.group("free(2,3,2)")
    G = catalog.subgroup_of(K, "a^3,b^3,[a,b]")
    Q, q = K.quotient([parse_word("[a,b]", K.names)])
    D = dominion(K, G).subgroup
    DQ = dominion(Q, Q.subgroup([q(g) for g in G.gens])).subgroup
    assert DQ == Q.subgroup([q(g) for g in D.gens])


def test_dominion_rejects_even_and_foreign():
    with pytest.raises(ValueError):
        E = catalog.group("e4")
        dominion(E, E.whole())
    K, L = catalog.group("cant(3,2)"), catalog.group("cant(3,2)")
    with pytest.raises(ValueError):
        dominion(K, L.whole())


# closure classifier

CLOSED = [
    ("cyclic(9)", BPN, True),
    ("cyclic(9)", N2, True),
    ("abelian(3,3)", BPN, True),  # n = 1: vacuous
    ("abelian(3,3)", N2, False),
    ("abelian(3,3,3)", N2, False),
    ("heisenberg(3)", N2, True),
    ("higgins(3)", N2, True),
    ("abelian(9,3)", BPN, False),
    ("abelian(9,9)", BPN, False),
    ("cant(3,2)", BPN, True),
    ("cant(3,2)", N2, False),
    ("free(2,3,2)", BPN, True),
    ("free(2,3,2)", N2, True),
]


@pytest.mark.parametrize("spec,variety,closed", CLOSED)
def test_classification(spec, variety, closed):
    rep = is_absolutely_closed(catalog.group(spec), variety)
    assert rep.closed is closed
    assert bool(rep.failures) is (not closed)


@pytest.mark.parametrize(
    "spec,n,closed",
    [("abelian(3,3)", 2, False), ("abelian(3,3,3)", 2, False), ("higgins(3)", 2, True), ("cant(3,2)", 3, False),
     ("cant(3,1)", 2, False), ("heisenberg(3)", 3, True)],
)
def test_classification_lifted(spec, n, closed):
    assert is_absolutely_closed(lifted(spec, n), BPN).closed is closed


def test_full_report_covers_all_pairs():
    G = catalog.group("abelian(9,3)")
    rep = is_absolutely_closed(G, BPN, full_report=True)
    m = len(G.ab_classes())
    assert rep.complete and len(rep.entries) == m * (m + 1) // 2
    assert {e.condition for e in rep.entries} <= {"a", "b", "c", "d", "none"}
    heads = [e for e in rep.entries if e.condition != "none"]
    assert all(e.witness is not None for e in heads)


def test_witness_alpha():
    rep = is_absolutely_closed(catalog.group("cant(3,2)"), BPN, full_report=True)
    for e in rep.entries:
        if e.condition == "b":
            assert e.witness.alpha == max(0, 2 - 2 * e.i)


@pytest.mark.parametrize("spec", catalog.ODD_CATALOG)
def test_n2_implies_bpn(spec):
    G = catalog.group(spec)
    if is_absolutely_closed(G, N2).closed:
        assert is_absolutely_closed(G, BPN).closed


@pytest.mark.parametrize("spec", catalog.ODD_CATALOG)
def test_base_implies_closed(spec):
    G = catalog.group(spec)
    if is_amalgamation_base(G):
        assert is_absolutely_closed(G, N2).closed and is_absolutely_closed(G, BPN).closed


@pytest.mark.parametrize("spec", catalog.ODD_CATALOG)
def test_stabilization(spec):
    assert n2_levels_stabilize(catalog.group(spec))


def test_odd_only():
    with pytest.raises(ValueError):
        is_absolutely_closed(catalog.group("e4"))
    with pytest.raises(ValueError):
        is_absolutely_closed(catalog.group("cyclic(9)"), "bogus")


# bases and roots


@pytest.mark.parametrize(
    "spec,base",
    [("heisenberg(3)", True), ("free(2,3,1)", True), ("free(2,3,2)", True), ("free(3,3,1)", True),
     ("cant(3,2)", False), ("cyclic(9)", False), ("abelian(3,3)", False), ("higgins(3)", False)],
)
def test_amalgamation_base(spec, base):
    rep = is_amalgamation_base(catalog.group(spec))
    assert rep.base is base


def test_heisenberg_base_reduces_to_center():
    rep = is_amalgamation_base(catalog.group("heisenberg(3)"))
    assert rep.center_is_derived and rep.failure is None


def test_central_elements_have_roots():
    K = catalog.group("free(2,3,2)")
    for z in K.center().elements():
        for d in (3, 9, 27):
            assert has_root_extension(RootAdjunctionQuery([z], [d]))


def test_root_obstructions():
    K = catalog.group("free(2,3,2)")
    a, b = K.gens()
    # any 3rd root r of a forces [b^3, a] = [b^9, r] = e, but [b,a]^3 != e
    assert root_obstruction(RootAdjunctionQuery([a], [3])) == {"y": ["b^3"], "c": {"c11": 0}}
    assert has_root_extension(RootAdjunctionQuery([a**3], [3]))
    C = catalog.group("cant(3,2)")
    x, y = C.gens()
    assert has_root_extension(RootAdjunctionQuery([x], [3]))
    assert has_root_extension(RootAdjunctionQuery([x, y], [3, 3]))
    H = catalog.group("heisenberg(3)")
    u, _ = H.gens()
    assert root_obstruction(RootAdjunctionQuery([u], [3])) == {"y": ["y"], "c": {"c11": 0}}


def test_root_query_validation():
    K = catalog.group("free(2,3,2)")
    a, b = K.gens()
    with pytest.raises(ValueError):
        RootAdjunctionQuery([a], [6])
    with pytest.raises(ValueError):
        RootAdjunctionQuery([a, b, a], [3, 3, 3])
    assert RootAdjunctionQuery([a, b, a], [3, 3, 3], allow_large=True)
    with pytest.raises(ValueError):
        RootAdjunctionQuery([a], [3, 9])


# key lemma


def test_keylemma_trivial_j():
    K = catalog.group("free(2,3,3)")
    a, b = K.gens()
    x, y = a**3, b**3
    e = K.identity
    assert keylemma_check(K, x, y, a, b, 1, 0, 0, 0, 0, e, e)


def test_keylemma_j1():
    # x = r^3, y = s^3 with g1 = e, g2 = r: g2^3 = x^(0+1)
    K = catalog.group("free(2,3,3)")
    a, b = K.gens()
    assert keylemma_check(K, a**3, b**3, a, b, 1, 1, 0, 0, 0, K.identity, a) is True


def test_keylemma_hypothesis_violation():
    K = catalog.group("free(2,3,3)")
    a, b = K.gens()
    with pytest.raises(ValueError):
        keylemma_check(K, a**3, b**3, a, a, 1, 0, 0, 0, 0, K.identity, K.identity)


@given(subgroups(("free(2,3,2)",)), st.integers(0, 728), st.integers(0, 728))
def test_perturbation(case, i, j):
    K, H = case
    el = sorted(K.elements(), key=lambda h: (h.a, h.c))
    hs = H.elements()
    h1, h2 = hs[i % len(hs)], hs[j % len(hs)]
    x, y = el[i], el[j]
    if x**3 in H and y**3 in H:
        assert ((x.commutator(y) ** 3) in H) == (((x * h1).commutator(y * h2) ** 3) in H)


# chains


def test_chain_free():
    for spec in ("free(2,3,2)", "free(2,3,3)"):
        K = catalog.group(spec)
        res, rep = dominion_closure_chain(K, catalog.subgroup_of(K, "a^3,b^3"))
        assert not res.trivial and not rep.closed


def test_chain_closed_group():
    K = catalog.group("free(2,3,2)")
    res, rep = dominion_closure_chain(K, K.whole())
    assert res.trivial and rep.closed
