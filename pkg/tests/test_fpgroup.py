import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nilamalg import catalog, oracles
from nilamalg.fpgroup import (
    CapExceeded,
    Morphism,
    NotAHomomorphism,
    lift_variety,
    lower_variety,
    omega_subgroup,
)

# order, abelianization, |Z(G)|: brute-force values frozen from the oracles module
TABLE = {
    "cyclic(3)": (3, [3], 3),
    "cyclic(9)": (9, [9], 9),
    "abelian(9,3)": (27, [9, 3], 27),
    "heisenberg(3)": (27, [3, 3], 3),
    "cant(3,1)": (9, [3, 3], 9),
    "cant(3,2)": (243, [9, 9], 27),
    "higgins(3)": (81, [3, 3, 3], 9),
    "free(2,3,1)": (27, [3, 3], 3),
    "free(2,3,2)": (729, [9, 9], 9),
    "free(3,3,1)": (729, [3, 3, 3], 27),
    "e4": (64, [4, 4, 2], 16),
}

SMALL = catalog.ODD_CATALOG + ["e4"]


@pytest.mark.parametrize("spec", sorted(TABLE))
def test_catalog_invariants(spec):
    G = catalog.group(spec)
    order, ab, z = TABLE[spec]
    assert G.order() == order
    assert G.abelianization() == ab
    assert G.center().order() == z


@pytest.mark.parametrize("spec", SMALL)
def test_structure_against_enumeration(spec):
    G = catalog.group(spec)
    assert oracles.bfs_order(G) == G.order() == len(set(G.elements()))
    assert set(G.center().elements()) == oracles.brute_center(G)
    assert set(G.derived_subgroup().elements()) == oracles.brute_derived(G)


def _subgroups(G, rng, count=8):
    el = list(G.elements())
    for _ in range(count):
        yield G.subgroup(rng.sample(el, rng.randint(0, 3)))


@pytest.mark.parametrize("spec", ["cant(3,2)", "free(2,3,2)", "higgins(3)", "e4"])
def test_subgroups_against_closure(spec):
    G = catalog.group(spec)
    rng = random.Random(spec)
    el = list(G.elements())
    for H in _subgroups(G, rng):
        members = oracles.closure(H.gens, G.identity)
        assert H.order() == len(members)
        assert set(H.elements()) == members
        assert all((g in H) == (g in members) for g in el)


@pytest.mark.parametrize("spec", ["free(2,3,2)", "free(3,3,1)", "cant(3,2)"])
def test_intersection_order(spec):
    G = catalog.group(spec)
    rng = random.Random(1)
    subs = list(_subgroups(G, rng, 6))
    for A in subs:
        for B in subs:
            assert A.intersection_order(B) == len(set(A.elements()) & set(B.elements()))


def test_power_and_omega():
    G = catalog.group("cant(3,2)")
    P = G.power_subgroup(3)
    assert set(P.elements()) == oracles.closure([g**3 for g in G.elements()] + list(G.derived_subgroup().gens), G.identity)
    om = omega_subgroup(G, 1)
    assert all((g**3).is_identity() for g in om.elements())
    with pytest.raises(ValueError):
        G.power_subgroup(6)


def test_element_order_and_exponent():
    G = catalog.group("cant(3,2)")
    assert G.exponent_bound() == 9
    assert max(g.order() for g in G.elements()) == 9
    with pytest.raises(ValueError):
        catalog.group("e4").exponent_bound()


def test_word_of_roundtrip():
    G = catalog.group("free(2,3,2)")
    for g in G.elements():
        assert G.evaluate(G.word_of(g)) == g


def test_morphisms():
    G = catalog.group("cant(3,2)")
    K = catalog.group("free(2,3,3)")
    a, b = K.gens()
    f = Morphism(lift_variety(G, 3), K, [a**3, b**3])
    assert f.is_injective()
    with pytest.raises(NotAHomomorphism):
        Morphism(lift_variety(G, 3), K, [a, b])  # [a,b]^3 != e
    H = catalog.group("heisenberg(3)")
    Ab = catalog.group("abelian(3,3)")
    q = Morphism(H, Ab, Ab.gens())
    assert not q.is_injective()
    z = q.kernel_element()
    assert z is not None and not z.is_identity() and q(z).is_identity()


def test_variety_check_on_maps():
    # the free exponent-3 group on one generator cannot map a -> a into Z/9
    C9 = catalog.group("cyclic(9)")
    with pytest.raises(NotAHomomorphism):
        Morphism(catalog.group("free(1,3,1)"), C9, C9.gens())
    assert Morphism(catalog.group("free(1,3,1)"), C9, [C9.gen(0) ** 3]).is_injective()


def test_lift_and_lower():
    G = catalog.group("heisenberg(3)")
    H = lift_variety(G, 3)
    assert H.order() == 27 and H.params.n == 3
    assert lower_variety(H, 1).order() == 27
    with pytest.raises(ValueError):
        lower_variety(catalog.group("cyclic(9)"), 1)
    with pytest.raises(ValueError):
        lift_variety(H, 2)


def test_as_group():
    K = catalog.group("free(2,3,2)")
    S = catalog.subgroup_of(K, "a^3,b^3,[a,b]^3")
    B, inc = S.as_group()
    assert B.order() == 27 and inc.is_injective()
    assert B.is_abelian()
    assert inc.image_subgroup() == S


def test_cap():
    G = catalog.group("free(2,3,2)")
    with pytest.raises(CapExceeded):
        list(G.elements(cap=100))


@given(st.lists(st.integers(0, 8), min_size=4, max_size=4))
def test_reduce_is_canonical(v):
    G = catalog.group("cant(3,2)")
    g = G.element(v[:2], v[2:3])
    h = G.element([x + 9 for x in v[:2]], [v[2] + 3])
    assert g == h
    assert hash(g) == hash(h)
