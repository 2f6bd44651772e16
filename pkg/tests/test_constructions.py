import random

import pytest

from nilamalg import catalog
from nilamalg.constructions import (
    BaseCounterexample,
    ConditionsHold,
    ConstructionError,
    IsBase,
    WitnessExtension,
    adjoin_central_roots,
    central_to_commutator,
    check_exponent,
    direct_product,
    find_witness,
    free_product_cyclic,
    random_overgroup,
    witness_not_base,
    witness_not_closed,
)
from nilamalg.dominion import BPN, dominion, is_absolutely_closed, is_amalgamation_base
from nilamalg.fpgroup import lift_variety
from nilamalg.products import is_weakly_embeddable


def test_central_root_of_generator():
    G = catalog.group("cyclic(9)")
    K, iota, (h,) = adjoin_central_roots(G, [(G.gen(0), 9)])
    assert K.order() == 81 and K.params.n == 4
    assert iota.is_injective() and h**9 == iota(G.gen(0))


def test_central_root_in_cant():
    G = catalog.group("cant(3,2)")
    x, _ = G.gens()
    # |K| = |G| * |h| / |<x^3>|
    K, iota, (h,) = adjoin_central_roots(G, [(x**3, 3)])
    assert K.order() == 729 and K.params.n == 2 and iota.is_injective() and h.is_central()
    K9, _, _ = adjoin_central_roots(G, [(x**3, 9)])
    assert K9.order() == 2187 and K9.params.n == 3
    with pytest.raises(ValueError):
        adjoin_central_roots(G, [(x, 3)])


def test_central_to_commutator():
    G = catalog.group("cyclic(3)")
    K, iota, ((q1, q2),) = central_to_commutator(G, [G.gen(0)])
    assert K.order() == 27 and iota.is_injective()
    assert iota(G.gen(0)) == q1.commutator(q2)
    assert K.params == G.params


def test_direct_and_free_products():
    G, H = catalog.group("cant(3,2)"), catalog.group("cyclic(3)")
    P, i, j = direct_product(G, H)
    assert P.order() == 729 and i.is_injective() and j.is_injective()
    assert i(G.gen(0)).commutator(j(H.gen(0))).is_identity()
    M, lam, mu = free_product_cyclic(G, 9)
    assert M.order() == 243 * 9 * 81


def test_check_exponent():
    assert check_exponent(catalog.group("free(2,3,2)"))
    G = lift_variety(catalog.group("cyclic(3)"), 2)
    assert check_exponent(G)


def test_witness_for_abelian_square():
    G = lift_variety(catalog.group("abelian(3,3)"), 2)
    x, y = G.gens()
    wit = witness_not_closed(G, x, y, 1)
    assert isinstance(wit, WitnessExtension)
    assert wit.K.order() == 531441 and wit.K.params.n == 2
    assert str(wit.d) == "[w,u]^6"
    assert wit.keylemma_instances == 7
    image = wit.iota.image_subgroup()
    assert wit.iota.is_injective() and wit.d not in image
    assert wit.d in dominion(wit.K, image).subgroup
    assert check_exponent(wit.K, samples=128, seed=1)


def test_witness_for_cant_one_level_up():
    G = lift_variety(catalog.group("cant(3,2)"), 3)
    wit = find_witness(G)
    assert isinstance(wit, WitnessExtension)
    assert wit.K.order() == 10460353203
    assert wit.iota.is_injective() and wit.d not in wit.iota.image_subgroup()
    assert wit.keylemma_instances > 0


def test_no_witness_for_closed():
    G = catalog.group("cant(3,2)")
    assert find_witness(G) is None
    x, y = G.gens()
    held = witness_not_closed(G, x, y, 1)
    assert isinstance(held, ConditionsHold) and not held
    assert held.entry.condition in "abcd"


@pytest.mark.parametrize("spec", catalog.ODD_CATALOG)
def test_witness_iff_not_closed(spec):
    G = catalog.group(spec)
    closed = is_absolutely_closed(G, BPN).closed
    wit = find_witness(G)
    assert (wit is None) == closed


def test_even_rejected():
    E = catalog.group("e4")
    with pytest.raises(ValueError):
        witness_not_closed(E, E.gen(0), E.gen(1), 1)
    with pytest.raises(ValueError):
        witness_not_base(E)


@pytest.mark.parametrize("spec", catalog.ODD_CATALOG)
def test_base_witness_iff_not_base(spec):
    G = catalog.group(spec)
    out = witness_not_base(G)
    if is_amalgamation_base(G):
        assert isinstance(out, IsBase) and not out
    else:
        assert isinstance(out, BaseCounterexample)
        am = out.amalgam
        assert am.B is G and am.phi_A.is_injective() and am.phi_C.is_injective()
        assert am.A.params.n == G.params.n == am.C.params.n
        assert not is_weakly_embeddable(am)
        assert out.summary()["embeddable"] is False


def test_root_counterexample_for_cyclic():
    # Z/9: center equals the group, so the first branch (central non-commutator) is used
    out = witness_not_base(catalog.group("cyclic(9)"))
    assert out.certificate["reason"] == "central non-commutator"


@pytest.mark.parametrize("spec", ["heisenberg(3)", "free(2,3,2)", "cant(3,2)"])
def test_random_overgroups(spec):
    G = catalog.group(spec)
    rng = random.Random(7)
    for _ in range(6):
        K, iota = random_overgroup(G, rng)
        assert K.params == G.params
        assert iota.domain is G and iota.codomain is K and iota.is_injective()
    again = [random_overgroup(G, random.Random(3))[0].order() for _ in range(2)]
    assert again[0] == again[1]


def test_construction_error_is_assertion():
    assert issubclass(ConstructionError, AssertionError)
