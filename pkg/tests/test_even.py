import pytest

from nilamalg import catalog, oracles
from nilamalg.even import even_amalgam_condition, even_weak_base_condition
from nilamalg.fpgroup import omega_subgroup

# verdicts computed once and frozen; the set-level parts are rechecked below by enumeration
EVEN = [
    ("e4", True, False),
    ("abelian(4,4)", True, False),
    ("free(2,2,2)", True, False),
    ("free(2,2,3)", True, False),
]


@pytest.mark.parametrize("spec,amalgam,weak", EVEN)
def test_even_verdicts(spec, amalgam, weak):
    G = catalog.group(spec)
    assert even_amalgam_condition(G).holds is amalgam
    assert even_weak_base_condition(G).holds is weak


@pytest.mark.parametrize("spec", [s for s, _, _ in EVEN])
def test_omega_and_power_by_enumeration(spec):
    G = catalog.group(spec)
    n = G.params.n - 1
    q = 2**n
    Z = oracles.brute_center(G)
    om = {z for z in Z if (z**q).is_identity()}
    elems = oracles.closure(G.gens(), G.identity)
    power = oracles.closure([g**q for g in elems] + list(oracles.brute_derived(G)), G.identity)
    assert set(omega_subgroup(G, n, G.center()).elements()) == om
    assert set(G.power_subgroup(q).elements()) == power


def test_e4_details():
    G = catalog.group("e4")
    assert G.order() == 64 == len(list(G.elements()))
    Z, D = G.center(), G.derived_subgroup()
    assert omega_subgroup(G, 1, Z).order() == 8 == G.power_subgroup(2).order()
    assert Z.order() == 16 and D.order() == 2
    a, b, c = G.gens()
    assert c.is_central() and c not in D
    assert c**2 == a.commutator(b) ** -1 or c**2 == a.commutator(b)
    rep = even_weak_base_condition(G)
    assert rep.failure["reason"] == "Z(G) != G'"


def test_odd_rejected():
    with pytest.raises(ValueError):
        even_amalgam_condition(catalog.group("cant(3,2)"))
    with pytest.raises(ValueError):
        even_weak_base_condition(catalog.group("abelian(2,2)"))
