import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nilamalg import oracles
from nilamalg.zmod import (
    LinearSystem,
    cyclic_invariants,
    full_lattice,
    howell_form,
    kernel,
    prime_of,
    solve,
    zero_lattice,
)

MODULI = [2, 3, 4, 8, 9, 27, 25]


@st.composite
def systems(draw):
    q = draw(st.sampled_from(MODULI))
    dim = draw(st.integers(1, 3))
    m = draw(st.integers(1, 3))
    vec = st.lists(st.integers(0, q - 1), min_size=dim, max_size=dim)
    A = draw(st.lists(vec, min_size=m, max_size=m))
    gens = draw(st.lists(vec, min_size=0, max_size=2))
    t = draw(vec)
    return q, dim, A, gens, t


def test_prime_of():
    assert prime_of(1) == 1
    assert prime_of(27) == 3
    assert prime_of(32) == 2
    with pytest.raises(ValueError):
        prime_of(12)
    with pytest.raises(ValueError):
        prime_of(0)


def test_howell_example():
    # 3 generates the order-3 subgroup of Z/9 and also contains 6
    lat = howell_form([[3], [6]], 9, 1)
    assert lat.order() == 3
    assert [6] in lat and [1] not in lat


def test_howell_needs_annihilator_rows():
    # (3,1) alone: 3*(3,1) = (0,3) must be a member
    lat = howell_form([[3, 1]], 9, 2)
    assert (0, 3) in lat
    assert lat.order() == 9


@given(systems())
def test_span_matches_closure(sys):
    q, dim, _, gens, _ = sys
    lat = howell_form(gens, q, dim)
    assert set(lat.elements()) == oracles.span(gens, q, dim)
    assert lat.order() == len(oracles.span(gens, q, dim))


@given(systems())
def test_kernel_matches_brute_force(sys):
    q, dim, A, gens, _ = sys
    lat = howell_form(gens, q, dim)
    assert set(kernel(A, lat).elements()) == oracles.brute_kernel(A, gens, q, dim)


@given(systems())
def test_solve_matches_brute_force(sys):
    q, dim, A, gens, t = sys
    lat = howell_form(gens, q, dim)
    sol = solve(lat, A, t)
    want = oracles.brute_solutions(A, gens, t, q, dim)
    assert (set(sol.elements()) if sol else set()) == want


@given(systems())
def test_linear_system_reuse(sys):
    q, dim, A, gens, t = sys
    lat = howell_form(gens, q, dim)
    ls = LinearSystem(A, lat)
    for target in (t, [0] * dim):
        a = ls.solve(target)
        b = solve(lat, A, target)
        assert (a is None) == (b is None)
        if a:
            assert set(a.elements()) == set(b.elements())


@given(systems(), systems())
def test_meet(s1, s2):
    q, dim, _, g1, _ = s1
    g2 = [[x % q for x in (r + [0] * dim)[:dim]] for r in s2[3]]
    L1, L2 = howell_form(g1, q, dim), howell_form(g2, q, dim)
    assert set(L1.meet(L2).elements()) == oracles.span(g1, q, dim) & oracles.span(g2, q, dim)


@given(systems())
def test_coset_representatives(sys):
    q, dim, A, gens, _ = sys
    sub = howell_form(gens, q, dim)
    big = sub.join(howell_form(A, q, dim))
    reps = big.coset_representatives(sub)
    assert len(reps) == big.order() // sub.order()
    assert len({sub.residue(r) for r in reps}) == len(reps)


def test_residue_canonical():
    lat = howell_form([[3, 0], [0, 9]], 27, 2)
    for v in itertools.product(range(27), repeat=2):
        r = lat.residue(v)
        assert lat.residue(r) == r
        assert tuple((a - b) % 27 for a, b in zip(v, r)) in lat


def test_cyclic_invariants():
    assert cyclic_invariants(zero_lattice(9, 2)) == [9, 9]
    assert cyclic_invariants(full_lattice(9, 2)) == []
    assert cyclic_invariants(howell_form([[3, 0]], 9, 2)) == [9, 3]
    assert cyclic_invariants(howell_form([[1, 3]], 27, 2)) == [27]


def test_shape_errors():
    lat = zero_lattice(9, 2)
    with pytest.raises(ValueError):
        kernel([[1, 2, 3]], lat)
    with pytest.raises(ValueError):
        LinearSystem([[1, 2]], lat).solve([1])
