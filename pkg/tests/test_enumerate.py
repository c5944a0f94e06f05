import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from hermden.enumerate import (
    ResourceCapError,
    cache_clear,
    cross_enumerate_check,
    excludes_vector,
    filtered_overlattices,
    generator_count,
    integral_overlattices,
    intersects_subspace_exactly,
    is_cyclic_quotient,
    submodules,
    type_at_most,
)
from hermden.hermlattice import dual, index_length, is_integral, lattice_from_gram, lattice_type, snf_invariants
from hermden.localfield import FieldData
from hermden.verify import random_lattice


def fd(case):
    return FieldData.make(case, 3)


def test_overlattice_counts():
    assert len(integral_overlattices(lattice_from_gram(fd("inert"), [[9]]))) == 2
    for case in ("inert", "ramified", "split"):
        U = lattice_from_gram(fd(case), [[1, 0], [0, 1]] if case != "ramified" else [[0, fd(case).uniformizer.inv()], [fd(case).uniformizer.inv().conj(), 0]])
        assert integral_overlattices(U) == [U]
    assert len(integral_overlattices(lattice_from_gram(fd("split"), [[3]]))) == 3


def test_filtered_line_extension():
    f = fd("inert")
    L = lattice_from_gram(f, [[1, 0], [0, 9]])
    flat = lattice_from_gram(f, [[1]])
    from hermden.hermlattice import embed_in

    pred = intersects_subspace_exactly([0], embed_in(flat, L.space))
    got = filtered_overlattices(L, [pred])
    assert len(got) == 2
    x_over_p = [f.zero, f.from_base(1) / 3]
    assert len(filtered_overlattices(L, [pred, excludes_vector(x_over_p)])) == 1


def test_type_filter_matches_brute_force():
    L = lattice_from_gram(fd("inert"), [[3, 0], [0, 3]])
    kept = filtered_overlattices(L, [type_at_most(1)])
    assert {M.key for M in kept} == {M.key for M in integral_overlattices(L) if lattice_type(M) <= 1}


def _closure_count(exps, p, cyclic_only):
    """Submodules of (+) Z/p^a by brute-force closure over elements."""
    mods = [p**a for a in exps]
    elems = list(product(*[range(m) for m in mods]))

    def span(gens):
        seen = {tuple(0 for _ in mods)}
        frontier = list(seen)
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = tuple((a + b) % m for a, b, m in zip(x, g, mods))
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return frozenset(seen)

    cyc = {span([g]) for g in elems}
    if cyclic_only:
        return len(cyc)
    subs = set(cyc)
    grow = True
    while grow:
        grow = False
        for a in list(subs):
            for b in cyc:
                s = span(list(a | b))
                if s not in subs:
                    subs.add(s)
                    grow = True
    return len(subs)


def test_submodule_examples():
    cyc = submodules([1], 3, "cyclic")
    assert sorted(s.order for s in cyc) == [0, 1]
    assert len(submodules([1, 1], 3, "cyclic")) == 1 + (3 + 1)
    assert len(submodules([2, 1], 3)) == _closure_count([2, 1], 3, False)
    assert len(submodules([2, 1], 3, "cyclic")) == _closure_count([2, 1], 3, True)


@pytest.mark.parametrize("case, gram", [("inert", [[9]]), ("split", [[3, 0], [0, 3]]), ("ramified", [[1]]), ("inert", [[1]])])
def test_cross_enumeration(case, gram):
    rep = cross_enumerate_check(lattice_from_gram(fd(case), gram))
    assert rep.status == "pass" and rep.count_bfs == rep.count_normal_forms


@pytest.mark.parametrize("case", ["inert", "ramified", "split"])
@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_overlattice_properties(case, seed):
    rng = random.Random(seed)
    L = random_lattice(fd(case), rng.randint(1, 2), rng)
    if not is_integral(L):
        return
    Ms = integral_overlattices(L)
    keys = [M.key for M in Ms]
    assert len(set(keys)) == len(keys)
    Ld = dual(L)
    for M in Ms:
        assert M.contains(L) and dual(M).contains(M)
        # duality sends the family into lattices between M and dual(L), and is an involution
        assert Ld.contains(dual(M)) and dual(dual(M)) == M


@pytest.mark.parametrize("case", ["inert", "ramified", "split"])
def test_cyclic_generator_count_identity(case):
    # sum over cyclic-quotient sublattices M of N containing L of #generators(N/M) = q^l(N/L)
    f = fd(case)
    L = lattice_from_gram(f, [[9, 0], [0, 3]] if case != "ramified" else [[9, 0], [0, -3]])
    for N in integral_overlattices(L):
        total = 0
        for M in integral_overlattices(L):
            if N.contains(M) and is_cyclic_quotient(M, N):
                total += generator_count(snf_invariants(M, N))
        assert total == f.q ** index_length(L, N)


def test_cap_is_enforced_cold_and_warm():
    L = lattice_from_gram(fd("inert"), [[9, 0], [0, 9]])
    cache_clear()
    n = len(integral_overlattices(L))
    for _ in range(2):
        with pytest.raises(ResourceCapError):
            integral_overlattices(L, cap=n - 1)
    cache_clear()
