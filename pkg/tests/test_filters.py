import pytest
from hypothesis import given, settings, strategies as st

import oracles
from finalg.algebra import identity_congruence, sg_set, subuniverses, total_congruence
from finalg.corpus import boolean_corpus, d4, small_corpus
from finalg.errors import ContractError, ResourceError
from finalg.filters import (
    Filter,
    audit_dichotomy,
    cg,
    congruence_ideal,
    congruence_lattice,
    extend_ideal,
    filter_congruence,
    filters,
    fl_generate,
    ideal_congruence,
    ideals,
    ig_generate,
    is_prime_filter,
    maximal_filters,
    spec_points,
)
from finalg.generators import boolean, godel, lukasiewicz

SMALL = small_corpus(8)
B2, L3, G3 = boolean(2), lukasiewicz(3), godel(3)


def members(xs):
    return sorted(sorted(x.members) for x in xs)


# -- generation -----------------------------------------------------------------------------


def test_generation_examples():
    assert fl_generate(L3, {1}).members == frozenset(range(3))
    assert fl_generate(B2, {3}).members == {3}
    assert ig_generate(d4(), {0}).members == {0}
    # operators close ideals upward through f
    assert ig_generate(d4(), {1}).members == frozenset(range(4))


@pytest.mark.parametrize("A", SMALL, ids=lambda A: A.name)
def test_filters_and_ideals_match_oracle(A):
    assert members(filters(A)) == sorted(map(sorted, oracles.filters(A)))
    assert members(ideals(A)) == sorted(map(sorted, oracles.ideals_within(A, range(A.n))))
    assert members(maximal_filters(A)) == sorted(map(sorted, oracles.maximal_filters(A)))


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_generation_is_a_closure_operator(A, data):
    X = data.draw(st.sets(st.integers(0, A.n - 1)))
    Y = data.draw(st.sets(st.integers(0, A.n - 1)))
    for gen in (fl_generate, ig_generate):
        cx = gen(A, X).members
        assert X <= cx
        assert gen(A, cx).members == cx
        assert gen(A, X | Y).members >= cx
    assert ig_generate(A, X).members == oracles.least_ideal(A, X)


# -- spectrum points ------------------------------------------------------------------------


def test_spec_point_examples():
    spec, mx = spec_points(L3)
    assert members(spec) == members(mx) == [[2]]
    spec, mx = spec_points(G3)
    assert members(spec) == [[1, 2], [2]] and members(mx) == [[1, 2]]
    spec, mx = spec_points(B2)
    assert members(spec) == members(mx) == [[1, 3], [2, 3]]


@pytest.mark.parametrize("A", SMALL, ids=lambda A: A.name)
def test_spec_points_match_oracle(A):
    spec, mx = spec_points(A)
    assert members(spec) == sorted(map(sorted, oracles.prime_filters(A)))
    assert set(map(frozenset, (F.members for F in mx))) <= set(F.members for F in spec)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_chain_proper_filters_are_prime(n):
    for A in (godel(n), lukasiewicz(n)):
        assert all(is_prime_filter(A, F) for F in filters(A) if F.proper)


# -- congruences ----------------------------------------------------------------------------


def test_cg_examples():
    assert cg(B2, [(1, 0)]).classes() == [[0, 1], [2, 3]]
    assert cg(B2, []) == identity_congruence(B2)
    assert len(congruence_lattice(B2)) == 4


@pytest.mark.parametrize("A", [A for A in SMALL if A.n <= 8], ids=lambda A: A.name)
def test_congruence_lattice_matches_oracle(A):
    assert sorted(c.blocks for c in congruence_lattice(A)) == sorted(oracles.congruences(A))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_cg_is_least(A, data):
    pairs = data.draw(st.lists(st.tuples(st.integers(0, A.n - 1), st.integers(0, A.n - 1)), max_size=3))
    th = cg(A, pairs)
    assert th.is_compatible()
    assert all(th.related(a, b) for a, b in pairs)
    for p in oracles.congruences(A):
        if all(p[a] == p[b] for a, b in pairs):
            assert all(p[a] == p[b] for a, b in th.pairs())


def test_congruence_lattice_bound():
    with pytest.raises(ResourceError):
        congruence_lattice(boolean(5), bound=16)


def test_filter_congruence_examples():
    assert filter_congruence(L3, {2}) == identity_congruence(L3)
    assert filter_congruence(G3, range(3)) == total_congruence(G3)
    assert filter_congruence(G3, {1, 2}).classes() == [[0], [1, 2]]


def test_ideal_congruence_examples():
    assert ideal_congruence(B2, {0, 1}).classes() == [[0, 1], [2, 3]]
    with pytest.raises(ContractError):
        ideal_congruence(L3, {0})


@pytest.mark.parametrize("A", [A for A in boolean_corpus(8)], ids=lambda A: A.name)
def test_ideals_and_congruences_correspond(A):
    ids = {I.members for I in ideals(A)}
    cons = congruence_lattice(A)
    assert {congruence_ideal(c).members for c in cons} == ids
    for I in ids:
        th = ideal_congruence(A, I)
        assert congruence_ideal(th).members == I
    # order preserving both ways
    for c in cons:
        for d in cons:
            assert c.leq(d) == (congruence_ideal(c).members <= congruence_ideal(d).members)


# -- ideals of subalgebras ------------------------------------------------------------------


@pytest.mark.parametrize("A", SMALL, ids=lambda A: A.name)
def test_ideals_of_subalgebras_are_downsets(A):
    leq, j = A.leq, A.tables["join"]
    for B in subuniverses(A):
        sub_ideals = [I.members for I in ideals(A, within=B)]
        for M in sub_ideals:
            gen = ig_generate(A, M).members
            assert gen == {x for x in range(A.n) if any(leq[x][b] for b in M)}
            assert gen & B == M
        for M in sub_ideals:
            for N in ideals(A):
                N = N.members
                assert ig_generate(A, M | N).members == {
                    x for x in range(A.n) if any(leq[x][j[b][c]] for b in M for c in N)
                }


def test_extend_ideal_examples():
    B = frozenset({0, 3})
    assert extend_ideal(B2, B, {0}, {0}).members == {0}
    assert extend_ideal(B2, B, {0}, {0}, want_maximal=True).members in ({0, 1}, {0, 2})
    with pytest.raises(ContractError) as e:
        extend_ideal(B2, {0, 1, 2, 3}, {0}, {0, 1})
    assert e.value.witness == 1


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([A for A in boolean_corpus(8) if A.n > 1]), st.data())
def test_extend_ideal_contract(A, data):
    B = data.draw(st.sampled_from(subuniverses(A)))
    M = data.draw(st.sampled_from([I.members for I in ideals(A, within=B)]))
    Ns = [I.members for I in ideals(A) if I.members & B <= M]
    N = data.draw(st.sampled_from(Ns))
    want = data.draw(st.booleans())
    out = extend_ideal(A, B, M, N, want_maximal=want).members
    assert oracles.is_ideal_within(A, out, frozenset(range(A.n)))
    assert N <= out and out & B == M
    if want:
        assert not any(
            out < I and I & B == M for I in oracles.ideals_within(A, range(A.n))
        )


# -- dichotomy --------------------------------------------------------------------------------


def test_dichotomy_examples():
    assert audit_dichotomy(G3, {1, 2}).ok
    r = audit_dichotomy(L3, {2})
    assert not r.ok and r.witnesses[0]["a"] == 1 and r.witnesses[0]["neg_a"] == 1
    with pytest.raises(ContractError):
        audit_dichotomy(G3, {2})


def test_dichotomy_holds_on_boolean_and_godel():
    for A in SMALL:
        if A.sig.base_class in ("GODEL", "BOOLEAN"):
            for F in maximal_filters(A):
                assert audit_dichotomy(A, F).ok, (A.name, F.sorted())


def test_filter_record():
    F = fl_generate(G3, {1})
    assert isinstance(F, Filter) and F.proper and 1 in F and F.sorted() == [1, 2]
    assert sg_set(G3, F.members) == frozenset(range(3))
