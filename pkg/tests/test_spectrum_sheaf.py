import itertools

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from finalg.algebra import Homomorphism, delta_zd, homomorphisms, identity_hom
from finalg.corpus import boolean_corpus, d4, partition_closure, small_corpus, standard_corpus
from finalg.enumeration import is_isomorphic
from finalg.errors import ContractError, StructuralError
from finalg.filters import maximal_filters, spec_points
from finalg.generators import boolean, complex_algebra, godel, lukasiewicz
from finalg.sheaf import (
    dual_morphism,
    dual_space,
    eta_check,
    functoriality_check,
    gamma_functor,
    global_sections,
    identity_morphism,
    is_nice,
)
from finalg.spectrum import (
    audit_dm_lemma,
    hausdorff_witness,
    nowhere_dense_audit,
    topologies,
    vd_sets,
)

SMALL = small_corpus(8)
B2, B3, L3, G3 = boolean(2), boolean(3), lukasiewicz(3), godel(3)
NOT_SUB = complex_algebra(2, {"f": [(0, 0), (0, 1), (1, 1)]})  # f0=0, fa=1, fb=b, f1=1


def pts(fs):
    return sorted(F.sorted() for F in fs)


# -- V/D calculus and topologies ------------------------------------------------------------


def test_vd_examples():
    r = vd_sets(B2, {1})
    assert pts(r.V_M) == [[1, 3]] and pts(r.D_M) == [[2, 3]]
    r = vd_sets(B2, {0})
    assert r.V_M == [] and pts(r.D_M) == [[1, 3], [2, 3]]
    r = vd_sets(G3, set())
    assert pts(r.V) == [[1, 2], [2]] and r.D == []


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_v_and_d_partition_spec(A, data):
    X = data.draw(st.sets(st.integers(0, A.n - 1)))
    r = vd_sets(A, X)
    spec, mx = spec_points(A)
    assert pts(r.V + r.D) == pts(spec) and not set(map(id, r.V)) & set(map(id, r.D))
    assert pts(r.V_M + r.D_M) == pts(mx)


def test_topology_examples():
    _, m = topologies(B2)
    assert len(m.points) == 2 and m.is_discrete()
    _, m = topologies(L3)
    assert len(m.points) == 1
    z, m = topologies(boolean(0))
    assert z.points == () and m.points == ()


@pytest.mark.parametrize("A", boolean_corpus(16), ids=lambda A: A.name)
def test_boolean_minimal_spectrum_is_discrete(A):
    _, m = topologies(A)
    atoms = [a for a in range(A.n) if a != A.bottom and all(b in (A.bottom, a) for b in range(A.n) if A.leq[b][a])]
    assert m.is_discrete() and len(m.points) == len(atoms)
    assert m.hausdorff_witness() is None


def test_topology_opens_are_closed_under_union_and_intersection():
    for A in SMALL:
        for T in topologies(A):
            for U, V in itertools.product(T.opens, repeat=2):
                assert U | V in T.opens and U & V in T.opens


# -- the D_M lemma --------------------------------------------------------------------------


def test_dm_lemma_examples():
    assert audit_dm_lemma(B2).ok
    assert audit_dm_lemma(boolean(0)).ok
    r = audit_dm_lemma(L3)
    items = {w["item"] for w in r.witnesses}
    assert items == {"vi"}
    assert [1, 0] in [w["witness"] for w in r.witnesses]


@pytest.mark.parametrize("A", [A for A in SMALL if A.sig.base_class in ("BOOLEAN", "MV")], ids=lambda A: A.name)
def test_dm_items_i_to_v_hold(A):
    r = audit_dm_lemma(A)
    assert {w["item"] for w in r.witnesses} <= {"vi"}


# -- Hausdorff separation -------------------------------------------------------------------


def test_hausdorff_examples():
    assert hausdorff_witness(B2, {1, 3}, {2, 3}) == (2, 1)
    with pytest.raises(ContractError):
        hausdorff_witness(G3, {1, 2}, {1, 2})
    mx = maximal_filters(B3)
    assert hausdorff_witness(B3, mx[0], mx[1])


@pytest.mark.parametrize("A", [A for A in standard_corpus() if A.sig.base_class != "RL"], ids=lambda A: A.name)
def test_hausdorff_for_every_pair(A):
    mx = maximal_filters(A)
    for M, N in itertools.permutations(mx, 2):
        a, b = hausdorff_witness(A, M, N)
        assert a not in M.members and b not in N.members


# -- nowhere density ------------------------------------------------------------------------


def test_nowhere_dense_examples():
    r = nowhere_dense_audit(B2, 3, [1, 2], "join")
    assert r.ok and r.details["difference"] == []
    r = nowhere_dense_audit(B3, 7, [1, 2, 4], "join")
    assert r.ok and r.details["label"] == "degenerate at desk scale"
    assert nowhere_dense_audit(G3, 1, [1], "join").ok
    with pytest.raises(ContractError):
        nowhere_dense_audit(B2, 3, [1], "join")


@pytest.mark.parametrize("A", SMALL, ids=lambda A: A.name)
def test_finite_join_differences_are_empty(A):
    j = A.tables["join"]
    for a, b in itertools.combinations_with_replacement(range(A.n), 2):
        r = nowhere_dense_audit(A, j[a][b], [a, b], "join")
        assert r.ok and r.details["difference"] == []


# -- dual spaces -----------------------------------------------------------------------------


def test_dual_space_examples():
    S = dual_space(d4())
    assert [sorted(x) for x in S.base_points] == [[0]]
    assert is_isomorphic(S.stalks[0][0], d4())
    S = dual_space(B2)
    assert len(S.base_points) == 2 and all(St.n == 2 for St, _ in S.stalks)
    S = dual_space(boolean(1))
    assert len(S.base_points) == 1 and S.stalks[0][0].n == 2
    with pytest.raises(StructuralError):
        dual_space(NOT_SUB)


def test_global_sections_examples():
    assert is_isomorphic(global_sections(dual_space(B2)), B2)
    assert is_isomorphic(global_sections(dual_space(d4())), d4())
    S = dual_space(boolean(0))
    assert S.base_points == () and global_sections(S).n == 1


def test_eta_examples():
    assert eta_check(boolean(1)).ok
    assert eta_check(B2).ok


CENTRED = [A for A in standard_corpus() if delta_zd(A).is_subalgebra and A.n <= 16]


@pytest.mark.parametrize("A", CENTRED, ids=lambda A: A.name)
def test_roundtrip_and_sections(A):
    S = dual_space(A)
    r = eta_check(A, S)
    assert r.ok, r.witnesses
    if A.sig.base_class == "BOOLEAN":
        # central elements are characteristic functions of their basic opens
        assert all(c["two_valued"] and c["support_is_basic_open"] for c in r.details["central"])
    else:
        assert isinstance(r.details["central"], str)
    # σ_a are continuous, and η preserves every operation pointwise
    for a in range(A.n):
        assert S.is_continuous(S.sigma(a))
    G = S.gamma
    for k in ("join", "meet", "star", "imp"):
        for a, b in itertools.product(range(A.n), repeat=2):
            assert S.eta(A.tables[k][a][b]) == G.tables[k][S.eta(a)][S.eta(b)]
    # the stalk kernel at x is the ideal generated by x
    for x, th in zip(S.base_points, S.congruences):
        zero = {a for a in range(A.n) if th.related(a, A.bottom)}
        if A.sig.base_class == "BOOLEAN":
            assert zero == oracles.least_ideal(A, x)


@pytest.mark.parametrize("A", [A for A in CENTRED if A.n <= 8], ids=lambda A: A.name)
def test_continuous_sections_are_local_sigmas(A):
    # brute force: every choice function that is locally some σ_a is a section, and conversely
    S = dual_space(A)
    sizes = [St.n for St, _ in S.stalks]
    sigmas = [S.sigma(a) for a in range(A.n)]
    local = set()
    for s in itertools.product(*(range(k) for k in sizes)):
        if all(any(all(s[p] == t[p] for p in U) for t in sigmas) for U in S.minimal_opens):
            local.add(s)
    assert set(S.sections) == local


# -- morphisms ----------------------------------------------------------------------------


def test_dual_morphism_examples():
    D = d4()
    H = dual_morphism(identity_hom(D))
    assert H.lam == identity_morphism(dual_space(D)).lam
    assert gamma_functor(H).map == tuple(range(D.n))

    inc = Homomorphism(boolean(1), B2, (0, 3))
    H = dual_morphism(inc)
    assert H.lam == (0, 0)
    g = gamma_functor(H)
    SA, SB = dual_space(boolean(1)), dual_space(B2)
    assert all(g(SA.eta(a)) == SB.eta(inc(a)) for a in range(2))

    swap = Homomorphism(B2, B2, (0, 2, 1, 3))
    H = dual_morphism(swap)
    assert H.lam == (1, 0)
    assert functoriality_check(swap).ok


def test_gamma_of_identity_is_identity():
    for A in CENTRED[:10]:
        S = dual_space(A)
        assert gamma_functor(identity_morphism(S)).map == tuple(range(S.gamma.n))


PAIRS = [(A, B) for A in CENTRED if A.n <= 8 for B in CENTRED if B.n <= 8 and A.sig.operators == B.sig.operators]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(PAIRS), st.data())
def test_functoriality(AB, data):
    A, B = AB
    hs = homomorphisms(A, B)
    if not hs:
        return
    h = data.draw(st.sampled_from(hs))
    assert functoriality_check(h).ok


# -- niceness ------------------------------------------------------------------------------


def test_nice_examples():
    assert is_nice(d4()).ok
    assert is_nice(partition_closure(3, [[0, 1], [2]])).ok
    with pytest.raises(StructuralError):
        is_nice(NOT_SUB)


@pytest.mark.parametrize("A", [A for A in CENTRED if A.sig.base_class == "BOOLEAN"], ids=lambda A: A.name)
def test_niceness_matches_ideal_maximality(A):
    S = dual_space(A)
    maximal = {frozenset(I) for I in oracles.ideals_within(A, range(A.n)) if A.top not in I}
    maximal = {I for I in maximal if not any(I < J for J in maximal)}
    expected = all(frozenset(oracles.least_ideal(A, x)) in maximal for x in S.base_points)
    assert is_nice(A, S).ok == expected
