"""Interpolation and congruence extension checks, the superamalgam construction, amalgam search, epimorphism probe."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .algebra import (
    FiniteAlgebra,
    Homomorphism,
    hom_verify,
    homomorphisms,
    quotient,
    sg_set,
    subalgebra,
    subuniverses,
)
from .config import ceiling
from .enumeration import enumerate_algebras
from .errors import AuditFailure, ContractError, ResourceError, SearchCeilingError
from .filters import (
    Ideal,
    cg,
    congruence_lattice,
    ideal_congruence,
    ig_generate,
    is_ideal,
)
from .generators import boolean
from .report import Report


def _bits(S):
    m = 0
    for x in S:
        m |= 1 << x
    return m


def _interpolation_gap(A, S1, S2, S0):
    """First (a, c) with a ∈ S1, c ∈ S2, a ≤ c and nothing of S0 in between."""
    up, down, leq = A.up, A.down, A.leq
    mask0 = _bits(S0)
    for a in sorted(S1):
        for c in sorted(S2):
            if leq[a][c] and not up[a] & down[c] & mask0:
                return a, c
    return None


# -- strong interpolation -----------------------------------------------------------


def sip_check(A, X1=None, X2=None, bound=None, generators=None):
    """Strong interpolation for one pair (X1, X2), or for all pairs of subsets.

    With ``generators`` the pairs range over subsets of that set only (the
    free-generator reading under which free Boolean algebras interpolate).

    The all-pairs scan uses two reductions, both exact: enlarging X1 or X2
    by an element outside both only makes the condition harder, and elements
    of Sg(X1 ∩ X2) may be moved into the intersection without changing any
    generated subalgebra. So it suffices to let S = X1 ∩ X2 range over
    subuniverses and split the remaining elements between X1 and X2; the
    split is explored as a set of reachable (Sg X1, Sg X2) states.
    """
    r = Report("check sip", details={"algebra": A.name})
    if X1 is not None:
        X1, X2 = set(X1), set(X2)
        S1, S2, S0 = sg_set(A, X1), sg_set(A, X2), sg_set(A, X1 & X2)
        r.details.update(mode="given", x1=sorted(X1), x2=sorted(X2))
        gap = _interpolation_gap(A, S1, S2, S0)
        if gap:
            r.fail(x1=sorted(X1), x2=sorted(X2), a=gap[0], c=gap[1])
        return r
    if generators is not None:
        gens = sorted(set(generators))
        r.details.update(mode="generators", generators=gens)
        subsets = [frozenset(c) for k in range(len(gens) + 1) for c in itertools.combinations(gens, k)]
        for Y1 in subsets:
            for Y2 in subsets:
                gap = _interpolation_gap(A, sg_set(A, Y1), sg_set(A, Y2), sg_set(A, Y1 & Y2))
                if gap:
                    r.fail(x1=sorted(Y1), x2=sorted(Y2), a=gap[0], c=gap[1])
                    return r
        return r
    bound = bound if bound is not None else ceiling("SIP")
    if A.n > bound:
        raise ResourceError(f"all-subsets SIP on {A.n} elements exceeds bound {bound}", required=A.n, bound=bound)
    r.details["mode"] = "all-subsets"
    closure = {}

    def add(C, e):
        key = (C, e)
        if key not in closure:
            closure[key] = sg_set(A, C | {e})
        return closure[key]

    checked = {}
    n_states = 0
    for S in subuniverses(A):
        states = {(S, S): (frozenset(), frozenset())}
        for e in range(A.n):
            if e in S:
                continue
            new = {}
            for (C1, C2), (Y1, Y2) in states.items():
                new.setdefault((add(C1, e), C2), (Y1 | {e}, Y2))
                new.setdefault((C1, add(C2, e)), (Y1, Y2 | {e}))
            states = new
        n_states += len(states)
        for (C1, C2), (Y1, Y2) in sorted(states.items(), key=lambda kv: (sorted(kv[0][0]), sorted(kv[0][1]))):
            key = (C1, C2, S)
            if key not in checked:
                checked[key] = _interpolation_gap(A, C1, C2, S)
            gap = checked[key]
            if gap:
                r.fail(x1=sorted(S | Y1), x2=sorted(S | Y2), a=gap[0], c=gap[1])
                r.details["states"] = n_states
                return r
    r.details["states"] = n_states
    r.details["triples"] = len(checked)
    return r


# -- congruence extension ---------------------------------------------------------------


def _as_blocks(R, k):
    blocks = R.blocks if hasattr(R, "blocks") else tuple(R)
    if len(blocks) != k:
        raise ContractError(f"congruence has {len(blocks)} entries, subalgebra has {k}")
    ids = {}
    return tuple(ids.setdefault(b, len(ids)) for b in blocks)


def _restrict(blocks, positions):
    ids = {}
    return tuple(ids.setdefault(blocks[p], len(ids)) for p in positions)


def cp_check(A, X1, X2, R, S, lattice=None):
    """A congruence T of A with T|Sg(X1) = R and T|Sg(X2) = S, or None.

    R and S are congruences of the subalgebras Sg(X1), Sg(X2), indexed in
    ascending order of their parent elements (as produced by ``sg``).
    """
    e1, e2 = sorted(sg_set(A, X1)), sorted(sg_set(A, X2))
    R, S = _as_blocks(R, len(e1)), _as_blocks(S, len(e2))
    overlap = sorted(sg_set(A, set(X1) & set(X2)))
    p1 = {a: i for i, a in enumerate(e1)}
    p2 = {a: i for i, a in enumerate(e2)}
    for a, b in itertools.combinations(overlap, 2):
        if (R[p1[a]] == R[p1[b]]) != (S[p2[a]] == S[p2[b]]):
            raise ContractError("R and S disagree on the overlap", witness=[a, b])
    for T in lattice or congruence_lattice(A):
        if T.restrict(e1) == R and T.restrict(e2) == S:
            return T
    return None


def cp_check_all(A, bound=10, generators=None):
    """CP over every pair of subsets (X1, X2) and every overlap-compatible (R, S).

    With ``generators`` the subsets range over that set only.
    """
    if generators is None and A.n > bound:
        raise ResourceError(f"all-pairs CP on {A.n} elements exceeds bound {bound}", required=A.n, bound=bound)
    mode = "all-subsets" if generators is None else "generators"
    r = Report("check cp", details={"algebra": A.name, "mode": mode})
    gens = list(range(A.n)) if generators is None else sorted(set(generators))
    masks = [sum(1 << gens[i] for i in range(len(gens)) if k >> i & 1) for k in range(1 << len(gens))]
    con = congruence_lattice(A)
    sgs = {m: sg_set(A, [i for i in range(A.n) if m >> i & 1]) for m in masks}
    triples = {}
    for m1 in masks:
        for m2 in masks:
            triples.setdefault((sgs[m1], sgs[m2], sgs[m1 & m2]), (m1, m2))
    sub_con = {}

    def cons(U):
        if U not in sub_con:
            B, _ = subalgebra(A, U)
            sub_con[U] = [c.blocks for c in congruence_lattice(B, bound=max(B.n, 1))]
        return sub_con[U]

    for (U1, U2, U0), (m1, m2) in sorted(triples.items(), key=lambda kv: kv[1]):
        e1, e2 = sorted(U1), sorted(U2)
        p1 = {a: i for i, a in enumerate(e1)}
        p2 = {a: i for i, a in enumerate(e2)}
        o1, o2 = [p1[a] for a in sorted(U0)], [p2[a] for a in sorted(U0)]
        achievable = {(T.restrict(e1), T.restrict(e2)) for T in con}
        for R in cons(U1):
            for S in cons(U2):
                if _restrict(R, o1) != _restrict(S, o2):
                    continue
                if (R, S) not in achievable:
                    X1 = [i for i in range(A.n) if m1 >> i & 1]
                    X2 = [i for i in range(A.n) if m2 >> i & 1]
                    r.fail(
                        x1=X1, x2=X2,
                        r=[[e1[i] for i in range(len(e1)) if R[i] == b] for b in sorted(set(R))],
                        s=[[e2[i] for i in range(len(e2)) if S[i] == b] for b in sorted(set(S))],
                    )
                    r.details["triples"] = len(triples)
                    return r
    r.details["triples"] = len(triples)
    return r


# -- weak interpolation -------------------------------------------------------------------


def _kernel_ideal(A, U, z):
    """The ideal of the subalgebra on U identified with Cg(0, z), as parent elements.

    On Boolean-based algebras this is the operator-closed lattice ideal
    generated by z; in general it is the 0-class of the congruence.
    """
    B, inc = subalgebra(A, U)
    pos = {a: i for i, a in enumerate(inc.map)}
    th = cg(B, [(B.bottom, pos[z])])
    return frozenset(inc.map[i] for i in range(B.n) if th.related(i, B.bottom))


def _operator_chain(A, z):
    t, chain = z, [["z", z]]
    while True:
        nxt = A.join_all([t] + [A.unary(o)[t] for o in A.operators])
        if nxt == t:
            return t, chain
        chain.append(["join_operators", nxt])
        t = nxt


def weak_interpolant(A, X1, X2, x, z):
    """y ∈ Sg(X1∩X2) with x ≤ y and y in the ideal of Sg(X2) generated by z.

    Ideals are identified with congruences: the ideal used is the 0-class of
    Cg(0, z) in Sg(X2), which is Ig{z} on Boolean-based algebras. The
    certificate gives that ideal, its largest element t (so y ≤ t), and the
    chain z, z∨f(z), ... whose end is t whenever the lattice ideal is the
    whole story; ``tau_identity`` holds when y ≤ z.
    """
    S1, S2 = sg_set(A, X1), sg_set(A, X2)
    S0 = sg_set(A, set(X1) & set(X2))
    if x not in S1 or z not in S2:
        raise ContractError("x must lie in Sg(X1) and z in Sg(X2)", witness=[x, z])
    if not A.leq[x][z]:
        raise ContractError(f"{x} is not below {z}", witness=[x, z])
    ideal = _kernel_ideal(A, S2, z)
    t = A.join_all(sorted(ideal))
    end, chain = _operator_chain(A, z)
    cands = [y for y in sorted(S0) if A.leq[x][y] and y in ideal]
    fixed = all(A.unary(o)[z] == z for o in A.operators)
    if not cands:
        raise AuditFailure("no weak interpolant", witness={"x1": sorted(X1), "x2": sorted(X2), "x": x, "z": z})
    y = cands[0]
    cert = {
        "ideal": sorted(ideal),
        "bound": t,
        "chain": chain,
        "chain_reaches_bound": end == t,
        "y_le_bound": A.leq[y][t],
        "z_operator_fixed": fixed,
        "tau_identity": A.leq[y][z],
    }
    return y, cert


# -- superamalgamation -----------------------------------------------------------------------


def supap_violation(A0, A1, A2, i1, i2, m1, m2):
    """First cross pair breaking the superamalgamation condition, or None."""
    D = m1.target
    for (Aj, ij, mj, Ak, ik, mk, tag) in ((A1, i1, m1, A2, i2, m2, "12"), (A2, i2, m2, A1, i1, m1, "21")):
        for x in range(Aj.n):
            for y in range(Ak.n):
                if D.leq[mj(x)][mk(y)]:
                    if not any(Aj.leq[x][ij(z)] and Ak.leq[ik(z)][y] for z in range(A0.n)):
                        return {"order": tag, "x": x, "y": y}
    return None


def _induced(D, src_elems, q_src, q_tgt, src_alg, tgt_alg):
    """Map class(d) ↦ class'(d) for d in src_elems; raises AuditFailure when ill defined."""
    m = [None] * src_alg.n
    for d in src_elems:
        c, v = q_src(d), q_tgt(d)
        if m[c] is None:
            m[c] = v
        elif m[c] != v:
            raise AuditFailure("induced map is not well defined", witness=d)
    return Homomorphism(src_alg, tgt_alg, tuple(m))


@dataclass
class Superamalgam:
    P: Ideal
    Q: FiniteAlgebra
    k1: Homomorphism
    k2: Homomorphism
    A0: FiniteAlgebra
    A1: FiniteAlgebra
    A2: FiniteAlgebra
    i1: Homomorphism
    i2: Homomorphism
    report: Report = field(default_factory=lambda: Report("superamalgam"))


def _quotient_of_sub(D, U, M):
    """(D|U)/M with a projection defined on parent elements."""
    sub, inc = subalgebra(D, U)
    pos = {a: i for i, a in enumerate(inc.map)}
    th = ideal_congruence(sub, [pos[m] for m in M])
    Q, q = quotient(sub, th)
    return Q, (lambda d: q(pos[d]))


def build_superamalgam(D, D1, D2, M, N):
    """D/Ig(M ∪ N) as a superamalgam of D1/M and D2/N over (D1∩D2)/(M∩D1∩D2).

    D1, D2 are subuniverses of D, M and N ideals of the respective
    subalgebras agreeing on the overlap, and (D1, D2) must interpolate inside
    D. All post-conditions are verified; a failure raises AuditFailure.
    """
    if D.sig.base_class != "BOOLEAN":
        raise ContractError("build_superamalgam needs a Boolean-based algebra")
    D1, D2 = frozenset(D1), frozenset(D2)
    M = frozenset(M.members if isinstance(M, Ideal) else M)
    N = frozenset(N.members if isinstance(N, Ideal) else N)
    for U, I, label in ((D1, M, "M"), (D2, N, "N")):
        if sg_set(D, U) != U:
            raise ContractError(f"{sorted(U)} is not a subuniverse")
        if not is_ideal(D, I, within=U):
            raise ContractError(f"{label} = {sorted(I)} is not an ideal of its subalgebra")
    O = D1 & D2
    if M & O != N & O:
        w = sorted((M & O) ^ (N & O))
        raise ContractError("M and N disagree on the overlap", witness=w[0])
    if not sip_check(D, D1, D2).ok:
        raise ContractError("(D1, D2) does not interpolate inside D")

    r = Report("superamalgam", details={"algebra": D.name, "d1": sorted(D1), "d2": sorted(D2), "m": sorted(M), "n": sorted(N)})
    P = ig_generate(D, M | N)
    r.details["p"] = P.sorted()
    if P.members & D1 != M:
        r.fail(check="P∩D1=M", elements=sorted((P.members & D1) ^ M))
    if P.members & D2 != N:
        r.fail(check="P∩D2=N", elements=sorted((P.members & D2) ^ N))
    if not r.ok:
        raise AuditFailure("ideal traces fail", witness=r.witnesses)

    Q, q = quotient(D, ideal_congruence(D, P))
    A1, q1 = _quotient_of_sub(D, D1, M)
    A2, q2 = _quotient_of_sub(D, D2, N)
    A0, q0 = _quotient_of_sub(D, O, M & O)
    i1 = _induced(D, O, q0, q1, A0, A1)
    i2 = _induced(D, O, q0, q2, A0, A2)
    k1 = _induced(D, D1, q1, q, A1, Q)
    k2 = _induced(D, D2, q2, q, A2, Q)
    for name, h in (("i1", i1), ("i2", i2), ("k1", k1), ("k2", k2)):
        hv = hom_verify(h)
        if not hv.ok:
            r.fail(check=f"{name} homomorphism", **hv.witnesses[0])
        if not h.injective:
            r.fail(check=f"{name} injective")
    if i1.then(k1).map != i2.then(k2).map:
        r.fail(check="commuting square")
    v = supap_violation(A0, A1, A2, i1, i2, k1, k2)
    if v:
        r.fail(check="superamalgamation", **v)
    if not r.ok:
        raise AuditFailure("superamalgam post-checks fail", witness=r.witnesses)
    r.details["q_size"] = Q.n
    return Superamalgam(P, Q, k1, k2, A0, A1, A2, i1, i2, r)


# -- amalgam search ------------------------------------------------------------------------------


@dataclass
class AmalgamProblem:
    A0: FiniteAlgebra
    A1: FiniteAlgebra
    A2: FiniteAlgebra
    i1: Homomorphism
    i2: Homomorphism
    cls: str = "BOOLEAN"
    max_size: int = 16

    def __post_init__(self):
        for name, h in (("i1", self.i1), ("i2", self.i2)):
            if not hom_verify(h).ok or not h.injective:
                raise ContractError(f"{name} is not a monomorphism", witness=list(h.map))


@dataclass
class AmalgamSolution:
    D: FiniteAlgebra
    m1: Homomorphism
    m2: Homomorphism
    super: bool


def verify_solution(prob, sol, require_super=False):
    """Independent re-check of a solution; returns a Report."""
    r = Report("verify amalgam", details={"d": sol.D.name})
    for name, h in (("m1", sol.m1), ("m2", sol.m2)):
        hv = hom_verify(h)
        if not hv.ok or not h.injective:
            r.fail(check=f"{name} monomorphism", map=list(h.map))
    for a in range(prob.A0.n):
        if sol.m1(prob.i1(a)) != sol.m2(prob.i2(a)):
            r.fail(check="commuting square", a=a)
            break
    if require_super or sol.super:
        v = supap_violation(prob.A0, prob.A1, prob.A2, prob.i1, prob.i2, sol.m1, sol.m2)
        if v:
            r.fail(check="superamalgamation", **v)
    return r


def _candidates(prob, size_cap):
    sig = prob.A0.sig
    if prob.cls == "BOOLEAN" and not sig.operators:
        k = 0
        while 1 << k <= size_cap:
            yield boolean(k)
            k += 1
        return
    yield from enumerate_algebras(sig, prob.cls, size_cap)


def amalgam_search(prob, require_super=False, corpus=None):
    """Least-size amalgam (optionally superamalgam) of the span i1, i2.

    Candidates come from ``corpus`` (sorted by size, stable) or from the
    class enumeration. Returns None when the search is exhaustive up to
    ``max_size`` without success.
    """
    boolean_class = prob.cls == "BOOLEAN" and not prob.A0.sig.operators
    cap = ceiling("AMALGAM_BOOLEAN") if boolean_class else ceiling("AMALGAM")
    if corpus is None and not boolean_class:
        cap = min(cap, ceiling("ENUMERATE"))
    limit = min(prob.max_size, cap)
    cands = sorted(corpus, key=lambda A: A.n) if corpus is not None else _candidates(prob, limit)
    low = max(prob.A1.n, prob.A2.n)
    for D in cands:
        if D.n > limit:
            break
        if D.n < low or set(D.operators) != set(prob.A0.operators):
            continue
        h1 = homomorphisms(prob.A1, D, injective=True)
        if not h1:
            continue
        h2 = homomorphisms(prob.A2, D, injective=True)
        for m1 in h1:
            for m2 in h2:
                if any(m1(prob.i1(a)) != m2(prob.i2(a)) for a in range(prob.A0.n)):
                    continue
                ok_super = supap_violation(prob.A0, prob.A1, prob.A2, prob.i1, prob.i2, m1, m2) is None
                if require_super and not ok_super:
                    continue
                return AmalgamSolution(D, m1, m2, ok_super)
    if prob.max_size > limit:
        raise SearchCeilingError(
            f"no solution up to size {limit}; requested {prob.max_size} exceeds the ceiling",
            bound_reached=limit, required=prob.max_size, bound=cap,
        )
    return None


# -- epimorphisms ------------------------------------------------------------------------


def epi_probe(h, corpus, bound=8):
    """Search the corpus for C and g1 ≠ g2: B → C with g1∘h = g2∘h.

    Outcome ``pass``: h is an epimorphism within the bound; ``fail``: a
    separating pair was found (the witness). A non-surjective h that passes
    is flagged as a bounded-scale ES-failure candidate.
    """
    hv = hom_verify(h)
    if not hv.ok:
        raise ContractError("epi_probe needs a verified homomorphism", witness=hv.witnesses[0])
    cap = ceiling("EPI", 16)
    if bound > cap:
        raise ResourceError(f"epi bound {bound} exceeds ceiling {cap}", required=bound, bound=cap)
    B = h.target
    r = Report("epi", details={"source": h.source.name, "target": B.name, "map": list(h.map), "bound": bound})
    r.details["surjective"] = h.surjective
    searched = []
    for C in corpus:
        if C.n > bound or set(C.operators) != set(B.operators):
            continue
        searched.append(C.name)
        by_restriction = {}
        for g in homomorphisms(B, C):
            key = tuple(g(h(a)) for a in range(h.source.n))
            if key in by_restriction:
                g1 = by_restriction[key]
                r.fail(corpus_member=C.name, g1=list(g1.map), g2=list(g.map))
                r.details["epi"] = False
                r.details["searched"] = searched
                r.details["es_candidate"] = False
                return r
            by_restriction[key] = g
    r.details["epi"] = True
    r.details["searched"] = searched
    r.details["es_candidate"] = not h.surjective
    return r
