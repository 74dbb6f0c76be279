"""Filters, ideals, prime/maximal spectra and congruences of a finite algebra.

Filters are upsets closed under ``star``. Ideals are downsets closed under
``join`` and under every operator of the signature.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import (
    BINARY,
    Congruence,
    FiniteAlgebra,
    class_chain,
    is_subuniverse,
    quotient,
    verified_congruence,
)
from .axioms import validate_class
from .config import ceiling
from .errors import AuditFailure, ContractError, NotACongruence, ResourceError
from .report import Report


@dataclass(frozen=True)
class Filter:
    members: frozenset
    algebra: FiniteAlgebra = field(compare=False, repr=False)

    @property
    def proper(self):
        return self.algebra.bottom not in self.members

    def __contains__(self, a):
        return a in self.members

    def sorted(self):
        return sorted(self.members)


@dataclass(frozen=True)
class Ideal:
    members: frozenset
    algebra: FiniteAlgebra = field(compare=False, repr=False)

    @property
    def proper(self):
        return self.algebra.top not in self.members

    def __contains__(self, a):
        return a in self.members

    def sorted(self):
        return sorted(self.members)


def _bits(S):
    m = 0
    for x in S:
        m |= 1 << x
    return m


def _members(mask):
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def fl_generate(A, X=()):
    """Least filter containing X: close under upsets and ``star``."""
    star, up = A.tables["star"], A.up
    S = _bits(X) | (1 << A.top)
    while True:
        T = S
        for a in _members(S):
            T |= up[a]
        for a in _members(T):
            for b in _members(T):
                T |= 1 << star[a][b]
        if T == S:
            return Filter(frozenset(_members(S)), A)
        S = T


def ig_generate(A, X=()):
    """Least ideal containing X: close under downsets, ``join`` and the operators."""
    join, down = A.tables["join"], A.down
    unary = [A.unary(o) for o in A.operators]
    S = _bits(X) | (1 << A.bottom)
    while True:
        T = S
        for a in _members(S):
            T |= down[a]
            for f in unary:
                T |= 1 << f[a]
        for a in _members(T):
            for b in _members(T):
                T |= 1 << join[a][b]
        if T == S:
            return Ideal(frozenset(_members(S)), A)
        S = T


def is_filter(A, S):
    S = set(S)
    return (
        A.top in S
        and all(A.tables["star"][a][b] in S for a in S for b in S)
        and all(b in S for a in S for b in range(A.n) if A.leq[a][b])
    )


def is_ideal(A, S, within=None):
    """Ideal test; with ``within`` (a subuniverse) the test is relative to that subalgebra."""
    S = set(S)
    U = range(A.n) if within is None else sorted(within)
    if within is not None and not S <= set(within):
        return False
    return (
        A.bottom in S
        and all(A.tables["join"][a][b] in S for a in S for b in S)
        and all(b in S for a in S for b in U if A.leq[b][a])
        and all(A.unary(o)[a] in S for o in A.operators for a in S)
    )


def filters(A):
    """All filters; in a finite integral algebra each is the upset of an idempotent."""
    star = A.tables["star"]
    out = {fl_generate(A, [e]) for e in range(A.n) if star[e][e] == e}
    return sorted(out, key=lambda F: (len(F.members), F.sorted()))


def ideals(A, within=None):
    """All (operator-closed) ideals, optionally of the subalgebra on ``within``."""
    U = sorted(within) if within is not None else range(A.n)
    out = set()
    for m in U:
        S = {b for b in U if A.leq[b][m]}
        if is_ideal(A, S, within):
            out.add(Ideal(frozenset(S), A))
    return sorted(out, key=lambda I: (len(I.members), I.sorted()))


def is_prime_filter(A, F):
    join = A.tables["join"]
    S = F.members if isinstance(F, Filter) else set(F)
    if A.bottom in S:
        return False
    return all(a in S or b in S for a in range(A.n) for b in range(A.n) if join[a][b] in S)


def is_prime_filter_prelinear(A, F):
    imp = A.tables["imp"]
    S = F.members if isinstance(F, Filter) else set(F)
    if A.bottom in S:
        return False
    return all(imp[a][b] in S or imp[b][a] in S for a in range(A.n) for b in range(A.n))


def maximal_among(items):
    return [x for x in items if not any(x.members < y.members for y in items)]


def proper_filters(A):
    return [F for F in filters(A) if F.proper]


def maximal_filters(A):
    return maximal_among(proper_filters(A))


def proper_ideals(A, within=None):
    return [I for I in ideals(A, within) if A.top not in I.members]


def maximal_ideals(A, within=None):
    return maximal_among(proper_ideals(A, within))


def spec_points(A):
    """(Spec, Max): prime filters and maximal filters, each sorted.

    Max ⊆ Spec is checked; for MTL-and-stronger classes primality is computed
    by both the lattice criterion and the prelinear criterion, and any
    disagreement raises :class:`AuditFailure`.
    """
    props = proper_filters(A)
    spec = [F for F in props if is_prime_filter(A, F)]
    mx = maximal_among(props)
    if "MTL" in class_chain(A.sig.base_class):
        for F in props:
            if is_prime_filter(A, F) != is_prime_filter_prelinear(A, F):
                raise AuditFailure("primality criteria disagree", witness=F.sorted())
    for F in mx:
        if F not in spec:
            raise AuditFailure("maximal filter is not prime", witness=F.sorted())
    return spec, mx


# -- congruences -------------------------------------------------------------------------


class _UF:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, a):
        p = self.parent
        while p[a] != a:
            p[a] = p[p[a]]
            a = p[a]
        return a

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if ra < rb:
            ra, rb = rb, ra
        self.parent[ra] = rb
        return True

    def blocks(self):
        return tuple(self.find(a) for a in range(len(self.parent)))


def cg(A, pairs=()):
    """Least congruence containing the given pairs."""
    uf = _UF(A.n)
    unary = [A.unary(o) for o in A.operators]
    binary = [A.tables[k] for k in BINARY]
    work = [tuple(p) for p in pairs]
    while work:
        a, b = work.pop()
        if not uf.union(a, b):
            continue
        for f in unary:
            work.append((f[a], f[b]))
        for t in binary:
            ta, tb = t[a], t[b]
            for c in range(A.n):
                work.append((ta[c], tb[c]))
                work.append((t[c][a], t[c][b]))
    return Congruence(A, uf.blocks())


def _join_partitions(p, q):
    uf = _UF(len(p))
    for blocks in (p, q):
        first = {}
        for a, b in enumerate(blocks):
            if b in first:
                uf.union(first[b], a)
            else:
                first[b] = a
    return uf.blocks()


def congruence_lattice(A, bound=None):
    """Every congruence of A, as joins of principal congruences."""
    bound = bound if bound is not None else ceiling("CONGRUENCE")
    if A.n > bound:
        raise ResourceError(f"congruence lattice of a {A.n}-element algebra exceeds bound {bound}", required=A.n, bound=bound)
    principal = {cg(A, [(a, b)]) for a in range(A.n) for b in range(a + 1, A.n)}
    found = {Congruence(A, tuple(range(A.n)))} | principal
    frontier = list(found)
    while frontier:
        new = []
        for th in frontier:
            for ph in principal:
                j = Congruence(A, _join_partitions(th.blocks, ph.blocks))
                if j not in found:
                    found.add(j)
                    new.append(j)
        frontier = new
    return sorted(found, key=lambda c: (-c.size, c.blocks))


def _partition_from_relation(A, rel):
    blocks = [None] * A.n
    nxt = 0
    for a in range(A.n):
        if blocks[a] is None:
            for b in range(A.n):
                if rel(a, b):
                    blocks[b] = nxt
            nxt += 1
    for a in range(A.n):
        for b in range(A.n):
            if rel(a, b) != (blocks[a] == blocks[b]):
                raise NotACongruence("relation is not an equivalence", witness=("equivalence", (a, b)))
    return tuple(blocks)


def filter_congruence(A, F):
    """x ~ y iff (x ⟹ y) ∧ (y ⟹ x) ∈ F; raises NotACongruence with a witness if incompatible."""
    S = F.members if isinstance(F, Filter) else frozenset(F)
    imp, meet = A.tables["imp"], A.tables["meet"]
    blocks = _partition_from_relation(A, lambda x, y: meet[imp[x][y]][imp[y][x]] in S)
    return verified_congruence(A, blocks)


def symmetric_difference(A, x, y):
    j, m, neg = A.tables["join"], A.tables["meet"], A.neg
    return j[m[x][neg[y]]][m[y][neg[x]]]


def _require_boolean(A, what):
    if A.sig.base_class != "BOOLEAN":
        raise ContractError(f"{what} needs a Boolean-based algebra, {A.name} is {A.sig.base_class}")


def ideal_congruence(A, M):
    """x ~ y iff the symmetric difference of x and y lies in M (Boolean-based classes)."""
    _require_boolean(A, "ideal_congruence")
    S = M.members if isinstance(M, Ideal) else frozenset(M)
    blocks = _partition_from_relation(A, lambda x, y: symmetric_difference(A, x, y) in S)
    return verified_congruence(A, blocks)


def congruence_ideal(theta):
    """The bottom class of a congruence."""
    A = theta.algebra
    return Ideal(frozenset(a for a in range(A.n) if theta.related(a, A.bottom)), A)


# -- extension of ideals -----------------------------------------------------------------


def _check_ideal_of(A, B, M, label):
    if not is_subuniverse(A, B):
        raise ContractError(f"{label}: {sorted(B)} is not a subuniverse")
    if not is_ideal(A, M, within=B):
        raise ContractError(f"{label}: {sorted(M)} is not an ideal of the subalgebra", witness=sorted(M))


def _extend_from_bottom(A, B, M, want_maximal):
    cur = ig_generate(A, M).members
    if cur & B != M:
        raise AuditFailure("generated ideal does not trace back to M", witness=sorted(cur & B))
    if want_maximal:
        for e in range(A.n):
            if e in cur:
                continue
            cand = ig_generate(A, cur | {e}).members
            if A.top not in cand and cand & B == M:
                cur = cand
    return cur


def extend_ideal(A, B, M, N, want_maximal=False):
    """An ideal N' of A with N ⊆ N' and N' ∩ B = M.

    B is a subuniverse of A, M an ideal of the subalgebra on B, N an ideal of
    A with N ∩ B ⊆ M. The case N = {bottom} is a greedy extension of Ig(M)
    in ascending element order; the general case is reduced to it through
    the quotient A/N. With ``want_maximal`` the result is maximal among
    ideals tracing to M, hence maximal in A whenever M is maximal in B
    (verified, AuditFailure otherwise).
    """
    _require_boolean(A, "extend_ideal")
    B, M = frozenset(B), frozenset(M.members if isinstance(M, Ideal) else M)
    N = frozenset(N.members if isinstance(N, Ideal) else N)
    _check_ideal_of(A, B, M, "M")
    if not is_ideal(A, N):
        raise ContractError(f"N = {sorted(N)} is not an ideal of {A.name}")
    bad = sorted((N & B) - M)
    if bad:
        raise ContractError(f"N ∩ B is not contained in M; {bad[0]} ∈ (N∩B)∖M", witness=bad[0])

    if N == {A.bottom}:
        result = _extend_from_bottom(A, B, M, want_maximal)
    else:
        theta = ideal_congruence(A, N)
        Q, q = quotient(A, theta)
        QB = frozenset(q(b) for b in B)
        QM = frozenset(q(m) for m in M)
        sub = _extend_from_bottom(Q, QB, QM, want_maximal)
        result = frozenset(a for a in range(A.n) if q(a) in sub)

    result = frozenset(result)
    out = Ideal(result, A)
    if not (is_ideal(A, result) and N <= result and result & B == M):
        raise AuditFailure("extended ideal violates its contract", witness=sorted(result))
    if want_maximal and Ideal(M, A) in maximal_ideals(A, within=B) and out not in maximal_ideals(A):
        raise AuditFailure("extension of a maximal ideal is not maximal", witness=sorted(result))
    return out


# -- audits --------------------------------------------------------------------------------


def audit_dichotomy(A, F):
    """For a maximal filter F of a BL algebra: every a has a ∈ F or ¬a ∈ F."""
    if not validate_class(A, "BL").ok:
        raise ContractError(f"{A.name} is not a BL algebra")
    S = frozenset(F.members if isinstance(F, Filter) else F)
    if not is_filter(A, S) or Filter(S, A) not in maximal_filters(A):
        raise ContractError(f"{sorted(S)} is not a maximal filter of {A.name}", witness=sorted(S))
    r = Report("audit dichotomy", details={"algebra": A.name, "filter": sorted(S)})
    for a in range(A.n):
        if a not in S and A.neg[a] not in S:
            r.fail(a=a, neg_a=A.neg[a], filter=sorted(S))
            break
    return r
