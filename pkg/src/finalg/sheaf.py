"""Dual sheaf space of a finite algebra with operators, its continuous sections, and the functor on morphisms.

Base points are the prime ideals of the lattice Zd(A) of operator-fixed
elements, with the Zariski topology whose basic opens are
``U_c = {x : c ∉ x}`` for c in Zd(A). The stalk over x is A modulo the
congruence of Ig^A(x): the ideal congruence for Boolean-based algebras, the
congruence of the filter generated by {¬i : i ∈ x} otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .algebra import (
    BINARY,
    FiniteAlgebra,
    Homomorphism,
    delta_zd,
    hom_verify,
    identity_hom,
    quotient,
)
from .config import ceiling
from .errors import AuditFailure, ResourceError, StructuralError
from .filters import (
    congruence_ideal,
    congruence_lattice,
    filter_congruence,
    fl_generate,
    ideal_congruence,
    ig_generate,
    maximal_ideals,
)
from .report import Report
from .spectrum import FiniteTopology


def prime_ideals_of(A, U):
    """Prime lattice ideals of the sublattice on U (proper, join-closed downsets in U)."""
    U = sorted(U)
    meet, leq = A.tables["meet"], A.leq
    out = []
    for m in U:
        if m == A.top:
            continue
        x = frozenset(u for u in U if leq[u][m])
        if any(A.tables["join"][a][b] not in x for a in x for b in x):
            continue
        if all(a in x or b in x for a in U for b in U if meet[a][b] in x):
            out.append(x)
    return sorted(set(out), key=lambda s: (len(s), sorted(s)))


def stalk_congruence(A, x):
    if A.sig.base_class == "BOOLEAN":
        return ideal_congruence(A, ig_generate(A, x))
    return filter_congruence(A, fl_generate(A, [A.neg[i] for i in x]))


@dataclass(frozen=True, eq=False)
class SheafSpace:
    source: FiniteAlgebra
    zd: frozenset
    base_points: tuple
    base_topology: FiniteTopology
    congruences: tuple
    stalks: tuple  # (stalk algebra, canonical surjection) per base point
    kernels: tuple  # Ig^A(x) per base point

    def sigma(self, a):
        """The section a ↦ (a/θ_x)_x."""
        return tuple(q(a) for _, q in self.stalks)

    @cached_property
    def etale_basis(self):
        out = []
        for a in range(self.source.n):
            s = self.sigma(a)
            for c, U in self.base_topology.basic_opens:
                out.append((a, c, frozenset((i, s[i]) for i in U)))
        return tuple(out)

    @cached_property
    def minimal_opens(self):
        """Smallest basic open around each point (basic opens are closed under finite intersection)."""
        k = len(self.base_points)
        out = []
        for i in range(k):
            U = frozenset(range(k))
            for _, B in self.base_topology.basic_opens:
                if i in B:
                    U &= B
            out.append(U)
        return tuple(out)

    def is_continuous(self, s):
        sig = [self.sigma(a) for a in range(self.source.n)]
        for i, U in enumerate(self.minimal_opens):
            if not any(all(s[p] == t[p] for p in U) for t in sig):
                return False
        return True

    @cached_property
    def sections(self):
        """All continuous sections; σ_a images first (in order of a), the rest sorted."""
        k = len(self.base_points)
        sizes = [S.n for S, _ in self.stalks]
        sigmas = [self.sigma(a) for a in range(self.source.n)]
        opens = [sorted(U) for U in self.minimal_opens]
        allowed = [{tuple(t[p] for p in U) for t in sigmas} for U in opens]
        # check point i once every point of its minimal open is assigned
        due = [[] for _ in range(k)]
        for i, U in enumerate(opens):
            due[max(U) if U else 0].append(i)
        limit = ceiling("SECTIONS")
        found = []
        cur = [0] * k

        def rec(p):
            if p == k:
                found.append(tuple(cur))
                if len(found) > limit:
                    raise ResourceError(f"more than {limit} continuous sections", bound=limit)
                return
            for v in range(sizes[p]):
                cur[p] = v
                if all(tuple(cur[q] for q in opens[i]) in allowed[i] for i in due[p]):
                    rec(p + 1)

        rec(0)
        images = []
        for t in sigmas:
            if t not in images:
                images.append(t)
        rest = sorted(set(found) - set(images))
        missing = [t for t in images if t not in set(found)]
        if missing:
            raise AuditFailure("some σ_a is not continuous", witness=list(missing[0]))
        return tuple(images + rest)

    @cached_property
    def section_index(self):
        return {s: i for i, s in enumerate(self.sections)}

    @cached_property
    def gamma(self):
        """Γ(X, δ): continuous sections with pointwise operations."""
        A = self.source
        secs, idx = self.sections, self.section_index
        stalks = [S for S, _ in self.stalks]
        tables = {}
        for key in A.sig.op_keys():
            if key in BINARY:
                rows = []
                for s in secs:
                    row = []
                    for t in secs:
                        v = tuple(S.tables[key][a][b] for S, a, b in zip(stalks, s, t))
                        if v not in idx:
                            raise AuditFailure(f"sections not closed under {key}", witness=[list(s), list(t)])
                        row.append(idx[v])
                    rows.append(tuple(row))
                tables[key] = tuple(rows)
            else:
                col = []
                for s in secs:
                    v = tuple(S.tables[key][a] for S, a in zip(stalks, s))
                    if v not in idx:
                        raise AuditFailure(f"sections not closed under {key}", witness=[list(s)])
                    col.append(idx[v])
                tables[key] = tuple(col)
        top = idx[self.sigma(A.top)]
        return FiniteAlgebra(f"Gamma({A.name})", len(secs), A.sig, tables, 0, top)

    @cached_property
    def eta(self):
        return Homomorphism(self.source, self.gamma, tuple(self.section_index[self.sigma(a)] for a in range(self.source.n)))

    def to_dict(self):
        return {
            "algebra": self.source.name,
            "zd": sorted(self.zd),
            "points": [sorted(x) for x in self.base_points],
            "basic_opens": [[c, sorted(U)] for c, U in self.base_topology.basic_opens],
            "stalks": [
                {"n": S.n, "classes": th.classes(), "tables": {k: [list(r) if isinstance(r, tuple) else r for r in S.tables[k]] for k in S.sig.op_keys()}}
                for (S, _), th in zip(self.stalks, self.congruences)
            ],
            "germs": [list(self.sigma(a)) for a in range(self.source.n)],
        }


def dual_space(A):
    """The dual space of A; raises StructuralError when Zd(A) is not a subalgebra."""
    dz = delta_zd(A)
    if not dz.is_subalgebra:
        raise StructuralError(f"Zd({A.name}) = {sorted(dz.zd)} is not a subalgebra (fails at {dz.closure_witness})")
    points = tuple(prime_ideals_of(A, dz.zd))
    basics = tuple((c, frozenset(i for i, x in enumerate(points) if c not in x)) for c in sorted(dz.zd))
    topo = FiniteTopology(points, basics)
    congs, stalks, kernels = [], [], []
    for x in points:
        th = stalk_congruence(A, x)
        kernel = ig_generate(A, x)
        zero_class = congruence_ideal(th).members
        if A.sig.base_class == "BOOLEAN" and zero_class != kernel.members:
            raise AuditFailure("stalk kernel differs from Ig(x)", witness=sorted(x))
        if not kernel.members <= zero_class:
            raise AuditFailure("stalk kernel does not contain Ig(x)", witness=sorted(x))
        Q, q = quotient(A, th)
        congs.append(th)
        stalks.append((Q.renamed(f"{A.name}/Ig{sorted(x)}"), q))
        kernels.append(kernel)
    return SheafSpace(A, dz.zd, points, topo, tuple(congs), tuple(stalks), tuple(kernels))


def global_sections(S):
    return S.gamma


def eta_check(A, S=None):
    """Verify that η: a ↦ σ_a is an isomorphism A ≅ Γ(X(A), δ(A))."""
    S = S or dual_space(A)
    eta = S.eta
    r = Report("roundtrip", details={"algebra": A.name, "points": len(S.base_points), "sections": len(S.sections)})
    hv = hom_verify(eta)
    if not hv.ok:
        for w in hv.witnesses:
            r.fail(check="homomorphism", **w)
    if not eta.injective:
        seen = {}
        for a, v in enumerate(eta.map):
            if v in seen:
                r.fail(check="injective", pair=[seen[v], a])
                break
            seen[v] = a
    if not eta.surjective:
        extra = sorted(set(range(S.gamma.n)) - set(eta.map))
        r.fail(check="surjective", section=list(S.sections[extra[0]]))
    # the characteristic-function reading needs Zd to be a Boolean center
    central = [] if A.sig.base_class == "BOOLEAN" else "not applicable (Zd is not a Boolean center)"
    for a in sorted(S.zd) if A.sig.base_class == "BOOLEAN" else ():
        s = S.sigma(a)
        two_valued = all(v in (St.bottom, St.top) for v, (St, _) in zip(s, S.stalks))
        support = frozenset(i for i, (v, (St, _)) in enumerate(zip(s, S.stalks)) if v == St.top and St.n > 1)
        basic = dict(S.base_topology.basic_opens)[a]
        central.append({"a": a, "two_valued": two_valued, "support_is_basic_open": support == basic})
    r.details["central"] = central
    r.details["eta"] = list(eta.map)
    return r


# -- morphisms -----------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SheafMorphism:
    """H = (λ, μ): domain → codomain with λ on base points going the other way.

    ``lam[y]`` is a codomain point for each domain point y, and ``mu[y]`` a
    homomorphism from the codomain stalk over lam[y] into the domain stalk over y.
    """

    domain: SheafSpace
    codomain: SheafSpace
    lam: tuple
    mu: tuple


def identity_morphism(S):
    return SheafMorphism(S, S, tuple(range(len(S.base_points))), tuple(identity_hom(St) for St, _ in S.stalks))


def dual_morphism(h, SA=None, SB=None):
    """h^d = (h*, h°) for h: A → B, with h*(y) = h⁻¹[y] ∩ Zd(A)."""
    A, B = h.source, h.target
    SA = SA or dual_space(A)
    SB = SB or dual_space(B)
    index_a = {x: i for i, x in enumerate(SA.base_points)}
    lam = []
    for y in SB.base_points:
        x = frozenset(a for a in SA.zd if h(a) in y)
        if x not in index_a:
            raise StructuralError(f"h*({sorted(y)}) = {sorted(x)} is not a base point of {A.name}", witness=sorted(y))
        lam.append(index_a[x])
    mu = []
    for j, (StB, qB) in enumerate(SB.stalks):
        StA, qA = SA.stalks[lam[j]]
        m = [None] * StA.n
        for a in range(A.n):
            v = qB(h(a))
            c = qA(a)
            if m[c] is None:
                m[c] = v
            elif m[c] != v:
                rep = next(b for b in range(A.n) if qA(b) == c)
                raise StructuralError(
                    "stalk map is not well defined", witness={"point": j, "pair": [rep, a]}
                )
        mu_j = Homomorphism(StA, StB, tuple(m))
        hv = hom_verify(mu_j)
        if not hv.ok:
            raise AuditFailure(f"stalk map at point {j} is not a homomorphism", witness=hv.witnesses[0])
        mu.append(mu_j)
    for c, U in SA.base_topology.basic_opens:
        pre = frozenset(j for j, i in enumerate(lam) if i in U)
        if not SB.base_topology.is_open(pre):
            raise AuditFailure("h* is not continuous", witness={"basic_open": c})
    return SheafMorphism(SB, SA, tuple(lam), tuple(mu))


def gamma_functor(H):
    """Γ(H): Γ(codomain) → Γ(domain), (Γ(H)σ)(y) = μ_y(σ(λ y))."""
    X, Y = H.codomain, H.domain
    out = []
    for s in X.sections:
        t = tuple(H.mu[y](s[H.lam[y]]) for y in range(len(Y.base_points)))
        if t not in Y.section_index:
            raise AuditFailure("image of a continuous section is not continuous", witness=list(s))
        out.append(Y.section_index[t])
    g = Homomorphism(X.gamma, Y.gamma, tuple(out))
    hv = hom_verify(g)
    if not hv.ok:
        raise AuditFailure("Γ(H) is not a homomorphism", witness=hv.witnesses[0])
    return g


def functoriality_check(h, SA=None, SB=None):
    """Γ(h^d) ∘ η_A = η_B ∘ h, element by element."""
    SA = SA or dual_space(h.source)
    SB = SB or dual_space(h.target)
    g = gamma_functor(dual_morphism(h, SA, SB))
    r = Report("functoriality", details={"source": h.source.name, "target": h.target.name, "map": list(h.map)})
    for a in range(h.source.n):
        if g(SA.eta(a)) != SB.eta(h(a)):
            r.fail(a=a)
            break
    return r


def is_nice(A, S=None):
    """Every base point x gives a maximal ideal Ig^A(x) (equivalently, a simple stalk)."""
    S = S or dual_space(A)
    r = Report("nice", details={"algebra": A.name, "points": [sorted(x) for x in S.base_points]})
    maxi = set(maximal_ideals(A)) if A.sig.base_class == "BOOLEAN" else None
    for x, (St, _), I in zip(S.base_points, S.stalks, S.kernels):
        simple = St.n > 1 and len(congruence_lattice(St, bound=max(St.n, 1))) == 2
        if maxi is not None and (I in maxi) != simple:
            raise AuditFailure("ideal maximality and stalk simplicity disagree", witness=sorted(x))
        if not simple:
            r.fail(point=sorted(x), ideal=I.sorted())
            break
    return r
