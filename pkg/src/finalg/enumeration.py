"""Isomorphism-free enumeration of small algebras of a class.

Lattices are generated with a natural labelling (i below j implies i < j),
deduplicated by canonical form, then every residuated commutative monoid with
unit top is searched on each lattice, then operators are attached.
"""

from __future__ import annotations

import itertools

from .algebra import BINARY, FiniteAlgebra, Signature, homomorphisms
from .axioms import validate_class
from .config import ceiling
from .errors import ResourceError


def _relabel_key(A, perm):
    """Tables of A after renaming element x to perm[x], as one flat tuple."""
    inv = [0] * A.n
    for old, new in enumerate(perm):
        inv[new] = old
    out = []
    for k in A.sig.op_keys():
        t = A.tables[k]
        if k in BINARY:
            for i in range(A.n):
                row = t[inv[i]]
                out.extend(perm[row[inv[j]]] for j in range(A.n))
        else:
            out.extend(perm[t[inv[i]]] for i in range(A.n))
    return tuple(out)


def _permutations_fixing_ends(A):
    mid = [x for x in range(A.n) if x not in (A.bottom, A.top)]
    slots = list(range(1, A.n - 1))
    for p in itertools.permutations(slots):
        perm = [0] * A.n
        perm[A.top] = A.n - 1
        for x, y in zip(mid, p):
            perm[x] = y
        yield perm


def canonical_form(A):
    """Lexicographically least relabelled table over permutations sending bottom to 0 and top to n-1."""
    if A.n == 1:
        return _relabel_key(A, [0])
    return min(_relabel_key(A, perm) for perm in _permutations_fixing_ends(A))


def is_isomorphic(A, B):
    if A.n != B.n or set(A.operators) != set(B.operators):
        return False
    return bool(homomorphisms(A, B, injective=True))


# -- lattices -------------------------------------------------------------------------


def _downsets(below, elems):
    for r in range(len(elems) + 1):
        for D in itertools.combinations(elems, r):
            s = set(D)
            if all(below[x] <= s for x in s):
                yield frozenset(s)


def _lattice_tables(n, leq):
    up = [{b for b in range(n) if leq[a][b]} for a in range(n)]
    join = [[0] * n for _ in range(n)]
    meet = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            ub = up[a] & up[b]
            lub = [u for u in ub if all(leq[u][v] for v in ub)]
            lb = [x for x in range(n) if leq[x][a] and leq[x][b]]
            glb = [x for x in lb if all(leq[v][x] for v in lb)]
            if not lub or not glb:
                return None
            join[a][b] = join[b][a] = lub[0]
            meet[a][b] = meet[b][a] = glb[0]
    return tuple(map(tuple, join)), tuple(map(tuple, meet))


def _leq_key(n, leq, perm):
    inv = [0] * n
    for old, new in enumerate(perm):
        inv[new] = old
    return tuple(leq[inv[i]][inv[j]] for i in range(n) for j in range(n))


def _refined_perms(n, leq):
    """Relabellings that sort elements by an isomorphism-invariant signature.

    Only permutations within equal-signature classes are produced, so the
    minimum over them is still a canonical form.
    """
    def sig(a):
        below = sum(leq[x][a] for x in range(n))
        above = sum(leq[a][x] for x in range(n))
        return (below, above)

    mid = sorted(range(1, n - 1), key=sig)
    groups = [list(g) for _, g in itertools.groupby(mid, key=sig)]
    for choice in itertools.product(*(itertools.permutations(g) for g in groups)):
        order = [x for g in choice for x in g]
        perm = [0] * n
        perm[n - 1] = n - 1
        for new, old in enumerate(order, start=1):
            perm[old] = new
        yield perm


def lattices(n):
    """Bounded lattices of size n up to isomorphism, as (join, meet) tables with top n-1."""
    if n == 1:
        return [(((0,),), ((0,),))]
    seen = {}

    def rec(j, below):
        if j == n - 1:
            leq = [[a == b or a == 0 or b == n - 1 or a in below.get(b, ()) for b in range(n)] for a in range(n)]
            tabs = _lattice_tables(n, leq)
            if tabs is None:
                return
            key = min(_leq_key(n, leq, perm) for perm in _refined_perms(n, leq))
            seen.setdefault(key, tabs)
            return
        for D in _downsets(below, list(range(1, j))):
            below[j] = D
            rec(j + 1, below)
        del below[j]

    rec(1, {})
    return [seen[k] for k in sorted(seen, reverse=True)]


# -- residuated monoids ------------------------------------------------------------


def _stars(join, meet, n, idempotent):
    top = n - 1
    leq = [[meet[a][b] == a for b in range(n)] for a in range(n)]
    star = [[0] * n for _ in range(n)]
    for x in range(n):
        star[x][top] = star[top][x] = x
    if n == 1:
        yield ((0,),)
        return
    if idempotent:
        yield meet
        return
    pairs = [(i, j) for i in range(1, n - 1) for j in range(i, n - 1)]
    assigned = []

    def consistent(i, j, v):
        for (a, b) in assigned:
            w = star[a][b]
            for (p, q) in ((a, b), (b, a)):
                if leq[p][i] and leq[q][j] and not leq[w][v]:
                    return False
                if leq[i][p] and leq[j][q] and not leq[v][w]:
                    return False
        return True

    def rec(k):
        if k == len(pairs):
            for x in range(n):
                for y in range(n):
                    for z in range(n):
                        if star[x][join[y][z]] != join[star[x][y]][star[x][z]]:
                            return
                        if star[star[x][y]][z] != star[x][star[y][z]]:
                            return
            yield tuple(map(tuple, star))
            return
        i, j = pairs[k]
        for v in range(n):
            if not leq[v][meet[i][j]] or not consistent(i, j, v):
                continue
            star[i][j] = star[j][i] = v
            assigned.append((i, j))
            yield from rec(k + 1)
            assigned.pop()
        star[i][j] = star[j][i] = 0

    yield from rec(0)


def _residuum(star, join, meet, n):
    leq = [[meet[a][b] == a for b in range(n)] for a in range(n)]
    imp = []
    for x in range(n):
        row = []
        for y in range(n):
            cands = [z for z in range(n) if leq[star[x][z]][y]]
            best = [z for z in cands if all(leq[w][z] for w in cands)]
            if not best:
                return None
            row.append(best[0])
        imp.append(tuple(row))
    return tuple(imp)


# -- operators -------------------------------------------------------------------------


def _operator_tables(base, flags):
    n = base.n
    join, leq = base.tables["join"], base.leq
    normal = "normal" in flags
    if "additive" in flags:
        irreducibles = [
            x for x in range(1, n)
            if not any(join[a][b] == x for a in range(n) for b in range(n) if a != x and b != x)
        ]
        below = {x: [j for j in irreducibles if leq[j][x]] for x in range(n)}
        for f0 in ([0] if normal else range(n)):
            for vals in itertools.product(range(n), repeat=len(irreducibles)):
                fj = dict(zip(irreducibles, vals))
                if any(not leq[f0][v] for v in vals):
                    continue
                f = tuple(base.join_all([f0] + [fj[j] for j in below[x]]) for x in range(n))
                if any(f[join[a][b]] != join[f[a]][f[b]] for a in range(n) for b in range(n)):
                    continue
                yield f
    else:
        if n ** n > 1_000_000:
            raise ResourceError(f"unconstrained operator search over {n}**{n} maps", required=n ** n)
        for f in itertools.product(range(n), repeat=n):
            if normal and f[0] != 0:
                continue
            yield f


def _automorphisms(n, leq):
    mid = list(range(1, n - 1))
    out = []
    for p in itertools.permutations(mid):
        perm = [0, *p, n - 1] if n > 1 else [0]
        if all(leq[a][b] == leq[perm[a]][perm[b]] for a in range(n) for b in range(n)):
            out.append(perm)
    return out


def enumerate_algebras(sig, c, max_n, ceiling_n=None):
    """Yield every class-``c`` algebra with signature ``sig`` of size <= max_n, one per isomorphism class.

    Within each size the stream is sorted by canonical key.
    """
    ceiling_n = ceiling_n if ceiling_n is not None else ceiling("ENUMERATE")
    if max_n > ceiling_n:
        raise ResourceError(f"enumeration size {max_n} exceeds ceiling {ceiling_n}", required=max_n, bound=ceiling_n)
    sig = sig.with_class(c)
    idempotent = c in ("GODEL", "BOOLEAN")
    for n in range(1, max_n + 1):
        found = {}
        for join, meet in lattices(n):
            leq = [[meet[a][b] == a for b in range(n)] for a in range(n)]
            autos = _automorphisms(n, leq) if n > 1 else [[0]]
            for star in _stars(join, meet, n, idempotent):
                imp = _residuum(star, join, meet, n)
                if imp is None:
                    continue
                tables = {"join": join, "meet": meet, "star": star, "imp": imp}
                base = FiniteAlgebra("tmp", n, Signature(c), tables, 0, n - 1)
                if not validate_class(base, c).ok:
                    continue
                for optabs in itertools.product(*(list(_operator_tables(base, sig.flags[o])) for o in sig.operators)):
                    full = dict(tables)
                    for o, t in zip(sig.operators, optabs):
                        full["f." + o] = t
                    A = FiniteAlgebra("tmp", n, sig, full, 0, n - 1)
                    if sig.operators and not validate_class(A, c).ok:
                        continue
                    key = min(_relabel_key(A, p) for p in autos)
                    if key not in found:
                        found[key] = A if key == _relabel_key(A, list(range(n))) else _from_key(A, key)
        for i, key in enumerate(sorted(found)):
            yield found[key].renamed(f"{c.lower()}:{n}#{i}")


def _from_key(A, key):
    n = A.n
    tables = {}
    pos = 0
    for k in A.sig.op_keys():
        if k in BINARY:
            tables[k] = tuple(tuple(key[pos + i * n: pos + (i + 1) * n]) for i in range(n))
            pos += n * n
        else:
            tables[k] = tuple(key[pos: pos + n])
            pos += n
    return FiniteAlgebra(A.name, n, A.sig, tables, 0, n - 1)
