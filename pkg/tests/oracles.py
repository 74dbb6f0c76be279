"""Brute-force reference computations over raw operation tables.

Nothing here calls library algorithms; only ``A.n``, ``A.tables``,
``A.operators``, ``A.bottom`` and ``A.top`` are read.
"""

import itertools

BIN = ("join", "meet", "star", "imp")


def leq(A, a, b):
    return A.tables["meet"][a][b] == a


def subsets(n):
    for k in range(n + 1):
        for c in itertools.combinations(range(n), k):
            yield frozenset(c)


def closed(A, S):
    if A.bottom not in S or A.top not in S:
        return False
    for k in BIN:
        t = A.tables[k]
        if any(t[a][b] not in S for a in S for b in S):
            return False
    return all(A.tables["f." + o][a] in S for o in A.operators for a in S)


def subuniverses(A):
    return [S for S in subsets(A.n) if closed(A, S)]


def sg(A, X):
    """Least closed superset, by intersecting all closed supersets."""
    X = frozenset(X)
    out = frozenset(range(A.n))
    for S in subuniverses(A):
        if X <= S:
            out &= S
    return out


def is_filter(A, S):
    s = A.tables["star"]
    return (
        A.top in S
        and all(s[a][b] in S for a in S for b in S)
        and all(b in S for a in S for b in range(A.n) if leq(A, a, b))
    )


def filters(A):
    return [S for S in subsets(A.n) if is_filter(A, S)]


def is_ideal_within(A, S, U):
    j = A.tables["join"]
    return (
        S <= U
        and A.bottom in S
        and all(j[a][b] in S for a in S for b in S)
        and all(b in S for a in S for b in U if leq(A, b, a))
        and all(A.tables["f." + o][a] in S for o in A.operators for a in S)
    )


def ideals_within(A, U):
    U = frozenset(U)
    return [S for S in subsets(A.n) if S <= U and is_ideal_within(A, S, U)]


def prime_filters(A):
    j = A.tables["join"]
    out = []
    for F in filters(A):
        if A.bottom in F:
            continue
        if all(a in F or b in F for a in range(A.n) for b in range(A.n) if j[a][b] in F):
            out.append(F)
    return out


def maximal_filters(A):
    proper = [F for F in filters(A) if A.bottom not in F]
    return [F for F in proper if not any(F < G for G in proper)]


def least_ideal(A, X):
    X = frozenset(X)
    out = frozenset(range(A.n))
    for S in ideals_within(A, range(A.n)):
        if X <= S:
            out &= S
    return out


def set_partitions(n):
    """Restricted growth strings of length n."""
    if n == 0:
        yield ()
        return

    def rec(prefix, m):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for b in range(m + 1):
            yield from rec(prefix + [b], max(m, b + 1))

    yield from rec([0], 1)


def compatible(A, p):
    for k in BIN:
        t = A.tables[k]
        for a, b in itertools.product(range(A.n), repeat=2):
            if p[a] != p[b]:
                continue
            for c in range(A.n):
                if p[t[a][c]] != p[t[b][c]] or p[t[c][a]] != p[t[c][b]]:
                    return False
    for o in A.operators:
        f = A.tables["f." + o]
        if any(p[f[a]] != p[f[b]] for a in range(A.n) for b in range(A.n) if p[a] == p[b]):
            return False
    return True


def congruences(A):
    return [p for p in set_partitions(A.n) if compatible(A, p)]


def is_hom(A, B, m):
    for k in BIN:
        ta, tb = A.tables[k], B.tables[k]
        if any(m[ta[a][b]] != tb[m[a]][m[b]] for a in range(A.n) for b in range(A.n)):
            return False
    for o in A.operators:
        if any(m[A.tables["f." + o][a]] != B.tables["f." + o][m[a]] for a in range(A.n)):
            return False
    return m[A.bottom] == B.bottom and m[A.top] == B.top


def homs(A, B):
    return [m for m in itertools.product(range(B.n), repeat=A.n) if is_hom(A, B, m)]


def canonical_key(A):
    """Tables under every relabelling fixing bottom; the minimum is an isomorphism invariant."""
    best = None
    rest = [x for x in range(A.n) if x != A.bottom]
    for perm in itertools.permutations(rest):
        p = {A.bottom: 0}
        for i, x in enumerate(perm, 1):
            p[x] = i
        inv = {v: k for k, v in p.items()}
        key = tuple(
            tuple(tuple(p[A.tables[k][inv[a]][inv[b]]] for b in range(A.n)) for a in range(A.n)) for k in BIN
        ) + tuple(tuple(p[A.tables["f." + o][inv[a]]] for a in range(A.n)) for o in A.operators)
        if best is None or key < best:
            best = key
    return best


def sip_pairs_literal(A):
    """First (X1, X2, a, c) violating interpolation over all subset pairs, or None."""
    sgs = {S: sg(A, S) for S in subsets(A.n)}
    for X1 in sgs:
        for X2 in sgs:
            S0 = sgs[X1 & X2]
            for a in sgs[X1]:
                for c in sgs[X2]:
                    if leq(A, a, c) and not any(leq(A, a, b) and leq(A, b, c) for b in S0):
                        return X1, X2, a, c
    return None


def kernel_ideal(A, U, z):
    """0-class of the least congruence of the subalgebra on U identifying z with the bottom."""
    elems = sorted(U)
    pos = {a: i for i, a in enumerate(elems)}
    out = set(elems)
    for p in set_partitions(len(elems)):
        if p[pos[z]] != p[pos[A.bottom]]:
            continue
        if _compatible_on(A, elems, pos, p):
            out &= {a for a in elems if p[pos[a]] == p[pos[A.bottom]]}
    return frozenset(out)


def _compatible_on(A, elems, pos, p):
    for k in BIN:
        t = A.tables[k]
        for a, b in itertools.combinations(elems, 2):
            if p[pos[a]] != p[pos[b]]:
                continue
            for c in elems:
                if p[pos[t[a][c]]] != p[pos[t[b][c]]] or p[pos[t[c][a]]] != p[pos[t[c][b]]]:
                    return False
    for o in A.operators:
        f = A.tables["f." + o]
        for a, b in itertools.combinations(elems, 2):
            if p[pos[a]] == p[pos[b]] and p[pos[f[a]]] != p[pos[f[b]]]:
                return False
    return True
