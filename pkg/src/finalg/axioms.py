"""Axiom validation per algebraic class by direct table walk."""

from __future__ import annotations

import itertools

from .algebra import CLASSES, FiniteAlgebra, class_chain
from .errors import StructuralError
from .report import Report


def _lattice_axioms(A):
    j, m, leq = A.tables["join"], A.tables["meet"], A.leq
    b, t = A.bottom, A.top
    return [
        ("join_idempotent", 1, lambda x: j[x][x] == x),
        ("meet_idempotent", 1, lambda x: m[x][x] == x),
        ("join_commutative", 2, lambda x, y: j[x][y] == j[y][x]),
        ("meet_commutative", 2, lambda x, y: m[x][y] == m[y][x]),
        ("join_associative", 3, lambda x, y, z: j[j[x][y]][z] == j[x][j[y][z]]),
        ("meet_associative", 3, lambda x, y, z: m[m[x][y]][z] == m[x][m[y][z]]),
        ("absorption", 2, lambda x, y: j[x][m[x][y]] == x and m[x][j[x][y]] == x),
        ("bottom_least", 1, lambda x: leq[b][x]),
        ("top_greatest", 1, lambda x: leq[x][t]),
    ]


def _rl_axioms(A):
    s, i, leq = A.tables["star"], A.tables["imp"], A.leq
    t = A.top
    return [
        ("star_commutative", 2, lambda x, y: s[x][y] == s[y][x]),
        ("star_associative", 3, lambda x, y, z: s[s[x][y]][z] == s[x][s[y][z]]),
        ("star_unit", 1, lambda x: s[x][t] == x),
        ("adjunction", 3, lambda x, y, z: leq[z][i[x][y]] == leq[s[x][z]][y]),
    ]


def _class_axioms(A, c):
    j, m, s, i = (A.tables[k] for k in ("join", "meet", "star", "imp"))
    b, t, neg = A.bottom, A.top, A.neg
    if c == "MTL":
        return [("prelinearity", 2, lambda x, y: j[i[x][y]][i[y][x]] == t)]
    if c == "BL":
        return [("divisibility", 2, lambda x, y: s[x][i[x][y]] == m[x][y])]
    if c == "MV":
        return [("involution", 1, lambda x: neg[neg[x]] == x)]
    if c == "GODEL":
        return [("idempotency", 1, lambda x: s[x][x] == x)]
    if c == "BOOLEAN":
        return [("excluded_middle", 1, lambda x: j[x][neg[x]] == t)]
    return []


def _operator_axioms(A):
    out = []
    j, neg = A.tables["join"], A.neg
    for o in A.operators:
        f = A.unary(o)
        flags = A.sig.flags[o]
        if "normal" in flags:
            out.append((f"{o}:normal", 0, lambda f=f: f[A.bottom] == A.bottom))
        if "additive" in flags:
            out.append((f"{o}:additive", 2, lambda x, y, f=f: f[j[x][y]] == j[f[x]][f[y]]))
        if "central_complement" in flags:
            out.append((f"{o}:central_complement", 1, lambda x, f=f: f[neg[f[x]]] == neg[f[x]]))
    return out


def axioms_for(A, c):
    if c not in CLASSES:
        raise StructuralError(f"unknown class {c!r}")
    chain = class_chain(c)
    axioms = _lattice_axioms(A) + _rl_axioms(A)
    for k in reversed(chain):
        axioms += _class_axioms(A, k)
    return axioms + _operator_axioms(A)


def validate_class(A: FiniteAlgebra, c: str) -> Report:
    """Check every axiom of class ``c`` (plus declared operator axioms) on A.

    The report lists the first failing instance of each failing axiom.
    Structural problems raise :class:`StructuralError` at construction time,
    before any axiom is evaluated.
    """
    r = Report("validate", details={"class": c, "algebra": A.name, "n": A.n})
    for name, arity, pred in axioms_for(A, c):
        for args in itertools.product(range(A.n), repeat=arity):
            if not pred(*args):
                r.fail(axiom=name, args=list(args))
                break
    return r


def replay_axiom(A, c, name, args):
    """Re-evaluate one axiom instance; True iff it holds."""
    for ax, arity, pred in axioms_for(A, c):
        if ax == name:
            return bool(pred(*args))
    raise KeyError(name)


def residuum_by_max(A, x, y):
    """max{z : x*z <= y}, or None if that set has no greatest element."""
    s, leq = A.tables["star"], A.leq
    cands = [z for z in range(A.n) if leq[s[x][z]][y]]
    tops = [z for z in cands if all(leq[w][z] for w in cands)]
    return tops[0] if tops else None
