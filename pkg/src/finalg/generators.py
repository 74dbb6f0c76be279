"""Concrete algebras: finite t-norm chains, complex algebras of frames, free algebras."""

from __future__ import annotations

import itertools

from .algebra import BINARY, FiniteAlgebra, Homomorphism, Signature, sg_set
from .errors import ResourceError, SignatureMismatch, StructuralError
from .config import ceiling


def chain(name, n, tnorm, base_class):
    """Chain 0 < 1 < ... < n-1 with ``star`` given by ``tnorm`` on indices.

    The residuum is computed as max{z : x*z <= y}, which exists on a chain
    whenever the t-norm is monotone.
    """
    if n < 1:
        raise StructuralError("chain needs at least one element")
    idx = range(n)
    star = tuple(tuple(tnorm(x, y) for y in idx) for x in idx)
    imp = tuple(tuple(max(z for z in idx if star[x][z] <= y) for y in idx) for x in idx)
    tables = {
        "join": tuple(tuple(max(x, y) for y in idx) for x in idx),
        "meet": tuple(tuple(min(x, y) for y in idx) for x in idx),
        "star": star,
        "imp": imp,
    }
    return FiniteAlgebra(name, n, Signature(base_class), tables, 0, n - 1)


def lukasiewicz(n):
    """Ł_n: x*y = max(0, x+y-1) on {0, 1/(n-1), ..., 1}, stored by index."""
    top = n - 1
    return chain(f"lukasiewicz:{n}", n, lambda x, y: max(0, x + y - top), "MV")


def godel(n):
    return chain(f"godel:{n}", n, min, "GODEL")


def complex_algebra(worlds, relations=None, name=None, flags=None):
    """Powerset algebra of a frame with diamond operators.

    ``worlds`` is a count or a sequence of labels; ``relations`` maps an
    operator name to a set of pairs (v, w) of world positions. The subset
    with bitmask ``s`` is element ``s``, so the empty set is the bottom.
    ``f(X) = {w : (v, w) in R for some v in X}``.
    """
    k = worlds if isinstance(worlds, int) else len(worlds)
    relations = relations or {}
    n = 1 << k
    full = n - 1
    idx = range(n)
    tables = {
        "join": tuple(tuple(x | y for y in idx) for x in idx),
        "meet": tuple(tuple(x & y for y in idx) for x in idx),
        "star": tuple(tuple(x & y for y in idx) for x in idx),
        "imp": tuple(tuple((full & ~x) | y for y in idx) for x in idx),
    }
    for op, pairs in relations.items():
        succ = [0] * k
        for v, w in pairs:
            if not (0 <= v < k and 0 <= w < k):
                raise StructuralError(f"relation {op}: pair {(v, w)} outside the frame")
            succ[v] |= 1 << w
        table = []
        for x in idx:
            img = 0
            for v in range(k):
                if x >> v & 1:
                    img |= succ[v]
            table.append(img)
        tables["f." + op] = tuple(table)
    sig = Signature("BOOLEAN", tuple(relations), flags or {})
    return FiniteAlgebra(name or f"cm({k};{','.join(relations)})", n, sig, tables, 0, full)


def boolean(k):
    """The Boolean algebra with k atoms (2**k elements)."""
    return complex_algebra(k, name=f"boolean:{k}")


def free_algebra(K, g, bound=None, max_size=None):
    """Free algebra of V(K) on g generators, by the evaluation (Birkhoff) method.

    Elements are tuples indexed by pairs (A, assignment of the generators
    into A); the generator i is the tuple of i-th coordinates. Returns the
    algebra and the list of generator indices.
    """
    K = list(K)
    if not K:
        raise StructuralError("free_algebra needs a nonempty generating class")
    sig = K[0].sig
    for A in K[1:]:
        if set(A.operators) != set(sig.operators):
            raise SignatureMismatch("members of K do not share a signature")
    bound = bound if bound is not None else ceiling("FREE_DIM", 4096)
    max_size = max_size if max_size is not None else ceiling("FREE_SIZE", 512)
    dim = sum(A.n ** g for A in K)
    if dim > bound:
        raise ResourceError(f"free algebra needs product dimension {dim} > bound {bound}", required=dim, bound=bound)
    coords = [(ai, asg) for ai, A in enumerate(K) for asg in itertools.product(range(A.n), repeat=g)]
    gens = [tuple(asg[i] for _, asg in coords) for i in range(g)]
    bottom = tuple(K[ai].bottom for ai, _ in coords)
    top = tuple(K[ai].top for ai, _ in coords)

    def apply2(key, x, y):
        return tuple(K[ai].tables[key][a][b] for (ai, _), a, b in zip(coords, x, y))

    def apply1(key, x):
        return tuple(K[ai].tables[key][a] for (ai, _), a in zip(coords, x))

    elems = {bottom, top, *gens}
    frontier = list(elems)
    while frontier:
        new = []
        for x in frontier:
            cands = [apply1("f." + o, x) for o in sig.operators]
            for y in list(elems):
                for k in BINARY:
                    cands.append(apply2(k, x, y))
                    cands.append(apply2(k, y, x))
            for c in cands:
                if c not in elems:
                    elems.add(c)
                    new.append(c)
                    if len(elems) > max_size:
                        raise ResourceError(
                            f"free algebra exceeds {max_size} elements", required=len(elems), bound=max_size
                        )
        frontier = new
    order = sorted(elems)
    pos = {e: i for i, e in enumerate(order)}
    tables = {}
    for key in sig.op_keys():
        if key in BINARY:
            tables[key] = tuple(tuple(pos[apply2(key, x, y)] for y in order) for x in order)
        else:
            tables[key] = tuple(pos[apply1(key, x)] for x in order)
    names = ",".join(A.name for A in K)
    F = FiniteAlgebra(f"free([{names}],{g})", len(order), sig, tables, pos[bottom], pos[top])
    F.__dict__["coordinates"] = (coords, order)
    return F, [pos[x] for x in gens]


def evaluation_hom(F, K, member, assignment):
    """The projection of a free algebra onto ``K[member]`` at the given generator assignment."""
    coords, order = F.__dict__["coordinates"]
    col = coords.index((member, tuple(assignment)))
    return Homomorphism(F, K[member], tuple(x[col] for x in order))


def is_generated_by(A, gens):
    return len(sg_set(A, gens)) == A.n
