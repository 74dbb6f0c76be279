"""Finite algebras given by operation tables, and the structural operations on them.

Carriers are ``range(n)``. Element 0 is always the bottom. Base operations
are the four binary tables ``join``, ``meet``, ``star``, ``imp``; every unary
operator ``f`` of the signature is stored under the key ``"f.<name>"``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

from .errors import ContractError, NotACongruence, SignatureMismatch, StructuralError
from .report import Report

CLASSES = ("RL", "MTL", "BL", "MV", "GODEL", "BOOLEAN")
BINARY = ("join", "meet", "star", "imp")
FLAGS = ("normal", "additive", "central_complement")
DEFAULT_FLAGS = frozenset({"normal", "additive"})


def _normalize_flags(flags):
    flags = frozenset(flags)
    unknown = flags - set(FLAGS)
    if unknown:
        raise StructuralError(f"unknown operator flags {sorted(unknown)}")
    if "central_complement" in flags:
        flags |= DEFAULT_FLAGS
    return flags


@dataclass(frozen=True)
class Signature:
    base_class: str = "RL"
    operators: tuple = ()
    flags: dict = field(default_factory=dict, hash=False)

    def __post_init__(self):
        if self.base_class not in CLASSES:
            raise StructuralError(f"unknown class {self.base_class!r}")
        ops = tuple(self.operators)
        if len(set(ops)) != len(ops):
            raise StructuralError("duplicate operator names")
        for op in ops:
            if not op or "." in op:
                raise StructuralError(f"bad operator name {op!r}")
        object.__setattr__(self, "operators", ops)
        flags = {op: _normalize_flags(self.flags.get(op, DEFAULT_FLAGS)) for op in ops}
        extra = set(self.flags) - set(ops)
        if extra:
            raise StructuralError(f"flags given for undeclared operators {sorted(extra)}")
        object.__setattr__(self, "flags", flags)

    def with_class(self, base_class):
        return Signature(base_class, self.operators, self.flags)

    def op_keys(self):
        return BINARY + tuple("f." + op for op in self.operators)


def _as_table(raw, n, key):
    if key in BINARY:
        if not isinstance(raw, (list, tuple)) or len(raw) != n:
            raise StructuralError(f"table {key}: expected {n} rows")
        rows = []
        for i, row in enumerate(raw):
            if not isinstance(row, (list, tuple)) or len(row) != n:
                raise StructuralError(f"table {key}: row {i} must have {n} entries")
            rows.append(tuple(_entry(v, n, f"{key}[{i}]") for v in row))
        return tuple(rows)
    if not isinstance(raw, (list, tuple)) or len(raw) != n:
        raise StructuralError(f"table {key}: expected {n} entries")
    return tuple(_entry(v, n, key) for v in raw)


def _entry(v, n, where):
    if isinstance(v, bool) or not isinstance(v, int) or not 0 <= v < n:
        raise StructuralError(f"{where}: entry {v!r} out of range 0..{n - 1}")
    return v


@dataclass(frozen=True, eq=False)
class FiniteAlgebra:
    name: str
    n: int
    sig: Signature
    tables: dict
    bottom: int = 0
    top: int = 0

    def __post_init__(self):
        n = self.n
        if not isinstance(n, int) or n < 1:
            raise StructuralError(f"carrier size must be a positive integer, got {n!r}")
        keys = set(self.sig.op_keys())
        if set(self.tables) != keys:
            missing = sorted(keys - set(self.tables))
            extra = sorted(set(self.tables) - keys)
            raise StructuralError(f"tables do not match signature (missing {missing}, extra {extra})")
        tables = {k: _as_table(self.tables[k], n, k) for k in self.sig.op_keys()}
        object.__setattr__(self, "tables", tables)
        if self.bottom != 0:
            raise StructuralError("bottom must be element 0")
        _entry(self.top, n, "top")
        if n > 1 and self.top == self.bottom:
            raise StructuralError("bottom and top coincide in a nontrivial algebra")

    def __repr__(self):
        return f"FiniteAlgebra({self.name!r}, n={self.n}, class={self.sig.base_class})"

    @property
    def operators(self):
        return self.sig.operators

    def op(self, key):
        return self.tables[key]

    def unary(self, name):
        return self.tables["f." + name]

    def key(self):
        """Hashable content of the algebra (everything except the name)."""
        return (
            self.n,
            self.sig.base_class,
            tuple((op, tuple(sorted(self.sig.flags[op]))) for op in self.operators),
            self.top,
            tuple(self.tables[k] for k in self.sig.op_keys()),
        )

    def same_as(self, other):
        return self.key() == other.key()

    def renamed(self, name):
        return FiniteAlgebra(name, self.n, self.sig, self.tables, self.bottom, self.top)

    def reduct(self):
        """The same algebra with the operators forgotten."""
        tables = {k: self.tables[k] for k in BINARY}
        return FiniteAlgebra(self.name, self.n, Signature(self.sig.base_class), tables, self.bottom, self.top)

    @cached_property
    def leq(self):
        """Derived order: ``leq[a][b]`` iff meet(a, b) == a."""
        m = self.tables["meet"]
        return tuple(tuple(m[a][b] == a for b in range(self.n)) for a in range(self.n))

    @cached_property
    def up(self):
        """Bitmask of the principal upset of each element."""
        return tuple(sum(1 << b for b in range(self.n) if self.leq[a][b]) for a in range(self.n))

    @cached_property
    def down(self):
        return tuple(sum(1 << b for b in range(self.n) if self.leq[b][a]) for a in range(self.n))

    @cached_property
    def neg(self):
        imp = self.tables["imp"]
        return tuple(imp[a][self.bottom] for a in range(self.n))

    def join_all(self, xs):
        j = self.tables["join"]
        r = self.bottom
        for x in xs:
            r = j[r][x]
        return r

    def meet_all(self, xs):
        m = self.tables["meet"]
        r = self.top
        for x in xs:
            r = m[r][x]
        return r


def derived_order(A):
    """The set of pairs (a, b) with a <= b in the lattice order read off ``meet``."""
    return frozenset((a, b) for a in range(A.n) for b in range(A.n) if A.leq[a][b])


def check_signatures(A, B):
    if set(A.operators) != set(B.operators):
        raise SignatureMismatch(
            f"{A.name} has operators {sorted(A.operators)}, {B.name} has {sorted(B.operators)}"
        )


# -- subalgebras ---------------------------------------------------------------


def sg_set(A, X=()):
    """Least subuniverse containing X together with bottom and top."""
    S = set(X) | {A.bottom, A.top}
    for x in S:
        _entry(x, A.n, "generator")
    unary = [A.tables["f." + o] for o in A.operators]
    binary = [A.tables[k] for k in BINARY]
    frontier = list(S)
    while frontier:
        new = []
        for a in frontier:
            for f in unary:
                b = f[a]
                if b not in S:
                    S.add(b)
                    new.append(b)
            for c in list(S):
                for t in binary:
                    for b in (t[a][c], t[c][a]):
                        if b not in S:
                            S.add(b)
                            new.append(b)
        frontier = new
    return frozenset(S)


def is_subuniverse(A, S):
    S = set(S)
    if A.bottom not in S or A.top not in S:
        return False
    for o in A.operators:
        f = A.unary(o)
        if any(f[a] not in S for a in S):
            return False
    for k in BINARY:
        t = A.tables[k]
        if any(t[a][b] not in S for a in S for b in S):
            return False
    return True


def subalgebra(A, S, name=None):
    """The subalgebra on the subuniverse S, relabelled in ascending order.

    Returns the algebra and its inclusion homomorphism into A.
    """
    if not is_subuniverse(A, S):
        raise ContractError(f"subset {sorted(S)} is not a subuniverse of {A.name}")
    elems = sorted(S)
    idx = {a: i for i, a in enumerate(elems)}
    tables = {}
    for k in A.sig.op_keys():
        t = A.tables[k]
        if k in BINARY:
            tables[k] = tuple(tuple(idx[t[a][b]] for b in elems) for a in elems)
        else:
            tables[k] = tuple(idx[t[a]] for a in elems)
    B = FiniteAlgebra(name or f"{A.name}|{elems}", len(elems), A.sig, tables, 0, idx[A.top])
    return B, Homomorphism(B, A, tuple(elems))


def sg(A, X=()):
    """Subalgebra generated by X (relabelled by ascending parent index)."""
    return subalgebra(A, sg_set(A, X), name=f"Sg({A.name},{sorted(set(X))})")[0]


def subuniverses(A):
    """All subuniverses, found by closing upward one element at a time."""
    start = sg_set(A)
    seen = {start}
    todo = [start]
    while todo:
        S = todo.pop()
        for a in range(A.n):
            if a not in S:
                T = sg_set(A, S | {a})
                if T not in seen:
                    seen.add(T)
                    todo.append(T)
    return sorted(seen, key=lambda s: (len(s), sorted(s)))


# -- homomorphisms ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Homomorphism:
    source: FiniteAlgebra
    target: FiniteAlgebra
    map: tuple

    def __post_init__(self):
        m = tuple(self.map)
        if len(m) != self.source.n:
            raise StructuralError(f"map has {len(m)} entries, source has {self.source.n} elements")
        for v in m:
            _entry(v, self.target.n, "map")
        object.__setattr__(self, "map", m)

    def __call__(self, a):
        return self.map[a]

    @property
    def injective(self):
        return len(set(self.map)) == len(self.map)

    @property
    def surjective(self):
        return len(set(self.map)) == self.target.n

    def image(self):
        return frozenset(self.map)

    def kernel(self):
        """Kernel partition as a congruence on the source."""
        ids = {}
        return Congruence(self.source, tuple(ids.setdefault(v, len(ids)) for v in self.map))

    def then(self, other):
        """``other ∘ self``."""
        if other.source is not self.target and not other.source.same_as(self.target):
            raise SignatureMismatch("composition of non-matching homomorphisms")
        return Homomorphism(self.source, other.target, tuple(other.map[v] for v in self.map))

    def __repr__(self):
        return f"Homomorphism({self.source.name} -> {self.target.name}, {list(self.map)})"


def identity_hom(A):
    return Homomorphism(A, A, tuple(range(A.n)))


def hom_verify(h):
    """Check that h commutes with every operation and preserves the constants."""
    A, B, m = h.source, h.target, h.map
    check_signatures(A, B)
    r = Report("hom_verify", details={"source": A.name, "target": B.name, "map": list(m)})
    if m[A.bottom] != B.bottom:
        r.fail(op="bottom", args=[A.bottom])
    if m[A.top] != B.top:
        r.fail(op="top", args=[A.top])
    for o in A.operators:
        fa, fb = A.unary(o), B.unary(o)
        for a in range(A.n):
            if m[fa[a]] != fb[m[a]]:
                r.fail(op="f." + o, args=[a])
                break
    for k in BINARY:
        ta, tb = A.tables[k], B.tables[k]
        bad = next(((a, b) for a in range(A.n) for b in range(A.n) if m[ta[a][b]] != tb[m[a]][m[b]]), None)
        if bad:
            r.fail(op=k, args=list(bad))
    r.details["injective"] = h.injective
    r.details["surjective"] = h.surjective
    return r


def generating_sequence(A):
    """Greedy generating sequence: each entry is not generated by its predecessors."""
    gens = []
    S = sg_set(A)
    for a in range(A.n):
        if a not in S:
            gens.append(a)
            S = sg_set(A, gens)
    return gens


def _extend(A, B, seed):
    """Propagate a partial assignment through all operations; None on conflict."""
    h = {A.bottom: B.bottom}
    if A.top in h and h[A.top] != B.top:
        return None
    h[A.top] = B.top
    for a, b in seed.items():
        if h.setdefault(a, b) != b:
            return None
    unary = [(A.unary(o), B.unary(o)) for o in A.operators]
    binary = [(A.tables[k], B.tables[k]) for k in BINARY]
    frontier = list(h)
    while frontier:
        new = []
        for a in frontier:
            ha = h[a]
            for fa, fb in unary:
                x, y = fa[a], fb[ha]
                if x in h:
                    if h[x] != y:
                        return None
                else:
                    h[x] = y
                    new.append(x)
            for c in list(h):
                hc = h[c]
                for ta, tb in binary:
                    for x, y in ((ta[a][c], tb[ha][hc]), (ta[c][a], tb[hc][ha])):
                        if x in h:
                            if h[x] != y:
                                return None
                        else:
                            h[x] = y
                            new.append(x)
        frontier = new
    if len(h) != A.n:
        return None
    return tuple(h[a] for a in range(A.n))


def homomorphisms(A, B, injective=False):
    """All homomorphisms A -> B in lexicographic order of their maps."""
    check_signatures(A, B)
    gens = generating_sequence(A)
    found = set()
    for values in itertools.product(range(B.n), repeat=len(gens)):
        m = _extend(A, B, dict(zip(gens, values)))
        if m is not None and (not injective or len(set(m)) == A.n):
            found.add(m)
    return [Homomorphism(A, B, m) for m in sorted(found)]


def extend_to_hom(A, B, assignment):
    """The unique homomorphism extending ``assignment`` (a dict), or None."""
    m = _extend(A, B, dict(assignment))
    return None if m is None else Homomorphism(A, B, m)


# -- congruences, products, quotients ---------------------------------------------


def _normalize_blocks(blocks):
    ids = {}
    return tuple(ids.setdefault(b, len(ids)) for b in blocks)


@dataclass(frozen=True, eq=False)
class Congruence:
    algebra: FiniteAlgebra
    blocks: tuple

    def __post_init__(self):
        if len(self.blocks) != self.algebra.n:
            raise StructuralError("partition length differs from carrier size")
        object.__setattr__(self, "blocks", _normalize_blocks(self.blocks))

    def __eq__(self, other):
        return isinstance(other, Congruence) and self.blocks == other.blocks

    def __hash__(self):
        return hash(self.blocks)

    def __repr__(self):
        return f"Congruence({self.algebra.name}, {self.classes()})"

    def related(self, a, b):
        return self.blocks[a] == self.blocks[b]

    def classes(self):
        out = {}
        for a, b in enumerate(self.blocks):
            out.setdefault(b, []).append(a)
        return [out[k] for k in sorted(out)]

    @property
    def size(self):
        return max(self.blocks) + 1

    def leq(self, other):
        return all(other.blocks[a] == other.blocks[b] for a, b in self.pairs())

    def pairs(self):
        for cls in self.classes():
            for a in cls:
                for b in cls:
                    yield a, b

    def restrict(self, elems):
        """Restriction to a subset listed in subalgebra order, as a partition of ``range(len(elems))``."""
        return _normalize_blocks(self.blocks[e] for e in elems)

    def compatibility_witness(self):
        """First (op, args) where the partition is not compatible, else None."""
        A, bl = self.algebra, self.blocks
        for o in A.operators:
            f = A.unary(o)
            for a in range(A.n):
                for b in range(a + 1, A.n):
                    if bl[a] == bl[b] and bl[f[a]] != bl[f[b]]:
                        return ("f." + o, (a, b))
        for k in BINARY:
            t = A.tables[k]
            for a in range(A.n):
                for b in range(a + 1, A.n):
                    if bl[a] != bl[b]:
                        continue
                    for c in range(A.n):
                        if bl[t[a][c]] != bl[t[b][c]] or bl[t[c][a]] != bl[t[c][b]]:
                            return (k, (a, b, c))
        return None

    def is_compatible(self):
        return self.compatibility_witness() is None


def verified_congruence(A, blocks):
    theta = Congruence(A, blocks)
    w = theta.compatibility_witness()
    if w is not None:
        base_ok = w[0].startswith("f.") and Congruence(A.reduct(), blocks).is_compatible()
        raise NotACongruence(f"partition not compatible with {w[0]} at {w[1]}", witness=w, expanded=base_ok)
    return theta


def identity_congruence(A):
    return Congruence(A, tuple(range(A.n)))


def total_congruence(A):
    return Congruence(A, (0,) * A.n)


def product(A, B):
    """Direct product with pointwise tables; element (a, b) has index a*|B| + b."""
    check_signatures(A, B)
    nb = B.n
    pairs = [(a, b) for a in range(A.n) for b in range(nb)]
    tables = {}
    for k in A.sig.op_keys():
        ta, tb = A.tables[k], B.tables[k]
        if k in BINARY:
            tables[k] = tuple(
                tuple(ta[a1][a2] * nb + tb[b1][b2] for a2, b2 in pairs) for a1, b1 in pairs
            )
        else:
            tables[k] = tuple(ta[a] * nb + tb[b] for a, b in pairs)
    sig = A.sig if A.sig.base_class == B.sig.base_class else A.sig.with_class(_meet_class(A.sig.base_class, B.sig.base_class))
    return FiniteAlgebra(f"{A.name}x{B.name}", A.n * nb, sig, tables, 0, A.top * nb + B.top)


_CLASS_PARENTS = {"RL": None, "MTL": "RL", "BL": "MTL", "MV": "BL", "GODEL": "BL", "BOOLEAN": "GODEL"}


def class_chain(c):
    out = []
    while c:
        out.append(c)
        c = _CLASS_PARENTS[c]
    return out


def _meet_class(c1, c2):
    # BOOLEAN sits under MV too (Boolean algebras are involutive)
    a1 = class_chain(c1) + (["MV"] if c1 == "BOOLEAN" else [])
    for c in class_chain(c2) + (["MV"] if c2 == "BOOLEAN" else []):
        if c in a1:
            return c
    return "RL"


def quotient(A, theta):
    """Quotient algebra A/theta together with the canonical surjection."""
    if theta.algebra is not A and theta.algebra.n != A.n:
        raise SignatureMismatch("congruence belongs to a different algebra")
    theta = verified_congruence(A, theta.blocks)
    bl = theta.blocks
    reps = [cls[0] for cls in theta.classes()]
    tables = {}
    for k in A.sig.op_keys():
        t = A.tables[k]
        if k in BINARY:
            tables[k] = tuple(tuple(bl[t[a][b]] for b in reps) for a in reps)
        else:
            tables[k] = tuple(bl[t[a]] for a in reps)
    Q = FiniteAlgebra(f"{A.name}/~", len(reps), A.sig, tables, 0, bl[A.top])
    return Q, Homomorphism(A, Q, bl)


# -- operators and the center --------------------------------------------------------


@dataclass
class DeltaZd:
    delta: dict
    zd: frozenset
    is_subalgebra: bool
    closure_witness: tuple | None
    neg_law: Report
    meet_law_intersection: Report
    meet_law_union: Report


def delta_zd(A):
    """Dimension sets and the fixed-point center of the operators.

    Besides Zd and whether it is a subuniverse, audits the laws
    ``Δx = Δ(¬x)``, ``Δ(x∧y) ⊆ Δx ∩ Δy`` and ``Δ(x∧y) ⊆ Δx ∪ Δy``.
    """
    ops = A.operators
    delta = {x: frozenset(o for o in ops if A.unary(o)[x] != x) for x in range(A.n)}
    zd = frozenset(x for x in range(A.n) if not delta[x])
    witness = None
    for k in BINARY:
        t = A.tables[k]
        bad = next(((a, b) for a in sorted(zd) for b in sorted(zd) if t[a][b] not in zd), None)
        if bad:
            witness = (k, bad)
            break
    if witness is None and (A.bottom not in zd or A.top not in zd):
        witness = ("constant", (A.bottom if A.bottom not in zd else A.top,))
    neg_law = Report("delta_neg_law")
    for x in range(A.n):
        if delta[x] != delta[A.neg[x]]:
            neg_law.fail(x=x)
            break
    inter = Report("delta_meet_intersection")
    union = Report("delta_meet_union")
    meet = A.tables["meet"]
    for x in range(A.n):
        for y in range(A.n):
            d = delta[meet[x][y]]
            if inter.ok and not d <= delta[x] & delta[y]:
                inter.fail(x=x, y=y)
            if union.ok and not d <= delta[x] | delta[y]:
                union.fail(x=x, y=y)
    return DeltaZd(delta, zd, witness is None, witness, neg_law, inter, union)
