"""The standard corpus: small named algebras used by the audits and the test suites."""

from __future__ import annotations

from functools import lru_cache

from .algebra import product
from .generators import boolean, complex_algebra, free_algebra, godel, lukasiewicz


def diamond(k, pairs, name):
    return complex_algebra(k, {"f": list(pairs)}, name=name)


def _equivalence(blocks):
    return [(v, w) for b in blocks for v in b for w in b]


def d4():
    """B2 with the diamond of the universal relation on two worlds: f0=0, f(x)=1 otherwise."""
    return diamond(2, _equivalence([[0, 1]]), "D4")


def partition_closure(k, blocks):
    tag = "|".join("".join(map(str, b)) for b in blocks)
    return diamond(k, _equivalence(blocks), f"P{1 << k}[{tag}]")


@lru_cache(maxsize=None)
def standard_corpus():
    """Tuple of corpus algebras in a fixed order (small ones first within each family)."""
    out = [boolean(k) for k in range(5)]
    out += [lukasiewicz(n) for n in range(2, 7)]
    out += [godel(n) for n in range(2, 7)]
    out += [
        d4(),
        diamond(2, [(0, 0), (1, 1)], "B2[f=id]"),
        diamond(2, [], "B2[f=0]"),
        diamond(2, [(0, 1)], "B2[0->1]"),
        diamond(2, [(0, 1), (1, 0)], "B2[swap]"),
        partition_closure(3, [[0, 1], [2]]),
        partition_closure(3, [[0, 1, 2]]),
        partition_closure(3, [[0], [1], [2]]),
        diamond(3, [(0, 1), (1, 2)], "B3[0->1->2]"),
        partition_closure(4, [[0, 1], [2, 3]]),
        product(lukasiewicz(3), boolean(1)),
        product(godel(3), boolean(1)),
        product(godel(3), godel(3)),
        product(lukasiewicz(3), lukasiewicz(3)),
    ]
    fg, _ = free_algebra([godel(3)], 1)
    f2, _ = free_algebra([boolean(1)], 2)
    out += [fg, f2]
    return tuple(out)


def small_corpus(max_n=8):
    return [A for A in standard_corpus() if A.n <= max_n]


def boolean_corpus(max_n=16):
    return [A for A in standard_corpus() if A.sig.base_class == "BOOLEAN" and not A.operators and A.n <= max_n]


def by_name(name):
    for A in standard_corpus():
        if A.name == name:
            return A
    raise KeyError(name)
