"""Independent re-verification of report witnesses.

``replay(report)`` takes a report dict as printed by the command line,
reloads the inputs recorded under ``details.input`` and checks every
witness with direct computations (not by re-running the producing search).
A pass report with a positive certificate (amalgam solution, interpolant)
has that certificate checked instead.
"""

from __future__ import annotations

from . import io
from .algebra import Homomorphism, hom_verify, sg_set, subalgebra
from .amalgam import AmalgamProblem, AmalgamSolution, amalgam_search, verify_solution
from .axioms import replay_axiom
from .filters import congruence_lattice, fl_generate, maximal_filters, spec_points
from .report import Report
from .sheaf import dual_space, eta_check
from .spectrum import topologies


def _dm(mx, X):
    return {i for i, F in enumerate(mx) if not set(X) <= F.members}


def _vm(mx, X):
    return {i for i, F in enumerate(mx) if set(X) <= F.members}


def _validate(A, d, w):
    return not replay_axiom(A, d["class"], w["axiom"], w["args"])


def _dm_item(A, d, w):
    _, mx = spec_points(A)
    j, m, s, leq = A.tables["join"], A.tables["meet"], A.tables["star"], A.leq
    item, x = w["item"], w["witness"]
    if item == "i":
        a, b = x
        return _dm(mx, [a]) & _dm(mx, [b]) != _dm(mx, [j[a][b]])
    if item == "ii":
        a, b = x
        return not (_dm(mx, [a]) | _dm(mx, [b]) == _dm(mx, [m[a][b]]) == _dm(mx, [s[a][b]]))
    if item == "iii":
        return (len(_dm(mx, x)) == len(mx)) != (len(fl_generate(A, x).members) == A.n)
    if item == "iv":
        if x and isinstance(x[0], list):
            X, Y = x
            return _dm(mx, X + Y) != _dm(mx, X) | _dm(mx, Y)
        return _dm(mx, x) != set().union(*(_dm(mx, [e]) for e in x))
    if item == "v":
        a, b = x
        return _vm(mx, [a]) & _vm(mx, [b]) != _vm(mx, [m[a][b]])
    a, b = x
    return leq[a][b] != (_vm(mx, [a]) <= _vm(mx, [b]))


def _dichotomy(A, d, w):
    F = frozenset(w["filter"])
    is_max = F in {G.members for G in maximal_filters(A)}
    return is_max and w["a"] not in F and A.neg[w["a"]] == w["neg_a"] and w["neg_a"] not in F


def _delta(A, d, w):
    def delta(x):
        return {o for o in A.operators if A.unary(o)[x] != x}

    if w["law"] == "neg":
        return delta(w["x"]) != delta(A.neg[w["x"]])
    x, y = w["x"], w["y"]
    return not delta(A.tables["meet"][x][y]) <= delta(x) & delta(y)


def _sip(A, d, w):
    S1, S2 = sg_set(A, w["x1"]), sg_set(A, w["x2"])
    S0 = sg_set(A, set(w["x1"]) & set(w["x2"]))
    a, c = w["a"], w["c"]
    return a in S1 and c in S2 and A.leq[a][c] and not any(A.leq[a][b] and A.leq[b][c] for b in S0)


def _partition(elems, blocks):
    label = {}
    for i, b in enumerate(blocks):
        for a in b:
            label[a] = i
    return {(a, b) for a in elems for b in elems if a == b or (a in label and label.get(a) == label.get(b))}


def _cp(A, d, w):
    e1, e2 = sorted(sg_set(A, w["x1"])), sorted(sg_set(A, w["x2"]))
    R, S = _partition(e1, w["r"]), _partition(e2, w["s"])
    for T in congruence_lattice(A, bound=max(A.n, 1)):
        pairs = set(T.pairs())
        if {p for p in pairs if p[0] in e1 and p[1] in e1} == R and {p for p in pairs if p[0] in e2 and p[1] in e2} == S:
            return False
    return True


def _spectrum(A, d, w):
    _, mx = spec_points(A)
    P, Q = (frozenset(p) for p in w["points"])
    i = next(k for k, F in enumerate(mx) if F.members == P)
    k = next(k for k, F in enumerate(mx) if F.members == Q)
    opens = [_dm(mx, [a]) for a in range(A.n)]
    return not any(i in U and k in V and not U & V for U in opens for V in opens)


def _nice(A, d, w):
    S = dual_space(A)
    idx = [sorted(x) for x in S.base_points].index(w["point"])
    St, _ = S.stalks[idx]
    return St.n == 1 or len(congruence_lattice(St, bound=max(St.n, 1))) != 2


def _roundtrip(A, d, w):
    return not eta_check(A).ok


def _kernel(A, U, z):
    """0-class of the least congruence of the subalgebra on U collapsing z with 0, via the full lattice."""
    B, inc = subalgebra(A, U)
    pos = {a: i for i, a in enumerate(inc.map)}
    out = set(U)
    for T in congruence_lattice(B, bound=max(B.n, 1)):
        if T.related(pos[z], B.bottom):
            out &= {inc.map[i] for i in range(B.n) if T.related(i, B.bottom)}
    return out


def _interpolate(A, d, w):
    S0 = sg_set(A, set(w["x1"]) & set(w["x2"]))
    I = _kernel(A, sg_set(A, w["x2"]), w["z"])
    return not any(A.leq[w["x"]][y] and y in I for y in S0)


def _nowhere(A, d, w):
    _, mx = spec_points(A)
    _, minimal = topologies(A)
    a = w.get("a", d.get("a"))
    parts = w.get("parts", d.get("parts"))
    kind = w.get("kind", d.get("kind"))
    if kind == "join":
        S = _vm(mx, [a]) - set().union(*(_vm(mx, [p]) for p in parts))
    else:
        S = set(range(len(mx)))
        for p in parts:
            S &= _vm(mx, [p])
        S -= _vm(mx, [a])
    U = _dm(mx, [w["d"]])
    return bool(U) and U <= minimal.closure(S)


def _epi(h, C, w):
    B = h.target
    g1, g2 = Homomorphism(B, C, tuple(w["g1"])), Homomorphism(B, C, tuple(w["g2"]))
    return (
        hom_verify(g1).ok and hom_verify(g2).ok and g1.map != g2.map
        and all(g1(h(a)) == g2(h(a)) for a in range(h.source.n))
    )


CHECKS = {
    "validate": _validate,
    "audit dm": _dm_item,
    "audit dichotomy": _dichotomy,
    "audit delta": _delta,
    "check sip": _sip,
    "check cp": _cp,
    "spectrum": _spectrum,
    "nice": _nice,
    "roundtrip": _roundtrip,
    "interpolate": _interpolate,
    "audit nowhere": _nowhere,
}


def replay(report):
    """Re-check a report dict; the result fails on every witness that does not reproduce."""
    d = report["details"]
    inp = d.get("input", {})
    cmd = report["command"]
    out = Report("replay", details={"command": cmd, "outcome": report["outcome"], "checked": 0})
    if report["outcome"] == "error":
        return out
    if report["outcome"] == "fail" and not report["witnesses"]:
        out.fail(reason="fail without witness")
        return out
    if cmd == "amalgam":
        A0, A1, A2 = io.load(inp["a0"]), io.load(inp["a1"]), io.load(inp["a2"])
        prob = AmalgamProblem(
            A0, A1, A2, Homomorphism(A0, A1, tuple(d["i1"])), Homomorphism(A0, A2, tuple(d["i2"])),
            d["class"], d["max"],
        )
        if report["outcome"] == "pass":
            D = io.from_dict(d["d"])
            sol = AmalgamSolution(D, Homomorphism(A1, D, tuple(d["m1"])), Homomorphism(A2, D, tuple(d["m2"])), d["is_super"])
            out.details["checked"] = 1
            v = verify_solution(prob, sol, require_super=d["super"])
            if not v.ok:
                out.fail(certificate="amalgam", problems=v.witnesses)
        else:
            out.details["checked"] = 1
            if amalgam_search(prob, require_super=d["super"]) is not None:
                out.fail(witness=report["witnesses"][0])
        return out
    if cmd == "epi":
        h = io.load_hom(inp["hom"])
        corpus = {}
        for C in _load_corpus(inp["corpus"]):
            corpus.setdefault(C.name, C)
        for w in report["witnesses"]:
            out.details["checked"] += 1
            if not _epi(h, corpus[w["corpus_member"]], w):
                out.fail(witness=w)
        return out
    A = io.load(inp["file"]) if "file" in inp else None
    if cmd == "interpolate" and report["outcome"] == "pass":
        y = d["y"]
        out.details["checked"] = 1
        S0 = sg_set(A, set(d["x1"]) & set(d["x2"]))
        I = _kernel(A, sg_set(A, d["x2"]), d["z"])
        if not (y in S0 and A.leq[d["x"]][y] and y in I):
            out.fail(certificate="interpolant", y=y)
        return out
    check = CHECKS.get(cmd)
    if check is None:
        if report["witnesses"]:
            out.fail(reason=f"no replay rule for {cmd!r}")
        return out
    for w in report["witnesses"]:
        out.details["checked"] += 1
        if not check(A, d, w):
            out.fail(witness=w)
    return out


def _load_corpus(text):
    from .cli import _corpus_arg  # cli imports nothing from here; deferred to keep module load light

    return _corpus_arg(text)


def replay_all(reports):
    """(number of witnesses checked, list of non-reproducing replays)."""
    checked, bad = 0, []
    for r in reports:
        res = replay(r)
        checked += res.details["checked"]
        if not res.ok:
            bad.append(res.to_dict())
    return checked, bad

