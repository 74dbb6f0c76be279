"""Command line: ``finalg <command> ...``; one JSON report on stdout, exit 0 pass / 1 fail / 2 error."""

from __future__ import annotations

import argparse
import os
import sys
import time

from . import io
from .algebra import CLASSES, Homomorphism, Signature, delta_zd, homomorphisms, sg_set
from .amalgam import (
    AmalgamProblem,
    amalgam_search,
    cp_check,
    cp_check_all,
    epi_probe,
    sip_check,
    verify_solution,
    weak_interpolant,
)
from .axioms import validate_class
from .corpus import standard_corpus
from .enumeration import enumerate_algebras
from .errors import AlgebraError, AuditFailure
from .filters import audit_dichotomy, maximal_filters
from .generators import free_algebra
from .report import Report
from .sheaf import dual_space, eta_check, is_nice
from .spectrum import audit_dm_lemma, nowhere_dense_audit, topology_report


def ints(text):
    text = (text or "").strip()
    if not text:
        return []
    return [int(t) for t in text.split(",")]


def blocks_arg(text):
    """``0,1/2/3`` → [[0, 1], [2], [3]]."""
    return [ints(b) for b in text.split("/")]


def partition_on(elems, blocks):
    """Partition of ``range(len(elems))`` from blocks given in parent elements; unlisted elements are singletons."""
    label = {}
    for i, b in enumerate(blocks):
        for a in b:
            label[a] = ("b", i)
    return tuple(label.get(a, ("s", a)) for a in elems)


# -- commands ------------------------------------------------------------------------------


def cmd_validate(args):
    A = io.load(args.file)
    return validate_class(A, args.cls)


def cmd_spectrum(args):
    return topology_report(io.load(args.file))


def cmd_audit(args):
    A = io.load(args.file)
    if args.what == "dm":
        return audit_dm_lemma(A)
    if args.what == "dichotomy":
        r = Report("audit dichotomy", details={"algebra": A.name})
        fs = [set(ints(args.filter))] if args.filter is not None else [F.members for F in maximal_filters(A)]
        r.details["filters"] = [sorted(F) for F in fs]
        for F in fs:
            sub = audit_dichotomy(A, F)
            for w in sub.witnesses:
                r.fail(**w)
        return r
    if args.what == "delta":
        dz = delta_zd(A)
        r = Report("audit delta", details={
            "algebra": A.name,
            "delta": {str(x): sorted(d) for x, d in dz.delta.items()},
            "zd": sorted(dz.zd),
            "zd_subalgebra": dz.is_subalgebra,
            "closure_witness": list(dz.closure_witness) if dz.closure_witness else None,
        })
        laws = {"neg": dz.neg_law, "meet_intersection": dz.meet_law_intersection}
        r.details["laws"] = {k: v.outcome for k, v in laws.items()}
        # the union form is the textbook law; reported for comparison only
        r.details["laws"]["meet_union"] = dz.meet_law_union.outcome
        r.details["meet_union_witness"] = dz.meet_law_union.witnesses[:1]
        for k, v in laws.items():
            for w in v.witnesses:
                r.fail(law=k, **w)
        return r
    # nowhere
    if args.a is not None:
        return nowhere_dense_audit(A, args.a, ints(args.parts), args.kind)
    r = Report("audit nowhere", details={"algebra": A.name, "mode": "all binary decompositions"})
    j, m = A.tables["join"], A.tables["meet"]
    for kind, t in (("join", j), ("meet", m)):
        for b in range(A.n):
            for c in range(b, A.n):
                sub = nowhere_dense_audit(A, t[b][c], [b, c], kind)
                for w in sub.witnesses:
                    r.fail(a=t[b][c], parts=[b, c], kind=kind, **w)
                if not r.ok:
                    return r
    return r


def cmd_dual(args):
    A = io.load(args.file)
    S = dual_space(A)
    return Report("dual", details=S.to_dict())


def cmd_roundtrip(args):
    return eta_check(io.load(args.file))


def cmd_nice(args):
    return is_nice(io.load(args.file))


def cmd_check(args):
    A = io.load(args.file)
    gens = ints(args.generators) if args.generators is not None else None
    if args.prop == "sip":
        if args.x1 is not None:
            return sip_check(A, ints(args.x1), ints(args.x2))
        return sip_check(A, generators=gens)
    if args.x1 is None:
        return cp_check_all(A, generators=gens)
    X1, X2 = ints(args.x1), ints(args.x2)
    e1, e2 = sorted(sg_set(A, X1)), sorted(sg_set(A, X2))
    R = blocks_arg(args.r) if args.r else []
    S = blocks_arg(args.s) if args.s else []
    T = cp_check(A, X1, X2, partition_on(e1, R), partition_on(e2, S))
    r = Report("check cp", details={"algebra": A.name, "mode": "given", "x1": X1, "x2": X2, "r": R, "s": S})
    if T is None:
        r.fail(x1=X1, x2=X2, r=R, s=S)
    else:
        r.details["t"] = T.classes()
    return r


def cmd_interpolate(args):
    A = io.load(args.file)
    X1, X2 = ints(args.x1), ints(args.x2)
    r = Report("interpolate", details={"algebra": A.name, "x1": X1, "x2": X2, "x": args.x, "z": args.z})
    try:
        y, cert = weak_interpolant(A, X1, X2, args.x, args.z)
    except AuditFailure as e:
        r.fail(**e.witness)
        return r
    r.details.update(y=y, certificate=cert)
    return r


def _mono(A, B, text):
    if text is not None:
        return Homomorphism(A, B, tuple(ints(text)))
    hs = homomorphisms(A, B, injective=True)
    if not hs:
        raise AlgebraError(f"no embedding of {A.name} into {B.name}")
    return hs[0]


def cmd_amalgam(args):
    A0, A1, A2 = io.load(args.a0), io.load(args.a1), io.load(args.a2)
    cls = args.cls or A0.sig.base_class
    prob = AmalgamProblem(A0, A1, A2, _mono(A0, A1, args.i1), _mono(A0, A2, args.i2), cls, args.max)
    sol = amalgam_search(prob, require_super=args.super)
    r = Report("amalgam", details={
        "a0": A0.name, "a1": A1.name, "a2": A2.name, "class": cls, "super": args.super, "max": args.max,
        "i1": list(prob.i1.map), "i2": list(prob.i2.map),
    })
    if sol is None:
        r.fail(exhausted_up_to=args.max, super=args.super)
        return r
    check = verify_solution(prob, sol, require_super=args.super)
    if not check.ok:
        raise AuditFailure("search returned an unverifiable solution", witness=check.witnesses)
    r.details.update(size=sol.D.n, d=io.to_dict(sol.D), m1=list(sol.m1.map), m2=list(sol.m2.map), is_super=sol.super)
    return r


def _corpus_arg(text):
    if os.path.isdir(text):
        return io.load_dir(text)
    if text == "standard":
        return list(standard_corpus())
    return [io.load(s) for s in text.split(";") if s]


def cmd_epi(args):
    h = io.load_hom(args.hom)
    return epi_probe(h, _corpus_arg(args.corpus), args.max)


def cmd_free(args):
    K = [io.load(s) for s in args.over.split(",") if s]
    F, gens = free_algebra(K, args.gens)
    r = Report("free", details={"over": [A.name for A in K], "gens": gens, "size": F.n})
    if args.out:
        io.write_algebra(F, args.out)
        r.details["written"] = args.out
    else:
        r.details["algebra"] = io.to_dict(F)
    return r


def cmd_corpus(args):
    if args.standard:
        algs = [A for A in standard_corpus() if A.n <= args.max]
    else:
        algs = list(enumerate_algebras(Signature(), args.cls, args.max))
    os.makedirs(args.out, exist_ok=True)
    names = []
    for A in algs:
        fn = io.safe_filename(A.name)
        io.write_algebra(A, os.path.join(args.out, fn))
        names.append(fn)
    return Report("corpus", details={"class": args.cls, "max": args.max, "count": len(names), "files": names})


# -- parser --------------------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="finalg", description="Finite algebra audits and searches.")
    p.add_argument("--timing", action="store_true", help="include wall-clock seconds in the report")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check the axioms of a class")
    s.add_argument("--class", dest="cls", required=True, choices=CLASSES)
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)

    for name, fn, hlp in (
        ("spectrum", cmd_spectrum, "Zariski and minimal spectra"),
        ("dual", cmd_dual, "dual space"),
        ("roundtrip", cmd_roundtrip, "check that eta is an isomorphism"),
        ("nice", cmd_nice, "niceness of the dual space"),
    ):
        s = sub.add_parser(name, help=hlp)
        s.add_argument("file")
        s.set_defaults(func=fn)

    s = sub.add_parser("audit", help="lemma audits")
    s.add_argument("what", choices=["dm", "dichotomy", "delta", "nowhere"])
    s.add_argument("file")
    s.add_argument("--filter", help="dichotomy: members of one maximal filter (default: all)")
    s.add_argument("--a", type=int, help="nowhere: the decomposed element")
    s.add_argument("--parts", default="", help="nowhere: comma-separated parts")
    s.add_argument("--kind", choices=["join", "meet"], default="join")
    s.set_defaults(func=cmd_audit)

    s = sub.add_parser("check", help="SIP or CP")
    s.add_argument("prop", choices=["sip", "cp"])
    s.add_argument("file")
    s.add_argument("--x1")
    s.add_argument("--x2")
    s.add_argument("--r", help="cp: blocks of R as 0,1/2 (parent elements)")
    s.add_argument("--s", help="cp: blocks of S")
    s.add_argument("--generators", help="restrict subsets to these elements")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("interpolate", help="weak interpolant")
    s.add_argument("file")
    s.add_argument("--x1", required=True)
    s.add_argument("--x2", required=True)
    s.add_argument("--x", type=int, required=True)
    s.add_argument("--z", type=int, required=True)
    s.set_defaults(func=cmd_interpolate)

    s = sub.add_parser("amalgam", help="least amalgam search")
    s.add_argument("--a0", required=True)
    s.add_argument("--a1", required=True)
    s.add_argument("--a2", required=True)
    s.add_argument("--i1", help="embedding A0→A1 (default: first)")
    s.add_argument("--i2", help="embedding A0→A2 (default: first)")
    s.add_argument("--class", dest="cls", choices=CLASSES)
    s.add_argument("--super", action="store_true")
    s.add_argument("--max", type=int, default=16)
    s.set_defaults(func=cmd_amalgam)

    s = sub.add_parser("epi", help="epimorphism probe")
    s.add_argument("--hom", required=True)
    s.add_argument("--corpus", required=True, help="directory, 'standard', or built-ins separated by ';'")
    s.add_argument("--max", type=int, default=8)
    s.set_defaults(func=cmd_epi)

    s = sub.add_parser("free", help="free algebra of V(K)")
    s.add_argument("--over", required=True)
    s.add_argument("--gens", type=int, required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_free)

    s = sub.add_parser("corpus", help="write class members to a directory")
    s.add_argument("--class", dest="cls", choices=CLASSES, default="BOOLEAN")
    s.add_argument("--max", type=int, required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--standard", action="store_true", help="write the standard corpus instead")
    s.set_defaults(func=cmd_corpus)
    return p


EXIT = {"pass": 0, "fail": 1, "error": 2}


def run(argv):
    """Parse and dispatch; returns (Report, exit code). Usage errors give exit 2."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return Report("usage", outcome="error", details={"argv": list(argv)}), (e.code if e.code else 0)
    inputs = {k: v for k, v in vars(args).items() if k not in ("func", "timing") and v is not None}
    t0 = time.perf_counter()
    try:
        r = args.func(args)
    except (AlgebraError, ValueError) as e:
        r = Report(args.command, outcome="error", details={"error": type(e).__name__, "message": str(e)})
        w = getattr(e, "witness", None)
        if w is not None:
            r.details["witness"] = w
    r.details["input"] = inputs
    if args.timing:
        r.timing = round(time.perf_counter() - t0, 6)
    return r, EXIT[r.outcome]


def main(argv=None):
    r, code = run(sys.argv[1:] if argv is None else argv)
    if r.command != "usage":
        sys.stdout.write(io.emit(r.to_dict()))
    return code


if __name__ == "__main__":
    sys.exit(main())
