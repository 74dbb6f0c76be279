"""Algebra and homomorphism files, built-in generator names, canonical serialization.

An algebra file is a JSON object::

    {"class": "MV", "constants": {"bot": 0, "top": 2}, "name": "...",
     "size": 3, "tables": {"join": [[...]], ..., "f.name": [...]},
     "operator_flags": {"name": ["additive", "normal"]}}

``emit`` writes it with sorted keys and no insignificant whitespace, so
``emit(parse(emit(A))) == emit(A)`` byte for byte.
"""

from __future__ import annotations

import json
import os
import re

from .algebra import BINARY, CLASSES, FiniteAlgebra, Homomorphism, Signature, hom_verify
from .errors import ContractError, ParseError, StructuralError
from .generators import boolean, complex_algebra, godel, lukasiewicz

BUILTIN = re.compile(r"^(boolean|lukasiewicz|godel|diamond):(.+)$")


def to_dict(A):
    d = {
        "class": A.sig.base_class,
        "constants": {"bot": A.bottom, "top": A.top},
        "name": A.name,
        "size": A.n,
        "tables": {k: [list(r) if isinstance(r, tuple) else r for r in A.tables[k]] for k in A.sig.op_keys()},
    }
    if A.operators:
        d["operator_flags"] = {o: sorted(A.sig.flags[o]) for o in A.operators}
    return d


def dumps(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def emit(value):
    """Canonical text for an algebra, a homomorphism or any JSON-able value."""
    if isinstance(value, FiniteAlgebra):
        value = to_dict(value)
    elif isinstance(value, Homomorphism):
        value = {"source": value.source.name, "target": value.target.name, "map": list(value.map)}
    elif hasattr(value, "to_dict"):
        value = value.to_dict()
    return dumps(value) + "\n"


def _field(d, key, kind, locus):
    if key not in d:
        raise ParseError(f"missing field {key!r}", locus=locus)
    v = d[key]
    if kind is int and (isinstance(v, bool) or not isinstance(v, int)):
        raise ParseError(f"field {key!r} must be an integer", locus=f"{locus}.{key}" if locus else key)
    if kind is not int and not isinstance(v, kind):
        raise ParseError(f"field {key!r} has the wrong type", locus=f"{locus}.{key}" if locus else key)
    return v


def from_dict(d, source="<input>"):
    if not isinstance(d, dict):
        raise ParseError("top level must be an object", locus=f"{source}: line 1")
    n = _field(d, "size", int, "")
    cls = _field(d, "class", str, "")
    if cls not in CLASSES:
        raise ParseError(f"unknown class {cls!r}", locus="class")
    name = d.get("name", os.path.splitext(os.path.basename(source))[0])
    tables = _field(d, "tables", dict, "")
    consts = _field(d, "constants", dict, "")
    bot = _field(consts, "bot", int, "constants")
    top = _field(consts, "top", int, "constants")
    for k in BINARY:
        if k not in tables:
            raise ParseError(f"missing table {k!r}", locus="tables")
    ops = []
    for k in sorted(tables):
        if k in BINARY:
            continue
        if not k.startswith("f.") or len(k) < 3:
            raise ParseError(f"unknown table {k!r}", locus=f"tables.{k}")
        ops.append(k[2:])
    flags = d.get("operator_flags", {})
    if not isinstance(flags, dict):
        raise ParseError("operator_flags must be an object", locus="operator_flags")
    try:
        sig = Signature(cls, tuple(ops), {o: frozenset(v) for o, v in flags.items()})
        return FiniteAlgebra(name, n, sig, tables, bot, top)
    except StructuralError as e:
        raise ParseError(str(e), locus="tables") from e


def parse_text(text, source="<input>"):
    if not text.strip():
        raise ParseError("empty input", locus=f"{source}: line 1")
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, locus=f"{source}: line {e.lineno} column {e.colno}") from e
    return from_dict(d, source)


def _relation(k, spec):
    if spec == "universal":
        return [(v, w) for v in range(k) for w in range(k)]
    if spec == "empty":
        return []
    if spec == "identity":
        return [(v, v) for v in range(k)]
    pairs = []
    for item in spec.split("/"):
        m = re.fullmatch(r"(\d+)-(\d+)", item.strip())
        if not m:
            raise ParseError(f"bad relation pair {item!r}", locus="diamond")
        pairs.append((int(m.group(1)), int(m.group(2))))
    return pairs


def builtin(spec):
    """``boolean:k``, ``lukasiewicz:n``, ``godel:n`` or ``diamond:W,R``.

    For ``diamond`` W is the number of worlds and R one of ``universal``,
    ``empty``, ``identity`` or pairs ``v-w`` separated by ``/``; the result is
    the complex algebra of the frame with a single diamond ``f``.
    """
    m = BUILTIN.match(spec)
    if not m:
        raise ParseError(f"unknown built-in {spec!r}")
    kind, arg = m.groups()
    try:
        if kind == "diamond":
            w, _, rel = arg.partition(",")
            k = int(w)
            return complex_algebra(k, {"f": _relation(k, rel or "empty")}, name=spec)
        k = int(arg)
    except ValueError as e:
        raise ParseError(f"bad argument in {spec!r}") from e
    except StructuralError as e:
        raise ParseError(str(e), locus=spec) from e
    if kind == "boolean":
        if not 0 <= k <= 6:
            raise ParseError("boolean:k needs 0 <= k <= 6", locus=spec)
        return boolean(k)
    if k < 1:
        raise ParseError(f"{kind}:n needs n >= 1", locus=spec)
    return lukasiewicz(k) if kind == "lukasiewicz" else godel(k)


def load(spec):
    """A built-in name or a path to an algebra file."""
    if BUILTIN.match(spec) and not os.path.exists(spec):
        return builtin(spec)
    try:
        with open(spec, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ParseError(f"cannot read: {e.strerror}", locus=spec) from e
    return parse_text(text, spec)


def parse(path):
    return load(path)


def load_hom(path):
    """A homomorphism file {source, target, map}; source/target are paths (relative to the file) or built-ins."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ParseError(f"cannot read: {e.strerror}", locus=path) from e
    if not text.strip():
        raise ParseError("empty input", locus=f"{path}: line 1")
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, locus=f"{path}: line {e.lineno} column {e.colno}") from e
    if not isinstance(d, dict):
        raise ParseError("top level must be an object", locus=path)
    base = os.path.dirname(path)

    def resolve(key):
        ref = _field(d, key, str, "")
        if BUILTIN.match(ref) and not os.path.exists(os.path.join(base, ref)):
            return builtin(ref)
        return load(os.path.join(base, ref))

    A, B = resolve("source"), resolve("target")
    mp = _field(d, "map", list, "")
    if len(mp) != A.n or any(isinstance(v, bool) or not isinstance(v, int) or not 0 <= v < B.n for v in mp):
        raise ParseError(f"map must list {A.n} indices below {B.n}", locus="map")
    h = Homomorphism(A, B, tuple(mp))
    hv = hom_verify(h)
    if not hv.ok:
        raise ContractError("map is not a homomorphism", witness=hv.witnesses[0])
    return h


def load_dir(path):
    """Every ``*.json`` algebra in a directory, in file-name order."""
    try:
        names = sorted(f for f in os.listdir(path) if f.endswith(".json"))
    except OSError as e:
        raise ParseError(f"cannot list: {e.strerror}", locus=path) from e
    return [load(os.path.join(path, f)) for f in names]


def safe_filename(name):
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", name).strip("_") + ".json"


def write_algebra(A, path):
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(emit(A))
    os.replace(tmp, path)

