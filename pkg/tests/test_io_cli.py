import json

import pytest
from hypothesis import given, settings, strategies as st

from finalg import io
from finalg.algebra import Homomorphism
from finalg.axioms import validate_class
from finalg.cli import main, run
from finalg.corpus import standard_corpus
from finalg.enumeration import is_isomorphic
from finalg.errors import ContractError, ParseError
from finalg.generators import godel, lukasiewicz
from finalg.replay import replay

CORPUS = standard_corpus()


# -- serialization ------------------------------------------------------------------------


@pytest.mark.parametrize("A", CORPUS, ids=lambda A: A.name)
def test_emit_parse_is_involutive(A):
    text = io.emit(A)
    B = io.parse_text(text)
    assert B.same_as(A) and B.name == A.name
    assert io.emit(B) == text
    assert text.endswith("\n") and text.count("\n") == 1 and ": " not in text


def test_file_roundtrip(tmp_path):
    A = CORPUS[-1]
    path = tmp_path / "a.json"
    io.write_algebra(A, str(path))
    assert io.parse(str(path)).same_as(A)
    assert not (tmp_path / "a.json.tmp").exists()


def test_builtins():
    assert is_isomorphic(io.load("lukasiewicz:3"), lukasiewicz(3))
    assert is_isomorphic(io.load("godel:3"), godel(3))
    L = io.load("lukasiewicz:5")
    # x*y = max(0, x+y-1) on the index scale
    assert all(L.tables["star"][x][y] == max(0, x + y - 4) for x in range(5) for y in range(5))
    for spec, c in [("boolean:3", "BOOLEAN"), ("lukasiewicz:4", "MV"), ("godel:4", "GODEL"),
                    ("diamond:2,universal", "BOOLEAN"), ("diamond:3,0-1/1-2", "BOOLEAN")]:
        assert validate_class(io.load(spec), c).ok


@pytest.mark.parametrize("spec", ["boolean:9", "godel:0", "diamond:2,0-5", "diamond:x", "nosuch:3"])
def test_bad_builtins(spec):
    with pytest.raises(ParseError):
        io.load(spec)


def test_parse_errors_carry_a_locus(tmp_path):
    empty = tmp_path / "empty.json"
    empty.write_text("")
    with pytest.raises(ParseError) as e:
        io.parse(str(empty))
    assert "line 1" in e.value.locus
    with pytest.raises(ParseError) as e:
        io.parse_text('{"size": 2,\n "class": }')
    assert "line 2" in e.value.locus
    d = io.to_dict(lukasiewicz(3))
    del d["tables"]["imp"]
    with pytest.raises(ParseError) as e:
        io.from_dict(d)
    assert e.value.locus == "tables"
    d = io.to_dict(lukasiewicz(3))
    d["constants"]["top"] = "2"
    with pytest.raises(ParseError) as e:
        io.from_dict(d)
    assert e.value.locus == "constants.top"


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(CORPUS[:12]), st.data())
def test_damaged_files_fail_cleanly(A, data):
    text = io.emit(A)
    cut = data.draw(st.integers(0, len(text) - 2))
    flip = data.draw(st.integers(0, len(text) - 2))
    damaged = text[:cut]
    swapped = text[:flip] + data.draw(st.sampled_from("0]}x,")) + text[flip + 1:]
    for t in (damaged, swapped):
        try:
            B = io.parse_text(t)
        except ParseError:
            continue
        assert B.n == A.n  # a damaged file that still parses is still a valid algebra


def test_load_hom(tmp_path):
    (tmp_path / "h.json").write_text(json.dumps({"source": "boolean:1", "target": "boolean:2", "map": [0, 3]}))
    h = io.load_hom(str(tmp_path / "h.json"))
    assert isinstance(h, Homomorphism) and h.map == (0, 3)
    (tmp_path / "bad.json").write_text(json.dumps({"source": "boolean:1", "target": "boolean:2", "map": [0, 1]}))
    with pytest.raises(ContractError):
        io.load_hom(str(tmp_path / "bad.json"))


# -- command line -------------------------------------------------------------------------


def test_cli_examples(capsys):
    assert main(["audit", "dm", "lukasiewicz:3"]) == 1
    out = json.loads(capsys.readouterr().out)
    assert out["outcome"] == "fail"
    assert {"item": "vi", "witness": [1, 0]} in [{k: w[k] for k in ("item", "witness")} for w in out["witnesses"]]

    assert main(["roundtrip", "godel:3"]) == 0
    assert json.loads(capsys.readouterr().out)["outcome"] == "pass"

    assert main(["validate", "--class", "BOOLEAN", "lukasiewicz:3"]) == 1
    out = json.loads(capsys.readouterr().out)
    assert any(w["axiom"] == "idempotency" for w in out["witnesses"])


@pytest.mark.parametrize("argv", [["frobnicate"], ["validate", "godel:3"], ["audit", "xx", "godel:3"], []])
def test_usage_errors_exit_2(argv, capsys):
    assert main(argv) == 2
    assert capsys.readouterr().out == ""


def test_runtime_errors_exit_2(capsys):
    assert main(["spectrum", "/no/such/file.json"]) == 2
    out = json.loads(capsys.readouterr().out)
    assert out["outcome"] == "error" and out["details"]["error"] == "ParseError"
    r, code = run(["dual", "diamond:2,0-0/0-1/1-1"])
    assert code == 2 and r.details["error"] == "StructuralError"


def test_timing_only_on_request():
    r, _ = run(["roundtrip", "boolean:1"])
    assert r.timing is None and "timing" not in r.to_dict()
    r, _ = run(["--timing", "roundtrip", "boolean:1"])
    assert isinstance(r.timing, float)


def test_free_and_corpus_write_files(tmp_path):
    r, code = run(["free", "--over", "godel:3", "--gens", "1", "--out", str(tmp_path / "f.json")])
    assert code == 0 and r.details["size"] == 6
    assert io.parse(str(tmp_path / "f.json")).n == 6
    r, code = run(["corpus", "--class", "BOOLEAN", "--max", "4", "--out", str(tmp_path / "c")])
    assert code == 0
    assert sorted(A.n for A in io.load_dir(str(tmp_path / "c"))) == [1, 2, 4]


def test_interpolate_and_amalgam_commands():
    r, code = run(["interpolate", "boolean:2", "--x1", "1", "--x2", "2", "--x", "1", "--z", "3"])
    assert code == 0 and r.details["y"] == 3
    r, code = run(["amalgam", "--a0", "boolean:1", "--a1", "boolean:2", "--a2", "boolean:2"])
    assert code == 0 and r.details["size"] == 4
    r, code = run(["amalgam", "--a0", "boolean:1", "--a1", "boolean:2", "--a2", "boolean:2", "--super", "--max", "8"])
    assert code == 1 and r.witnesses[0]["exhausted_up_to"] == 8


# -- replay -------------------------------------------------------------------------------


REPLAYED = [
    ["validate", "--class", "GODEL", "lukasiewicz:4"],
    ["audit", "dm", "godel:3"],
    ["audit", "dichotomy", "lukasiewicz:3"],
    ["audit", "delta", "diamond:2,0-1"],
    ["check", "sip", "boolean:2"],
    ["check", "cp", "boolean:3"],
    ["nice", "diamond:2,universal"],
    ["interpolate", "lukasiewicz:4", "--x1", "1", "--x2", "2", "--x", "1", "--z", "1"],
]


@pytest.mark.parametrize("argv", REPLAYED, ids=lambda a: " ".join(a[:2]))
def test_reports_replay(argv):
    r, _ = run(argv)
    d = json.loads(io.emit(r.to_dict()))
    assert replay(d).ok


def test_tampered_witness_does_not_replay():
    r, _ = run(["audit", "dm", "lukasiewicz:3"])
    d = json.loads(io.emit(r.to_dict()))
    w = next(w for w in d["witnesses"] if w["item"] == "vi")
    w["witness"] = [0, 1]
    assert not replay(d).ok
    r, _ = run(["check", "sip", "boolean:2"])
    d = json.loads(io.emit(r.to_dict()))
    d["witnesses"][0]["c"] = 3
    assert not replay(d).ok


def test_fail_without_witness_does_not_replay():
    d = {"command": "spectrum", "outcome": "fail", "witnesses": [], "details": {"input": {"file": "boolean:1"}}}
    assert not replay(d).ok
