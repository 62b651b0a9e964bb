import json

import pytest

from implicative.workspace import ParseError, ValidationError, load_workspace, load_zoo, parse_workspace
from conftest import ZOO

CHAIN = {"kind": "heyting", "elements": ["0", "1", "2"], "covers": [["0", "1"], ["1", "2"]]}


def test_zoo_loads_clean():
    ws = load_zoo()
    assert sorted(ws.algebras) == sorted(ZOO)
    assert all(A.provenance["separator_check"]["passed"] for A in ws.algebras.values())
    assert set(ws.families) == {"C3_top_pair", "B4_atoms", "B4_top", "R1_singleton"}


def test_parse_error_has_position():
    with pytest.raises(ParseError) as e:
        parse_workspace('{"algebras": {\n  "x": ]}')
    assert e.value.line == 2
    with pytest.raises(ParseError):
        parse_workspace("[1, 2]")


def test_cyclic_covers_are_a_validation_error():
    bad = {"algebras": {"X": {"kind": "heyting", "elements": ["a", "b"],
                              "covers": [["a", "b"], ["b", "a"]]}}}
    with pytest.raises(ValidationError) as e:
        parse_workspace(json.dumps(bad))
    assert e.value.invariant == "NotAPoset"


def test_undefined_algebra_in_family():
    bad = {"algebras": {"C3": CHAIN}, "families": {"f": {"algebra": "nope", "values": ["1"]}}}
    with pytest.raises(ValidationError, match="undefined algebra"):
        parse_workspace(json.dumps(bad))
    bad["families"]["f"] = {"algebra": "C3", "values": ["7"]}
    with pytest.raises(ValidationError, match="not an element"):
        parse_workspace(json.dumps(bad))


def test_custom_table_is_validated():
    bad = {"algebras": {"X": {"kind": "custom", "elements": ["0", "1"], "covers": [["0", "1"]],
                              "imp": [["0", "0"], ["0", "1"]], "separator": {"members": ["1"]}}}}
    with pytest.raises(ValidationError) as e:
        parse_workspace(json.dumps(bad))
    assert e.value.invariant == "meet_distribution"


def test_other_validation_errors():
    with pytest.raises(ValidationError, match="schema version"):
        parse_workspace('{"version": 9}')
    with pytest.raises(ValidationError, match="unknown algebra kind"):
        parse_workspace('{"algebras": {"X": {"kind": "magic"}}}')
    with pytest.raises(ValidationError, match="missing field"):
        parse_workspace('{"algebras": {"X": {"kind": "heyting"}}}')
    with pytest.raises(ValidationError, match="defined earlier"):
        parse_workspace('{"algebras": {"P": {"kind": "power", "base": "Q", "index": [0]}}}')


def test_file_roundtrip_and_bounds(tmp_path):
    p = tmp_path / "ws.json"
    p.write_text(json.dumps({"algebras": {"C3": CHAIN}, "bounds": {"J": 4}}))
    ws = load_workspace(p)
    assert ws.algebra("C3").n == 3 and ws.bounds.J == 4
    with pytest.raises(ValidationError):
        ws.algebra("C9")
