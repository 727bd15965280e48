import json

import pytest
from hypothesis import given, strategies as st

from momcensus.formats import (
    MANIFEST_KEYS,
    DescriptionPairingError,
    DescriptionSpecError,
    DescriptionSyntaxError,
    FormatError,
    Triangulation,
    emit_description,
    format_triangulation,
    manifest_line,
    parse_description,
    parse_manifest_line,
    parse_triangulation,
    read_checkpoint,
    write_checkpoint,
)
from momcensus.polyhedra import DipyramidSpec

from conftest import SMALL_SPECS, random_pairing


def test_parse_toy_descriptions():
    spec, p = parse_description("(4 ; 1,0,3,2,5,4,7,6)")
    assert spec.sides == (4,) and p == (1, 0, 3, 2, 5, 4, 7, 6)
    spec, p = parse_description("  (3,3;6,7,8,9,10,11,0,1,2,3,4,5)\n")
    assert spec.sides == (3, 3) and p[0] == 6
    assert emit_description(spec, p) == "(3,3 ; 6,7,8,9,10,11,0,1,2,3,4,5)"


@pytest.mark.parametrize("text,pos", [
    ("4 ; 1,0)", 0),
    ("(4 ; 1,0,,3)", 9),
    ("(4 ; 1,0", 8),
    ("(4 ; 1,0) x", 10),
    ("(4 1,0)", 3),
    ("(; 1,0)", 1),
])
def test_syntax_errors_carry_position(text, pos):
    with pytest.raises(DescriptionSyntaxError) as exc:
        parse_description(text)
    assert exc.value.position == pos
    assert f"at position {pos}" in str(exc.value)


def test_spec_and_pairing_errors():
    with pytest.raises(DescriptionSpecError):
        parse_description("(4,3 ; 1,0)")
    with pytest.raises(DescriptionSpecError):
        parse_description("(2 ; 1,0,3,2)")
    cases = {"(4 ; 1,0,3,2)": "length",
             "(4 ; 0,2,1,4,3,6,5,7)": "fixed_point",
             "(4 ; 1,2,0,4,3,7,5,6)": "involution",
             "(4 ; 9,0,3,2,5,4,7,6)": "involution"}
    for text, kind in cases.items():
        with pytest.raises(DescriptionPairingError) as exc:
            parse_description(text)
        assert exc.value.kind == kind
    with pytest.raises(DescriptionPairingError, match="fixed points at 0, 7"):
        parse_description("(4 ; 0,2,1,4,3,6,5,7)")


@given(st.integers(0, 2**32), st.sampled_from(SMALL_SPECS))
def test_description_round_trip(seed, spec):
    import random
    p = random_pairing(random.Random(seed), spec.num_faces)
    text = emit_description(spec, p)
    assert parse_description(text) == (spec, p)
    assert emit_description(*parse_description(text)) == text


def _record():
    return {"spec": "4", "pairing": [4, 5, 6, 7, 0, 1, 2, 3], "boundary_count": 2,
            "edge_class_count": 3, "reversed_edges": 0, "generators": 2, "relators": 1,
            "relator_length": 4, "h1_rank": 2, "h1_torsion": [], "commutator_power": 1}


def test_manifest_line_round_trip():
    line = manifest_line(_record())
    assert line.endswith("\n") and "\n" not in line[:-1]
    assert list(json.loads(line)) == list(MANIFEST_KEYS)
    assert parse_manifest_line(line) == _record()
    shuffled = dict(reversed(list(_record().items())))
    assert manifest_line(shuffled) == line


def test_manifest_errors():
    rec = _record()
    del rec["h1_rank"]
    with pytest.raises(FormatError):
        manifest_line(rec)
    with pytest.raises(FormatError):
        parse_manifest_line("{not json")
    bad = _record()
    bad["pairing"] = [0] * 8
    with pytest.raises(FormatError):
        parse_manifest_line(json.dumps(bad))


def test_triangulation_round_trip_and_errors():
    # the one-tetrahedron gluing of faces 0<->1 and 2<->3 by a reflection pattern
    tri = Triangulation((((0, (1, 0, 2, 3)), (0, (1, 0, 2, 3)), (0, (0, 1, 3, 2)), (0, (0, 1, 3, 2))),))
    text = format_triangulation(tri)
    assert text.startswith("momcensus-tri 1\ntetrahedra 1\n0: ")
    assert parse_triangulation(text) == tri
    with pytest.raises(FormatError):
        parse_triangulation(text.replace("tetrahedra 1", "tetrahedra 2"))
    with pytest.raises(FormatError):
        parse_triangulation("tetrahedra 1\n" + text)
    with pytest.raises(FormatError):
        parse_triangulation(text.replace("0/1023", "0/1123", 1))
    with pytest.raises(FormatError):
        Triangulation((((0, (0, 1, 2, 3)),) * 4,)).validate()


def test_checkpoint_round_trip(tmp_path):
    path = str(tmp_path / "c.ckpt")
    write_checkpoint(path, {"a": [1, 2], "b": None})
    state = read_checkpoint(path)
    assert state["a"] == [1, 2] and state["b"] is None and state["version"] == 1
    assert not (tmp_path / "c.ckpt.tmp").exists()
    (tmp_path / "bad").write_text("{}")
    with pytest.raises(FormatError):
        read_checkpoint(str(tmp_path / "bad"))
    (tmp_path / "worse").write_text("{")
    with pytest.raises(FormatError):
        read_checkpoint(str(tmp_path / "worse"))
