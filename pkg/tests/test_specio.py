import pytest

from mcmbetti.errors import (
    DegreeMismatchError,
    InhomogeneousError,
    SpecSyntaxError,
)
from mcmbetti.specio import (
    TableDocument,
    emit_table,
    load_table_csv,
    load_table_json,
    parse_module_spec,
    parse_ring_spec,
)

E4 = ("p=32003; vars=x0,x1,x2,x3; "
      "ideal= x0^2+x1^2+x2^2+x3^2, x0^2+2*x1^2+3*x2^2+4*x3^2")


def test_parse_e4():
    spec = parse_ring_spec(E4)
    assert spec.prime == 32003
    assert spec.variables == ("x0", "x1", "x2", "x3")
    assert len(spec.ideal_generators) == 2
    assert all(g.degree() == 2 for g in spec.ideal_generators)


def test_parse_cubic():
    spec = parse_ring_spec("p=32003; vars=x,y,z; ideal= x^3+y^3+z^3")
    assert len(spec.ideal_generators) == 1
    assert spec.ideal_generators[0].degree() == 3


def test_ring_roundtrip():
    spec = parse_ring_spec(E4)
    again = parse_ring_spec(spec.canonical_text())
    assert again.prime == spec.prime
    assert again.variables == spec.variables
    assert again.ideal_generators == spec.ideal_generators
    assert again.content_hash() == spec.content_hash()


def test_inhomogeneous_generator_rejected():
    with pytest.raises(InhomogeneousError) as e:
        parse_ring_spec("p=32003; vars=x,y; ideal = x + y^2")
    assert "x + y^2" in str(e.value)


def test_syntax_error_location():
    with pytest.raises(SpecSyntaxError) as e:
        parse_ring_spec("p=32003; vars=x,y\nideal = x^2 + @")
    assert e.value.line == 2
    assert e.value.col > 0


def test_rational_token():
    spec = parse_ring_spec("p=rational; vars=x,y; ideal=x^2")
    assert spec.prime == "rational"


def test_module_spec_k():
    ring = parse_ring_spec(E4)
    mod = parse_module_spec("twists = 0\nrel=x0\nrel=x1\nrel=x2\nrel=x3", ring)
    assert mod.generator_twists == (0,)
    assert mod.relation_twists == (1, 1, 1, 1)


def test_module_spec_free():
    ring = parse_ring_spec(E4)
    mod = parse_module_spec("twists = 0", ring)
    assert mod.relation_rows == ()


def test_module_spec_cokernel_row():
    ring = parse_ring_spec(E4)
    mod = parse_module_spec("twists = 0,0,0,0\nrel = x0, x1, x2, x3", ring)
    assert mod.generator_twists == (0, 0, 0, 0)
    assert mod.relation_twists == (1,)


def test_module_spec_degree_mismatch():
    ring = parse_ring_spec(E4)
    with pytest.raises(DegreeMismatchError) as e:
        parse_module_spec("twists = 0,1\nrel = x0, x1", ring)
    assert e.value.row == 1
    assert e.value.expected == 0


def test_emit_csv_single_cell():
    doc = TableDocument("betti", (0, 0), (0, 0), {(0, 0): 1})
    assert emit_table(doc, "csv") == "i,j,value\n0,0,1"


def test_emit_csv_empty():
    doc = TableDocument("betti", None, None, {})
    assert emit_table(doc, "csv") == "i,j,value"


def test_csv_roundtrip():
    doc = TableDocument("betti", (0, 2), (0, 3),
                        {(0, 0): 1, (1, 1): 4, (2, 2): 8, (2, 3): 0})
    again = load_table_csv(emit_table(doc, "csv"))
    assert again.cells == doc.cells


def test_json_roundtrip():
    doc = TableDocument("cohomology", (0, 1), (-3, 3),
                        {(0, 0): 1, (1, 0): 1, (0, 2): 8},
                        metadata={"field": "F_32003"})
    again = load_table_json(emit_table(doc, "json"))
    assert again == doc
    assert again.metadata["field"] == "F_32003"


def test_betti_text_diagonal_layout():
    cells = {(i, i): v for i, v in enumerate([1, 4, 8, 12])}
    doc = TableDocument("betti", (0, 3), (0, 3), cells)
    text = emit_table(doc, "text")
    lines = text.splitlines()
    assert lines[1].strip().startswith("0:")
    assert lines[1].split(":")[1].split() == ["1", "4", "8", "12"]
