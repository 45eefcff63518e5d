import json

import pytest

from pcfg_engine.errors import GraphFormatError
from pcfg_engine.pcfg import dump_pcfg, load_pcfg
from pcfg_engine.syntax import parse_program
from pcfg_engine.translate import translate_program
from tests.conftest import PROGRAMS, g2_body_label, make_g1, make_g2, p2_source


def _document(**changes: object) -> str:
    document = json.loads((PROGRAMS / "g2_const.pcfg.json").read_text())
    document.update(changes)
    return json.dumps(document)


def test_load_reference_graphs() -> None:
    assert load_pcfg((PROGRAMS / "g1.pcfg.json").read_text()) == make_g1()
    for variant in ("const", "incr", "random"):
        text = (PROGRAMS / f"g2_{variant}.pcfg.json").read_text()
        assert load_pcfg(text) == make_g2(g2_body_label(variant))


def test_dump_then_load_translated_graph() -> None:
    graph = translate_program(parse_program(p2_source("y := y + 1")))

    assert load_pcfg(dump_pcfg(graph)) == graph


def test_dump_format() -> None:
    document = json.loads(dump_pcfg(make_g2(g2_body_label("incr"))))

    assert document["start"] == 1
    assert document["end"] == 6
    assert document["nodes"][4] == {"id": 5, "kind": "assign", "var": "y", "text": "y + 1"}
    assert document["nodes"][5] == {"id": 6, "kind": "return", "text": "x"}
    assert {"source": 3, "target": 4, "tag": "T"} in document["edges"]
    assert {"source": 5, "target": 4} in document["edges"]


@pytest.mark.parametrize(
    "text, message",
    [
        ("not json", "Invalid graph document"),  # Not JSON at all
        (  # Unknown node kind
            _document(nodes=[{"id": 1, "kind": "jump"}]),
            "Invalid graph document",
        ),
        (  # Assignment without a variable
            _document(nodes=[{"id": 1, "kind": "assign", "text": "0"}]),
            "needs 'var'",
        ),
        (  # Label text that does not parse
            _document(
                nodes=[
                    {"id": 1, "kind": "observe", "text": "x >="},
                    {"id": 2, "kind": "return", "text": "x"},
                ],
                edges=[{"source": 1, "target": 2}],
                end=2,
            ),
            "Node 1",
        ),
        (  # Tagged edge leaving an assignment
            _document(edges=[{"source": 1, "target": 2, "tag": "T"}]),
            "is tagged",
        ),
        (  # Branch with two true edges
            _document(
                edges=[
                    {"source": 1, "target": 2},
                    {"source": 2, "target": 3},
                    {"source": 3, "target": 4, "tag": "T"},
                    {"source": 3, "target": 6, "tag": "T"},
                ]
            ),
            "two 'T' edges",
        ),
        (  # Well-formed document of an ill-formed graph
            _document(end=5),
            "not a well-formed pCFG",
        ),
    ],
)
def test_load_errors(text: str, message: str) -> None:
    with pytest.raises(GraphFormatError, match=message):
        load_pcfg(text)


def test_duplicate_node_ids() -> None:
    document = json.loads(_document())
    document["nodes"].append(document["nodes"][0])

    with pytest.raises(GraphFormatError, match="declared twice"):
        load_pcfg(json.dumps(document))
