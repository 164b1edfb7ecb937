import json
from fractions import Fraction as F

import pytest

from app.construct import layer1
from app.errors import InvalidInput
from app.exact import Interval, RootSet
from app.pwl import same_function
from app.sharkovsky import Precedence, verify_closure
from app.validators import (
    ClosureReportDocument,
    CompareDocument,
    ContextDocument,
    MapDocument,
    RootSetDocument,
    TowerDocument,
    dump_map,
    load_map,
)

G_DOCUMENT = {"schema": "v1", "domain": ["0", "1"], "nodes": [["0", "2/4"], ["1/2", "1"], ["1", "0"]]}


class TestMapDocument:
    def test_load(self, g):
        assert same_function(load_map(json.dumps(G_DOCUMENT)), g)

    def test_dump_is_canonical(self, g):
        text = dump_map(g)
        data = json.loads(text)
        assert data["schema"] == "v1"
        assert data["nodes"][0] == ["0/1", "1/2"]
        assert dump_map(load_map(text)) == text

    def test_denormalized_input_is_normalized(self):
        doc = MapDocument.model_validate(G_DOCUMENT)
        assert doc.nodes[0] == ("0/1", "1/2")

    @pytest.mark.parametrize("change", [
        {"schema": "v2"},
        {"domain": ["1", "0"]},
        {"nodes": []},
        {"nodes": [["0", "1/0"], ["1", "0"]]},
        {"extra": 1},
    ])
    def test_rejects(self, change):
        with pytest.raises(InvalidInput):
            load_map(json.dumps({**G_DOCUMENT, **change}))

    def test_unsorted_nodes(self):
        doc = {**G_DOCUMENT, "nodes": [["0", "0"], ["3/4", "1"], ["1/2", "1"], ["1", "0"]]}
        with pytest.raises(InvalidInput):
            load_map(json.dumps(doc))

    def test_not_json(self):
        with pytest.raises(InvalidInput):
            load_map("{nodes")


class TestReportDocuments:
    def test_rootset(self):
        rs = RootSet((Interval(0, F(1, 3)), Interval.point(F(1, 2))))
        doc = RootSetDocument.from_rootset(rs)
        assert doc.components == [("0/1", "1/3"), ("1/2", "1/2")]
        assert doc.to_rootset() == rs

    def test_compare(self):
        data = json.loads(CompareDocument(m=3, n=5, relation=Precedence.PRECEDES).dump())
        assert data == {"schema": "v1", "m": 3, "n": 5, "relation": "precedes"}

    def test_closure(self, T):
        data = json.loads(ClosureReportDocument.from_report(verify_closure(T, 5)).dump())
        assert data["pass"] is True
        assert data["period_set"] == [1, 2, 3, 4, 5]
        assert data["violations"] == []

    def test_context(self, g_ctx):
        doc = ContextDocument.from_layer(g_ctx, layer1(g_ctx, 1))
        data = json.loads(doc.dump())
        assert data["m"] == 3
        assert data["pass"] is True
        labels = {p["label"]: p["value"] for p in data["points"]}
        assert labels["L1.plain.c[1]"] == "1/3"
        assert labels["L1.anchor.d[]"] == "1/6"

    def test_tower(self, g_tower):
        data = json.loads(TowerDocument.from_tower(g_tower).dump())
        assert data["pass"] is True
        assert set(data["families"]) == {"tilde", "plain", "breve", "main", "hat", "bar"}
        rows = {r["label"]: r for r in data["verification"]}
        row = rows["L2.plain.c'[1,1]"]
        assert (row["value"], row["claimed"], row["actual"], row["guaranteed"]) == ("1/3", 4, 2, False)
        assert row["pass"] is True
