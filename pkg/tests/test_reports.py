import random
from fractions import Fraction

import pytest

from drtool import AngleAssignment, ZeroOneAssignment, export_dot, link_graph
from drtool.errors import DrtoolError
from drtool.lots import bi_forest_orientation, lot_complex
from drtool.reports import (
    AnalyzeOptions,
    analyze,
    canonical_json,
    input_sha256,
    parse_weight_value,
)

from conftest import FIXTURES, make_trefoil


class TestAnalyze:
    def test_trefoil_report(self):
        rep = analyze(FIXTURES / "trefoil.lot")
        assert rep["lot"]["properties"]["reduced"] is True
        assert rep["lot"]["properties"]["injective"] is True
        li = rep["certificates"]["local_indicability"]
        assert li["kind"] == "HUCK_ROSE_BASE"
        assert li["conclusion"]["locally_indicable"] == "certified"
        methods = {a["method"]: a["ok"] for a in rep["certificates"]["dr2"]}
        assert methods["ZERO_ONE"] is True

    def test_w5_report_embeds_quotient_certificate(self):
        rep = analyze(FIXTURES / "w5.lot")
        li = rep["certificates"]["local_indicability"]
        assert li["kind"] == "QUOTIENT_STEP"
        assert li["evidence"]["dr2_certificate"]["method"] == "ZERO_ONE"

    def test_torus_with_weights(self):
        rep = analyze(FIXTURES / "torus.pres", AnalyzeOptions(weights=Fraction(1, 2)))
        assert rep["tests"]["weight_test"]["pass"] is True
        methods = {a["method"]: a for a in rep["certificates"]["dr2"]}
        assert methods["C4T4"]["ok"] is True
        weighted = methods["WEIGHTED"]
        assert weighted["ok"] is False
        assert weighted["witness"]["path_nodes"] == ["a+", "b-", "a-"]
        assert rep["complex"]["gauss_bonnet"]["total"] == "0"

    def test_searched_coloring_structure_reported(self):
        rep = analyze(FIXTURES / "torus.pres")
        assert rep["tests"]["coloring_test"]["pass"] is True

    def test_dh_flags_surface(self):
        rep = analyze(FIXTURES / "dh.pres")
        assert any("non-reduced" in f for f in rep["complex"]["validation_flags"])

    def test_diagram_search_section(self):
        rep = analyze(FIXTURES / "m2.pres", AnalyzeOptions(max_faces=2))
        assert rep["diagram_search"]["reduced_diagram"] is not None

    def test_timestamp_only_on_request(self):
        rep = analyze(FIXTURES / "trefoil.lot")
        assert "timestamp" not in rep
        rep = analyze(FIXTURES / "trefoil.lot", AnalyzeOptions(timestamp=True))
        assert "timestamp" in rep

    def test_hash_is_of_canonical_form(self):
        rep = analyze(FIXTURES / "trefoil.lot")
        assert rep["input"]["sha256"] == input_sha256(rep["input"]["canonical"])

    def test_reports_byte_identical(self):
        paths = sorted((FIXTURES / "corpus").iterdir())
        for path in paths:
            assert canonical_json(analyze(path)) == canonical_json(analyze(path))


class TestWeightParsing:
    def test_plain_rational(self):
        assert parse_weight_value("1/2") == Fraction(1, 2)

    def test_uniform_prefix(self):
        assert parse_weight_value("uniform:3/4") == Fraction(3, 4)

    def test_integer(self):
        assert parse_weight_value("2") == Fraction(2)


class TestExportDot:
    def test_link_with_zero_one_styles(self):
        lot = make_trefoil()
        K = lot_complex(lot)
        w01 = bi_forest_orientation(lot).assignment
        text = export_dot(link_graph(K, K.vertices[0]), w01)
        assert text.startswith("graph")
        assert '"a+"' in text
        assert "style=dashed" in text and "style=bold" in text
        assert "w=0" in text and "w=1" in text

    def test_empty_link_header_only(self):
        from drtool import build_complex

        X = build_complex(edges=[], cells=[], vertices=["v"])
        text = export_dot(link_graph(X, "v"))
        assert text == 'graph "lk(v)" {\n}\n'

    def test_lot_dot(self):
        text = export_dot(make_trefoil())
        assert '"a" -> "b" [label="e1:c"];' in text

    def test_deterministic(self):
        lot = make_trefoil()
        assert export_dot(lot) == export_dot(lot)

    def test_unsupported_object(self):
        with pytest.raises(DrtoolError):
            export_dot(42)
