"""Schema and query language: grammar coverage, diagnostics with positions,
round-trips and fuzz robustness."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from mdolap import dsl, model
from randgen import random_query


class TestSchemaParsing:
    def test_full_sample_schema(self, seed_schema_text):
        c, diagnostics = dsl.parse_schema(seed_schema_text)
        assert diagnostics == []
        assert c.name == "LOUEVOYAGE"
        assert len(c.dimensions) == 5
        assert len(c.facts) == 2
        assert len(c.constraints) == 13
        geo_fr = c.dimensions["AGENCES"].hierarchies["geo_fr"]
        assert geo_fr.params == ("Id", "Ville", "Departement", "Region", "Pays", "All")
        assert geo_fr.weak == {"Id": ("Raison",), "Departement": ("Nom_dpt",)}
        assert model.condition_text(geo_fr.cond) == "Pays = 'France'"
        assert c.facts["VENTES"].dims == ("TEMPS", "VOYAGES", "AGENCES", "CLIENTS")

    def test_bare_constellation_is_valid(self):
        c, diagnostics = dsl.parse_schema("CONSTELLATION X")
        assert diagnostics == []
        assert c.name == "X" and c.dimensions == {} and c.facts == {}

    def test_missing_all_tail_is_positioned(self):
        text = (
            "CONSTELLATION X\n"
            "DIMENSION D (\n"
            "  ATTRIBUTES (a STRING)\n"
            "  HIERARCHY h : Id -> a\n"
            ")\n"
        )
        c, diagnostics = dsl.parse_schema(text)
        assert c is None
        assert len(diagnostics) == 1
        assert "All" in diagnostics[0].message
        assert diagnostics[0].line == 5  # the ')' where the chain should continue

    def test_declaring_implicit_attribute_is_an_error(self):
        text = (
            "CONSTELLATION X\n"
            "DIMENSION D (\n"
            "  ATTRIBUTES (Id STRING, a STRING)\n"
            "  HIERARCHY h : Id -> a -> All\n"
            ")\n"
        )
        c, diagnostics = dsl.parse_schema(text)
        assert c is None
        assert any("implicit" in d.message for d in diagnostics)

    def test_recovery_reports_errors_in_later_declarations(self):
        text = (
            "CONSTELLATION X\n"
            "DIMENSION D (\n"
            "  ATTRIBUTES (a STRING)\n"
            "  HIERARCHY h : Id a -> All\n"  # missing arrow
            ")\n"
            "FACT F ( MEASURES (m INT BOGUS) DIMENSIONS (D) )\n"
        )
        c, diagnostics = dsl.parse_schema(text)
        assert c is None
        assert len(diagnostics) == 2
        assert diagnostics[0].line == 4
        assert "BOGUS" in diagnostics[1].message

    def test_conditions_cover_the_whole_grammar(self):
        text = (
            "CONSTELLATION X\n"
            "DIMENSION D (\n"
            "  ATTRIBUTES (a INT, b STRING)\n"
            "  HIERARCHY h : Id -> a -> All\n"
            "    WHEN NOT (a < 3 OR a >= 10) AND b IS NOT NULL OR b = 'x''y'\n"
            ")\n"
        )
        c, diagnostics = dsl.parse_schema(text)
        assert diagnostics == []
        cond = c.dimensions["D"].hierarchies["h"].cond
        assert model.condition_text(cond) == "NOT (a < 3 OR a >= 10) AND b IS NOT NULL OR b = 'x''y'"
        # Round-trip through the condition parser.
        again = dsl.parse_condition_text(model.condition_text(cond))
        assert again == cond

    def test_diagnostics_point_into_the_source(self, seed_schema_text):
        mangled = seed_schema_text.replace("PARTITION geo_us", "PARTITION 42", 1)
        c, diagnostics = dsl.parse_schema(mangled)
        assert c is None
        lines = mangled.splitlines()
        for d in diagnostics:
            assert 1 <= d.line <= len(lines)
            assert 1 <= d.column <= len(lines[d.line - 1]) + 1


class TestQueryParsing:
    def test_drill_expression(self):
        expr, diagnostics = dsl.parse_query(
            "DrillDown(Display(VENTES, AGENCES, TEMPS, geo_fr, h_an), AGENCES, Region)"
        )
        assert diagnostics == []
        assert expr == dsl.DrillDownExpr(
            dsl.DisplayExpr("VENTES", "AGENCES", "TEMPS", "geo_fr", "h_an"), "AGENCES", "Region"
        )

    def test_single_display(self):
        expr, _ = dsl.parse_query("Display(F,A,B,h1,h2)")
        assert expr == dsl.DisplayExpr("F", "A", "B", "h1", "h2")

    def test_flags_default_to_false(self):
        expr, _ = dsl.parse_query("HRotate(Display(F,A,B,h1,h2), A, h1, h3)")
        assert expr.flag is False
        expr, _ = dsl.parse_query("DRotate(Display(F,A,B,h1,h2), A, C, h4, true)")
        assert expr.flag is True

    def test_arity_mismatch_is_a_diagnostic(self):
        expr, diagnostics = dsl.parse_query("HRotate(Display(F,A,B,h1,h2), AGENCES, geo_fr)")
        assert expr is None
        assert len(diagnostics) == 1
        assert diagnostics[0].column > 1

    def test_unknown_operator(self):
        expr, diagnostics = dsl.parse_query("Pivot(Display(F,A,B,h1,h2), A)")
        assert expr is None
        assert "unknown operator" in diagnostics[0].message

    def test_display_must_be_innermost(self):
        expr, diagnostics = dsl.parse_query("DrillDown(RollUp(X, A, p), A, q)")
        assert expr is None  # X is not an operator call

    def test_composed_rotation_chain(self):
        text = (
            "DrillDown(HRotate(DRotate(Display(VENTES, TEMPS, AGENCES, h_an, ens), "
            "TEMPS, VOYAGES, cla_int), VOYAGES, cla_int, cla_fr), VOYAGES, TypeV)"
        )
        expr, diagnostics = dsl.parse_query(text)
        assert diagnostics == []
        assert isinstance(expr, dsl.DrillDownExpr)
        assert isinstance(expr.child, dsl.HRotateExpr)
        assert isinstance(expr.child.child, dsl.DRotateExpr)
        assert expr.child.child.flag is False


class TestFormatting:
    def test_round_trip_of_composed_expression(self):
        expr = dsl.DrillDownExpr(
            dsl.HRotateExpr(
                dsl.DRotateExpr(
                    dsl.DisplayExpr("VENTES", "TEMPS", "AGENCES", "h_an", "ens"),
                    "TEMPS",
                    "VOYAGES",
                    "cla_int",
                ),
                "VOYAGES",
                "cla_int",
                "cla_fr",
            ),
            "VOYAGES",
            "TypeV",
        )
        text = dsl.format_query(expr)
        again, diagnostics = dsl.parse_query(text)
        assert diagnostics == []
        assert again == expr

    def test_single_display_formats_to_one_line(self):
        assert (
            dsl.format_query(dsl.DisplayExpr("F", "A", "B", "h1", "h2"))
            == "Display(F, A, B, h1, h2)"
        )

    @given(st.integers(min_value=0, max_value=2**48))
    @settings(max_examples=300, deadline=None)
    def test_random_trees_round_trip(self, seed):
        expr = random_query(random.Random(seed))
        again, diagnostics = dsl.parse_query(dsl.format_query(expr))
        assert diagnostics == []
        assert again == expr

    def test_json_round_trip(self):
        expr = dsl.HRotateExpr(
            dsl.DisplayExpr("F", "A", "B", "h1", "h2"), "A", "h1", "h3", True
        )
        assert dsl.query_from_json(dsl.query_to_json(expr)) == expr

    def test_json_rejects_malformed_trees(self):
        with pytest.raises(ValueError):
            dsl.query_from_json({"op": "DrillDown", "dim": "A", "param": "p", "child": 7})
        with pytest.raises(ValueError):
            dsl.query_from_json({"op": "Slice"})


class TestFuzz:
    @given(st.text(max_size=200))
    @settings(max_examples=400, deadline=None)
    def test_query_parser_never_raises(self, text):
        expr, diagnostics = dsl.parse_query(text)
        assert (expr is None) == bool(diagnostics)
        for d in diagnostics:
            assert d.line >= 1 and d.column >= 1

    @given(st.text(max_size=400))
    @settings(max_examples=400, deadline=None)
    def test_schema_parser_never_raises(self, text):
        c, diagnostics = dsl.parse_schema(text)
        assert (c is None) == bool(diagnostics)

    @given(st.binary(max_size=200))
    @settings(max_examples=200, deadline=None)
    def test_arbitrary_bytes_decoded_leniently(self, raw):
        dsl.parse_query(raw.decode("utf-8", errors="replace"))

    @given(st.text(max_size=300))
    @settings(max_examples=300, deadline=None)
    def test_diagnostic_positions_address_real_source(self, text):
        _, diagnostics = dsl.parse_schema(text)
        lines = text.splitlines() or [""]
        for d in diagnostics:
            assert 1 <= d.line <= max(1, len(lines) + 1)
            assert d.column >= 1
