"""Bridges parsed query expressions to the algebra operators."""

from __future__ import annotations

from typing import Optional

from . import algebra, dsl, model


def evaluate_table(c: model.Constellation, expr: dsl.QueryExpr, mode: str = algebra.STRICT) -> algebra.DimensionalTable:
    """Fold an expression tree bottom-up into a dimensional table."""
    if isinstance(expr, dsl.DisplayExpr):
        t = algebra.display(
            c, expr.fact, expr.row_dim, expr.col_dim, expr.row_hierarchy, expr.col_hierarchy
        )
    elif isinstance(expr, dsl.DrillDownExpr):
        t = algebra.drilldown(c, evaluate_table(c, expr.child, mode), expr.dim, expr.param)
    elif isinstance(expr, dsl.RollUpExpr):
        t = algebra.rollup(c, evaluate_table(c, expr.child, mode), expr.dim, expr.param)
    elif isinstance(expr, dsl.HRotateExpr):
        t = algebra.hrotate(
            c, evaluate_table(c, expr.child, mode), expr.dim, expr.old_hierarchy, expr.new_hierarchy, expr.flag
        )
    elif isinstance(expr, dsl.DRotateExpr):
        t = algebra.drotate(
            c, evaluate_table(c, expr.child, mode), expr.old_dim, expr.new_dim, expr.hierarchy, expr.flag
        )
    else:
        raise TypeError(f"not a query expression: {expr!r}")
    if t.mode != mode:
        t = algebra.with_mode(t, mode)
    return t


def evaluate(
    c: model.Constellation,
    expr: dsl.QueryExpr,
    mode: str = algebra.STRICT,
    *,
    allow_inconsistent: bool = False,
) -> tuple[algebra.DimensionalTable, algebra.CellGrid]:
    """Evaluate an expression and compute its cell grid."""
    table = evaluate_table(c, expr, mode)
    grid = algebra.compute_cells(c, table, allow_inconsistent=allow_inconsistent)
    return table, grid


def evaluate_text(
    c: model.Constellation,
    text: str,
    mode: str = algebra.STRICT,
    *,
    allow_inconsistent: bool = False,
) -> tuple[Optional[tuple[algebra.DimensionalTable, algebra.CellGrid]], list[dsl.ParseDiagnostic]]:
    """Parse and evaluate query source text."""
    expr, diagnostics = dsl.parse_query(text)
    if expr is None:
        return None, diagnostics
    return evaluate(c, expr, mode, allow_inconsistent=allow_inconsistent), []
