"""Monospace rendering of dimensional tables.

Layout, in columns: one column per displayed row parameter, then one data
column per column-header leaf path.  Nested header values print at the
start of their span and leave blanks below/beside; column widths fit the
widest content of each column with two-space gutters.  Footer lines name
the collapsed dimensions ("DIM.All = 'all'" when unfiltered) and every
predicate; warnings, if any, come last.
"""

from __future__ import annotations

from . import algebra, model


def _measure_label(fact: model.Fact) -> str:
    return f"{fact.name} ({', '.join(m.name for m in fact.measures)})"


def _header_matrix(paths, depth: int) -> list[list[str]]:
    """One row per level; a value prints only where its prefix changes."""
    rows = []
    for level in range(depth):
        row = []
        prev_prefix = None
        for path in paths:
            prefix = path[: level + 1]
            row.append(model.format_value(path[level]) if prefix != prev_prefix else "")
            prev_prefix = prefix
        rows.append(row)
    return rows


def render_table(c: model.Constellation, t: algebra.DimensionalTable, grid: algebra.CellGrid) -> str:
    fact = c.fact(t.fact)
    n_row_cols = len(t.row_params)
    col_depth = len(t.col_params)
    row_paths = grid.row_paths
    col_paths = grid.col_paths

    matrix: list[list[str]] = []
    blank_row = lambda: [""] * (n_row_cols + len(col_paths))

    title = blank_row()
    title[0] = _measure_label(fact)
    if col_paths:
        title[n_row_cols] = f"{t.col_dim}.{t.col_hierarchy}"
    matrix.append(title)

    if col_paths:
        col_headers = _header_matrix(col_paths, col_depth)
        for level, header in enumerate(col_headers):
            row = [""] * n_row_cols + header
            row[n_row_cols - 1] = t.col_params[level]
            matrix.append(row)
    else:
        # No data columns; still show the column axis and its parameters.
        row = blank_row()
        row[0] = f"{t.col_dim}.{t.col_hierarchy}: {', '.join(t.col_params)}"
        matrix.append(row)

    axis = blank_row()
    axis[0] = f"{t.row_dim}.{t.row_hierarchy}"
    matrix.append(axis)

    names = blank_row()
    names[: n_row_cols] = list(t.row_params)
    matrix.append(names)

    row_headers = _header_matrix(row_paths, n_row_cols)
    for r, path in enumerate(row_paths):
        line = [row_headers[level][r] for level in range(n_row_cols)]
        for cp in col_paths:
            cell = grid.cells.get((path, cp))
            if cell is None:
                line.append("")
            else:
                line.append("(" + ", ".join(cell[m.name].display for m in fact.measures) + ")")
        matrix.append(line)

    widths = [
        max(len(row[i]) for row in matrix) for i in range(n_row_cols + len(col_paths))
    ]
    lines = [
        "  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip()
        for row in matrix
    ]

    lines.append("")
    lines.extend(algebra.footers(c, t))
    for warning in t.warnings:
        lines.append(f"warning: {warning}")
    return "\n".join(lines)
