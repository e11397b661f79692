"""Dimensional tables and the pivot operators.

A dimensional table is the visualization state of one fact: a row and a
column dimension, each seen through one of its hierarchies at a chosen run
of displayed parameters, the remaining dimensions collapsed at All, plus a
set of predicates that filters the contributing fact instances.

Operators never mutate: each returns a new table.  Cell computation runs
in one of two modes:

  STRICT  only fact instances whose row/column links belong to the current
          hierarchies contribute (the constraint-aware behavior),
  LEGACY  no membership filtering; instances outside the hierarchy group
          under NULL headers (the classical behavior, kept for contrast).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Mapping, Optional, Union

from . import constraints as cons
from . import model
from .errors import (
    AlreadyDisplayed,
    DimensionNotLinked,
    EmptyGroup,
    InconsistentStore,
    NotAParameter,
    NotCurrentDimension,
    NotCurrentHierarchy,
    NotFiner,
)
from .model import ALL_ATTR, ALL_VALUE, Condition, Value

STRICT = "STRICT"
LEGACY = "LEGACY"

ROW = 0
COL = 1


@dataclass(frozen=True)
class DimPredicate:
    """A filter on the instances of one dimension.

    Either an attribute condition (same grammar as hierarchy membership
    conditions) or a hierarchy-membership marker, which is how a rotation
    that maintains the current analysis is represented.
    """

    dimension: str
    cond: Optional[Condition] = None
    hierarchy: Optional[str] = None

    @property
    def is_membership(self) -> bool:
        return self.hierarchy is not None

    def text(self) -> str:
        if self.is_membership:
            return f"{self.dimension} IN {self.hierarchy}"
        return model.condition_text(self.cond, attr_prefix=f"{self.dimension}.")

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "kind": "membership" if self.is_membership else "condition",
            "text": self.text(),
        }


@dataclass(frozen=True)
class DimensionalTable:
    fact: str
    dims: tuple[str, ...]  # dims[0] = row dimension, dims[1] = column dimension
    row_hierarchy: str
    col_hierarchy: str
    row_params: tuple[str, ...]  # coarsest first
    col_params: tuple[str, ...]
    predicates: tuple[DimPredicate, ...] = ()
    mode: str = STRICT
    warnings: tuple[str, ...] = ()

    @property
    def row_dim(self) -> str:
        return self.dims[0]

    @property
    def col_dim(self) -> str:
        return self.dims[1]

    def axis_of(self, dim: str) -> int:
        if dim == self.row_dim:
            return ROW
        if dim == self.col_dim:
            return COL
        raise NotCurrentDimension(f"'{dim}' is not a display dimension of this table")

    def hierarchy_of(self, axis: int) -> str:
        return self.row_hierarchy if axis == ROW else self.col_hierarchy

    def params_of(self, axis: int) -> tuple[str, ...]:
        return self.row_params if axis == ROW else self.col_params


@dataclass(frozen=True)
class Cell:
    raw: Union[int, Fraction]
    display: str
    count: int


@dataclass(frozen=True)
class CellGrid:
    row_paths: tuple[tuple[Value, ...], ...]
    col_paths: tuple[tuple[Value, ...], ...]
    cells: Mapping[tuple[tuple[Value, ...], tuple[Value, ...]], Mapping[str, Cell]]


# ---------------------------------------------------------------------------
# Operators
# ---------------------------------------------------------------------------

def _ordered_dims(fact: model.Fact, row: str, col: str) -> tuple[str, ...]:
    collapsed = tuple(d for d in fact.dims if d not in (row, col))
    return (row, col, *collapsed)


def display(
    c: model.Constellation,
    fact_name: str,
    row_dim: str,
    col_dim: str,
    row_hierarchy: str,
    col_hierarchy: str,
) -> DimensionalTable:
    """Open the analysis of a fact along two of its dimensions.

    Each axis starts at the coarsest real granularity of its hierarchy
    (the parameter directly below All); the other linked dimensions are
    collapsed and no predicate is set.
    """
    fact = c.fact(fact_name)
    if row_dim == col_dim:
        raise AlreadyDisplayed("row and column dimensions must differ")
    for d in (row_dim, col_dim):
        if d not in fact.dims:
            raise DimensionNotLinked(f"dimension '{d}' is not linked to fact '{fact_name}'")
    rh = c.dimension(row_dim).hierarchy(row_hierarchy)
    ch = c.dimension(col_dim).hierarchy(col_hierarchy)
    return DimensionalTable(
        fact=fact_name,
        dims=_ordered_dims(fact, row_dim, col_dim),
        row_hierarchy=row_hierarchy,
        col_hierarchy=col_hierarchy,
        row_params=(rh.display_param,),
        col_params=(ch.display_param,),
    )


def _with_axis(
    t: DimensionalTable,
    axis: int,
    *,
    dim: Optional[str] = None,
    hierarchy: Optional[str] = None,
    params: Optional[tuple[str, ...]] = None,
    fact: Optional[model.Fact] = None,
) -> DimensionalTable:
    row_dim, col_dim = t.row_dim, t.col_dim
    if dim is not None:
        if axis == ROW:
            row_dim = dim
        else:
            col_dim = dim
    changes: dict = {}
    if fact is not None:
        changes["dims"] = _ordered_dims(fact, row_dim, col_dim)
    if hierarchy is not None:
        changes["row_hierarchy" if axis == ROW else "col_hierarchy"] = hierarchy
    if params is not None:
        changes["row_params" if axis == ROW else "col_params"] = params
    return replace(t, **changes)


def drilldown(c: model.Constellation, t: DimensionalTable, dim: str, param: str) -> DimensionalTable:
    """Extend an axis down to a finer parameter of its current hierarchy.

    Every level between the current finest displayed parameter and the
    target is displayed too, so the nested headers never skip levels.
    """
    axis = t.axis_of(dim)
    h = c.dimension(dim).hierarchy(t.hierarchy_of(axis))
    if param not in h.params:
        raise NotAParameter(f"'{param}' is not a parameter of hierarchy '{h.name}'")
    target = h.param_index(param)
    shown = t.params_of(axis)
    finest = h.param_index(shown[-1])
    if target >= finest:
        raise NotFiner(f"'{param}' is not finer than the displayed parameters of '{dim}'")
    base = [] if shown == (ALL_ATTR,) else list(shown)
    start = finest - 1 if base else len(h.params) - 2
    new_params = tuple(base + [h.params[i] for i in range(start, target - 1, -1)])
    return _with_axis(t, axis, params=new_params)


def rollup(c: model.Constellation, t: DimensionalTable, dim: str, param: str) -> DimensionalTable:
    """Truncate an axis so its finest displayed parameter is ``param``.

    Rolling up to All leaves a single 'all' header; rolling up to the
    current finest parameter is the identity.
    """
    axis = t.axis_of(dim)
    h = c.dimension(dim).hierarchy(t.hierarchy_of(axis))
    if param not in h.params:
        raise NotAParameter(f"'{param}' is not a parameter of hierarchy '{h.name}'")
    if param == model.ID_ATTR:
        raise NotAParameter(f"cannot roll '{dim}' up to the Id granularity")
    shown = t.params_of(axis)
    if param == ALL_ATTR:
        return _with_axis(t, axis, params=(ALL_ATTR,))
    if param not in shown:
        raise NotAParameter(
            f"'{param}' is finer than the displayed parameters of '{dim}'; use a drill instead"
        )
    new_params = shown[: shown.index(param) + 1]
    return _with_axis(t, axis, params=new_params)


def _drop_membership(preds: tuple[DimPredicate, ...], dim: str) -> tuple[DimPredicate, ...]:
    return tuple(p for p in preds if not (p.is_membership and p.dimension == dim))


def _declared_disjoint(c: model.Constellation, dim: str, h1: str, h2: str) -> Optional[cons.Constraint]:
    """A declared intra exclusion or partition covering the two hierarchies,
    if any (a partition implies an exclusion)."""
    for k in c.constraints:
        if k.scope != cons.INTRA or k.kind not in (cons.EXCLUSION, cons.PARTITION):
            continue
        if k.left.dimension != dim:
            continue
        if {k.left.hierarchy, k.right.hierarchy} == {h1, h2}:
            return k
    return None


def hrotate(
    c: model.Constellation,
    t: DimensionalTable,
    dim: str,
    old_hierarchy: str,
    new_hierarchy: str,
    flag: bool = False,
) -> DimensionalTable:
    """Switch the hierarchy through which a displayed dimension is seen.

    flag=False reinitializes the axis: the full member set of the new
    hierarchy contributes.  flag=True maintains the analysis by keeping a
    membership predicate on the old hierarchy, so only instances belonging
    to both hierarchies contribute; when a declared exclusion (or
    partition) makes that intersection provably empty, the table carries a
    non-fatal warning.
    """
    axis = t.axis_of(dim)
    if t.hierarchy_of(axis) != old_hierarchy:
        raise NotCurrentHierarchy(
            f"'{dim}' is currently displayed through '{t.hierarchy_of(axis)}', not '{old_hierarchy}'"
        )
    h_new = c.dimension(dim).hierarchy(new_hierarchy)
    preds = t.predicates
    warnings = t.warnings
    if flag:
        preds = preds + (DimPredicate(dimension=dim, hierarchy=old_hierarchy),)
        if old_hierarchy != new_hierarchy:
            declared = _declared_disjoint(c, dim, old_hierarchy, new_hierarchy)
            if declared is not None:
                warnings = warnings + (
                    "EmptyResultWarning: maintained rotation from "
                    f"'{old_hierarchy}' to '{new_hierarchy}' is empty under declared "
                    f"{declared.describe()}",
                )
    else:
        preds = _drop_membership(preds, dim)
    t2 = _with_axis(t, axis, hierarchy=new_hierarchy, params=(h_new.display_param,))
    return replace(t2, predicates=preds, warnings=warnings)


def drotate(
    c: model.Constellation,
    t: DimensionalTable,
    old_dim: str,
    new_dim: str,
    hierarchy: str,
    flag: bool = False,
) -> DimensionalTable:
    """Replace a displayed dimension with another dimension of the fact.

    The incoming dimension starts at the coarsest granularity of the given
    hierarchy and the outgoing one collapses to All.  flag=True maintains
    the analysis by materializing the outgoing hierarchy's membership
    condition as an attribute predicate on the outgoing dimension (visible
    in the footer); flag=False reinitializes the incoming dimension.
    """
    axis = t.axis_of(old_dim)
    fact = c.fact(t.fact)
    if new_dim not in fact.dims:
        raise DimensionNotLinked(f"dimension '{new_dim}' is not linked to fact '{t.fact}'")
    if new_dim in (t.row_dim, t.col_dim):
        raise AlreadyDisplayed(f"dimension '{new_dim}' is already displayed")
    h_new = c.dimension(new_dim).hierarchy(hierarchy)
    preds = t.predicates
    if flag:
        old_h = c.dimension(old_dim).hierarchy(t.hierarchy_of(axis))
        if not isinstance(old_h.cond, model.CondTrue):
            preds = preds + (DimPredicate(dimension=old_dim, cond=old_h.cond),)
    else:
        preds = _drop_membership(preds, new_dim)
    t2 = _with_axis(
        t, axis, dim=new_dim, hierarchy=hierarchy, params=(h_new.display_param,), fact=fact
    )
    return replace(t2, predicates=preds)


def with_mode(t: DimensionalTable, mode: str) -> DimensionalTable:
    if mode not in (STRICT, LEGACY):
        raise ValueError(f"unknown evaluation mode '{mode}'")
    return replace(t, mode=mode)


# ---------------------------------------------------------------------------
# Aggregation and cell computation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Aggregate:
    raw: Union[int, Fraction]
    display: str


def aggregate(spec: model.MeasureSpec, values: list) -> Aggregate:
    """Aggregate a non-empty group of measure values, exactly.

    Sums, minima and maxima stay exact integers or fractions; averages are
    exact fractions.  The display string applies the measure's rounding
    rule: DECIMAL renders with two fraction digits, INT averages round
    half away from zero to a whole number.
    """
    if not values:
        raise EmptyGroup(f"cannot aggregate an empty group for measure '{spec.name}'")
    agg = spec.agg
    if agg == "SUM":
        raw: Union[int, Fraction] = sum(values)
    elif agg == "AVG":
        raw = Fraction(sum(values), 1) / len(values)
    elif agg == "COUNT":
        raw = len(values)
    elif agg == "MIN":
        raw = min(values)
    elif agg == "MAX":
        raw = max(values)
    else:
        raise ValueError(f"unknown aggregation '{agg}'")

    if agg == "COUNT":
        display_text = str(raw)
    elif spec.kind == model.KIND_DECIMAL:
        display_text = model.format_decimal(raw)
    else:  # INT
        rounded = round_to_int(raw) if agg == "AVG" else raw
        display_text = str(int(rounded))
    return Aggregate(raw=raw, display=display_text)


def round_to_int(value: Union[int, Fraction]) -> int:
    return int(model.round_half_away(value, 0))


def _predicate_filter(c: model.Constellation, t: DimensionalTable):
    """Compile the table's predicates into a fact-instance filter."""
    compiled = []
    for p in t.predicates:
        dim = c.dimension(p.dimension)
        if p.is_membership:
            members = model.hierarchy_members(dim, p.hierarchy)
            compiled.append((p.dimension, lambda inst, m=members: inst.id in m))
        else:
            compiled.append((p.dimension, lambda inst, cond=p.cond: model.eval_condition(cond, inst)))

    def accept(fact_inst: model.FactInstance) -> bool:
        for dim_name, check in compiled:
            linked = c.dimension(dim_name).instance(fact_inst.links[dim_name])
            if not check(linked):
                return False
        return True

    return accept


def compute_cells(
    c: model.Constellation,
    t: DimensionalTable,
    *,
    allow_inconsistent: bool = False,
) -> CellGrid:
    """Group the fact instances by the displayed parameter values and
    aggregate every measure.

    Candidates are the fact instances satisfying every predicate; STRICT
    mode additionally requires the row/column linked instances to belong
    to the current hierarchies, while LEGACY mode keeps them and lets
    missing parameter values group under NULL headers.  Empty groups
    simply produce no cell.
    """
    if t.mode == STRICT and not allow_inconsistent and not cons.constellation_consistent(c):
        raise InconsistentStore(
            "store violates declared constraints; strict queries refuse to run "
            "(use the override to force evaluation)"
        )
    fact = c.fact(t.fact)
    row_dim = c.dimension(t.row_dim)
    col_dim = c.dimension(t.col_dim)
    accept = _predicate_filter(c, t)
    if t.mode == STRICT:
        row_members = model.hierarchy_members(row_dim, t.row_hierarchy)
        col_members = model.hierarchy_members(col_dim, t.col_hierarchy)

    groups: dict[tuple[tuple[Value, ...], tuple[Value, ...]], list[model.FactInstance]] = {}
    for inst in fact.instances:
        row_id = inst.links[t.row_dim]
        col_id = inst.links[t.col_dim]
        if t.mode == STRICT and (row_id not in row_members or col_id not in col_members):
            continue
        if not accept(inst):
            continue
        row_path = tuple(
            model.roll_value(row_dim, row_id, t.row_hierarchy, p, strict=False)
            for p in t.row_params
        )
        col_path = tuple(
            model.roll_value(col_dim, col_id, t.col_hierarchy, p, strict=False)
            for p in t.col_params
        )
        groups.setdefault((row_path, col_path), []).append(inst)

    cells: dict[tuple[tuple[Value, ...], tuple[Value, ...]], dict[str, Cell]] = {}
    for key, members in groups.items():
        cell: dict[str, Cell] = {}
        for spec in fact.measures:
            agg = aggregate(spec, [m.measures[spec.name] for m in members])
            cell[spec.name] = Cell(raw=agg.raw, display=agg.display, count=len(members))
        cells[key] = cell

    row_paths = sorted({rp for rp, _ in cells}, key=model.path_sort_key)
    col_paths = sorted({cp for _, cp in cells}, key=model.path_sort_key)
    return CellGrid(row_paths=tuple(row_paths), col_paths=tuple(col_paths), cells=cells)


# ---------------------------------------------------------------------------
# Footers and JSON serialization
# ---------------------------------------------------------------------------

def footers(c: model.Constellation, t: DimensionalTable) -> list[str]:
    """Footer lines: one per collapsed dimension (its predicates, or an
    All marker when unfiltered), then predicates on displayed dimensions."""
    lines = []
    for dim_name in t.dims[2:]:
        dim_preds = [p for p in t.predicates if p.dimension == dim_name]
        if dim_preds:
            lines.extend(p.text() for p in dim_preds)
        else:
            lines.append(f"{dim_name}.{ALL_ATTR} = '{ALL_VALUE}'")
    for p in t.predicates:
        if p.dimension in (t.row_dim, t.col_dim):
            lines.append(p.text())
    return lines


def value_to_json(v: Value):
    if isinstance(v, Fraction):
        return float(v)
    return v


def _cell_to_json(measures: Mapping[str, Cell]) -> dict:
    return {
        name: {
            "raw": value_to_json(cell.raw),
            "display": cell.display,
            "count": cell.count,
        }
        for name, cell in measures.items()
    }


def table_to_json(c: model.Constellation, t: DimensionalTable, grid: CellGrid) -> dict:
    """The documented JSON shape of a table with its computed grid."""
    return {
        "fact": t.fact,
        "mode": t.mode,
        "axes": {
            "row": {
                "dim": t.row_dim,
                "hierarchy": t.row_hierarchy,
                "params": list(t.row_params),
            },
            "col": {
                "dim": t.col_dim,
                "hierarchy": t.col_hierarchy,
                "params": list(t.col_params),
            },
        },
        "collapsed": list(t.dims[2:]),
        "predicates": [p.to_json() for p in t.predicates],
        "footers": footers(c, t),
        "headers": {
            "row": [[value_to_json(v) for v in path] for path in grid.row_paths],
            "col": [[value_to_json(v) for v in path] for path in grid.col_paths],
        },
        "cells": [
            {
                "rowPath": [value_to_json(v) for v in rp],
                "colPath": [value_to_json(v) for v in cp],
                "measures": _cell_to_json(grid.cells[(rp, cp)]),
            }
            for rp in grid.row_paths
            for cp in grid.col_paths
            if (rp, cp) in grid.cells
        ],
        "warnings": list(t.warnings),
    }
