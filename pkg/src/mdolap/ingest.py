"""CSV ingestion and JSON snapshots.

Dimension files carry a header naming a subset of the declared attributes
(Id mandatory, All forbidden); fact files carry one column per measure and
one ``<DimName>_id`` column per linked dimension.  Empty fields are NULL.
Loading is functional: a loader returns a new constellation snapshot plus
a report, so a failed load leaves the previous snapshot untouched and
readers never observe a partial state.

Snapshots serialize the whole constellation (schema, instances,
constraints, consistency status) to a deterministic JSON document:
saving, reloading and saving again is byte-identical.
"""

from __future__ import annotations

import csv
import json
import threading
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Optional, TextIO, Union

from . import constraints as cons
from . import dsl, model
from .errors import (
    LoadError,
    MissingIdColumn,
    MissingLinkColumn,
    MissingMeasureColumn,
    SnapshotError,
    UnknownColumn,
)

SNAPSHOT_FORMAT = "mdolap-snapshot"
SNAPSHOT_VERSION = 1

Source = Union[str, Path, TextIO]


@dataclass
class LoadReport:
    rows_read: int = 0
    rows_loaded: int = 0
    rejected: list[tuple[int, str]] = field(default_factory=list)  # (line number, reason)
    consistent: Optional[bool] = None

    @property
    def rows_rejected(self) -> int:
        return len(self.rejected)

    def to_json(self) -> dict:
        return {
            "rowsRead": self.rows_read,
            "rowsLoaded": self.rows_loaded,
            "rejected": [{"line": line, "reason": reason} for line, reason in self.rejected],
            "consistent": self.consistent,
        }


def _open_text(source: Source) -> TextIO:
    if isinstance(source, (str, Path)):
        return open(source, "r", encoding="utf-8", newline="")
    return source


def _parse_value(raw: str, kind: str, where: str) -> model.Value:
    if raw == "":
        return None
    if kind == model.KIND_STRING:
        return raw
    if kind == model.KIND_INT:
        try:
            return int(raw)
        except ValueError:
            raise ValueError(f"{where}: '{raw}' is not an integer") from None
    try:
        return Fraction(raw)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"{where}: '{raw}' is not a decimal") from None


def load_dimension_csv(
    c: model.Constellation, dim_name: str, source: Source
) -> tuple[model.Constellation, LoadReport]:
    """Load dimension instances; returns the new snapshot and a report.

    Rows with a duplicate or missing identifier, or a value that does not
    fit its attribute kind, are rejected individually with a reason.
    """
    dim = c.dimension(dim_name)
    report = LoadReport()
    fh = _open_text(source)
    close = isinstance(source, (str, Path))
    try:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise MissingIdColumn(f"dimension file for '{dim_name}' is empty") from None
        if model.ALL_ATTR in header:
            raise UnknownColumn(f"column '{model.ALL_ATTR}' is implicit and must not appear")
        if model.ID_ATTR not in header:
            raise MissingIdColumn(f"dimension file for '{dim_name}' lacks an Id column")
        for col in header:
            if col != model.ID_ATTR and col not in dim.attributes:
                raise UnknownColumn(f"dimension '{dim_name}' has no attribute '{col}'")
        if len(set(header)) != len(header):
            raise UnknownColumn("duplicate column in header")

        instances = dict(dim.instances)
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            report.rows_read += 1
            if len(row) != len(header):
                report.rejected.append((line_no, f"expected {len(header)} fields, got {len(row)}"))
                continue
            record = dict(zip(header, row))
            raw_id = record.pop(model.ID_ATTR)
            if raw_id.strip() == "":
                report.rejected.append((line_no, "missing id"))
                continue
            inst_id = model.canonical_id(raw_id)
            if inst_id in instances:
                report.rejected.append((line_no, f"duplicate id '{inst_id}'"))
                continue
            try:
                values = {
                    attr: _parse_value(record.get(attr, ""), kind, f"attribute '{attr}'")
                    for attr, kind in dim.attributes.items()
                }
            except ValueError as exc:
                report.rejected.append((line_no, str(exc)))
                continue
            instances[inst_id] = model.make_instance(dim, inst_id, values)
            report.rows_loaded += 1
    finally:
        if close:
            fh.close()

    new_dim = replace(dim, instances=instances)
    new_c = replace(
        c, dimensions={**c.dimensions, dim_name: new_dim}, consistent=None
    )
    return new_c, report


def load_fact_csv(
    c: model.Constellation, fact_name: str, source: Source
) -> tuple[model.Constellation, LoadReport]:
    """Load fact instances; the new snapshot records its consistency status.

    Rows with dangling dimension links or missing/unparsable measure
    values are rejected individually.
    """
    fact = c.fact(fact_name)
    report = LoadReport()
    link_cols = {d: f"{d}_id" for d in fact.dims}
    fh = _open_text(source)
    close = isinstance(source, (str, Path))
    try:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise MissingMeasureColumn(f"fact file for '{fact_name}' is empty") from None
        for m in fact.measures:
            if m.name not in header:
                raise MissingMeasureColumn(f"fact file lacks measure column '{m.name}'")
        for d, col in link_cols.items():
            if col not in header:
                raise MissingLinkColumn(f"fact file lacks link column '{col}'")
        expected = {m.name for m in fact.measures} | set(link_cols.values())
        for col in header:
            if col not in expected:
                raise UnknownColumn(f"fact '{fact_name}' has no column '{col}'")
        if len(set(header)) != len(header):
            raise UnknownColumn("duplicate column in header")

        instances = list(fact.instances)
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            report.rows_read += 1
            if len(row) != len(header):
                report.rejected.append((line_no, f"expected {len(header)} fields, got {len(row)}"))
                continue
            record = dict(zip(header, row))
            try:
                measures = {}
                for m in fact.measures:
                    v = _parse_value(record[m.name], m.kind, f"measure '{m.name}'")
                    if v is None:
                        raise ValueError(f"measure '{m.name}' has no value")
                    measures[m.name] = v
            except ValueError as exc:
                report.rejected.append((line_no, str(exc)))
                continue
            links = {}
            bad_link = None
            for d, col in link_cols.items():
                target = model.canonical_id(record[col])
                if target not in c.dimension(d).instances:
                    bad_link = f"dangling link: no '{d}' instance '{target}'"
                    break
                links[d] = target
            if bad_link:
                report.rejected.append((line_no, bad_link))
                continue
            instances.append(model.FactInstance(measures=measures, links=links))
            report.rows_loaded += 1
    finally:
        if close:
            fh.close()

    new_fact = replace(fact, instances=instances)
    new_c = replace(c, facts={**c.facts, fact_name: new_fact}, consistent=None)
    report.consistent = cons.constellation_consistent(new_c)
    return new_c, report


# ---------------------------------------------------------------------------
# Snapshots
# ---------------------------------------------------------------------------

def _value_out(v: model.Value):
    if isinstance(v, Fraction):
        return model.format_decimal(v)
    return v


def _value_in(raw, kind: str) -> model.Value:
    if raw is None:
        return None
    if kind == model.KIND_DECIMAL:
        return Fraction(str(raw))
    return raw


def _hierarchy_out(h: model.Hierarchy) -> dict:
    return {
        "name": h.name,
        "params": list(h.params),
        "weak": [{"param": p, "attrs": list(attrs)} for p, attrs in h.weak.items()],
        "when": model.condition_text(h.cond),
    }


def snapshot_to_json(c: model.Constellation) -> dict:
    return {
        "format": SNAPSHOT_FORMAT,
        "version": SNAPSHOT_VERSION,
        "name": c.name,
        "dimensions": [
            {
                "name": d.name,
                "attributes": [{"name": a, "kind": k} for a, k in d.attributes.items()],
                "hierarchies": [_hierarchy_out(h) for h in d.hierarchies.values()],
                "instances": [
                    {
                        "id": inst.id,
                        "values": {a: _value_out(inst.values[a]) for a in d.attributes},
                    }
                    for inst in d.instances.values()
                ],
            }
            for d in c.dimensions.values()
        ],
        "facts": [
            {
                "name": f.name,
                "measures": [
                    {"name": m.name, "kind": m.kind, "agg": m.agg} for m in f.measures
                ],
                "dimensions": list(f.dims),
                "instances": [
                    {
                        "measures": {m.name: _value_out(inst.measures[m.name]) for m in f.measures},
                        "links": {d: inst.links[d] for d in f.dims},
                    }
                    for inst in f.instances
                ],
            }
            for f in c.facts.values()
        ],
        "constraints": [k.to_json() for k in c.constraints],
        "consistent": c.consistent,
    }


def snapshot_save(c: model.Constellation, sink: Source) -> None:
    text = json.dumps(snapshot_to_json(c), ensure_ascii=False, indent=1)
    if isinstance(sink, (str, Path)):
        Path(sink).write_text(text + "\n", encoding="utf-8")
    else:
        sink.write(text + "\n")


def _need(obj: dict, key: str, where: str):
    if key not in obj:
        raise SnapshotError(f"malformed snapshot: {where} lacks '{key}'")
    return obj[key]


def snapshot_load(source: Source) -> model.Constellation:
    """Rebuild a constellation from a snapshot; malformed input raises
    SnapshotError and no partial store escapes."""
    if isinstance(source, (str, Path)):
        text = Path(source).read_text(encoding="utf-8")
    else:
        text = source.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SnapshotError(f"malformed snapshot: {exc}") from None
    if not isinstance(doc, dict) or doc.get("format") != SNAPSHOT_FORMAT:
        raise SnapshotError("malformed snapshot: not an mdolap snapshot document")
    if doc.get("version") != SNAPSHOT_VERSION:
        raise SnapshotError(f"unsupported snapshot version {doc.get('version')!r}")

    dimensions: dict[str, model.Dimension] = {}
    for dd in _need(doc, "dimensions", "document"):
        attrs = {a["name"]: a["kind"] for a in _need(dd, "attributes", "dimension")}
        hierarchies = {}
        for hd in _need(dd, "hierarchies", "dimension"):
            try:
                cond = dsl.parse_condition_text(_need(hd, "when", "hierarchy"))
            except ValueError as exc:
                raise SnapshotError(f"malformed snapshot: {exc}") from None
            hierarchies[hd["name"]] = model.Hierarchy(
                name=_need(hd, "name", "hierarchy"),
                params=tuple(_need(hd, "params", "hierarchy")),
                weak={w["param"]: tuple(w["attrs"]) for w in hd.get("weak", [])},
                cond=cond,
            )
        dim = model.Dimension(
            name=_need(dd, "name", "dimension"), attributes=attrs, hierarchies=hierarchies
        )
        for idoc in dd.get("instances", []):
            inst_id = str(_need(idoc, "id", "instance"))
            values = {
                a: _value_in(idoc["values"].get(a), kind) for a, kind in attrs.items()
            }
            dim.instances[inst_id] = model.make_instance(dim, inst_id, values)
        dimensions[dim.name] = dim

    facts: dict[str, model.Fact] = {}
    for fd in _need(doc, "facts", "document"):
        measures = tuple(
            model.MeasureSpec(name=m["name"], kind=m["kind"], agg=m["agg"])
            for m in _need(fd, "measures", "fact")
        )
        fact = model.Fact(
            name=_need(fd, "name", "fact"),
            measures=measures,
            dims=tuple(_need(fd, "dimensions", "fact")),
        )
        for idoc in fd.get("instances", []):
            fact.instances.append(
                model.FactInstance(
                    measures={
                        m.name: _value_in(_need(idoc, "measures", "fact instance").get(m.name), m.kind)
                        for m in measures
                    },
                    links={d: str(v) for d, v in _need(idoc, "links", "fact instance").items()},
                )
            )
        facts[fact.name] = fact

    constraint_list = []
    for kd in doc.get("constraints", []):
        constraint_list.append(
            cons.Constraint(
                kind=_need(kd, "kind", "constraint"),
                scope=_need(kd, "scope", "constraint"),
                left=cons.HierarchyRef(kd["left"]["dimension"], kd["left"]["hierarchy"]),
                right=cons.HierarchyRef(kd["right"]["dimension"], kd["right"]["hierarchy"]),
                fact=kd.get("fact"),
            )
        )

    return model.Constellation(
        name=_need(doc, "name", "document"),
        dimensions=dimensions,
        facts=facts,
        constraints=tuple(constraint_list),
        consistent=doc.get("consistent"),
    )


# ---------------------------------------------------------------------------
# Store: one published snapshot, swapped atomically
# ---------------------------------------------------------------------------

class Store:
    """Holds the current snapshot.  Loads are exclusive; readers keep the
    snapshot they grabbed until they ask again."""

    def __init__(self, constellation: Optional[model.Constellation] = None):
        self._lock = threading.Lock()
        self._current = constellation

    @property
    def snapshot(self) -> Optional[model.Constellation]:
        return self._current

    def load_dimension_csv(self, dim_name: str, source: Source) -> LoadReport:
        with self._lock:
            new_c, report = load_dimension_csv(self._require(), dim_name, source)
            self._current = new_c
            return report

    def load_fact_csv(self, fact_name: str, source: Source) -> LoadReport:
        with self._lock:
            new_c, report = load_fact_csv(self._require(), fact_name, source)
            self._current = new_c
            return report

    def _require(self) -> model.Constellation:
        if self._current is None:
            raise LoadError("no schema loaded")
        return self._current


def build_from_directory(
    c: model.Constellation, data_dir: Union[str, Path]
) -> tuple[model.Constellation, dict[str, LoadReport]]:
    """Load every dimension and fact whose CSV file exists in a directory.

    Files are matched by lowercased name (``agences.csv`` for AGENCES);
    dimensions load before facts.
    """
    data_dir = Path(data_dir)
    reports: dict[str, LoadReport] = {}
    for dim_name in c.dimensions:
        path = data_dir / f"{dim_name.lower()}.csv"
        if path.exists():
            c, reports[dim_name] = load_dimension_csv(c, dim_name, path)
    for fact_name in c.facts:
        path = data_dir / f"{fact_name.lower()}.csv"
        if path.exists():
            c, reports[fact_name] = load_fact_csv(c, fact_name, path)
    return c, reports
