"""Core multidimensional model: constellation schema and instance store.

A constellation groups facts (subjects of analysis carrying measures) and
dimensions (axes of analysis).  Each dimension owns several hierarchies; a
hierarchy is an acyclic parameter path from ``Id`` up to ``All`` together
with a membership condition selecting which dimension instances it covers.

Values are exact: integers stay ``int``, decimal data is held as
``fractions.Fraction`` so that aggregation never loses cents.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Union

from .errors import (
    NotMember,
    UnknownAttribute,
    UnknownHierarchy,
    UnknownInstance,
    UnknownParam,
)

# An attribute or measure value.  None models NULL; "all" is the single
# value of the implicit All attribute.
Value = Union[None, str, int, Fraction]

ID_ATTR = "Id"
ALL_ATTR = "All"
ALL_VALUE = "all"

KIND_STRING = "STRING"
KIND_INT = "INT"
KIND_DECIMAL = "DECIMAL"
ATTRIBUTE_KINDS = (KIND_STRING, KIND_INT, KIND_DECIMAL)

AGGREGATIONS = ("SUM", "AVG", "COUNT", "MIN", "MAX")

COMPARISON_OPS = ("=", "!=", "<", "<=", ">", ">=")


# ---------------------------------------------------------------------------
# Condition expression trees
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CondTrue:
    """The identity condition: every instance is a member."""


@dataclass(frozen=True)
class Comparison:
    attribute: str
    op: str
    literal: Value


@dataclass(frozen=True)
class NullTest:
    attribute: str
    negated: bool  # True renders as IS NOT NULL


@dataclass(frozen=True)
class And:
    left: "Condition"
    right: "Condition"


@dataclass(frozen=True)
class Or:
    left: "Condition"
    right: "Condition"


@dataclass(frozen=True)
class Not:
    child: "Condition"


Condition = Union[CondTrue, Comparison, NullTest, And, Or, Not]

TRUE = CondTrue()


def _compare(left: Value, op: str, right: Value) -> Optional[bool]:
    """Three-valued comparison; None means unknown (a NULL was involved)."""
    if left is None or right is None:
        return None
    left_num = isinstance(left, (int, Fraction))
    right_num = isinstance(right, (int, Fraction))
    if left_num != right_num:
        # String compared against a number: never equal, never ordered.
        return op == "!="
    if op == "=":
        return left == right
    if op == "!=":
        return left != right
    if op == "<":
        return left < right
    if op == "<=":
        return left <= right
    if op == ">":
        return left > right
    return left >= right


def _eval3(cond: Condition, values: Mapping[str, Value]) -> Optional[bool]:
    if isinstance(cond, CondTrue):
        return True
    if isinstance(cond, Comparison):
        if cond.attribute not in values:
            raise UnknownAttribute(f"condition references unknown attribute '{cond.attribute}'")
        return _compare(values[cond.attribute], cond.op, cond.literal)
    if isinstance(cond, NullTest):
        if cond.attribute not in values:
            raise UnknownAttribute(f"condition references unknown attribute '{cond.attribute}'")
        is_null = values[cond.attribute] is None
        return (not is_null) if cond.negated else is_null
    if isinstance(cond, Not):
        inner = _eval3(cond.child, values)
        return None if inner is None else not inner
    if isinstance(cond, And):
        left = _eval3(cond.left, values)
        if left is False:
            return False
        right = _eval3(cond.right, values)
        if right is False:
            return False
        return None if (left is None or right is None) else True
    if isinstance(cond, Or):
        left = _eval3(cond.left, values)
        if left is True:
            return True
        right = _eval3(cond.right, values)
        if right is True:
            return True
        return None if (left is None or right is None) else False
    raise TypeError(f"not a condition node: {cond!r}")


def eval_condition(cond: Condition, inst: "DimInstance") -> bool:
    """Evaluate a membership condition against a dimension instance.

    The result is always two-valued.  Comparisons touching NULL are
    unknown internally and collapse to False at the boundary, which gives
    the documented asymmetry: with a NULL attribute x, both ``x = v`` and
    ``NOT (x = v)`` evaluate to False.  ``IS NULL`` / ``IS NOT NULL`` are
    the only direct null tests.
    """
    return _eval3(cond, inst.values) is True


def format_value(v: Value) -> str:
    """Render a value the way tables and footers print it."""
    if v is None:
        return "NULL"
    if isinstance(v, Fraction):
        return format_decimal(v)
    return str(v)


def format_literal(v: Value) -> str:
    """Render a condition literal in source syntax (strings quoted)."""
    if isinstance(v, str):
        return "'" + v.replace("'", "''") + "'"
    return format_value(v)


def _needs_parens(child: Condition, parent: str) -> bool:
    if parent == "NOT":
        return isinstance(child, (And, Or))
    if parent == "AND":
        return isinstance(child, Or)
    return False


def condition_text(cond: Condition, attr_prefix: str = "") -> str:
    """Render a condition in the schema language's WHEN syntax.

    ``attr_prefix`` (e.g. ``"AGENCES."``) qualifies attribute names, which
    is how predicates appear in table footers.
    """
    if isinstance(cond, CondTrue):
        return "TRUE"
    if isinstance(cond, Comparison):
        return f"{attr_prefix}{cond.attribute} {cond.op} {format_literal(cond.literal)}"
    if isinstance(cond, NullTest):
        verb = "IS NOT NULL" if cond.negated else "IS NULL"
        return f"{attr_prefix}{cond.attribute} {verb}"
    if isinstance(cond, Not):
        inner = condition_text(cond.child, attr_prefix)
        if _needs_parens(cond.child, "NOT"):
            inner = f"({inner})"
        return f"NOT {inner}"
    if isinstance(cond, (And, Or)):
        word = "AND" if isinstance(cond, And) else "OR"
        parts = []
        for side in (cond.left, cond.right):
            text = condition_text(side, attr_prefix)
            if _needs_parens(side, word):
                text = f"({text})"
            parts.append(text)
        return f" {word} ".join(parts)
    raise TypeError(f"not a condition node: {cond!r}")


def condition_attributes(cond: Condition) -> set[str]:
    """All attribute names a condition refers to."""
    if isinstance(cond, (Comparison, NullTest)):
        return {cond.attribute}
    if isinstance(cond, Not):
        return condition_attributes(cond.child)
    if isinstance(cond, (And, Or)):
        return condition_attributes(cond.left) | condition_attributes(cond.right)
    return set()


# ---------------------------------------------------------------------------
# Schema types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Hierarchy:
    """A granularity path ``Id -> ... -> All`` with weak attributes and a
    membership condition."""

    name: str
    params: tuple[str, ...]
    weak: Mapping[str, tuple[str, ...]] = field(default_factory=dict)
    cond: Condition = TRUE

    def param_index(self, param: str) -> int:
        try:
            return self.params.index(param)
        except ValueError:
            raise UnknownParam(f"'{param}' is not a parameter of hierarchy '{self.name}'") from None

    @property
    def display_param(self) -> str:
        """The coarsest real parameter, i.e. the one directly below All."""
        return self.params[-2]


@dataclass(frozen=True)
class DimInstance:
    id: str
    values: Mapping[str, Value]


@dataclass
class Dimension:
    """An axis of analysis.

    ``attributes`` holds the user-declared attributes (name -> kind) in
    declaration order; ``Id`` and ``All`` are implicit and always present.
    """

    name: str
    attributes: dict[str, str]
    hierarchies: dict[str, Hierarchy] = field(default_factory=dict)
    instances: dict[str, DimInstance] = field(default_factory=dict)

    def has_attribute(self, name: str) -> bool:
        return name in (ID_ATTR, ALL_ATTR) or name in self.attributes

    def all_attribute_names(self) -> tuple[str, ...]:
        return (ID_ATTR, *self.attributes.keys(), ALL_ATTR)

    def hierarchy(self, name: str) -> Hierarchy:
        try:
            return self.hierarchies[name]
        except KeyError:
            raise UnknownHierarchy(f"dimension '{self.name}' has no hierarchy '{name}'") from None

    def instance(self, inst_id: str) -> DimInstance:
        try:
            return self.instances[inst_id]
        except KeyError:
            raise UnknownInstance(f"dimension '{self.name}' has no instance '{inst_id}'") from None


@dataclass(frozen=True)
class MeasureSpec:
    name: str
    kind: str  # INT or DECIMAL
    agg: str   # SUM | AVG | COUNT | MIN | MAX


@dataclass(frozen=True)
class FactInstance:
    measures: Mapping[str, Value]
    links: Mapping[str, str]


@dataclass
class Fact:
    name: str
    measures: tuple[MeasureSpec, ...]
    dims: tuple[str, ...]
    instances: list[FactInstance] = field(default_factory=list)

    def measure(self, name: str) -> MeasureSpec:
        for m in self.measures:
            if m.name == name:
                return m
        raise UnknownAttribute(f"fact '{self.name}' has no measure '{name}'")


@dataclass
class Constellation:
    """Schema plus data universe.

    A constellation is treated as an immutable snapshot once built: loaders
    produce a new constellation instead of mutating one in place, so any
    number of readers can share a snapshot.  ``consistent`` caches the
    outcome of checking every declared constraint (None = not yet checked).
    """

    name: str
    dimensions: dict[str, Dimension] = field(default_factory=dict)
    facts: dict[str, Fact] = field(default_factory=dict)
    constraints: tuple = ()
    consistent: Optional[bool] = None

    def dimension(self, name: str) -> Dimension:
        try:
            return self.dimensions[name]
        except KeyError:
            from .errors import UnknownDimension

            raise UnknownDimension(f"no dimension named '{name}'") from None

    def fact(self, name: str) -> Fact:
        try:
            return self.facts[name]
        except KeyError:
            from .errors import UnknownFact

            raise UnknownFact(f"no fact named '{name}'") from None


def make_instance(dim: Dimension, inst_id: str, values: Mapping[str, Value]) -> DimInstance:
    """Build a DimInstance assigning every declared attribute (missing ones
    become NULL) plus the implicit Id and All."""
    full: dict[str, Value] = {ID_ATTR: inst_id}
    for attr in dim.attributes:
        full[attr] = values.get(attr)
    full[ALL_ATTR] = ALL_VALUE
    return DimInstance(id=inst_id, values=full)


def canonical_id(raw: Union[str, int]) -> str:
    """Instance identifiers are strings; integers canonicalize to their
    decimal form ('007' -> '7')."""
    if isinstance(raw, int):
        return str(raw)
    text = raw.strip()
    if text and (text.isdigit() or (text[0] == "-" and text[1:].isdigit())):
        return str(int(text))
    return text


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def hierarchy_members(dim: Dimension, hierarchy_name: str) -> set[str]:
    """Identifiers of the instances satisfying the hierarchy's condition."""
    h = dim.hierarchy(hierarchy_name)
    return {inst_id for inst_id, inst in dim.instances.items() if eval_condition(h.cond, inst)}


def roll_value(
    dim: Dimension,
    inst_id: str,
    hierarchy_name: str,
    param: str,
    strict: bool = True,
) -> Value:
    """Project an instance onto one granularity level of a hierarchy.

    In strict mode the instance must belong to the hierarchy; non-strict
    projection is what legacy-mode grouping uses, where out-of-hierarchy
    instances surface NULL levels.
    """
    h = dim.hierarchy(hierarchy_name)
    h.param_index(param)
    inst = dim.instance(inst_id)
    if strict and not eval_condition(h.cond, inst):
        raise NotMember(
            f"instance '{inst_id}' is not a member of hierarchy '{hierarchy_name}' of '{dim.name}'"
        )
    if param == ALL_ATTR:
        return ALL_VALUE
    return inst.values[param]


# ---------------------------------------------------------------------------
# Schema validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReportEntry:
    severity: str  # "error" or "info"
    code: str
    message: str

    def to_json(self) -> dict:
        return {"severity": self.severity, "code": self.code, "message": self.message}


@dataclass
class ValidationReport:
    entries: list[ReportEntry] = field(default_factory=list)

    @property
    def violations(self) -> list[ReportEntry]:
        return [e for e in self.entries if e.severity == "error"]

    @property
    def notes(self) -> list[ReportEntry]:
        return [e for e in self.entries if e.severity == "info"]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "violations": [e.to_json() for e in self.violations],
            "notes": [e.to_json() for e in self.notes],
        }


def _check_hierarchy(dim: Dimension, h: Hierarchy, add) -> None:
    if len(h.params) < 2 or h.params[0] != ID_ATTR or h.params[-1] != ALL_ATTR:
        add("bad-path", f"hierarchy '{dim.name}.{h.name}' must run from Id to All")
    seen: set[str] = set()
    for p in h.params:
        if p in seen:
            add("repeated-parameter", f"hierarchy '{dim.name}.{h.name}' repeats parameter '{p}'")
        seen.add(p)
        if not dim.has_attribute(p):
            add(
                "unknown-parameter",
                f"hierarchy '{dim.name}.{h.name}' uses undeclared attribute '{p}'",
            )
    for param, weak_attrs in h.weak.items():
        if param not in h.params:
            add(
                "weak-on-non-parameter",
                f"hierarchy '{dim.name}.{h.name}' attaches weak attributes to non-parameter '{param}'",
            )
        for wa in weak_attrs:
            if wa in h.params:
                add(
                    "weak-overlaps-parameters",
                    f"hierarchy '{dim.name}.{h.name}' declares parameter '{wa}' as weak",
                )
            elif not dim.has_attribute(wa):
                add(
                    "unknown-weak-attribute",
                    f"hierarchy '{dim.name}.{h.name}' references undeclared weak attribute '{wa}'",
                )
    for attr in condition_attributes(h.cond):
        if not dim.has_attribute(attr):
            add(
                "unknown-condition-attribute",
                f"condition of '{dim.name}.{h.name}' references undeclared attribute '{attr}'",
            )


def validate_schema(c: Constellation) -> ValidationReport:
    """Structural validation; every problem becomes a report entry.

    An empty report (no error entries) means the schema is well formed.
    Instances that satisfy no hierarchy's condition are legal but invisible
    to strict-mode queries, so they are surfaced as informational notes.
    """
    report = ValidationReport()

    def err(code: str, message: str) -> None:
        report.entries.append(ReportEntry("error", code, message))

    def info(code: str, message: str) -> None:
        report.entries.append(ReportEntry("info", code, message))

    for dim in c.dimensions.values():
        for reserved in (ID_ATTR, ALL_ATTR):
            if reserved in dim.attributes:
                err("reserved-attribute", f"dimension '{dim.name}' declares implicit attribute '{reserved}'")
        for attr, kind in dim.attributes.items():
            if kind not in ATTRIBUTE_KINDS:
                err("bad-kind", f"attribute '{dim.name}.{attr}' has unknown kind '{kind}'")
        if not dim.hierarchies:
            err("no-hierarchy", f"dimension '{dim.name}' declares no hierarchy")
        for h in dim.hierarchies.values():
            _check_hierarchy(dim, h, err)
        for inst_id, inst in dim.instances.items():
            if inst.values.get(ID_ATTR) != inst_id:
                err("id-mismatch", f"instance '{dim.name}/{inst_id}' stores Id {inst.values.get(ID_ATTR)!r}")
            if inst.values.get(ALL_ATTR) != ALL_VALUE:
                err("bad-all-value", f"instance '{dim.name}/{inst_id}' has All = {inst.values.get(ALL_ATTR)!r}")
            missing = [a for a in dim.attributes if a not in inst.values]
            if missing:
                err(
                    "missing-attribute-values",
                    f"instance '{dim.name}/{inst_id}' lacks values for {sorted(missing)}",
                )
        orphan_ids = set(dim.instances)
        for h in dim.hierarchies.values():
            try:
                orphan_ids -= hierarchy_members(dim, h.name)
            except UnknownAttribute:
                pass  # already reported above
            if not orphan_ids:
                break
        for inst_id in sorted(orphan_ids):
            info(
                "orphan-instance",
                f"instance '{dim.name}/{inst_id}' belongs to no hierarchy and is invisible to strict queries",
            )

    for fact in c.facts.values():
        if not fact.dims:
            err("no-linked-dimensions", f"fact '{fact.name}' links no dimension")
        if len(set(fact.dims)) != len(fact.dims):
            err("duplicate-linked-dimension", f"fact '{fact.name}' links a dimension twice")
        for dname in fact.dims:
            if dname not in c.dimensions:
                err("dangling-dimension", f"fact '{fact.name}' links unknown dimension '{dname}'")
        for m in fact.measures:
            if m.kind not in (KIND_INT, KIND_DECIMAL):
                err("non-numeric-measure", f"measure '{fact.name}.{m.name}' must be INT or DECIMAL")
            if m.agg not in AGGREGATIONS:
                err("bad-aggregation", f"measure '{fact.name}.{m.name}' has unknown aggregation '{m.agg}'")
        for idx, inst in enumerate(fact.instances):
            if set(inst.links) != set(fact.dims):
                err(
                    "link-mismatch",
                    f"instance #{idx} of fact '{fact.name}' must link exactly {list(fact.dims)}",
                )
                continue
            for dname, target in inst.links.items():
                dim = c.dimensions.get(dname)
                if dim is not None and target not in dim.instances:
                    err(
                        "dangling-link",
                        f"instance #{idx} of fact '{fact.name}' links missing '{dname}' instance '{target}'",
                    )
            missing = [m.name for m in fact.measures if inst.measures.get(m.name) is None]
            if missing:
                err(
                    "missing-measure-values",
                    f"instance #{idx} of fact '{fact.name}' lacks values for {missing}",
                )

    for k in c.constraints:
        for problem in _constraint_problems(c, k):
            err("bad-constraint", problem)

    return report


def _constraint_problems(c: Constellation, k) -> Iterable[str]:
    """Structural problems of one constraint declaration (shared with the
    constraint checker, which reports them as failed results)."""
    desc = k.describe()
    for ref in (k.left, k.right):
        dim = c.dimensions.get(ref.dimension)
        if dim is None:
            yield f"{desc}: unknown dimension '{ref.dimension}'"
        elif ref.hierarchy not in dim.hierarchies:
            yield f"{desc}: dimension '{ref.dimension}' has no hierarchy '{ref.hierarchy}'"
    if k.scope == "INTRA":
        if k.left.dimension != k.right.dimension:
            yield f"{desc}: intra constraint must stay within one dimension"
        elif k.left.hierarchy == k.right.hierarchy:
            yield f"{desc}: intra constraint needs two distinct hierarchies"
    else:
        if k.fact is None:
            yield f"{desc}: inter constraint must name a fact"
        elif k.fact not in c.facts:
            yield f"{desc}: unknown fact '{k.fact}'"
        else:
            fact = c.facts[k.fact]
            for ref in (k.left, k.right):
                if ref.dimension in c.dimensions and ref.dimension not in fact.dims:
                    yield f"{desc}: dimension '{ref.dimension}' is not linked to fact '{k.fact}'"
            if k.left.dimension == k.right.dimension:
                yield f"{desc}: inter constraint needs two distinct dimensions"


# ---------------------------------------------------------------------------
# Numeric helpers
# ---------------------------------------------------------------------------

def parse_decimal(text: str) -> Fraction:
    return Fraction(text)


def round_half_away(value: Union[int, Fraction], digits: int = 0) -> Fraction:
    """Round half away from zero at the given number of fraction digits."""
    scale = 10 ** digits
    scaled = Fraction(value) * scale
    q, r = divmod(abs(scaled.numerator), scaled.denominator)
    if 2 * r >= scaled.denominator:
        q += 1
    if scaled < 0:
        q = -q
    return Fraction(q, scale)


def format_decimal(value: Union[int, Fraction]) -> str:
    """Two-fraction-digit rendering with half-away-from-zero rounding."""
    cents = round_half_away(value, 2) * 100
    n = int(cents)
    sign = "-" if n < 0 else ""
    n = abs(n)
    return f"{sign}{n // 100}.{n % 100:02d}"


def sort_key(v: Value):
    """Deterministic ordering for header values: numbers first (numeric
    order), then strings (byte order), NULL last."""
    if v is None:
        return (2, 0)
    if isinstance(v, (int, Fraction)):
        return (0, Fraction(v))
    return (1, v.encode("utf-8"))


def path_sort_key(path: tuple[Value, ...]):
    return tuple(sort_key(v) for v in path)
