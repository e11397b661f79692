"""Semantic constraints between hierarchies and their checker.

Five constraint kinds (exclusion, inclusion, simultaneity, totality,
partition) apply in two scopes: intra-dimension constraints relate the
member sets of two hierarchies of one dimension; inter-dimension
constraints relate two hierarchies of distinct dimensions through the
instances of a fact linking both.

Checks are pure reads over a constellation snapshot and produce
witness-carrying results; they never mutate or reject data.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import model
from .errors import DimensionNotLinked, UnknownDimension, UnknownFact, UnknownHierarchy

EXCLUSION = "EXCLUSION"
INCLUSION = "INCLUSION"
SIMULTANEITY = "SIMULTANEITY"
TOTALITY = "TOTALITY"
PARTITION = "PARTITION"
KINDS = (EXCLUSION, INCLUSION, SIMULTANEITY, TOTALITY, PARTITION)

INTRA = "INTRA"
INTER = "INTER"

DEFAULT_WITNESS_LIMIT = 100


@dataclass(frozen=True)
class HierarchyRef:
    dimension: str
    hierarchy: str

    def __str__(self) -> str:
        return f"{self.dimension}.{self.hierarchy}"

    def to_json(self) -> dict:
        return {"dimension": self.dimension, "hierarchy": self.hierarchy}


@dataclass(frozen=True)
class Constraint:
    kind: str
    scope: str
    left: HierarchyRef
    right: HierarchyRef
    fact: Optional[str] = None  # required iff scope == INTER

    def describe(self) -> str:
        if self.scope == INTRA:
            return f"{self.kind}({self.left.dimension}: {self.left.hierarchy}, {self.right.hierarchy})"
        return f"{self.kind}[{self.fact}]({self.left}, {self.right})"

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "scope": self.scope,
            "fact": self.fact,
            "left": self.left.to_json(),
            "right": self.right.to_json(),
        }


def intra(kind: str, dimension: str, left: str, right: str) -> Constraint:
    return Constraint(kind, INTRA, HierarchyRef(dimension, left), HierarchyRef(dimension, right))


def inter(kind: str, fact: str, left_dim: str, left_h: str, right_dim: str, right_h: str) -> Constraint:
    return Constraint(kind, INTER, HierarchyRef(left_dim, left_h), HierarchyRef(right_dim, right_h), fact)


@dataclass(frozen=True)
class ConstraintResult:
    constraint: Constraint
    holds: bool
    witnesses: tuple = ()
    truncated: bool = False
    diagnostic: Optional[str] = None

    def to_json(self) -> dict:
        return {
            "constraint": self.constraint.to_json(),
            "holds": self.holds,
            "witnesses": list(self.witnesses),
            "truncated": self.truncated,
            "diagnostic": self.diagnostic,
        }


def _id_sort_key(inst_id: str):
    if inst_id.isdigit() or (inst_id[:1] == "-" and inst_id[1:].isdigit()):
        return (0, int(inst_id), inst_id)
    return (1, 0, inst_id)


def _result(k: Constraint, witnesses, limit: int) -> ConstraintResult:
    witnesses = list(witnesses)
    truncated = len(witnesses) > limit
    return ConstraintResult(
        constraint=k,
        holds=not witnesses,
        witnesses=tuple(witnesses[:limit]),
        truncated=truncated,
    )


def check_intra(
    c: model.Constellation,
    k: Constraint,
    witness_limit: int = DEFAULT_WITNESS_LIMIT,
) -> ConstraintResult:
    """Check one intra-dimension constraint over the dimension's instances.

    With A and B the member sets of the two hierarchies and U every
    instance of the dimension:
      exclusion    A and B disjoint          (witnesses: A intersect B)
      inclusion    A subset of B             (witnesses: A minus B)
      simultaneity A equals B                (witnesses: symmetric difference)
      totality     A union B covers U        (witnesses: uncovered instances)
      partition    totality and exclusion    (witnesses: union of both)
    """
    dim = c.dimension(k.left.dimension)
    a = model.hierarchy_members(dim, k.left.hierarchy)
    b = model.hierarchy_members(dim, k.right.hierarchy)
    universe = set(dim.instances)
    if k.kind == EXCLUSION:
        bad = a & b
    elif k.kind == INCLUSION:
        bad = a - b
    elif k.kind == SIMULTANEITY:
        bad = a ^ b
    elif k.kind == TOTALITY:
        bad = universe - (a | b)
    elif k.kind == PARTITION:
        bad = (universe - (a | b)) | (a & b)
    else:
        raise ValueError(f"unknown constraint kind '{k.kind}'")
    return _result(k, sorted(bad, key=_id_sort_key), witness_limit)


def check_inter(
    c: model.Constellation,
    k: Constraint,
    witness_limit: int = DEFAULT_WITNESS_LIMIT,
) -> ConstraintResult:
    """Check one inter-dimension constraint over the instances of its fact.

    For fact instance j, L(j) / R(j) state whether the linked instance of
    the left / right dimension belongs to the left / right hierarchy.
    Witnesses are the offending fact-instance indices.
    """
    if k.fact is None:
        raise UnknownFact("inter constraint without a fact")
    fact = c.fact(k.fact)
    for ref in (k.left, k.right):
        if ref.dimension not in fact.dims:
            raise DimensionNotLinked(
                f"dimension '{ref.dimension}' is not linked to fact '{k.fact}'"
            )
    left_dim = c.dimension(k.left.dimension)
    right_dim = c.dimension(k.right.dimension)
    left_members = model.hierarchy_members(left_dim, k.left.hierarchy)
    right_members = model.hierarchy_members(right_dim, k.right.hierarchy)

    bad = []
    for j, inst in enumerate(fact.instances):
        l = inst.links[k.left.dimension] in left_members
        r = inst.links[k.right.dimension] in right_members
        if k.kind == EXCLUSION:
            ok = not (l and r)
        elif k.kind == INCLUSION:
            ok = (not l) or r
        elif k.kind == SIMULTANEITY:
            ok = l == r
        elif k.kind == TOTALITY:
            ok = l or r
        elif k.kind == PARTITION:
            ok = l != r
        else:
            raise ValueError(f"unknown constraint kind '{k.kind}'")
        if not ok:
            bad.append(j)
    return _result(k, bad, witness_limit)


def check_constraint(
    c: model.Constellation,
    k: Constraint,
    witness_limit: int = DEFAULT_WITNESS_LIMIT,
) -> ConstraintResult:
    if k.scope == INTRA:
        return check_intra(c, k, witness_limit)
    return check_inter(c, k, witness_limit)


def check_all(
    c: model.Constellation,
    witness_limit: int = DEFAULT_WITNESS_LIMIT,
) -> list[ConstraintResult]:
    """One result per declared constraint, in declaration order.

    A constraint that cannot be resolved against the schema (unknown
    dimension, hierarchy or fact) becomes a failed result carrying a
    diagnostic instead of raising.
    """
    results = []
    for k in c.constraints:
        try:
            results.append(check_constraint(c, k, witness_limit))
        except (UnknownDimension, UnknownHierarchy, UnknownFact, DimensionNotLinked) as exc:
            results.append(
                ConstraintResult(constraint=k, holds=False, diagnostic=exc.message)
            )
    return results


def all_hold(results: list[ConstraintResult]) -> bool:
    return all(r.holds for r in results)


def constellation_consistent(c: model.Constellation) -> bool:
    """Whether every declared constraint holds; cached on the snapshot."""
    if c.consistent is None:
        c.consistent = all_hold(check_all(c))
    return c.consistent
