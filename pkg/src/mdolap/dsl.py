"""Text language for schemas, constraints and composable queries.

Schema files (``.mdschema``) declare a constellation:

    CONSTELLATION name
    DIMENSION name ( ATTRIBUTES (attr KIND, ...) HIERARCHY ... )
    FACT name ( MEASURES (m KIND AGG, ...) DIMENSIONS (d, ...) )
    CONSTRAINT INTRA dim : h1 KINDWORD h2
    CONSTRAINT INTER ON fact : Dim.h1 KINDWORD Dim.h2

Hierarchies run ``Id -> p1 -> ... -> All`` with optional weak attributes
and an optional ``WHEN`` membership condition (TRUE when omitted).

Query files (``.mdq``) are operator calls mirroring the algebra, with a
Display call innermost:

    DrillDown(Display(VENTES, AGENCES, TEMPS, geo_fr, h_an), AGENCES, Region)

Parsing never raises on bad input: both entry points return the parsed
object or a list of positioned diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from . import constraints as cons
from . import model

SCHEMA_EXTENSION = ".mdschema"
QUERY_EXTENSION = ".mdq"

_SYMBOLS = ("->", "!=", "<=", ">=", "(", ")", ",", ";", ":", ".", "=", "<", ">")

_TOP_LEVEL = ("DIMENSION", "FACT", "CONSTRAINT")

_DIGITS = set("0123456789")
_IDENT_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_")
_IDENT_REST = _IDENT_START | _DIGITS


@dataclass(frozen=True)
class ParseDiagnostic:
    severity: str
    message: str
    line: int
    column: int
    token: str = ""

    def __str__(self) -> str:
        near = f" (near '{self.token}')" if self.token else ""
        return f"{self.severity}: {self.message} at line {self.line}, column {self.column}{near}"

    def to_json(self) -> dict:
        return {
            "severity": self.severity,
            "message": self.message,
            "line": self.line,
            "column": self.column,
            "token": self.token,
        }


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT | NUMBER | STRING | SYMBOL | EOF
    text: str
    line: int
    column: int
    value: object = None


class _ParseFailure(Exception):
    def __init__(self, diagnostic: ParseDiagnostic):
        super().__init__(diagnostic.message)
        self.diagnostic = diagnostic


def _error(token: Token, message: str) -> _ParseFailure:
    return _ParseFailure(ParseDiagnostic("error", message, token.line, token.column, token.text))


def tokenize(text: str) -> tuple[list[Token], list[ParseDiagnostic]]:
    """Split source text into tokens; unknown characters become diagnostics."""
    tokens: list[Token] = []
    diagnostics: list[ParseDiagnostic] = []
    line, column = 1, 1
    i = 0
    n = len(text)

    def advance(m: int) -> None:
        nonlocal i, line, column
        for ch in text[i : i + m]:
            if ch == "\n":
                line += 1
                column = 1
            else:
                column += 1
        i += m

    while i < n:
        ch = text[i]
        if ch in " \t\r\n":
            advance(1)
            continue
        if text.startswith("--", i):
            end = text.find("\n", i)
            advance((end if end != -1 else n) - i)
            continue
        if ch == "'":
            start_line, start_col = line, column
            j = i + 1
            buf = []
            closed = False
            while j < n:
                if text[j] == "'":
                    if j + 1 < n and text[j + 1] == "'":
                        buf.append("'")
                        j += 2
                        continue
                    closed = True
                    j += 1
                    break
                buf.append(text[j])
                j += 1
            if not closed:
                diagnostics.append(
                    ParseDiagnostic("error", "unterminated string literal", start_line, start_col, "'")
                )
                advance(n - i)
                break
            value = "".join(buf)
            tokens.append(Token("STRING", text[i:j], start_line, start_col, value))
            advance(j - i)
            continue
        if ch in _DIGITS or (ch == "-" and i + 1 < n and text[i + 1] in _DIGITS):
            j = i + 1
            while j < n and text[j] in _DIGITS:
                j += 1
            is_decimal = False
            if j < n and text[j] == "." and j + 1 < n and text[j + 1] in _DIGITS:
                is_decimal = True
                j += 1
                while j < n and text[j] in _DIGITS:
                    j += 1
            raw = text[i:j]
            value = Fraction(raw) if is_decimal else int(raw)
            tokens.append(Token("NUMBER", raw, line, column, value))
            advance(j - i)
            continue
        if ch in _IDENT_START:
            j = i + 1
            while j < n and text[j] in _IDENT_REST:
                j += 1
            word = text[i:j]
            tokens.append(Token("IDENT", word, line, column, word))
            advance(j - i)
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                tokens.append(Token("SYMBOL", sym, line, column))
                advance(len(sym))
                break
        else:
            diagnostics.append(
                ParseDiagnostic("error", f"unexpected character {ch!r}", line, column, ch)
            )
            advance(1)
    tokens.append(Token("EOF", "", line, column))
    return tokens, diagnostics


class _Cursor:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def at_keyword(self, word: str) -> bool:
        tok = self.peek()
        return tok.kind == "IDENT" and tok.text == word

    def expect_keyword(self, word: str) -> Token:
        tok = self.peek()
        if not self.at_keyword(word):
            raise _error(tok, f"expected '{word}'")
        return self.next()

    def expect_symbol(self, sym: str) -> Token:
        tok = self.peek()
        if tok.kind != "SYMBOL" or tok.text != sym:
            raise _error(tok, f"expected '{sym}'")
        return self.next()

    def take_symbol(self, sym: str) -> bool:
        tok = self.peek()
        if tok.kind == "SYMBOL" and tok.text == sym:
            self.next()
            return True
        return False

    def expect_ident(self, what: str) -> Token:
        tok = self.peek()
        if tok.kind != "IDENT":
            raise _error(tok, f"expected {what}")
        return self.next()


# ---------------------------------------------------------------------------
# Conditions
# ---------------------------------------------------------------------------

def _parse_condition(cur: _Cursor) -> model.Condition:
    return _parse_or(cur)


def _parse_or(cur: _Cursor) -> model.Condition:
    node = _parse_and(cur)
    while cur.at_keyword("OR"):
        cur.next()
        node = model.Or(node, _parse_and(cur))
    return node


def _parse_and(cur: _Cursor) -> model.Condition:
    node = _parse_unary(cur)
    while cur.at_keyword("AND"):
        cur.next()
        node = model.And(node, _parse_unary(cur))
    return node


def _parse_unary(cur: _Cursor) -> model.Condition:
    if cur.at_keyword("NOT"):
        cur.next()
        return model.Not(_parse_unary(cur))
    return _parse_primary(cur)


def _parse_primary(cur: _Cursor) -> model.Condition:
    tok = cur.peek()
    if cur.at_keyword("TRUE"):
        cur.next()
        return model.TRUE
    if cur.take_symbol("("):
        node = _parse_condition(cur)
        cur.expect_symbol(")")
        return node
    if tok.kind != "IDENT":
        raise _error(tok, "expected a condition")
    attr = cur.next().text
    nxt = cur.peek()
    if nxt.kind == "IDENT" and nxt.text == "IS":
        cur.next()
        negated = False
        if cur.at_keyword("NOT"):
            cur.next()
            negated = True
        cur.expect_keyword("NULL")
        return model.NullTest(attr, negated)
    if nxt.kind == "SYMBOL" and nxt.text in model.COMPARISON_OPS:
        op = cur.next().text
        lit = cur.peek()
        if lit.kind in ("NUMBER", "STRING"):
            cur.next()
            return model.Comparison(attr, op, lit.value)
        raise _error(lit, "expected a number or a quoted string literal")
    raise _error(nxt, "expected a comparison operator or IS [NOT] NULL")


def parse_condition_text(text: str) -> model.Condition:
    """Parse a standalone condition (used when reloading snapshots)."""
    tokens, diags = tokenize(text)
    if diags:
        raise ValueError(str(diags[0]))
    cur = _Cursor(tokens)
    try:
        cond = _parse_condition(cur)
    except _ParseFailure as exc:
        raise ValueError(str(exc.diagnostic)) from None
    if cur.peek().kind != "EOF":
        raise ValueError(f"trailing input in condition: {cur.peek().text!r}")
    return cond


# ---------------------------------------------------------------------------
# Schema parsing
# ---------------------------------------------------------------------------

def _parse_attributes(cur: _Cursor, diags: list[ParseDiagnostic]) -> dict[str, str]:
    cur.expect_keyword("ATTRIBUTES")
    cur.expect_symbol("(")
    attrs: dict[str, str] = {}
    while True:
        name_tok = cur.expect_ident("an attribute name")
        kind_tok = cur.expect_ident("an attribute kind (STRING, INT or DECIMAL)")
        if kind_tok.text not in model.ATTRIBUTE_KINDS:
            raise _error(kind_tok, f"unknown attribute kind '{kind_tok.text}'")
        if name_tok.text in (model.ID_ATTR, model.ALL_ATTR):
            diags.append(
                ParseDiagnostic(
                    "error",
                    f"'{name_tok.text}' is implicit and must not be declared",
                    name_tok.line,
                    name_tok.column,
                    name_tok.text,
                )
            )
        elif name_tok.text in attrs:
            diags.append(
                ParseDiagnostic(
                    "error",
                    f"attribute '{name_tok.text}' declared twice",
                    name_tok.line,
                    name_tok.column,
                    name_tok.text,
                )
            )
        else:
            attrs[name_tok.text] = kind_tok.text
        if not cur.take_symbol(","):
            break
    cur.expect_symbol(")")
    return attrs


def _parse_weak(cur: _Cursor) -> dict[str, tuple[str, ...]]:
    cur.expect_keyword("WEAK")
    cur.expect_symbol("(")
    weak: dict[str, tuple[str, ...]] = {}
    while True:
        param = cur.expect_ident("a parameter name").text
        cur.expect_symbol(":")
        names = [cur.expect_ident("a weak attribute name").text]
        while cur.take_symbol(","):
            names.append(cur.expect_ident("a weak attribute name").text)
        weak[param] = tuple(weak.get(param, ())) + tuple(names)
        if not cur.take_symbol(";"):
            break
    cur.expect_symbol(")")
    return weak


def _parse_hierarchy(cur: _Cursor) -> model.Hierarchy:
    cur.expect_keyword("HIERARCHY")
    name = cur.expect_ident("a hierarchy name").text
    cur.expect_symbol(":")
    id_tok = cur.expect_ident("'Id'")
    if id_tok.text != model.ID_ATTR:
        raise _error(id_tok, "a hierarchy path must start at Id")
    params = [model.ID_ATTR]
    saw_all = False
    while cur.take_symbol("->"):
        step = cur.expect_ident("a parameter name")
        params.append(step.text)
        if step.text == model.ALL_ATTR:
            saw_all = True
            break
    if not saw_all:
        raise _error(cur.peek(), f"hierarchy '{name}' must end with '-> All'")
    if len(params) < 3:
        raise _error(cur.peek(), f"hierarchy '{name}' needs at least one parameter between Id and All")
    weak: dict[str, tuple[str, ...]] = {}
    if cur.at_keyword("WEAK"):
        weak = _parse_weak(cur)
    cond: model.Condition = model.TRUE
    if cur.at_keyword("WHEN"):
        cur.next()
        cond = _parse_condition(cur)
    return model.Hierarchy(name=name, params=tuple(params), weak=weak, cond=cond)


def _parse_dimension(cur: _Cursor, diags: list[ParseDiagnostic]) -> model.Dimension:
    cur.expect_keyword("DIMENSION")
    name = cur.expect_ident("a dimension name").text
    cur.expect_symbol("(")
    attrs = _parse_attributes(cur, diags)
    hierarchies: dict[str, model.Hierarchy] = {}
    while cur.at_keyword("HIERARCHY"):
        h = _parse_hierarchy(cur)
        if h.name in hierarchies:
            raise _error(cur.peek(), f"hierarchy '{h.name}' declared twice in '{name}'")
        hierarchies[h.name] = h
    if not hierarchies:
        raise _error(cur.peek(), f"dimension '{name}' needs at least one HIERARCHY")
    cur.expect_symbol(")")
    return model.Dimension(name=name, attributes=attrs, hierarchies=hierarchies)


def _parse_fact(cur: _Cursor) -> model.Fact:
    cur.expect_keyword("FACT")
    name = cur.expect_ident("a fact name").text
    cur.expect_symbol("(")
    cur.expect_keyword("MEASURES")
    cur.expect_symbol("(")
    measures = []
    while True:
        m_name = cur.expect_ident("a measure name").text
        kind_tok = cur.expect_ident("a measure kind")
        if kind_tok.text not in model.ATTRIBUTE_KINDS:
            raise _error(kind_tok, f"unknown measure kind '{kind_tok.text}'")
        agg_tok = cur.expect_ident("an aggregation (SUM, AVG, COUNT, MIN or MAX)")
        if agg_tok.text not in model.AGGREGATIONS:
            raise _error(agg_tok, f"unknown aggregation '{agg_tok.text}'")
        measures.append(model.MeasureSpec(name=m_name, kind=kind_tok.text, agg=agg_tok.text))
        if not cur.take_symbol(","):
            break
    cur.expect_symbol(")")
    cur.expect_keyword("DIMENSIONS")
    cur.expect_symbol("(")
    dims = [cur.expect_ident("a dimension name").text]
    while cur.take_symbol(","):
        dims.append(cur.expect_ident("a dimension name").text)
    cur.expect_symbol(")")
    cur.expect_symbol(")")
    return model.Fact(name=name, measures=tuple(measures), dims=tuple(dims))


def _expect_constraint_kind(cur: _Cursor) -> str:
    tok = cur.expect_ident("a constraint kind")
    if tok.text not in cons.KINDS:
        raise _error(tok, f"unknown constraint kind '{tok.text}'")
    return tok.text


def _parse_constraint(cur: _Cursor) -> cons.Constraint:
    cur.expect_keyword("CONSTRAINT")
    tok = cur.peek()
    if cur.at_keyword("INTRA"):
        cur.next()
        dim = cur.expect_ident("a dimension name").text
        cur.expect_symbol(":")
        left = cur.expect_ident("a hierarchy name").text
        kind = _expect_constraint_kind(cur)
        right = cur.expect_ident("a hierarchy name").text
        return cons.intra(kind, dim, left, right)
    if cur.at_keyword("INTER"):
        cur.next()
        cur.expect_keyword("ON")
        fact = cur.expect_ident("a fact name").text
        cur.expect_symbol(":")

        def qref() -> tuple[str, str]:
            dim = cur.expect_ident("a dimension name").text
            cur.expect_symbol(".")
            h = cur.expect_ident("a hierarchy name").text
            return dim, h

        left_dim, left_h = qref()
        kind = _expect_constraint_kind(cur)
        right_dim, right_h = qref()
        return cons.inter(kind, fact, left_dim, left_h, right_dim, right_h)
    raise _error(tok, "expected INTRA or INTER")


def _skip_to_top_level(cur: _Cursor) -> None:
    while cur.peek().kind != "EOF":
        tok = cur.peek()
        if tok.kind == "IDENT" and tok.text in _TOP_LEVEL:
            return
        cur.next()


def parse_schema(text: str) -> tuple[Optional[model.Constellation], list[ParseDiagnostic]]:
    """Parse a schema file into a constellation skeleton (no instances).

    On errors the constellation is None and the diagnostics carry 1-based
    positions; recovery restarts at the next top-level keyword so one run
    reports one error per declaration at most.
    """
    tokens, diagnostics = tokenize(text)
    cur = _Cursor(tokens)
    dimensions: dict[str, model.Dimension] = {}
    facts: dict[str, model.Fact] = {}
    constraint_list: list[cons.Constraint] = []
    name = ""
    try:
        cur.expect_keyword("CONSTELLATION")
        name = cur.expect_ident("a constellation name").text
    except _ParseFailure as exc:
        diagnostics.append(exc.diagnostic)
        return None, diagnostics

    phase = 0  # 0 dimensions, 1 facts, 2 constraints
    while cur.peek().kind != "EOF":
        tok = cur.peek()
        start_pos = cur.pos
        try:
            if cur.at_keyword("DIMENSION"):
                if phase > 0:
                    raise _error(tok, "DIMENSION declarations must precede FACT and CONSTRAINT")
                dim = _parse_dimension(cur, diagnostics)
                if dim.name in dimensions:
                    raise _error(tok, f"dimension '{dim.name}' declared twice")
                dimensions[dim.name] = dim
            elif cur.at_keyword("FACT"):
                if phase > 1:
                    raise _error(tok, "FACT declarations must precede CONSTRAINT")
                phase = max(phase, 1)
                fact = _parse_fact(cur)
                if fact.name in facts or fact.name in dimensions:
                    raise _error(tok, f"name '{fact.name}' declared twice")
                facts[fact.name] = fact
            elif cur.at_keyword("CONSTRAINT"):
                phase = 2
                constraint_list.append(_parse_constraint(cur))
            else:
                raise _error(tok, "expected DIMENSION, FACT or CONSTRAINT")
        except _ParseFailure as exc:
            diagnostics.append(exc.diagnostic)
            if cur.pos == start_pos:
                cur.next()
            _skip_to_top_level(cur)
    if diagnostics:
        return None, diagnostics
    constellation = model.Constellation(
        name=name,
        dimensions=dimensions,
        facts=facts,
        constraints=tuple(constraint_list),
    )
    return constellation, []


# ---------------------------------------------------------------------------
# Query expressions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DisplayExpr:
    fact: str
    row_dim: str
    col_dim: str
    row_hierarchy: str
    col_hierarchy: str


@dataclass(frozen=True)
class DrillDownExpr:
    child: "QueryExpr"
    dim: str
    param: str


@dataclass(frozen=True)
class RollUpExpr:
    child: "QueryExpr"
    dim: str
    param: str


@dataclass(frozen=True)
class HRotateExpr:
    child: "QueryExpr"
    dim: str
    old_hierarchy: str
    new_hierarchy: str
    flag: bool = False


@dataclass(frozen=True)
class DRotateExpr:
    child: "QueryExpr"
    old_dim: str
    new_dim: str
    hierarchy: str
    flag: bool = False


QueryExpr = Union[DisplayExpr, DrillDownExpr, RollUpExpr, HRotateExpr, DRotateExpr]

_OPERATORS = ("Display", "DrillDown", "RollUp", "HRotate", "DRotate")


def _parse_flag(cur: _Cursor) -> bool:
    tok = cur.expect_ident("'true' or 'false'")
    if tok.text == "true":
        return True
    if tok.text == "false":
        return False
    raise _error(tok, f"expected 'true' or 'false', got '{tok.text}'")


def _parse_query_expr(cur: _Cursor) -> QueryExpr:
    tok = cur.expect_ident("an operator name")
    op = tok.text
    if op not in _OPERATORS:
        raise _error(tok, f"unknown operator '{op}'")
    cur.expect_symbol("(")
    if op == "Display":
        names = [cur.expect_ident("an identifier").text]
        for _ in range(4):
            cur.expect_symbol(",")
            names.append(cur.expect_ident("an identifier").text)
        cur.expect_symbol(")")
        return DisplayExpr(*names)
    child = _parse_query_expr(cur)
    cur.expect_symbol(",")
    if op in ("DrillDown", "RollUp"):
        dim = cur.expect_ident("a dimension name").text
        cur.expect_symbol(",")
        param = cur.expect_ident("a parameter name").text
        cur.expect_symbol(")")
        return (DrillDownExpr if op == "DrillDown" else RollUpExpr)(child, dim, param)
    if op == "HRotate":
        dim = cur.expect_ident("a dimension name").text
        cur.expect_symbol(",")
        old_h = cur.expect_ident("a hierarchy name").text
        cur.expect_symbol(",")
        new_h = cur.expect_ident("a hierarchy name").text
        flag = False
        if cur.take_symbol(","):
            flag = _parse_flag(cur)
        cur.expect_symbol(")")
        return HRotateExpr(child, dim, old_h, new_h, flag)
    # DRotate
    old_dim = cur.expect_ident("a dimension name").text
    cur.expect_symbol(",")
    new_dim = cur.expect_ident("a dimension name").text
    cur.expect_symbol(",")
    hierarchy = cur.expect_ident("a hierarchy name").text
    flag = False
    if cur.take_symbol(","):
        flag = _parse_flag(cur)
    cur.expect_symbol(")")
    return DRotateExpr(child, old_dim, new_dim, hierarchy, flag)


def parse_query(text: str) -> tuple[Optional[QueryExpr], list[ParseDiagnostic]]:
    """Parse an operator expression; the innermost call must be Display."""
    tokens, diagnostics = tokenize(text)
    if diagnostics:
        return None, diagnostics
    cur = _Cursor(tokens)
    try:
        expr = _parse_query_expr(cur)
        tok = cur.peek()
        if tok.kind != "EOF":
            raise _error(tok, "trailing input after the expression")
    except _ParseFailure as exc:
        return None, [exc.diagnostic]
    return expr, []


def format_query(expr: QueryExpr) -> str:
    """Canonical one-line rendering; parse_query(format_query(e)) == e."""
    if isinstance(expr, DisplayExpr):
        return (
            f"Display({expr.fact}, {expr.row_dim}, {expr.col_dim}, "
            f"{expr.row_hierarchy}, {expr.col_hierarchy})"
        )
    if isinstance(expr, DrillDownExpr):
        return f"DrillDown({format_query(expr.child)}, {expr.dim}, {expr.param})"
    if isinstance(expr, RollUpExpr):
        return f"RollUp({format_query(expr.child)}, {expr.dim}, {expr.param})"
    if isinstance(expr, HRotateExpr):
        flag = "true" if expr.flag else "false"
        return (
            f"HRotate({format_query(expr.child)}, {expr.dim}, "
            f"{expr.old_hierarchy}, {expr.new_hierarchy}, {flag})"
        )
    if isinstance(expr, DRotateExpr):
        flag = "true" if expr.flag else "false"
        return (
            f"DRotate({format_query(expr.child)}, {expr.old_dim}, "
            f"{expr.new_dim}, {expr.hierarchy}, {flag})"
        )
    raise TypeError(f"not a query expression: {expr!r}")


# ---------------------------------------------------------------------------
# JSON form of query expressions (used by the HTTP service and the UI)
# ---------------------------------------------------------------------------

def query_to_json(expr: QueryExpr) -> dict:
    if isinstance(expr, DisplayExpr):
        return {
            "op": "Display",
            "fact": expr.fact,
            "rowDim": expr.row_dim,
            "colDim": expr.col_dim,
            "rowHierarchy": expr.row_hierarchy,
            "colHierarchy": expr.col_hierarchy,
        }
    if isinstance(expr, DrillDownExpr):
        return {"op": "DrillDown", "child": query_to_json(expr.child), "dim": expr.dim, "param": expr.param}
    if isinstance(expr, RollUpExpr):
        return {"op": "RollUp", "child": query_to_json(expr.child), "dim": expr.dim, "param": expr.param}
    if isinstance(expr, HRotateExpr):
        return {
            "op": "HRotate",
            "child": query_to_json(expr.child),
            "dim": expr.dim,
            "oldHierarchy": expr.old_hierarchy,
            "newHierarchy": expr.new_hierarchy,
            "flag": expr.flag,
        }
    if isinstance(expr, DRotateExpr):
        return {
            "op": "DRotate",
            "child": query_to_json(expr.child),
            "oldDim": expr.old_dim,
            "newDim": expr.new_dim,
            "hierarchy": expr.hierarchy,
            "flag": expr.flag,
        }
    raise TypeError(f"not a query expression: {expr!r}")


def query_from_json(obj) -> QueryExpr:
    """Decode the JSON form; raises ValueError with a readable message."""
    if not isinstance(obj, dict):
        raise ValueError("query expression must be a JSON object")

    def need(key: str) -> str:
        v = obj.get(key)
        if not isinstance(v, str) or not v:
            raise ValueError(f"field '{key}' of a {obj.get('op')} node must be a non-empty string")
        return v

    def flag() -> bool:
        v = obj.get("flag", False)
        if not isinstance(v, bool):
            raise ValueError("field 'flag' must be a boolean")
        return v

    op = obj.get("op")
    if op == "Display":
        return DisplayExpr(
            need("fact"), need("rowDim"), need("colDim"), need("rowHierarchy"), need("colHierarchy")
        )
    if op in ("DrillDown", "RollUp", "HRotate", "DRotate"):
        child = query_from_json(obj.get("child"))
        if op == "DrillDown":
            return DrillDownExpr(child, need("dim"), need("param"))
        if op == "RollUp":
            return RollUpExpr(child, need("dim"), need("param"))
        if op == "HRotate":
            return HRotateExpr(child, need("dim"), need("oldHierarchy"), need("newHierarchy"), flag())
        return DRotateExpr(child, need("oldDim"), need("newDim"), need("hierarchy"), flag())
    raise ValueError(f"unknown operator {op!r}")
