"""Parser and serializer for the `.cm` causal-model text format.

Grammar (declarations in any order, newline or whitespace separated):

    domain <id> { values <tok> (< <tok>)* (, <tok> (< <tok>)*)* }
    exo <id> : <domain>
    endo <id> : <domain> = <expr>
    endo <id> : <domain> = table (<id>, ...) { (<tok>, ...) -> <tok>, ... }

Expressions support ``and``/``or``/``not`` (binary operands), the
comparisons ``== != <= < >= >``, ``if .. then .. else ..``, ``min(a, b)``
and ``max(a, b)``. Comments run from ``#`` to end of line. Identifiers are
ASCII alphanumerics plus underscore; a bare name resolves to a declared
variable first and to a value token otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .domains import Domain
from .expr import (
    And,
    Cmp,
    CMP_OPS,
    Expression,
    ExprTypeError,
    IfThenElse,
    Lit,
    MinMax,
    Not,
    Or,
    Table,
    Var,
    check_expr,
)
from .model import (
    ENDOGENOUS,
    EXOGENOUS,
    CausalModel,
    StructuralEquation,
    Variable,
    validate_model,
)

KEYWORDS = {
    "domain", "values", "exo", "endo", "table",
    "if", "then", "else", "and", "or", "not", "min", "max",
}

_PUNCT = ("->", "==", "!=", "<=", ">=", "<", ">", "=", ":", ",", "(", ")", "{", "}")


class ParseError(Exception):
    """A syntax, type or validation diagnostic with a source location."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class _Token:
    kind: str  # "name" | "punct" | "eof"
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch.isalnum() or ch == "_":
            start = i
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
            word = text[start:i]
            if not word.isascii():
                raise ParseError(f"non-ASCII identifier {word!r}", line, col)
            tokens.append(_Token("name", word, line, col))
            col += i - start
            continue
        for punct in _PUNCT:
            if text.startswith(punct, i):
                tokens.append(_Token("punct", punct, line, col))
                i += len(punct)
                col += len(punct)
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(_Token("eof", "", line, col))
    return tokens


@dataclass(frozen=True)
class _Name(Expression):
    """Unresolved bare name; becomes Var or Lit once declarations are known."""

    text: str


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    # -- token plumbing ---------------------------------------------------

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def next(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.peek()
        if tok.text != text or tok.kind == "eof":
            raise ParseError(f"expected {text!r}, found {tok.text or 'end of input'!r}", tok.line, tok.column)
        return self.next()

    def expect_name(self, what: str, allow_keyword: bool = False) -> _Token:
        tok = self.peek()
        if tok.kind != "name":
            raise ParseError(f"expected {what}, found {tok.text or 'end of input'!r}", tok.line, tok.column)
        if tok.text in KEYWORDS and not allow_keyword:
            raise ParseError(f"keyword {tok.text!r} cannot be used as {what}", tok.line, tok.column)
        return self.next()

    # -- declarations -------------------------------------------------------

    def parse_document(self) -> tuple[CausalModel, dict[str, tuple[int, int]]]:
        domains: dict[str, Domain] = {}
        variables: dict[str, Variable] = {}
        spans: dict[str, tuple[int, int]] = {}
        raw_equations: list[tuple[str, Expression, _Token]] = []
        while self.peek().kind != "eof":
            tok = self.peek()
            if tok.text == "domain":
                name_tok, domain = self.parse_domain()
                if domain.name in domains:
                    raise ParseError(f"domain {domain.name!r} declared twice", name_tok.line, name_tok.column)
                domains[domain.name] = domain
                spans[domain.name] = (name_tok.line, name_tok.column)
            elif tok.text in ("exo", "endo"):
                kind = EXOGENOUS if tok.text == "exo" else ENDOGENOUS
                self.next()
                name_tok = self.expect_name("a variable name")
                if name_tok.text in variables:
                    raise ParseError(
                        f"variable {name_tok.text!r} declared twice", name_tok.line, name_tok.column
                    )
                self.expect(":")
                dom_tok = self.expect_name("a domain name")
                domain = domains.get(dom_tok.text)
                if domain is None:
                    raise ParseError(f"unknown domain {dom_tok.text!r}", dom_tok.line, dom_tok.column)
                variables[name_tok.text] = Variable(name_tok.text, kind, domain)
                spans[name_tok.text] = (name_tok.line, name_tok.column)
                if kind == ENDOGENOUS:
                    self.expect("=")
                    body = self.parse_body()
                    raw_equations.append((name_tok.text, body, name_tok))
            else:
                raise ParseError(
                    f"expected a declaration (domain/exo/endo), found {tok.text!r}",
                    tok.line,
                    tok.column,
                )
        return self.assemble(domains, variables, raw_equations, spans), spans

    def parse_domain(self) -> tuple[_Token, Domain]:
        self.expect("domain")
        name_tok = self.expect_name("a domain name")
        self.expect("{")
        self.expect("values")
        values: list[str] = []
        covers: set[tuple[str, str]] = set()

        def note(token: _Token) -> str:
            if token.text not in values:
                values.append(token.text)
            return token.text

        while True:
            first = note(self.expect_name("a value token", allow_keyword=False))
            while self.peek().text == "<":
                self.next()
                second = note(self.expect_name("a value token"))
                covers.add((first, second))
                first = second
            if self.peek().text == ",":
                self.next()
                continue
            break
        close = self.expect("}")
        try:
            domain = Domain(name_tok.text, tuple(values), frozenset(covers))
        except ValueError as err:
            raise ParseError(str(err), name_tok.line, name_tok.column) from None
        del close
        return name_tok, domain

    # -- equation bodies -----------------------------------------------------

    def parse_body(self) -> Expression:
        if self.peek().text == "table":
            return self.parse_table()
        return self.parse_expr()

    def parse_table(self) -> Expression:
        head = self.expect("table")
        self.expect("(")
        parents: list[str] = []
        if self.peek().text != ")":
            parents.append(self.expect_name("a parent variable").text)
            while self.peek().text == ",":
                self.next()
                parents.append(self.expect_name("a parent variable").text)
        self.expect(")")
        self.expect("{")
        rows: dict[tuple[str, ...], str] = {}
        while True:
            row_tok = self.expect("(")
            key: list[str] = []
            if self.peek().text != ")":
                key.append(self.expect_name("a value token").text)
                while self.peek().text == ",":
                    self.next()
                    key.append(self.expect_name("a value token").text)
            self.expect(")")
            self.expect("->")
            out = self.expect_name("a value token").text
            if len(key) != len(parents):
                raise ParseError(
                    f"table row has {len(key)} values for {len(parents)} parents",
                    row_tok.line,
                    row_tok.column,
                )
            if tuple(key) in rows:
                raise ParseError("table declares a duplicate row", row_tok.line, row_tok.column)
            rows[tuple(key)] = out
            if self.peek().text == ",":
                self.next()
                continue
            break
        self.expect("}")
        return Table(tuple(parents), tuple(rows.items()), pos=(head.line, head.column))

    def parse_expr(self) -> Expression:
        tok = self.peek()
        if tok.text == "if":
            self.next()
            condition = self.parse_expr()
            self.expect("then")
            then = self.parse_expr()
            self.expect("else")
            otherwise = self.parse_expr()
            return IfThenElse(condition, then, otherwise, pos=(tok.line, tok.column))
        return self.parse_or()

    def parse_or(self) -> Expression:
        left = self.parse_and()
        while self.peek().text == "or":
            op = self.next()
            right = self.parse_and()
            left = Or(left, right, pos=(op.line, op.column))
        return left

    def parse_and(self) -> Expression:
        left = self.parse_not()
        while self.peek().text == "and":
            op = self.next()
            right = self.parse_not()
            left = And(left, right, pos=(op.line, op.column))
        return left

    def parse_not(self) -> Expression:
        tok = self.peek()
        if tok.text == "not":
            self.next()
            return Not(self.parse_not(), pos=(tok.line, tok.column))
        return self.parse_cmp()

    def parse_cmp(self) -> Expression:
        left = self.parse_atom()
        tok = self.peek()
        if tok.text in CMP_OPS:
            self.next()
            right = self.parse_atom()
            return Cmp(tok.text, left, right, pos=(tok.line, tok.column))
        return left

    def parse_atom(self) -> Expression:
        tok = self.peek()
        if tok.text == "(":
            self.next()
            inner = self.parse_expr()
            self.expect(")")
            return inner
        if tok.text in ("min", "max"):
            self.next()
            self.expect("(")
            left = self.parse_expr()
            self.expect(",")
            right = self.parse_expr()
            self.expect(")")
            return MinMax(tok.text, left, right, pos=(tok.line, tok.column))
        name = self.expect_name("a variable or value")
        return _Name(name.text, pos=(name.line, name.column))

    # -- assembly ------------------------------------------------------------

    def assemble(
        self,
        domains: dict[str, Domain],
        variables: dict[str, Variable],
        raw_equations: list[tuple[str, Expression, _Token]],
        spans: dict[str, tuple[int, int]],
    ) -> CausalModel:
        def resolve(expr: Expression) -> Expression:
            if isinstance(expr, _Name):
                if expr.text in variables:
                    return Var(expr.text, pos=expr.pos)
                return Lit(expr.text, pos=expr.pos)
            if isinstance(expr, Not):
                return Not(resolve(expr.operand), pos=expr.pos)
            if isinstance(expr, And):
                return And(resolve(expr.left), resolve(expr.right), pos=expr.pos)
            if isinstance(expr, Or):
                return Or(resolve(expr.left), resolve(expr.right), pos=expr.pos)
            if isinstance(expr, Cmp):
                return Cmp(expr.op, resolve(expr.left), resolve(expr.right), pos=expr.pos)
            if isinstance(expr, IfThenElse):
                return IfThenElse(
                    resolve(expr.condition), resolve(expr.then), resolve(expr.otherwise), pos=expr.pos
                )
            if isinstance(expr, MinMax):
                return MinMax(expr.which, resolve(expr.left), resolve(expr.right), pos=expr.pos)
            return expr

        def resolver(name: str) -> Domain:
            return variables[name].domain

        equations = []
        for target, body, name_tok in raw_equations:
            body = resolve(body)
            try:
                check_expr(body, variables[target].domain, resolver)
            except ExprTypeError as err:
                line, column = err.pos or (name_tok.line, name_tok.column)
                raise ParseError(err.message, line, column) from None
            equations.append(StructuralEquation(target, body))

        model = CausalModel(
            domains.values(),
            [v for v in variables.values() if v.kind == EXOGENOUS],
            [v for v in variables.values() if v.kind == ENDOGENOUS],
            equations,
        )
        violations = validate_model(model)
        if violations:
            worst = violations[0]
            line, column = spans.get(worst.subject, (1, 1))
            raise ParseError(worst.message, line, column)
        return model


@dataclass(frozen=True)
class ModelDocument:
    """A parsed source together with per-declaration spans, for tooling."""

    text: str
    spans: Mapping[str, tuple[int, int]]
    model: CausalModel = field(compare=False)


def parse_model(text: str) -> CausalModel:
    """Parse `.cm` source into a validated CausalModel.

    Raises ParseError with a line/column inside the input for any syntax,
    type or validation problem.
    """
    model, _ = _Parser(text).parse_document()
    return model


def parse_document(text: str) -> ModelDocument:
    """Like parse_model, but keep the source and declaration spans."""
    model, spans = _Parser(text).parse_document()
    return ModelDocument(text=text, spans=dict(spans), model=model)


# --- serialization ---------------------------------------------------------

_LEVEL_ITE = 0
_LEVEL_OR = 1
_LEVEL_AND = 2
_LEVEL_NOT = 3
_LEVEL_CMP = 4
_LEVEL_ATOM = 5


def _level(expr: Expression) -> int:
    if isinstance(expr, IfThenElse):
        return _LEVEL_ITE
    if isinstance(expr, Or):
        return _LEVEL_OR
    if isinstance(expr, And):
        return _LEVEL_AND
    if isinstance(expr, Not):
        return _LEVEL_NOT
    if isinstance(expr, Cmp):
        return _LEVEL_CMP
    return _LEVEL_ATOM


def _render(expr: Expression, context_level: int, model: CausalModel) -> str:
    text: str
    if isinstance(expr, Var):
        text = expr.name
    elif isinstance(expr, Lit):
        text = expr.token
    elif isinstance(expr, Not):
        text = "not " + _render(expr.operand, _LEVEL_NOT, model)
    elif isinstance(expr, And):
        text = (
            _render(expr.left, _LEVEL_AND, model)
            + " and "
            + _render(expr.right, _LEVEL_AND + 1, model)
        )
    elif isinstance(expr, Or):
        text = (
            _render(expr.left, _LEVEL_OR, model)
            + " or "
            + _render(expr.right, _LEVEL_OR + 1, model)
        )
    elif isinstance(expr, Cmp):
        text = (
            _render(expr.left, _LEVEL_ATOM, model)
            + f" {expr.op} "
            + _render(expr.right, _LEVEL_ATOM, model)
        )
    elif isinstance(expr, IfThenElse):
        text = (
            "if "
            + _render(expr.condition, _LEVEL_ITE, model)
            + " then "
            + _render(expr.then, _LEVEL_OR, model)
            + " else "
            + _render(expr.otherwise, _LEVEL_ITE, model)
        )
    elif isinstance(expr, MinMax):
        text = (
            f"{expr.which}("
            + _render(expr.left, _LEVEL_ITE, model)
            + ", "
            + _render(expr.right, _LEVEL_ITE, model)
            + ")"
        )
    elif isinstance(expr, Table):
        text = _render_table(expr, model)
    else:
        raise TypeError(f"unknown expression node {expr!r}")
    if _level(expr) < context_level and not isinstance(expr, Table):
        return f"({text})"
    return text


def _render_table(table: Table, model: CausalModel) -> str:
    indexers = [model.domain_of(p).index for p in table.parents]
    ordered = sorted(
        table.rows, key=lambda row: tuple(ix(v) for ix, v in zip(indexers, row[0]))
    )
    rows = ", ".join(f"({', '.join(key)}) -> {out}" for key, out in ordered)
    heads = ", ".join(table.parents)
    return f"table ({heads}) {{ {rows} }}"


def serialize_model(model: CausalModel) -> str:
    """Canonical `.cm` text: sorted declarations, normalized whitespace.

    Deterministic, and parse(serialize(m)) is structurally equal to m.
    """
    model.require_valid()
    lines: list[str] = []
    for name in sorted(model.domains):
        domain = model.domains[name]
        parts = list(domain.values)
        parts.extend(f"{a} < {b}" for a, b in sorted(domain.reduction()))
        lines.append(f"domain {name} {{ values {', '.join(parts)} }}")
    for name in sorted(model.exogenous):
        lines.append(f"exo {name} : {model.exogenous[name].domain.name}")
    for name in sorted(model.endogenous):
        var = model.endogenous[name]
        body = _render(model.equations[name].body, _LEVEL_ITE, model)
        lines.append(f"endo {name} : {var.domain.name} = {body}")
    return "\n".join(lines) + "\n"
