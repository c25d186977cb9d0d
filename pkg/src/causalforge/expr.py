"""Expression trees for structural equations, with typing, compilation and interpretation."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

from .domains import BOOL, Domain

Pos = tuple[int, int]
Env = Mapping[str, str]
Resolver = Callable[[str], Domain]

CMP_OPS = ("==", "!=", "<=", "<", ">=", ">")


class ExprTypeError(Exception):
    """A subexpression violates the operator's domain constraints."""

    def __init__(self, message: str, pos: Pos | None = None, kind: str = "type-error"):
        super().__init__(message)
        self.message = message
        self.pos = pos
        self.kind = kind


@dataclass(frozen=True)
class Expression:
    pos: Pos | None = field(default=None, compare=False, repr=False, kw_only=True)


@dataclass(frozen=True)
class Var(Expression):
    name: str


@dataclass(frozen=True)
class Lit(Expression):
    token: str


@dataclass(frozen=True)
class Not(Expression):
    operand: Expression


@dataclass(frozen=True)
class And(Expression):
    left: Expression
    right: Expression


@dataclass(frozen=True)
class Or(Expression):
    left: Expression
    right: Expression


@dataclass(frozen=True)
class Cmp(Expression):
    op: str
    left: Expression
    right: Expression


@dataclass(frozen=True)
class IfThenElse(Expression):
    condition: Expression
    then: Expression
    otherwise: Expression


@dataclass(frozen=True)
class MinMax(Expression):
    which: str  # "min" | "max"
    left: Expression
    right: Expression


@dataclass(frozen=True)
class Table(Expression):
    """Explicit lookup table from parent-value tuples to a result token.

    Rows are normalized to a canonical sorted order so structurally equal
    tables compare equal regardless of declaration order.
    """

    parents: tuple[str, ...]
    rows: tuple[tuple[tuple[str, ...], str], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "parents", tuple(self.parents))
        normalized = tuple(sorted((tuple(k), v) for k, v in dict(self.rows).items()))
        object.__setattr__(self, "rows", normalized)

    def row_map(self) -> dict[tuple[str, ...], str]:
        return dict(self.rows)


def free_vars(expr: Expression) -> frozenset[str]:
    if isinstance(expr, Var):
        return frozenset({expr.name})
    if isinstance(expr, Lit):
        return frozenset()
    if isinstance(expr, Not):
        return free_vars(expr.operand)
    if isinstance(expr, (And, Or, MinMax)):
        return free_vars(expr.left) | free_vars(expr.right)
    if isinstance(expr, Cmp):
        return free_vars(expr.left) | free_vars(expr.right)
    if isinstance(expr, IfThenElse):
        return free_vars(expr.condition) | free_vars(expr.then) | free_vars(expr.otherwise)
    if isinstance(expr, Table):
        return frozenset(expr.parents)
    raise TypeError(f"unknown expression node {expr!r}")


def _is_binary_shaped(domain: Domain) -> bool:
    return set(domain.values) == {"0", "1"} and domain.strict_order == frozenset({("0", "1")})


def _is_boolean_producing(expr: Expression) -> bool:
    return isinstance(expr, (And, Or, Not, Cmp))


def infer_domain(expr: Expression, resolver: Resolver) -> Domain | None:
    """Best-effort domain of an expression; None when only context can tell."""
    if isinstance(expr, Var):
        return resolver(expr.name)
    if isinstance(expr, (And, Or, Not, Cmp)):
        return BOOL
    if isinstance(expr, IfThenElse):
        return infer_domain(expr.then, resolver) or infer_domain(expr.otherwise, resolver)
    if isinstance(expr, MinMax):
        return infer_domain(expr.left, resolver) or infer_domain(expr.right, resolver)
    return None


def check_expr(expr: Expression, expected: Domain, resolver: Resolver) -> None:
    """Type-check ``expr`` against the expected result domain.

    Boolean connectives and comparisons match any binary-shaped expectation;
    everything else requires the exact domain. Raises ExprTypeError.
    """
    if isinstance(expr, Var):
        domain = _resolve(expr, resolver)
        if domain != expected:
            raise ExprTypeError(
                f"variable {expr.name!r} has domain {domain.name!r}, expected {expected.name!r}",
                expr.pos,
            )
    elif isinstance(expr, Lit):
        if expr.token not in expected:
            raise ExprTypeError(
                f"value {expr.token!r} is not in domain {expected.name!r}", expr.pos
            )
    elif isinstance(expr, (And, Or)):
        if not _is_binary_shaped(expected):
            raise ExprTypeError(
                f"boolean operator yields a binary value but domain {expected.name!r} is not binary",
                expr.pos,
            )
        check_binary(expr.left, resolver, expr.pos)
        check_binary(expr.right, resolver, expr.pos)
    elif isinstance(expr, Not):
        if not _is_binary_shaped(expected):
            raise ExprTypeError(
                f"'not' yields a binary value but domain {expected.name!r} is not binary",
                expr.pos,
            )
        check_binary(expr.operand, resolver, expr.pos)
    elif isinstance(expr, Cmp):
        if not _is_binary_shaped(expected):
            raise ExprTypeError(
                f"comparison yields a binary value but domain {expected.name!r} is not binary",
                expr.pos,
            )
        _check_cmp(expr, resolver)
    elif isinstance(expr, IfThenElse):
        check_binary(expr.condition, resolver)
        check_expr(expr.then, expected, resolver)
        check_expr(expr.otherwise, expected, resolver)
    elif isinstance(expr, MinMax):
        if not expected.is_total:
            raise ExprTypeError(
                f"{expr.which} requires a totally ordered domain, {expected.name!r} is not",
                expr.pos,
            )
        check_expr(expr.left, expected, resolver)
        check_expr(expr.right, expected, resolver)
    elif isinstance(expr, Table):
        _check_table(expr, expected, resolver)
    else:
        raise TypeError(f"unknown expression node {expr!r}")


def check_binary(expr: Expression, resolver: Resolver, anchor: Pos | None = None) -> None:
    """Check an expression used in a boolean position (any binary-shaped domain).

    Leaf failures are reported at ``anchor``, the operator that imposed the
    binary requirement, when one is known.
    """
    if isinstance(expr, Var):
        domain = _resolve(expr, resolver)
        if not _is_binary_shaped(domain):
            raise ExprTypeError(
                f"variable {expr.name!r} of domain {domain.name!r} used where a binary value is required",
                anchor or expr.pos,
            )
    elif isinstance(expr, Lit):
        if expr.token not in ("0", "1"):
            raise ExprTypeError(
                f"value {expr.token!r} used where a binary value is required",
                anchor or expr.pos,
            )
    elif isinstance(expr, (And, Or)):
        check_binary(expr.left, resolver, expr.pos)
        check_binary(expr.right, resolver, expr.pos)
    elif isinstance(expr, Not):
        check_binary(expr.operand, resolver, expr.pos)
    elif isinstance(expr, Cmp):
        _check_cmp(expr, resolver)
    elif isinstance(expr, IfThenElse):
        check_binary(expr.condition, resolver, expr.pos)
        check_binary(expr.then, resolver, expr.pos)
        check_binary(expr.otherwise, resolver, expr.pos)
    elif isinstance(expr, MinMax):
        check_binary(expr.left, resolver, expr.pos)
        check_binary(expr.right, resolver, expr.pos)
    elif isinstance(expr, Table):
        raise ExprTypeError("a table is only allowed as a whole equation body", expr.pos)
    else:
        raise TypeError(f"unknown expression node {expr!r}")


def _resolve(expr: Var, resolver: Resolver) -> Domain:
    try:
        return resolver(expr.name)
    except KeyError:
        raise ExprTypeError(
            f"unknown variable {expr.name!r}", expr.pos, kind="unknown-variable"
        ) from None


def _check_cmp(expr: Cmp, resolver: Resolver) -> None:
    if expr.op not in CMP_OPS:
        raise ExprTypeError(f"unknown comparison operator {expr.op!r}", expr.pos)
    if _is_boolean_producing(expr.left) or _is_boolean_producing(expr.right):
        check_binary(expr.left, resolver)
        check_binary(expr.right, resolver)
        return
    domain = infer_domain(expr.left, resolver) or infer_domain(expr.right, resolver)
    if domain is None:
        raise ExprTypeError(
            "cannot infer the operand domain of the comparison", expr.pos
        )
    check_expr(expr.left, domain, resolver)
    check_expr(expr.right, domain, resolver)


def _check_table(expr: Table, expected: Domain, resolver: Resolver) -> None:
    parent_domains = []
    for name in expr.parents:
        try:
            parent_domains.append(resolver(name))
        except KeyError:
            raise ExprTypeError(
                f"unknown variable {name!r}", expr.pos, kind="unknown-variable"
            ) from None
    rows = expr.row_map()
    expected_keys = set(itertools.product(*(d.values for d in parent_domains)))
    for key, out in rows.items():
        if key not in expected_keys:
            shown = ", ".join(key)
            raise ExprTypeError(f"table row ({shown}) does not match the parent domains", expr.pos)
        if out not in expected:
            raise ExprTypeError(
                f"table output {out!r} is not in domain {expected.name!r}", expr.pos
            )
    missing = expected_keys - set(rows)
    if missing:
        shown = ", ".join(sorted(missing)[0]) if missing else ""
        raise ExprTypeError(
            f"table is partial: no row for ({shown})", expr.pos, kind="partial-table"
        )
    if len(rows) != len(expr.rows):
        raise ExprTypeError("table declares a duplicate row", expr.pos)


# --- compiled evaluation -------------------------------------------------

def compile_expr(
    expr: Expression, expected: Domain | None, resolver: Resolver
) -> Callable[[Env], str]:
    """Compile a type-checked expression into a closure over an environment.

    ``expected`` is the result domain, or None inside boolean positions
    (where the canonical binary order applies).
    """
    if isinstance(expr, Var):
        name = expr.name
        return lambda env: env[name]
    if isinstance(expr, Lit):
        token = expr.token
        return lambda env: token
    if isinstance(expr, Not):
        operand = compile_expr(expr.operand, None, resolver)
        return lambda env: "0" if operand(env) == "1" else "1"
    if isinstance(expr, And):
        left = compile_expr(expr.left, None, resolver)
        right = compile_expr(expr.right, None, resolver)
        return lambda env: "1" if left(env) == "1" and right(env) == "1" else "0"
    if isinstance(expr, Or):
        left = compile_expr(expr.left, None, resolver)
        right = compile_expr(expr.right, None, resolver)
        return lambda env: "1" if left(env) == "1" or right(env) == "1" else "0"
    if isinstance(expr, Cmp):
        return _compile_cmp(expr, resolver)
    if isinstance(expr, IfThenElse):
        condition = compile_expr(expr.condition, None, resolver)
        then = compile_expr(expr.then, expected, resolver)
        otherwise = compile_expr(expr.otherwise, expected, resolver)
        return lambda env: then(env) if condition(env) == "1" else otherwise(env)
    if isinstance(expr, MinMax):
        domain = expected if expected is not None else BOOL
        left = compile_expr(expr.left, expected, resolver)
        right = compile_expr(expr.right, expected, resolver)
        strict = domain.strict_order
        if expr.which == "min":
            return lambda env: _pick(left(env), right(env), strict, low=True)
        return lambda env: _pick(left(env), right(env), strict, low=False)
    if isinstance(expr, Table):
        parents = expr.parents
        rows = expr.row_map()
        return lambda env: rows[tuple(env[p] for p in parents)]
    raise TypeError(f"unknown expression node {expr!r}")


def _compile_cmp(expr: Cmp, resolver: Resolver) -> Callable[[Env], str]:
    if _is_boolean_producing(expr.left) or _is_boolean_producing(expr.right):
        domain: Domain = BOOL
        left = compile_expr(expr.left, None, resolver)
        right = compile_expr(expr.right, None, resolver)
    else:
        inferred = infer_domain(expr.left, resolver) or infer_domain(expr.right, resolver)
        assert inferred is not None, "compile_expr requires a checked expression"
        domain = inferred
        left = compile_expr(expr.left, domain, resolver)
        right = compile_expr(expr.right, domain, resolver)
    op = expr.op
    strict = domain.strict_order
    if op == "==":
        return lambda env: "1" if left(env) == right(env) else "0"
    if op == "!=":
        return lambda env: "1" if left(env) != right(env) else "0"
    if op == "<":
        return lambda env: "1" if (left(env), right(env)) in strict else "0"
    if op == ">":
        return lambda env: "1" if (right(env), left(env)) in strict else "0"
    if op == "<=":
        def leq(env: Env) -> str:
            a, b = left(env), right(env)
            return "1" if a == b or (a, b) in strict else "0"
        return leq
    if op == ">=":
        def geq(env: Env) -> str:
            a, b = left(env), right(env)
            return "1" if a == b or (b, a) in strict else "0"
        return geq
    raise ValueError(f"unknown comparison operator {op!r}")


def _pick(a: str, b: str, strict: frozenset[tuple[str, str]], low: bool) -> str:
    if a == b:
        return a
    if (a, b) in strict:
        return a if low else b
    return b if low else a


# --- interpretive evaluation (kept independent of the compiler) ----------

def interpret_expr(
    expr: Expression, expected: Domain | None, resolver: Resolver, env: Env
) -> str:
    """Evaluate by direct recursion over the tree; the compiler's cross-check."""
    if isinstance(expr, Var):
        return env[expr.name]
    if isinstance(expr, Lit):
        return expr.token
    if isinstance(expr, Not):
        return "0" if interpret_expr(expr.operand, None, resolver, env) == "1" else "1"
    if isinstance(expr, And):
        a = interpret_expr(expr.left, None, resolver, env)
        b = interpret_expr(expr.right, None, resolver, env)
        return "1" if a == "1" and b == "1" else "0"
    if isinstance(expr, Or):
        a = interpret_expr(expr.left, None, resolver, env)
        b = interpret_expr(expr.right, None, resolver, env)
        return "1" if a == "1" or b == "1" else "0"
    if isinstance(expr, Cmp):
        if _is_boolean_producing(expr.left) or _is_boolean_producing(expr.right):
            domain: Domain = BOOL
            operand_expected: Domain | None = None
        else:
            inferred = infer_domain(expr.left, resolver) or infer_domain(expr.right, resolver)
            assert inferred is not None
            domain = inferred
            operand_expected = domain
        a = interpret_expr(expr.left, operand_expected, resolver, env)
        b = interpret_expr(expr.right, operand_expected, resolver, env)
        if expr.op == "==":
            result = a == b
        elif expr.op == "!=":
            result = a != b
        elif expr.op == "<":
            result = domain.less(a, b)
        elif expr.op == ">":
            result = domain.less(b, a)
        elif expr.op == "<=":
            result = a == b or domain.less(a, b)
        elif expr.op == ">=":
            result = a == b or domain.less(b, a)
        else:
            raise ValueError(f"unknown comparison operator {expr.op!r}")
        return "1" if result else "0"
    if isinstance(expr, IfThenElse):
        if interpret_expr(expr.condition, None, resolver, env) == "1":
            return interpret_expr(expr.then, expected, resolver, env)
        return interpret_expr(expr.otherwise, expected, resolver, env)
    if isinstance(expr, MinMax):
        domain = expected if expected is not None else BOOL
        a = interpret_expr(expr.left, expected, resolver, env)
        b = interpret_expr(expr.right, expected, resolver, env)
        return _pick(a, b, domain.strict_order, low=expr.which == "min")
    if isinstance(expr, Table):
        return expr.row_map()[tuple(env[p] for p in expr.parents)]
    raise TypeError(f"unknown expression node {expr!r}")


def table_from_mapping(
    parents: Iterable[str], rows: Mapping[tuple[str, ...], str]
) -> Table:
    return Table(tuple(parents), tuple(rows.items()))
