"""Finite value domains equipped with a strict partial order."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class Ordering(Enum):
    """Outcome of comparing two values of the same domain."""

    LESS = "less"
    GREATER = "greater"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


def _transitive_closure(pairs: frozenset[tuple[str, str]]) -> frozenset[tuple[str, str]]:
    closure = set(pairs)
    changed = True
    while changed:
        changed = False
        for a, b in list(closure):
            for c, d in list(closure):
                if b == c and (a, d) not in closure:
                    closure.add((a, d))
                    changed = True
    return frozenset(closure)


@dataclass(frozen=True, eq=False)
class Domain:
    """A named, finite, ordered list of value tokens with a partial order.

    ``covers`` are the declared pairs (a, b) meaning a < b; the full strict
    order is their transitive closure, computed once at construction.
    Tokens are opaque strings: no numeric ordering is ever implied.

    Raises ValueError if values are not distinct, an order pair references
    an undeclared value, or the declared order is cyclic.
    """

    name: str
    values: tuple[str, ...]
    covers: frozenset[tuple[str, str]] = frozenset()
    strict_order: frozenset[tuple[str, str]] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(self.values))
        object.__setattr__(self, "covers", frozenset(tuple(p) for p in self.covers))
        if not self.values:
            raise ValueError(f"domain {self.name!r} declares no values")
        if len(set(self.values)) != len(self.values):
            raise ValueError(f"domain {self.name!r} has duplicate values")
        declared = set(self.values)
        for a, b in sorted(self.covers):
            if a not in declared or b not in declared:
                raise ValueError(
                    f"domain {self.name!r}: order pair ({a} < {b}) references an undeclared value"
                )
        closure = _transitive_closure(self.covers)
        for v in self.values:
            if (v, v) in closure:
                raise ValueError(f"domain {self.name!r}: declared order is cyclic at {v!r}")
        object.__setattr__(self, "strict_order", closure)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Domain):
            return NotImplemented
        return (
            self.name == other.name
            and self.values == other.values
            and self.strict_order == other.strict_order
        )

    def __hash__(self) -> int:
        return hash((self.name, self.values, self.strict_order))

    def __contains__(self, token: str) -> bool:
        return token in self.values

    def require(self, token: str) -> None:
        if token not in self.values:
            raise ValueError(f"value {token!r} is not in domain {self.name!r}")

    def index(self, token: str) -> int:
        """Position of a token in the declared value order."""
        self.require(token)
        return self.values.index(token)

    def less(self, a: str, b: str) -> bool:
        return (a, b) in self.strict_order

    def reduction(self) -> frozenset[tuple[str, str]]:
        """Transitive reduction of the strict order (the minimal covering pairs)."""
        reduced = set(self.strict_order)
        for a, b in self.strict_order:
            for c in self.values:
                if (a, c) in self.strict_order and (c, b) in self.strict_order:
                    reduced.discard((a, b))
                    break
        return frozenset(reduced)

    @property
    def is_binary(self) -> bool:
        """True for the canonical two-point domain: values {0, 1} with 0 < 1."""
        return set(self.values) == {"0", "1"} and self.strict_order == frozenset({("0", "1")})

    @property
    def is_total(self) -> bool:
        """True when every pair of distinct values is comparable (a chain)."""
        for i, a in enumerate(self.values):
            for b in self.values[i + 1 :]:
                if (a, b) not in self.strict_order and (b, a) not in self.strict_order:
                    return False
        return True


#: Canonical binary domain; boolean connectives and comparisons produce it.
BOOL = Domain("Bool", ("0", "1"), frozenset({("0", "1")}))


def compare(domain: Domain, a: str, b: str) -> Ordering:
    """Compare two values under the domain's partial order.

    Equal iff the tokens coincide; otherwise less/greater per the declared
    order's transitive closure, or incomparable if no relation holds.
    """
    domain.require(a)
    domain.require(b)
    if a == b:
        return Ordering.EQUAL
    if domain.less(a, b):
        return Ordering.LESS
    if domain.less(b, a):
        return Ordering.GREATER
    return Ordering.INCOMPARABLE


def ordered_alternatives(domain: Domain, value: str) -> tuple[frozenset[str], frozenset[str]]:
    """Values strictly below and strictly above ``value``.

    Incomparable values appear in neither set. Returns (below, above).
    """
    domain.require(value)
    below = frozenset(w for w in domain.values if domain.less(w, value))
    above = frozenset(w for w in domain.values if domain.less(value, w))
    return below, above


def chain(name: str, tokens: tuple[str, ...]) -> Domain:
    """A totally ordered domain in the given token order."""
    covers = frozenset(zip(tokens, tokens[1:]))
    return Domain(name, tokens, covers)
