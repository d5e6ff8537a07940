"""Finite variables, scopes, configurations and dense probability tables.

Tables are stored as numpy arrays with one axis per scope variable. Scopes
are always sorted ascending, so the C-order flattening of a table is the
canonical lexicographic order with the first scope variable varying slowest.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import (
    NegativeEntry,
    NotNormalized,
    ScopeMismatch,
    ScopeNotContained,
    ShapeMismatch,
)

Scope = tuple  # sorted tuple of variable ids

SUM_TOL = 1e-9
EQUAL_TOL = 1e-9
ZERO_TOL = 1e-12


def make_scope(variables: Iterable[int] = ()) -> Scope:
    """Return ``variables`` as a canonical (sorted, duplicate-free) scope."""
    vs = [int(v) for v in variables]
    if len(set(vs)) != len(vs):
        raise ShapeMismatch(f"duplicate variables in scope {vs}")
    return tuple(sorted(vs))


def _union(*scopes: Sequence[int]) -> Scope:
    return tuple(sorted(set().union(*map(set, scopes))))


def _intersection(a: Sequence[int], b: Sequence[int]) -> Scope:
    return tuple(sorted(set(a) & set(b)))


@dataclass(frozen=True)
class VariableTable:
    """The universe: cardinality (and optional value labels) per variable id."""

    cardinalities: Mapping[int, int]
    labels: Mapping[int, tuple] = field(default_factory=dict)

    def __post_init__(self):
        cards = {int(k): int(v) for k, v in self.cardinalities.items()}
        for var, card in cards.items():
            if card < 1:
                raise ShapeMismatch(f"variable {var} has cardinality {card} < 1")
        labels = {int(k): tuple(v) for k, v in self.labels.items()}
        for var, labs in labels.items():
            if var not in cards:
                raise ShapeMismatch(f"labels given for undeclared variable {var}")
            if len(labs) != cards[var]:
                raise ShapeMismatch(
                    f"variable {var}: {len(labs)} labels for cardinality {cards[var]}"
                )
        object.__setattr__(self, "cardinalities", cards)
        object.__setattr__(self, "labels", labels)

    @property
    def variables(self) -> Scope:
        return tuple(sorted(self.cardinalities))

    def cards(self, scope: Sequence[int]) -> tuple:
        try:
            return tuple(self.cardinalities[v] for v in scope)
        except KeyError as exc:
            raise ScopeNotContained(f"variable {exc.args[0]} is not declared") from None

    def size(self, scope: Sequence[int]) -> int:
        return int(np.prod(self.cards(scope), dtype=np.int64))

    def merged(self, other: "VariableTable") -> "VariableTable":
        for v in set(self.cardinalities) & set(other.cardinalities):
            if self.cardinalities[v] != other.cardinalities[v]:
                raise ShapeMismatch(f"variable {v} has conflicting cardinalities")
        return VariableTable(
            {**self.cardinalities, **other.cardinalities}, {**self.labels, **other.labels}
        )


@dataclass(frozen=True)
class Configuration:
    """A value index for each variable of a scope."""

    scope: Scope
    values: tuple

    def __post_init__(self):
        if len(self.scope) != len(self.values):
            raise ShapeMismatch("configuration needs one value per scope variable")

    @classmethod
    def from_dict(cls, assignment: Mapping[int, int]) -> "Configuration":
        scope = make_scope(assignment)
        return cls(scope, tuple(int(assignment[v]) for v in scope))

    def as_dict(self) -> dict:
        return dict(zip(self.scope, self.values))

    def __getitem__(self, var: int) -> int:
        return self.values[self.scope.index(var)]

    def __str__(self):
        if not self.scope:
            return "()"
        return ", ".join(f"x{v}={x}" for v, x in zip(self.scope, self.values))


def project(x: Configuration, scope: Sequence[int]) -> Configuration:
    """Restrict a configuration to ``scope``."""
    scope = make_scope(scope)
    missing = set(scope) - set(x.scope)
    if missing:
        raise ScopeNotContained(f"variables {sorted(missing)} not in {x.scope}")
    lookup = x.as_dict()
    return Configuration(scope, tuple(lookup[v] for v in scope))


@dataclass(frozen=True, eq=False)
class Measure:
    """A probability table over the configurations of ``scope``.

    ``values`` has shape ``cards``; construct validated instances through
    :func:`make_measure`.
    """

    scope: Scope
    cards: tuple
    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=float).reshape(self.cards)
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def table(self) -> np.ndarray:
        """Flat table in canonical order."""
        return self.values.reshape(-1)

    @property
    def universe(self) -> VariableTable:
        return VariableTable(dict(zip(self.scope, self.cards)))

    def configurations(self) -> Iterator[Configuration]:
        for values in itertools.product(*map(range, self.cards)):
            yield Configuration(self.scope, values)

    def __getitem__(self, x) -> float:
        if isinstance(x, Mapping):
            x = Configuration.from_dict(x)
        if isinstance(x, Configuration):
            x = project(x, self.scope).values
        return float(self.values[tuple(x)])

    def __repr__(self):
        return f"Measure(scope={self.scope}, table={self.table.tolist()})"


def make_measure(scope, table, universe: VariableTable, normalize: bool = False) -> Measure:
    """Validate ``table`` as a probability measure on ``scope``.

    With ``normalize`` a table whose sum is off by at most 1e-6 is rescaled;
    otherwise the sum must be within 1e-9 of one.
    """
    scope = make_scope(scope)
    cards = universe.cards(scope)
    arr = np.asarray(table, dtype=float).reshape(-1)
    expected = int(np.prod(cards, dtype=np.int64))
    if arr.size != expected:
        raise ShapeMismatch(f"scope {scope} needs {expected} entries, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise ShapeMismatch("table contains non-finite entries")
    if np.any(arr < 0):
        raise NegativeEntry(f"negative entry {arr.min()!r} in table on {scope}")
    total = float(arr.sum())
    if normalize and abs(total - 1.0) <= 1e-6 and total > 0:
        arr = arr / total
    elif abs(total - 1.0) > SUM_TOL:
        raise NotNormalized(f"table on {scope} sums to {total!r}")
    return Measure(scope, cards, arr.reshape(cards))


def unit_measure() -> Measure:
    return Measure((), (), np.array(1.0))


def uniform(scope, universe: VariableTable) -> Measure:
    scope = make_scope(scope)
    cards = universe.cards(scope)
    return Measure(scope, cards, np.full(cards, 1.0 / universe.size(scope)))


def aligned(m: Measure, scope: Sequence[int]) -> np.ndarray:
    """View of ``m.values`` with singleton axes for variables of ``scope`` not in ``m``.

    The result broadcasts against any table on a superset of ``scope``.
    """
    own = set(m.scope)
    if not own <= set(scope):
        raise ScopeNotContained(f"{m.scope} is not contained in {tuple(scope)}")
    shape = [m.cards[m.scope.index(v)] if v in own else 1 for v in scope]
    return m.values.reshape(shape)


def marginalize(m: Measure, scope) -> Measure:
    """Sum ``m`` over the variables outside ``scope``."""
    scope = make_scope(scope)
    if not set(scope) <= set(m.scope):
        raise ScopeNotContained(f"{scope} is not contained in {m.scope}")
    if scope == m.scope:
        return m
    axes = tuple(i for i, v in enumerate(m.scope) if v not in scope)
    cards = tuple(c for v, c in zip(m.scope, m.cards) if v in scope)
    return Measure(scope, cards, m.values.sum(axis=axes))


def product(p: Measure, q: Measure) -> Measure:
    """Pointwise product of two measures on disjoint scopes."""
    if set(p.scope) & set(q.scope):
        raise ScopeMismatch(f"product needs disjoint scopes, got {p.scope} and {q.scope}")
    scope = _union(p.scope, q.scope)
    cards = _cards_of(scope, p, q)
    return Measure(scope, cards, aligned(p, scope) * aligned(q, scope))


def _cards_of(scope, *measures: Measure) -> tuple:
    lookup = {}
    for m in measures:
        for v, c in zip(m.scope, m.cards):
            if lookup.setdefault(v, c) != c:
                raise ShapeMismatch(f"variable {v} has conflicting cardinalities")
    return tuple(lookup[v] for v in scope)


def is_zero(values) -> np.ndarray:
    return np.abs(values) <= ZERO_TOL


def dominance_witness(q: Measure, p: Measure):
    """First configuration where ``q`` is zero and ``p`` is not, else ``None``."""
    if p.scope != q.scope:
        raise ScopeMismatch(f"dominance needs equal scopes, got {p.scope} and {q.scope}")
    _cards_of(p.scope, p, q)
    bad = is_zero(q.values) & ~is_zero(p.values)
    if not bad.any():
        return None
    index = np.unravel_index(int(np.flatnonzero(bad.reshape(-1))[0]), q.cards)
    return Configuration(q.scope, tuple(int(i) for i in index))


def dominates(q: Measure, p: Measure) -> bool:
    """True iff ``p`` is absolutely continuous with respect to ``q``."""
    return dominance_witness(q, p) is None


def max_diff(p: Measure, q: Measure) -> float:
    if p.scope != q.scope:
        raise ScopeMismatch(f"cannot compare tables on {p.scope} and {q.scope}")
    if not p.scope:
        return abs(float(p.values) - float(q.values))
    return float(np.max(np.abs(p.values - q.values)))


def equal(p: Measure, q: Measure, tol: float = EQUAL_TOL) -> bool:
    return p.scope == q.scope and max_diff(p, q) <= tol


def consistent(p1: Measure, p2: Measure, tol: float = EQUAL_TOL) -> bool:
    """True iff the two measures agree on the marginal of their common variables."""
    common = _intersection(p1.scope, p2.scope)
    return max_diff(marginalize(p1, common), marginalize(p2, common)) <= tol


def is_extension_of(q: Measure, p: Measure, tol: float = EQUAL_TOL) -> bool:
    if not set(p.scope) <= set(q.scope):
        raise ScopeNotContained(f"{p.scope} is not contained in {q.scope}")
    return max_diff(marginalize(q, p.scope), p) <= tol
