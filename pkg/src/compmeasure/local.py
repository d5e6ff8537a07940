"""Local computation: propagating a perfect sequence into a decomposable covering.

Given a perfect sequence ``P1 .. Pn`` and a covering ``L1 .. Lm`` that admits
a running intersection ordering, :func:`run_procedure` fills an ``n x m``
grid of tables ``R[i][j]`` on subsets of ``L_j``. Row ``i`` is consistent with
the composition ``P1 |> ... |> P_i``; the last row is a perfect sequence
whose composition equals the original one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .compose import compose_chain, compose_left, compose_right, prefix_compositions
from .errors import CompositionError, NoBucket, NotDecomposable, UndefinedSubexpression
from .measure import Measure, equal, make_scope, marginalize, max_diff
from .sequence import (
    MeasureSequence,
    RipOrdering,
    is_perfect,
    junction_tree,
    rooted_ordering,
)


@dataclass(frozen=True)
class Covering:
    sets: tuple

    def __init__(self, sets: Iterable[Iterable[int]], universe=None):
        sets = tuple(make_scope(s) for s in sets)
        if not sets:
            raise ValueError("a covering needs at least one set")
        object.__setattr__(self, "sets", sets)
        if universe is not None:
            missing = set(universe) - set(self.variables)
            if missing:
                raise ValueError(f"covering misses variables {sorted(missing)}")

    @property
    def variables(self) -> tuple:
        return tuple(sorted(set().union(*map(set, self.sets))))

    def is_decomposable(self) -> bool:
        return junction_tree(self.sets) is not None

    def __len__(self):
        return len(self.sets)

    def __getitem__(self, j):
        return self.sets[j]


def assign_buckets(scopes: Sequence[Iterable[int]], covering, tie_break: str = "smallest") -> tuple:
    """For each scope, the index of a covering set containing it.

    ``tie_break`` picks the smallest (default) or largest eligible index.
    """
    sets = [set(s) for s in getattr(covering, "sets", covering)]
    buckets = []
    for i, k in enumerate(scopes):
        fits = [j for j, s in enumerate(sets) if set(k) <= s]
        if not fits:
            raise NoBucket(i)
        buckets.append(fits[0] if tie_break == "smallest" else fits[-1])
    return tuple(buckets)


@dataclass(frozen=True)
class Update:
    """One table write of the procedure: the cell written and the cells read."""

    target: tuple
    sources: tuple
    operation: str


@dataclass
class LocalState:
    """The grid of tables ``grid[i][j]`` (0-based) plus what was used to build it.

    In low-memory mode only the last two rows are kept; dropped rows hold ``None``.
    """

    covering: Covering
    buckets: tuple
    grid: list
    orderings: list
    trace: list = field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.grid)

    @property
    def m(self) -> int:
        return len(self.covering)


OrderingProvider = Callable[[int], RipOrdering]


def run_procedure(
    seq: Sequence[Measure],
    covering,
    *,
    check_perfect: bool = True,
    tie_break: str = "smallest",
    ordering_for: OrderingProvider | None = None,
    low_memory: bool = False,
) -> LocalState:
    """Propagate the perfect sequence ``seq`` into ``covering``.

    ``ordering_for(root)`` may supply the RIP ordering used at a step whose
    bucket is ``root``; by default the covering's junction tree is re-rooted.
    """
    seq = list(seq)
    if not isinstance(covering, Covering):
        covering = Covering(covering)
    missing = set().union(*(set(m.scope) for m in seq)) - set(covering.variables)
    if missing:
        raise NoBucket(next(i for i, m in enumerate(seq) if set(m.scope) & missing))
    tree = junction_tree(covering.sets)
    if tree is None:
        raise NotDecomposable(f"covering {covering.sets} admits no RIP ordering")
    if ordering_for is None:
        ordering_for = lambda root: rooted_ordering(tree, root)  # noqa: E731
    buckets = assign_buckets([m.scope for m in seq], covering, tie_break)
    if check_perfect and not is_perfect(seq):
        raise ValueError("sequence is not perfect")

    m = len(covering)
    first = seq[0]
    row = [marginalize(first, set(first.scope) & set(L)) for L in covering.sets]
    state = LocalState(covering, buckets, [row], [None])
    for j in range(m):
        state.trace.append(Update((0, j), (), "marginal"))

    for i in range(1, len(seq)):
        prev = state.grid[i - 1]
        b = buckets[i]
        ordering = ordering_for(b)
        if ordering.order[0] != b or sorted(ordering.order) != list(range(m)):
            raise ValueError(f"ordering {ordering.order} must start at bucket {b}")
        row = [None] * m
        try:
            row[b] = compose_right(prev[b], seq[i])
        except CompositionError as exc:
            raise UndefinedSubexpression(
                f"step {i + 1}: R[{i}][{b}] |> P_{i + 1} undefined", exc.scope, exc.witness, i + 1, exc
            ) from exc
        state.trace.append(Update((i, b), ((i - 1, b),), "right"))
        for k in range(1, m):
            j, jl = ordering.order[k], ordering.parent(k)
            src = row[jl]
            message = marginalize(src, set(src.scope) & set(covering.sets[j]))
            try:
                row[j] = compose_left(prev[j], message)
            except CompositionError as exc:
                raise UndefinedSubexpression(
                    f"step {i + 1}: R[{i - 1}][{j}] <| message from {jl} undefined",
                    exc.scope, exc.witness, i + 1, exc,
                ) from exc
            state.trace.append(Update((i, j), ((i - 1, j), (i, jl)), "left"))
        state.grid.append(row)
        state.orderings.append(ordering)
        if low_memory and i >= 2:
            state.grid[i - 2] = None
    return state


def final_row(state: LocalState, order: Sequence[int] | None = None) -> MeasureSequence:
    """The last row of tables, in covering order unless ``order`` is given."""
    row = state.grid[-1]
    order = range(len(row)) if order is None else order
    return MeasureSequence(row[j] for j in order)


def final_joint(state: LocalState) -> Measure:
    """Compose the last row along a RIP ordering of the covering."""
    tree = junction_tree(state.covering.sets)
    ordering = rooted_ordering(tree, 0)
    return compose_chain(final_row(state, ordering.order))


@dataclass(frozen=True)
class CellCheck:
    i: int
    j: int
    max_deviation: float
    passed: bool


@dataclass(frozen=True)
class ConsistencyReport:
    """Per-cell comparison of ``R[i][j]`` against the composed prefix ``P1 |> ... |> P_{i+1}``."""

    cells: tuple
    tol: float

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cells)

    @property
    def failures(self) -> list:
        return [c for c in self.cells if not c.passed]

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "tolerance": self.tol,
            "cells": [
                {"i": c.i, "j": c.j, "max_deviation": c.max_deviation, "passed": c.passed}
                for c in self.cells
            ],
        }


def verify_prefix_consistency(state: LocalState, seq: Sequence[Measure], tol: float = 1e-9) -> ConsistencyReport:
    """Check every stored ``R[i][j]`` against the marginal of the i-th prefix joint."""
    prefixes = prefix_compositions(list(seq))
    cells = []
    for i, row in enumerate(state.grid):
        if row is None:
            continue
        for j, r in enumerate(row):
            dev = max_diff(marginalize(prefixes[i], r.scope), r)
            cells.append(CellCheck(i, j, dev, dev <= tol))
    return ConsistencyReport(tuple(cells), tol)


def same_joint(state_a: LocalState, state_b: LocalState, tol: float = 1e-9) -> bool:
    return equal(final_joint(state_a), final_joint(state_b), tol)
