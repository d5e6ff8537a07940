"""Perfect sequences, running intersection orderings and exchange rules."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import networkx as nx
import numpy as np

from .compose import Op, compose_chain, compose_right, prefix_compositions, anticipate
from .errors import CompositionError
from .measure import (
    EQUAL_TOL,
    Measure,
    _intersection,
    aligned,
    consistent,
    equal,
    is_zero,
    make_scope,
    marginalize,
)


@dataclass(frozen=True, eq=False)
class MeasureSequence:
    """An ordered, non-empty list of measures ``P1 .. Pn``."""

    items: tuple

    def __init__(self, items: Iterable[Measure]):
        items = tuple(items)
        if not items:
            raise ValueError("a measure sequence needs at least one measure")
        object.__setattr__(self, "items", items)

    @property
    def scopes(self) -> list:
        return [m.scope for m in self.items]

    @property
    def covered(self) -> tuple:
        return tuple(sorted(set().union(*map(set, self.scopes))))

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __getitem__(self, i):
        return self.items[i]


def is_perfect(seq: Sequence[Measure], tol: float = EQUAL_TOL) -> bool:
    """Each measure must be consistent with the composition of those before it.

    Raises :class:`~compmeasure.errors.UndefinedSubexpression` if a prefix
    right composition is undefined.
    """
    seq = list(seq)
    prefixes = prefix_compositions(seq)
    return all(consistent(prefixes[m - 1], seq[m], tol) for m in range(1, len(seq)))


def is_perfect_by_definition(seq: Sequence[Measure], tol: float = EQUAL_TOL) -> bool:
    """Compare every right-composition prefix with the left-composition prefix."""
    seq = list(seq)
    prefixes = prefix_compositions(seq)
    left = seq[0]
    for m in range(1, len(seq)):
        try:
            left = compose_chain([left, seq[m]], [Op.LEFT])
        except CompositionError:
            return False
        if not equal(prefixes[m], left, tol):
            return False
    return True


def perfectize(seq: Sequence[Measure]) -> list:
    """Rewrite a defined right-composition chain as a perfect sequence with the same joint.

    Each ``Q_i`` is ``P_i`` recomposed behind the marginal of the composed
    prefix on the variables ``P_i`` shares with earlier scopes, so ``Q_i`` keeps
    the scope of ``P_i``.
    """
    seq = list(seq)
    prefixes = prefix_compositions(seq)
    out = [seq[0]]
    for i in range(1, len(seq)):
        shared = _intersection(seq[i].scope, prefixes[i - 1].scope)
        out.append(compose_right(marginalize(prefixes[i - 1], shared), seq[i]))
    return out


def has_rip(scopes: Sequence[Iterable[int]]) -> bool:
    """Running intersection property of the scopes in the given order."""
    sets = [set(s) for s in scopes]
    seen = set()
    for i, s in enumerate(sets):
        if i >= 1:
            overlap = s & seen
            if not any(overlap <= sets[j] for j in range(i)):
                return False
        seen |= s
    return True


@dataclass(frozen=True)
class RipOrdering:
    """Covering indices in RIP order; ``witnesses[k]`` is the position (in
    ``order``) of an earlier set containing the k-th set's overlap with all
    earlier sets. ``witnesses[0]`` is ``None``."""

    order: tuple
    witnesses: tuple

    def parent(self, k: int) -> int:
        """Covering index of the witness for position ``k``."""
        return self.order[self.witnesses[k]]


def junction_tree(covering: Sequence[Iterable[int]]):
    """Maximum-weight spanning tree of the intersection graph, or ``None``.

    The tree is returned only if it has the running intersection property
    (every variable's sets form a connected subtree), which happens exactly
    when the covering admits a RIP ordering.
    """
    sets = [set(s) for s in covering]
    g = nx.Graph()
    g.add_nodes_from(range(len(sets)))
    for i, j in itertools.combinations(range(len(sets)), 2):
        g.add_edge(i, j, weight=len(sets[i] & sets[j]))
    tree = nx.maximum_spanning_tree(g)
    for v in set().union(*sets) if sets else ():
        holders = [i for i, s in enumerate(sets) if v in s]
        if not nx.is_connected(tree.subgraph(holders)):
            return None
    return tree


def rooted_ordering(tree, root: int) -> RipOrdering:
    order = [root]
    witnesses = [None]
    position = {root: 0}
    frontier = [root]
    while frontier:
        nxt = []
        for node in frontier:
            for child in sorted(tree.neighbors(node)):
                if child in position:
                    continue
                position[child] = len(order)
                order.append(child)
                witnesses.append(position[node])
                nxt.append(child)
        frontier = nxt
    return RipOrdering(tuple(order), tuple(witnesses))


def find_rip_ordering(covering: Sequence[Iterable[int]], root: int = 0):
    """A RIP ordering of ``covering`` starting at index ``root``, or ``None``."""
    tree = junction_tree(covering)
    if tree is None:
        return None
    return rooted_ordering(tree, root)


def rip_witnesses(covering, order) -> tuple | None:
    """Witness positions for ``order`` if it has the RIP, else ``None``."""
    sets = [set(covering[j]) for j in order]
    witnesses = [None]
    seen = set(sets[0]) if sets else set()
    for k in range(1, len(sets)):
        overlap = sets[k] & seen
        fits = [l for l in range(k) if overlap <= sets[l]]
        if not fits:
            return None
        witnesses.append(fits[0])
        seen |= sets[k]
    return tuple(witnesses)


def kellerer_sufficient(seq: Sequence[Measure], tol: float = EQUAL_TOL) -> bool:
    """Pairwise consistent measures on RIP-ordered scopes (sufficient for perfectness)."""
    seq = list(seq)
    if not has_rip([m.scope for m in seq]):
        return False
    return all(consistent(a, b, tol) for a, b in itertools.combinations(seq, 2))


class ExchangeRule(enum.Enum):
    """Conditions under which a three-term chain may be rewritten."""

    FIRST_COVERS_LATER_OVERLAP = "L4"
    CONSISTENT_FIRST_PAIR = "L5"
    CONSISTENT_OUTER_PAIR = "L6"
    CONDITIONAL_INDEPENDENCE = "L7"
    MIDDLE_COVERS_OUTER_OVERLAP = "C1"
    CONSISTENT_PRODUCT_FORM = "C2"

    @property
    def tag(self) -> str:
        return self.value

    @property
    def identity(self) -> str:
        return _IDENTITIES[self]

    def sides(self, p1: Measure, p2: Measure, p3: Measure):
        """Evaluate both sides of the rewrite this rule licenses."""
        lhs = compose_chain([p1, p2, p3])
        if self is ExchangeRule.CONSISTENT_FIRST_PAIR:
            rhs = compose_chain([p1, p3, p2], [Op.RIGHT, Op.LEFT])
        elif self is ExchangeRule.CONSISTENT_OUTER_PAIR:
            rhs = compose_chain([p1, p2, p3], [Op.RIGHT, Op.LEFT])
        elif self is ExchangeRule.MIDDLE_COVERS_OUTER_OVERLAP:
            rhs = compose_chain([p2, p3, p1], [Op.RIGHT, Op.LEFT])
        else:
            rhs = compose_chain([p1, p3, p2])
        return lhs, rhs


_IDENTITIES = {
    ExchangeRule.FIRST_COVERS_LATER_OVERLAP: "P1 |> P2 |> P3 = P1 |> P3 |> P2",
    ExchangeRule.CONSISTENT_FIRST_PAIR: "P1 |> P2 |> P3 = P1 |> P3 <| P2",
    ExchangeRule.CONSISTENT_OUTER_PAIR: "P1 |> P2 |> P3 = P1 |> P2 <| P3",
    ExchangeRule.CONDITIONAL_INDEPENDENCE: "P1 |> P2 |> P3 = P1 |> P3 |> P2",
    ExchangeRule.MIDDLE_COVERS_OUTER_OVERLAP: "P1 |> P2 |> P3 = P2 |> P3 <| P1",
    ExchangeRule.CONSISTENT_PRODUCT_FORM: "P1 |> P2 |> P3 = P1 |> P3 |> P2",
}


def _marg_on(m: Measure, sub, scope) -> np.ndarray:
    return aligned(marginalize(m, sub), scope)


def _sets(*measures):
    return [set(m.scope) for m in measures]


def _factorizes(pi: Measure, k1: set, kj: set, tol: float) -> bool:
    """``pi`` on K_i&(K1|Kj) splits into its overlap-with-Kj part times its Kj part,
    both sides conditioned on K1&K2&K3."""
    ki = set(pi.scope)
    union = make_scope(ki & (k1 | kj))
    with_j = make_scope(ki & kj)
    with_1 = make_scope(ki & k1)
    core = make_scope(ki & k1 & kj)
    lhs = _marg_on(pi, with_j, union) * _marg_on(pi, with_1, union)
    rhs = _marg_on(pi, union, union) * _marg_on(pi, core, union)
    lhs, rhs = np.broadcast_arrays(lhs, rhs)
    return bool(np.all(np.abs(lhs - rhs) <= tol))


def _same_conditional(p2: Measure, p3: Measure, core, tol: float) -> bool:
    """Cross-multiplied check that P2 and P3 induce the same conditional on K2&K3 given ``core``."""
    overlap = _intersection(p2.scope, p3.scope)
    a2 = _marg_on(p2, overlap, overlap)
    a3 = _marg_on(p3, overlap, overlap)
    c2 = _marg_on(p2, core, overlap)
    c3 = _marg_on(p3, core, overlap)
    lhs, rhs, c2, c3 = np.broadcast_arrays(a2 * c3, a3 * c2, c2, c3)
    checked = ~(is_zero(c2) & is_zero(c3))
    return bool(np.all(np.abs(lhs - rhs)[checked] <= tol))


def _product_form(pi: Measure, k1: set, kj: set, tol: float) -> bool:
    ki = set(pi.scope)
    union = make_scope(ki & (k1 | kj))
    solo = make_scope((ki & k1) - kj)
    shared = make_scope(ki & kj)
    lhs = _marg_on(pi, union, union)
    rhs = _marg_on(pi, solo, union) * _marg_on(pi, shared, union)
    lhs, rhs = np.broadcast_arrays(lhs, rhs)
    return bool(np.all(np.abs(lhs - rhs) <= tol))


def applicable_exchange_rules(p1: Measure, p2: Measure, p3: Measure, tol: float = EQUAL_TOL) -> frozenset:
    """Every exchange rule whose hypothesis holds for the triple."""
    k1, k2, k3 = _sets(p1, p2, p3)
    rules = set()
    if k2 & k3 <= k1:
        rules.add(ExchangeRule.FIRST_COVERS_LATER_OVERLAP)
        if consistent(p1, p3, tol):
            rules.add(ExchangeRule.CONSISTENT_OUTER_PAIR)
    if k1 & k3 <= k2:
        rules.add(ExchangeRule.MIDDLE_COVERS_OUTER_OVERLAP)
        if consistent(p1, p2, tol):
            rules.add(ExchangeRule.CONSISTENT_FIRST_PAIR)
    core = make_scope(k1 & k2 & k3)
    if (
        _factorizes(p2, k1, k3, tol)
        and _factorizes(p3, k1, k2, tol)
        and _same_conditional(p2, p3, core, tol)
    ):
        rules.add(ExchangeRule.CONDITIONAL_INDEPENDENCE)
    if (
        consistent(p2, p3, tol)
        and _product_form(p2, k1, k3, tol)
        and _product_form(p3, k1, k2, tol)
    ):
        rules.add(ExchangeRule.CONSISTENT_PRODUCT_FORM)
    return frozenset(rules)


def anticipation_reduces(p1: Measure, p2: Measure, p3: Measure, tol: float = EQUAL_TOL) -> bool:
    """Whether the anticipating operator collapses to a plain right composition."""
    return equal(anticipate(p2, p3, p1.scope), compose_right(p2, p3), tol)
