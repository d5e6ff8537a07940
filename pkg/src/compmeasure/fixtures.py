"""Random and hand-made measures for tests, demos and property suites."""

from __future__ import annotations

import itertools

import numpy as np

from .measure import Measure, VariableTable, make_measure, marginalize, make_scope


def dominance_counterexample():
    """Two measures whose right and left compositions are both undefined.

    ``P`` on {1, 2} puts all mass on x2 = 0, ``Q`` on {2, 3} all mass on
    x2 = 1, so every product cell ``P(x1, x2) Q(x2, x3)`` is zero.
    """
    universe = VariableTable({1: 2, 2: 2, 3: 2})
    p = make_measure((1, 2), [0.5, 0.0, 0.5, 0.0], universe)
    q = make_measure((2, 3), [0.0, 0.0, 0.5, 0.5], universe)
    return universe, p, q


def random_universe(rng, n_vars=4, max_card=3, min_card=2) -> VariableTable:
    return VariableTable({v: int(rng.integers(min_card, max_card + 1)) for v in range(1, n_vars + 1)})


def random_table(rng, cards, zero_prob=0.0, alpha=1.0) -> np.ndarray:
    """Dirichlet-ish table; each cell is zeroed with ``zero_prob`` (at least one stays positive)."""
    size = int(np.prod(cards, dtype=np.int64))
    w = rng.gamma(alpha, size=size)
    if zero_prob > 0:
        keep = rng.random(size) >= zero_prob
        if not keep.any():
            keep[rng.integers(size)] = True
        w = w * keep
    w = w + (w > 0) * 1e-3
    return (w / w.sum()).reshape(cards)


def random_measure(rng, scope, universe: VariableTable, zero_prob=0.0) -> Measure:
    scope = make_scope(scope)
    cards = universe.cards(scope)
    return Measure(scope, cards, random_table(rng, cards, zero_prob))


def random_scope(rng, variables, min_size=1, max_size=None) -> tuple:
    variables = list(variables)
    max_size = len(variables) if max_size is None else min(max_size, len(variables))
    k = int(rng.integers(min_size, max_size + 1))
    return make_scope(rng.choice(variables, size=k, replace=False).tolist())


def marginals_of(joint: Measure, scopes) -> list:
    return [marginalize(joint, s) for s in scopes]


def reweighted(m: Measure, rng, on, strength=0.5) -> Measure:
    """``m`` with its marginal on ``on`` tilted by random positive factors.

    The conditional of the remaining variables given ``on`` is unchanged.
    """
    on = make_scope(on)
    scope = m.scope
    shape = [m.cards[scope.index(v)] if v in on else 1 for v in scope]
    tilt = 1.0 + strength * (rng.random(shape) * 2 - 1)
    values = m.values * tilt
    return Measure(scope, m.cards, values / values.sum())


def random_join_tree_covering(rng, variables, m, max_set=3) -> list:
    """A covering with the running intersection property in generation order.

    Each new set is a subset of an earlier set (the separator) plus fresh
    variables, so the generation order is a RIP ordering.
    """
    variables = list(variables)
    rng.shuffle(variables)
    pool = list(variables)
    first = pool[: int(rng.integers(1, min(max_set, len(pool)) + 1))]
    del pool[: len(first)]
    sets = [set(first)]
    for _ in range(1, m):
        parent = sets[int(rng.integers(len(sets)))]
        sep_size = int(rng.integers(0, len(parent) + 1))
        sep = set(rng.choice(sorted(parent), size=sep_size, replace=False).tolist()) if sep_size else set()
        room = max(0, max_set - len(sep))
        fresh_n = min(len(pool), int(rng.integers(1, room + 1)) if room else 0)
        fresh = set(pool[:fresh_n])
        del pool[:fresh_n]
        if not sep and not fresh:
            sep = {sorted(parent)[int(rng.integers(len(parent)))]}
        sets.append(sep | fresh)
    if pool:
        sets[-1] |= set(pool)
    return [make_scope(s) for s in sets]


def rip_orderings_exhaustive(covering):
    """All orderings of ``covering`` with the running intersection property."""
    from .sequence import has_rip

    return [
        order
        for order in itertools.permutations(range(len(covering)))
        if has_rip([covering[j] for j in order])
    ]
