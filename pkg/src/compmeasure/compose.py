"""Right and left composition, the anticipating operator, and chain folding.

Right composition keeps the left operand as a marginal::

    (P |> Q)(x) = P(x_J) Q(x_K) / Q_{J&K}(x_{J&K})

left composition divides by the left operand's marginal instead and keeps
the right operand. Both are undefined unless the dividing marginal dominates
the other operand's marginal on the common variables.
"""

from __future__ import annotations

import enum
from typing import Sequence

import numpy as np

from .errors import CompositionError, DominanceViolation, UndefinedSubexpression
from .measure import (
    Measure,
    _cards_of,
    _intersection,
    _union,
    aligned,
    dominance_witness,
    is_zero,
    make_scope,
    marginalize,
    product,
)


class Op(enum.Enum):
    RIGHT = "right"
    LEFT = "left"

    @classmethod
    def parse(cls, token) -> "Op":
        if isinstance(token, cls):
            return token
        t = str(token).strip().lower()
        if t in ("r", "right", ">", "|>"):
            return cls.RIGHT
        if t in ("l", "left", "<", "<|"):
            return cls.LEFT
        raise ValueError(f"unknown composition direction {token!r}")


def compose_right(p: Measure, q: Measure) -> Measure:
    """``p |> q``: a measure on the union of scopes whose marginal on ``p.scope`` is ``p``."""
    common = _intersection(p.scope, q.scope)
    qm = marginalize(q, common)
    pm = marginalize(p, common)
    witness = dominance_witness(qm, pm)
    if witness is not None:
        raise DominanceViolation(
            f"right composition undefined: Q marginal on {common} is zero at ({witness})",
            scope=common,
            witness=witness,
        )
    return _product_over(p, q, qm)


def compose_left(p: Measure, q: Measure) -> Measure:
    """``p <| q``: a measure on the union of scopes whose marginal on ``q.scope`` is ``q``."""
    common = _intersection(p.scope, q.scope)
    pm = marginalize(p, common)
    qm = marginalize(q, common)
    witness = dominance_witness(pm, qm)
    if witness is not None:
        raise DominanceViolation(
            f"left composition undefined: P marginal on {common} is zero at ({witness})",
            scope=common,
            witness=witness,
        )
    return _product_over(q, p, pm)


def _product_over(kept: Measure, other: Measure, denom: Measure) -> Measure:
    """``kept * other / denom`` with the 0/0 := 0 convention, denom a marginal of ``other``."""
    scope = _union(kept.scope, other.scope)
    cards = _cards_of(scope, kept, other)
    d = aligned(denom, other.scope)
    ratio = np.zeros(other.cards)
    np.divide(other.values, d, out=ratio, where=~is_zero(np.broadcast_to(d, other.cards)))
    values = aligned(kept, scope) * aligned(Measure(other.scope, other.cards, ratio), scope)
    return Measure(scope, cards, np.broadcast_to(values, cards))


def compose(p: Measure, q: Measure, op=Op.RIGHT) -> Measure:
    return compose_right(p, q) if Op.parse(op) is Op.RIGHT else compose_left(p, q)


def anticipate(p2: Measure, p3: Measure, k1) -> Measure:
    """The anticipating operator: ``(p3 on (k1 - K2) & K3) * p2  |>  p3``.

    It lets a right-composition chain be regrouped:
    ``p1 |> p2 |> p3 == p1 |> anticipate(p2, p3, p1.scope)`` whenever the left
    side is defined.
    """
    k1 = set(make_scope(k1))
    ahead = tuple(sorted((k1 - set(p2.scope)) & set(p3.scope)))
    prefactor = product(marginalize(p3, ahead), p2)
    return compose_right(prefactor, p3)


def compose_chain(measures: Sequence[Measure], ops=None) -> Measure:
    """Fold ``measures`` left to right: ``((P1 op1 P2) op2 P3) ...``.

    ``ops`` defaults to all right compositions. A failing step raises
    :class:`UndefinedSubexpression` with the 1-based step index.
    """
    measures = list(measures)
    if not measures:
        raise ValueError("cannot compose an empty sequence")
    ops = [Op.RIGHT] * (len(measures) - 1) if ops is None else [Op.parse(o) for o in ops]
    if len(ops) != len(measures) - 1:
        raise ValueError(f"{len(measures)} measures need {len(measures) - 1} operators")
    acc = measures[0]
    for step, (op, m) in enumerate(zip(ops, measures[1:]), start=1):
        try:
            acc = compose(acc, m, op)
        except CompositionError as exc:
            raise UndefinedSubexpression(
                f"step {step} ({op.value} composition) is undefined: {exc}",
                scope=exc.scope,
                witness=exc.witness,
                step=step,
                cause=exc,
            ) from exc
    return acc


def prefix_compositions(measures: Sequence[Measure]) -> list:
    """All right-composition prefixes ``[P1, P1|>P2, ..., P1|>...|>Pn]``."""
    out = [measures[0]]
    for step, m in enumerate(measures[1:], start=1):
        try:
            out.append(compose_right(out[-1], m))
        except CompositionError as exc:
            raise UndefinedSubexpression(
                f"step {step} (right composition) is undefined: {exc}",
                scope=exc.scope,
                witness=exc.witness,
                step=step,
                cause=exc,
            ) from exc
    return out
