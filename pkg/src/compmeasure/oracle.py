"""Brute-force reference implementations.

Everything here enumerates configurations one at a time with plain Python
dicts. None of the numpy table code of :mod:`compmeasure.measure` is reused
(only the ``Measure`` container for the result), so this module can serve as
an independent check on the fast paths. Keep joints small (a few 10^4 cells).
"""

from __future__ import annotations

import itertools

from .errors import DominanceViolation, UndefinedSubexpression, ZeroEvidence
from .measure import Configuration, Measure

_ZERO = 1e-12
MAX_CELLS = 1 << 16


def _cells(m: Measure) -> dict:
    flat = [float(v) for v in m.values.reshape(-1)]
    keys = itertools.product(*[range(c) for c in m.cards])
    return dict(zip(keys, flat))


def _domain(p: Measure, q: Measure) -> dict:
    dom = {}
    for m in (p, q):
        for v, c in zip(m.scope, m.cards):
            if dom.setdefault(v, c) != c:
                raise ValueError(f"variable {v} has conflicting cardinalities")
    return dom


def _sum_onto(m: Measure, scope) -> dict:
    out = {}
    idx = [m.scope.index(v) for v in scope]
    for key, val in _cells(m).items():
        sub = tuple(key[i] for i in idx)
        out[sub] = out.get(sub, 0.0) + val
    return out


def oracle_marginal(m: Measure, scope) -> Measure:
    scope = tuple(sorted(scope))
    sums = _sum_onto(m, scope)
    cards = tuple(m.cards[m.scope.index(v)] for v in scope)
    flat = [sums.get(k, 0.0) for k in itertools.product(*[range(c) for c in cards])]
    return Measure(scope, cards, flat)


def oracle_compose(p: Measure, q: Measure, direction="right") -> Measure:
    """Evaluate ``p |> q`` (``direction="right"``) or ``p <| q`` cell by cell."""
    right = str(getattr(direction, "value", direction)).lower() in ("right", "r")
    dom = _domain(p, q)
    scope = tuple(sorted(dom))
    common = tuple(v for v in scope if v in p.scope and v in q.scope)
    pm = _sum_onto(p, common)
    qm = _sum_onto(q, common)
    denom, numer = (qm, pm) if right else (pm, qm)
    for key in itertools.product(*[range(dom[v]) for v in common]):
        if abs(denom.get(key, 0.0)) <= _ZERO and abs(numer.get(key, 0.0)) > _ZERO:
            raise DominanceViolation(
                f"oracle: marginal on {common} vanishes at {key}",
                scope=common,
                witness=Configuration(common, key),
            )
    pc, qc = _cells(p), _cells(q)
    p_idx = [scope.index(v) for v in p.scope]
    q_idx = [scope.index(v) for v in q.scope]
    c_idx = [scope.index(v) for v in common]
    flat = []
    for x in itertools.product(*[range(dom[v]) for v in scope]):
        d = denom[tuple(x[i] for i in c_idx)]
        if abs(d) <= _ZERO:
            flat.append(0.0)
            continue
        pv = pc[tuple(x[i] for i in p_idx)]
        qv = qc[tuple(x[i] for i in q_idx)]
        flat.append(pv * qv / d)
    cards = tuple(dom[v] for v in scope)
    if len(flat) > MAX_CELLS:
        raise ValueError("oracle joint exceeds its size cap")
    return Measure(scope, cards, flat)


def oracle_joint(measures, ops=None) -> Measure:
    measures = list(measures)
    if not measures:
        raise ValueError("cannot compose an empty sequence")
    ops = ["right"] * (len(measures) - 1) if ops is None else list(ops)
    acc = measures[0]
    for step, (op, m) in enumerate(zip(ops, measures[1:]), start=1):
        try:
            acc = oracle_compose(acc, m, op)
        except DominanceViolation as exc:
            raise UndefinedSubexpression(
                f"oracle: step {step} undefined", exc.scope, exc.witness, step, exc
            ) from exc
    return acc


def oracle_conditional(joint: Measure, target, evidence=None) -> float:
    """``P(target | evidence)`` by summing matching cells of the joint.

    ``target`` is a ``(variable, value)`` pair; ``evidence`` a mapping from
    variables to values.
    """
    evidence = dict(evidence or {})
    tvar, tval = target
    both = num = 0.0
    for key, val in _cells(joint).items():
        x = dict(zip(joint.scope, key))
        if all(x[v] == a for v, a in evidence.items()):
            num += val
            if x[tvar] == tval:
                both += val
    if num <= _ZERO:
        raise ZeroEvidence(f"evidence {evidence} has probability {num!r}")
    return both / num
