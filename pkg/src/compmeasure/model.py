"""JSON model files and conditional queries.

A model document looks like::

    {
      "version": 1,
      "variables": [{"id": 1, "cardinality": 2, "labels": ["no", "yes"]}, ...],
      "measures": [{"scope": [1, 2], "table": [0.5, 0.0, 0.5, 0.0]}, ...],
      "covering": [[1, 2], [2, 3]]
    }

Tables list the scope's configurations in lexicographic order with the first
(smallest) variable id varying slowest. ``labels`` and ``covering`` are
optional. Floats are written with ``repr`` so a load after a dump gives back
bit-identical tables.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from typing import Mapping, Sequence

from .compose import compose_chain
from .errors import MeasureError, ParseError, ValidationError, ZeroEvidence
from .local import Covering
from .measure import (
    ZERO_TOL,
    Measure,
    VariableTable,
    make_measure,
    marginalize,
)
from .sequence import MeasureSequence

FORMAT_VERSION = 1


@dataclass(frozen=True)
class Model:
    universe: VariableTable
    sequence: MeasureSequence
    covering: Covering | None = None


def _read_text(source) -> str:
    if hasattr(source, "read"):
        return source.read()
    with open(os.fspath(source), encoding="utf-8") as fh:
        return fh.read()


def _int(value, what):
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise ValidationError(f"{what} must be an integer, got {value!r}")
    try:
        return int(value)
    except ValueError:
        raise ValidationError(f"{what} must be an integer, got {value!r}") from None


def parse_model(text: str, normalize: bool = False) -> Model:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise ValidationError("model document must be a JSON object")
    version = doc.get("version")
    if version != FORMAT_VERSION:
        raise ValidationError(f"unsupported model version {version!r}")

    cards, labels = {}, {}
    for entry in doc.get("variables") or []:
        if not isinstance(entry, dict) or "id" not in entry or "cardinality" not in entry:
            raise ValidationError(f"bad variable entry {entry!r}")
        var = _int(entry["id"], "variable id")
        if var in cards:
            raise ValidationError(f"variable {var} declared twice")
        cards[var] = _int(entry["cardinality"], f"cardinality of variable {var}")
        if entry.get("labels") is not None:
            labels[var] = tuple(str(x) for x in entry["labels"])
    try:
        universe = VariableTable(cards, labels)
    except MeasureError as exc:
        raise ValidationError(str(exc)) from None

    raw = doc.get("measures")
    if not raw:
        raise ValidationError("model has no measures")
    measures = []
    for i, entry in enumerate(raw, start=1):
        try:
            if not isinstance(entry, dict):
                raise ValidationError("measure entry must be an object")
            scope = [_int(v, "scope variable") for v in entry.get("scope", [])]
            undeclared = [v for v in scope if v not in cards]
            if undeclared:
                raise ValidationError(f"scope uses undeclared variables {undeclared}")
            table = entry.get("table")
            if not isinstance(table, list) or not all(
                isinstance(x, (int, float)) and not isinstance(x, bool) for x in table
            ):
                raise ValidationError("table must be a list of numbers")
            if list(scope) != sorted(set(scope)):
                raise ValidationError(f"scope {scope} must be strictly ascending")
            measures.append(make_measure(scope, table, universe, normalize=normalize))
        except (MeasureError, ValidationError) as exc:
            raise ValidationError(f"measure {i}: {exc}", measure_index=i) from None

    covering = None
    if doc.get("covering") is not None:
        try:
            covering = Covering(
                [[_int(v, "covering variable") for v in s] for s in doc["covering"]]
            )
        except (MeasureError, ValueError, TypeError) as exc:
            raise ValidationError(f"covering: {exc}") from None
        stray = set(covering.variables) - set(cards)
        if stray:
            raise ValidationError(f"covering uses undeclared variables {sorted(stray)}")
    return Model(universe, MeasureSequence(measures), covering)


def load_model(source, normalize: bool = False) -> Model:
    """Read and validate a model from a path or an open text stream."""
    return parse_model(_read_text(source), normalize=normalize)


def model_document(universe: VariableTable, measures: Sequence[Measure], covering=None) -> dict:
    used = sorted(set().union(*(set(m.scope) for m in measures)) | set(
        v for s in (covering or []) for v in s
    ))
    variables = []
    for v in used:
        entry = {"id": v, "cardinality": universe.cardinalities[v]}
        if v in universe.labels:
            entry["labels"] = list(universe.labels[v])
        variables.append(entry)
    doc = {
        "version": FORMAT_VERSION,
        "variables": variables,
        "measures": [
            {"scope": list(m.scope), "table": [float(x) for x in m.table]} for m in measures
        ],
    }
    if covering is not None:
        doc["covering"] = [list(s) for s in getattr(covering, "sets", covering)]
    return doc


def dump_model(universe, measures, covering=None, target=None) -> str:
    text = json.dumps(model_document(universe, measures, covering), indent=2) + "\n"
    if target is None:
        return text
    if hasattr(target, "write"):
        target.write(text)
    else:
        with open(os.fspath(target), "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def emit_measure(m: Measure, target=None, universe: VariableTable | None = None) -> str:
    """Write ``m`` as a one-measure model document; returns the text."""
    universe = m.universe if universe is None else universe
    return dump_model(universe, [m], target=target)


def _assignment(mapping, universe: VariableTable) -> dict:
    out = {}
    for var, val in dict(mapping).items():
        var, val = int(var), int(val)
        if var not in universe.cardinalities:
            raise ValidationError(f"query uses undeclared variable {var}")
        if not 0 <= val < universe.cardinalities[var]:
            raise ValidationError(f"value {val} out of range for variable {var}")
        out[var] = val
    return out


def query_conditional(model: Model, target, evidence: Mapping[int, int] | None = None,
                      use_prefix: bool = True) -> float:
    """``P(X_target = a | evidence)`` under the right-composition of the model.

    With ``use_prefix`` only the shortest prefix of the sequence whose scopes
    cover the queried variables is composed: a right composition never alters
    the marginal of what it is composed onto, so the tail cannot change the
    answer. The tail's definedness is then not checked.
    """
    tvar, tval = target
    query = _assignment({tvar: tval}, model.universe)
    given = _assignment(evidence or {}, model.universe)
    needed = set(query) | set(given)
    seq = list(model.sequence)
    stop = len(seq)
    if use_prefix:
        covered = set()
        for idx, m in enumerate(seq, start=1):
            covered |= set(m.scope)
            if needed <= covered:
                stop = idx
                break
    joint = compose_chain(seq[:stop])
    if not needed <= set(joint.scope):
        raise ValidationError(f"variables {sorted(needed - set(joint.scope))} not in the model")
    marg = marginalize(joint, needed)
    ev_scope = tuple(sorted(given))
    ev = marginalize(marg, ev_scope)
    p_ev = ev[given] if ev_scope else float(ev.values)
    if p_ev <= ZERO_TOL:
        raise ZeroEvidence(f"evidence {given} has probability {p_ev!r}")
    if given.get(tvar, tval) != tval:
        return 0.0
    return marg[{**given, **query}] / p_ev
