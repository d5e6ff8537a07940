"""Command line front end.

Exit codes: 0 success, 2 undefined composition, 3 invalid input,
4 evidence with zero probability.
"""

from __future__ import annotations

import argparse
import json
import sys

from .compose import Op, compose_chain
from .errors import (
    CompositionError,
    MeasureError,
    NoBucket,
    NotDecomposable,
    ParseError,
    ValidationError,
    ZeroEvidence,
)
from .local import Covering, run_procedure, verify_prefix_consistency
from .measure import marginalize
from .model import dump_model, emit_measure, load_model, query_conditional
from .sequence import (
    applicable_exchange_rules,
    find_rip_ordering,
    has_rip,
    is_perfect,
    perfectize,
)

EXIT_OK = 0
EXIT_UNDEFINED = 2
EXIT_INVALID = 3
EXIT_ZERO_EVIDENCE = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _ints(text: str) -> list:
    text = text.strip()
    return [int(t) for t in text.replace(" ", "").split(",") if t] if text else []


def _assignments(text: str | None) -> dict:
    out = {}
    for part in (text or "").split(","):
        part = part.strip()
        if not part:
            continue
        var, _, val = part.partition("=")
        if not _:
            raise ValidationError(f"expected VAR=VALUE, got {part!r}")
        out[int(var)] = int(val)
    return out


def _ops(text: str | None, n: int) -> list:
    if not text:
        return [Op.RIGHT] * (n - 1)
    tokens = [t for t in text.replace(" ", "").split(",") if t]
    if len(tokens) == 1 and len(tokens[0]) == n - 1 and set(tokens[0].upper()) <= {"R", "L"}:
        tokens = list(tokens[0])
    return [Op.parse(t) for t in tokens]


def _covering(text: str | None, model) -> Covering:
    if text:
        return Covering(_ints(s) for s in text.split(";"))
    if model.covering is None:
        raise ValidationError("no covering given and the model has none")
    return model.covering


def _write(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="compmeasure", description=__doc__.splitlines()[0])
    parser.add_argument("--normalize", action="store_true",
                        help="rescale tables whose sum is within 1e-6 of one")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("compose", help="compose the model's measures left to right")
    p.add_argument("model")
    p.add_argument("--ops", help="per-step directions, e.g. R,L,R or RLR (default all R)")
    p.add_argument("-o", "--output")

    p = sub.add_parser("marginalize", help="marginal of the composed model")
    p.add_argument("model")
    p.add_argument("--onto", required=True, help="comma separated variable ids")
    p.add_argument("--ops")
    p.add_argument("-o", "--output")

    p = sub.add_parser("perfectize", help="rewrite the sequence as a perfect one")
    p.add_argument("model")
    p.add_argument("-o", "--output")

    p = sub.add_parser("check", help="structural checks")
    p.add_argument("model")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--perfect", action="store_true")
    g.add_argument("--rip", action="store_true")
    g.add_argument("--rules", action="store_true")

    p = sub.add_parser("localize", help="propagate into a decomposable covering")
    p.add_argument("model")
    p.add_argument("--covering", help="sets separated by ';', e.g. '1,2;2,3'")
    p.add_argument("--tie-break", choices=["smallest", "largest"], default="smallest")
    p.add_argument("--no-check", action="store_true", help="skip the perfectness check")
    p.add_argument("--report", help="write the consistency report (JSON) here")
    p.add_argument("-o", "--output")

    p = sub.add_parser("query", help="conditional probability of one value")
    p.add_argument("model")
    p.add_argument("--target", required=True, help="VAR=VALUE")
    p.add_argument("--given", default="", help="VAR=VALUE,VAR=VALUE")
    return parser


def _run(args) -> int:
    model = load_model(args.model, normalize=args.normalize)
    seq = list(model.sequence)
    if args.command == "compose":
        joint = compose_chain(seq, _ops(args.ops, len(seq)))
        _write(emit_measure(joint, universe=model.universe), args.output)
    elif args.command == "marginalize":
        joint = compose_chain(seq, _ops(args.ops, len(seq)))
        _write(emit_measure(marginalize(joint, _ints(args.onto)), universe=model.universe),
               args.output)
    elif args.command == "perfectize":
        _write(dump_model(model.universe, perfectize(seq), model.covering), args.output)
    elif args.command == "check":
        if args.perfect:
            result = {"perfect": is_perfect(seq)}
        elif args.rip:
            scopes = [m.scope for m in seq]
            result = {"rip": has_rip(scopes)}
            if model.covering is not None:
                ordering = find_rip_ordering(model.covering.sets)
                result["covering_decomposable"] = ordering is not None
                if ordering is not None:
                    result["covering_order"] = list(ordering.order)
        else:
            if len(seq) != 3:
                raise ValidationError("--rules needs exactly three measures")
            rules = applicable_exchange_rules(*seq)
            result = {"rules": sorted(r.tag for r in rules)}
        print(json.dumps(result))
    elif args.command == "localize":
        covering = _covering(args.covering, model)
        state = run_procedure(seq, covering, check_perfect=not args.no_check,
                              tie_break=args.tie_break)
        if args.report:
            report = verify_prefix_consistency(state, seq)
            with open(args.report, "w", encoding="utf-8") as fh:
                json.dump(report.to_dict(), fh, indent=2)
        _write(dump_model(model.universe, state.grid[-1], covering), args.output)
    elif args.command == "query":
        target = _assignments(args.target)
        if len(target) != 1:
            raise ValidationError("--target takes exactly one VAR=VALUE")
        value = query_conditional(model, next(iter(target.items())), _assignments(args.given))
        print(repr(value))
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except CompositionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.witness is not None:
            print(f"witness: {exc.witness}", file=sys.stderr)
        return EXIT_UNDEFINED
    except ZeroEvidence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ZERO_EVIDENCE
    except (ParseError, ValidationError, MeasureError, NoBucket, NotDecomposable,
            ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
