"""Command-line front end.

Exit codes: 0 success / identity holds, 1 definite negative finding
(counterexample, invalid lattice), 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

import numpy as np

from . import catalog
from .congruence import congruence_properties
from .free import ALL, KIND_PART, SYM_DIFF_MASK, NavaraElement, make_free, mask_bits, preimage_sym_diff
from .lattice import Oml, RawLattice, ValidationError, validate
from .terms import TermSyntaxError, check_identity, evaluate, free_vars, parse, parse_equation

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


class InvalidLattice(Exception):
    pass


def _emit(args, doc: dict, text: str):
    if args.format == "json":
        sys.stdout.write(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _resolve_raw(args):
    try:
        spec = catalog.parse_spec(args.lattice)
        return catalog.build_raw(spec, args.max_size)
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot load lattice {args.lattice!r}: {exc}") from exc


def _resolve(args) -> Oml:
    raw = _resolve_raw(args)
    if isinstance(raw, Oml):
        return raw
    try:
        return validate(raw)
    except ValidationError as exc:
        raise InvalidLattice(_describe_failure(raw, exc)) from exc


def _describe_failure(raw: RawLattice, exc: ValidationError) -> str:
    def name(e):
        return raw.names[e] if raw.names is not None else f"e{e}"

    return f"{type(exc).__name__} witness ({','.join(name(w) for w in exc.witness)})"


def cmd_validate(args) -> int:
    raw = _resolve_raw(args)
    if isinstance(raw, Oml):
        raw = raw.raw
    try:
        L = validate(raw)
    except ValidationError as exc:
        msg = _describe_failure(raw, exc)
        _emit(args, {"lattice": args.lattice, "valid": False, "error": type(exc).__name__,
                     "witness": [raw.names[w] if raw.names else f"e{w}" for w in exc.witness]},
              f"invalid: {msg}")
        return EXIT_NEGATIVE
    _emit(args, {"lattice": args.lattice, "valid": True, "size": L.size},
          f"valid OML, {L.size} elements")
    return EXIT_OK


def _parse_or_input_error(fn, text):
    try:
        return fn(text)
    except TermSyntaxError as exc:
        raise InputError(str(exc)) from exc


def cmd_identity(args) -> int:
    lhs, rhs = _parse_or_input_error(parse_equation, args.equation)
    L = _resolve(args)
    report = check_identity(L, lhs, rhs)
    doc = {"lattice": args.lattice, "equation": args.equation, "holds": report.holds,
           "tuples_checked": report.tuples_checked, "counterexample": None}
    if report.holds:
        text = f"holds ({report.tuples_checked} assignments)"
    else:
        env = report.counterexample
        doc["counterexample"] = {v: L.name(e) for v, e in env.items()}
        lv, rv = int(evaluate(L, lhs, env)), int(evaluate(L, rhs, env))
        doc["lhs_value"], doc["rhs_value"] = L.name(lv), L.name(rv)
        binding = ", ".join(f"{v}={L.name(e)}" for v, e in env.items())
        text = f"counterexample: {binding} (lhs={L.name(lv)}, rhs={L.name(rv)})"
    _emit(args, doc, text)
    return EXIT_OK if report.holds else EXIT_NEGATIVE


def cmd_table(args) -> int:
    term = _parse_or_input_error(parse, args.term)
    names = sorted(free_vars(term))
    if len(names) != 2:
        raise InputError(f"table needs a term in exactly two variables, got {names}")
    L = _resolve(args)
    idx = np.arange(L.size)
    table = np.broadcast_to(evaluate(L, term, {names[0]: idx[:, None], names[1]: idx[None, :]}),
                            (L.size, L.size))
    labels = [L.name(e) for e in idx]
    rows = [[L.name(v) for v in row] for row in table]
    width = max(len(s) for s in labels)
    head = f"{names[0]}\\{names[1]}".ljust(width) + " " + " ".join(s.rjust(width) for s in labels)
    body = [labels[i].ljust(width) + " " + " ".join(s.rjust(width) for s in row)
            for i, row in enumerate(rows)]
    _emit(args, {"lattice": args.lattice, "term": args.term, "variables": names,
                 "elements": labels, "table": rows}, "\n".join([head, *body]))
    return EXIT_OK


def _matrix_text(title: str, labels, M) -> list[str]:
    out = [f"{title}:"]
    width = max(len(s) for s in labels)
    for label, row in zip(labels, M):
        out.append(label.ljust(width) + " " + "".join("1" if v else "." for v in row))
    return out


def cmd_relations(args) -> int:
    L = _resolve(args)
    labels = [L.name(e) for e in L.elements()]
    C, P = L.commutation, L.perspectivity
    text = _matrix_text("commutes (C)", labels, C) + _matrix_text("perspective (~)", labels, P)
    _emit(args, {"lattice": args.lattice, "elements": labels,
                 "commutes": C.tolist(), "perspective": P.tolist()}, "\n".join(text))
    return EXIT_OK


def cmd_free(args) -> int:
    L, x, y = make_free()
    kind_of = {part: kind for kind, part in KIND_PART.items()}
    lines = [f"free OML on x, y: {L.size} elements (atoms x&y x&y' x'&y x'&y' : MO2 part)",
             f"x = {NavaraElement.from_index(x)}, y = {NavaraElement.from_index(y)}"]
    lines += [f"{e.index:3d} {e}" for e in ALL]
    lines.append(f"preimage of the symmetric difference (Boolean part {mask_bits(SYM_DIFF_MASK)}):")
    six = []
    for e in preimage_sym_diff():
        kind = kind_of[e.part]
        lines.append(f"{e.index:3d} {e}  x {kind.operator} y  ({kind.name})")
        six.append({"index": e.index, "element": str(e), "kind": kind.name, "operator": kind.operator})
    doc = {"size": L.size, "x": str(NavaraElement.from_index(x)), "y": str(NavaraElement.from_index(y)),
           "elements": [str(e) for e in ALL], "sym_diff_preimage": six}
    _emit(args, doc, "\n".join(lines))
    return EXIT_OK


def cmd_congruences(args) -> int:
    L = _resolve(args)
    report = congruence_properties(L)

    def names(S):
        return [L.name(e) for e in sorted(S)]

    lines, entries = [], []
    for I, theta in zip(report.ideals, report.congruences):
        blocks = [names(c) for c in theta.classes()]
        entries.append({"p_ideal": names(I.members), "blocks": blocks})
        lines.append("p-ideal {" + ", ".join(names(I.members)) + "}: "
                     + " ".join("{" + ", ".join(b) + "}" for b in blocks))
    flags = {"regular": report.regular, "uniform": report.uniform, "permutable": report.permutable}
    lines.append(" ".join(f"{k}={str(v).lower()}" for k, v in flags.items()))
    _emit(args, {"lattice": args.lattice, "congruences": entries, **flags}, "\n".join(lines))
    return EXIT_OK if all(flags.values()) else EXIT_NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--lattice", default="mo2",
                        help="bool<k>, mo<n>, free2, benzene, file:<path> or prod:<a>,<b>")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--max-size", type=int, default=catalog.DEFAULT_MAX_SIZE)

    parser = argparse.ArgumentParser(prog="omlsym", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common], help="check the OML axioms").set_defaults(func=cmd_validate)
    p = sub.add_parser("identity", parents=[common], help="check 'lhs = rhs' exhaustively")
    p.add_argument("equation")
    p.set_defaults(func=cmd_identity)
    p = sub.add_parser("table", parents=[common], help="operation table of a two-variable term")
    p.add_argument("term")
    p.set_defaults(func=cmd_table)
    sub.add_parser("relations", parents=[common], help="commutativity and perspectivity matrices"
                   ).set_defaults(func=cmd_relations)
    sub.add_parser("free", parents=[common], help="the free OML on two generators"
                   ).set_defaults(func=cmd_free)
    sub.add_parser("congruences", parents=[common], help="p-ideals, congruences and their properties"
                   ).set_defaults(func=cmd_congruences)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InvalidLattice as exc:
        print(f"invalid lattice: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE


if __name__ == "__main__":
    sys.exit(main())
