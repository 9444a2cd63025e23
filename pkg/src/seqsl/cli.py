"""Command-line front end.

Exit codes: 0 true/sat/valid, 1 false/unsat/invalid, 2 unknown, 3 usage or
input error.  Reports go to stdout, diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import minsky
from .analysis import ClassificationError, NotPSeqSL, classify
from .decider import INVALID, SAT, UNSAT, VALID, WrongFragment, decide_pi1_validity, decide_sat
from .heap import ModelFormatError, UnboundVariable, model_to_dict, parse_model, print_model, format_model
from .parser import ParseError, parse_formula
from .semantics import CheckConfig, check, explain
from .syntax import HASH, NIL
from .wordeq import (AlphabetTooSmall, Sat, SolverConfig, Unsat, WordParseError,
                     format_substitution, format_word, format_word_formula, parse_word_formula,
                     solve, to_single_equation)
from .wordeq.formula import formula_letters, format_symbol

OK, NO, UNKNOWN, ERROR = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _emit(args, payload: dict, text: str):
    if args.json:
        print(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        print(text)


def _write_model(path: str, model):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(print_model(model) + "\n")


def _solver_cfg(args) -> SolverConfig:
    cfg = SolverConfig()
    if args.max_len is not None:
        cfg.max_len = args.max_len
    if args.max_nodes is not None:
        cfg.max_nodes = args.max_nodes
    return cfg


def _code(value) -> int:
    return UNKNOWN if value is None else (OK if value else NO)


# -- commands ------------------------------------------------------------------------

def cmd_check(args) -> int:
    model = parse_model(_read(args.model))
    f = parse_formula(_read(args.formula))
    cfg = CheckConfig(seq_len_bound=args.seq_bound, closed_world=args.closed_world)
    verdict = check(model, f, cfg)
    payload = {"verdict": "unknown" if verdict.is_unknown else str(verdict.value).lower(),
               "reason": verdict.reason}
    if args.trace:
        payload["trace"] = explain(model, f, cfg)
    text = str(verdict)
    if args.trace:
        text += "\n" + "\n".join(payload["trace"])
    _emit(args, payload, text)
    return _code(verdict.value)


def cmd_sat(args) -> int:
    f = parse_formula(_read(args.formula))
    result = decide_sat(f, _solver_cfg(args))
    payload = {"verdict": result.status, "reason": result.reason}
    text = result.status
    if result.status == SAT:
        payload["model"] = model_to_dict(result.model)
        text += "\n" + format_model(result.model)
        if args.witness:
            _write_model(args.witness, result.model)
    elif result.reason:
        text += f" ({result.reason})"
    _emit(args, payload, text)
    return {SAT: OK, UNSAT: NO}.get(result.status, UNKNOWN)


def cmd_valid(args) -> int:
    f = parse_formula(_read(args.formula))
    result = decide_pi1_validity(f, _solver_cfg(args))
    payload = {"verdict": result.status, "reason": result.reason}
    text = result.status
    if result.status == INVALID:
        payload["countermodel"] = model_to_dict(result.countermodel)
        payload["matrix"] = str(result.matrix)
        text += f"\ncountermodel {format_model(result.countermodel)}\nrefuting instance of {result.matrix}"
        if args.witness:
            _write_model(args.witness, result.countermodel)
    elif result.reason:
        text += f" ({result.reason})"
    _emit(args, payload, text)
    return {VALID: OK, INVALID: NO}.get(result.status, UNKNOWN)


def cmd_classify(args) -> int:
    fc = classify(parse_formula(_read(args.formula)))
    payload = {"quantifier_free": fc.quantifier_free, "shape": fc.shape,
               "program_blocks": fc.prenex_prog_blocks, "sequence_blocks": fc.prenex_seq_blocks}
    _emit(args, payload, f"{fc.shape} (program blocks {fc.prenex_prog_blocks}, "
                         f"sequence blocks {fc.prenex_seq_blocks})")
    return OK


def _alphabet(text):
    if text is None:
        return None
    letters = []
    for part in (x.strip() for x in text.split(",")):
        if part.isdigit():
            letters.append(int(part))
        elif part in ("nil", "#"):
            letters.append(NIL if part == "nil" else HASH)
        elif part:
            raise UsageError(f"bad letter {part!r}: letters are naturals, nil or #")
    return letters


def cmd_we_solve(args) -> int:
    phi = parse_word_formula(_read(args.equation))
    verdict = solve(phi, _solver_cfg(args), _alphabet(args.alphabet))
    if isinstance(verdict, Sat):
        witness = {"@" + k.name: [format_symbol(x) for x in v] for k, v in sorted(
            verdict.witness.items(), key=lambda kv: kv[0].name)}
        _emit(args, {"verdict": "sat", "witness": witness}, "sat\n" + format_substitution(verdict.witness))
        return OK
    if isinstance(verdict, Unsat):
        _emit(args, {"verdict": "unsat"}, "unsat")
        return NO
    _emit(args, {"verdict": "unknown", "reason": verdict.reason}, f"unknown ({verdict.reason})")
    return UNKNOWN


def cmd_we_transform(args) -> int:
    phi = parse_word_formula(_read(args.equation))
    sigma = _alphabet(args.alphabet)
    if sigma is None:
        sigma = sorted(formula_letters(phi), key=str)
    single = to_single_equation(phi, sigma)
    eq = single.equation
    payload = {"alphabet": [format_symbol(a) for a in single.alphabet],
               "prefix": ["@" + v.name for v in single.prefix],
               "lhs": format_word(eq.lhs), "rhs": format_word(eq.rhs), "size": single.size()}
    _emit(args, payload, format_word_formula(single.as_formula()))
    return OK


def _machine(args):
    return minsky.parse_machine(_read(args.machine))


def cmd_minsky_run(args) -> int:
    run = minsky.simulate(_machine(args), args.max_steps)
    states = [list(s) for s in run.states]
    lines = [f"{i}: I={k} C1={c1} C2={c2}" for i, (k, c1, c2) in enumerate(run.states)]
    if run.halted:
        lines.append(f"halted after {len(run.states) - 1} steps")
    else:
        lines.append(f"not halted within {args.max_steps} steps")
    _emit(args, {"halted": run.halted, "states": states}, "\n".join(lines))
    return OK if run.halted else UNKNOWN


def cmd_minsky_encode(args) -> int:
    f = minsky.encode(_machine(args), literal=args.literal, regrouped=args.regrouped)
    text = str(f)
    fc = classify(f)
    print(f"shape: {fc.shape}", file=sys.stderr)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    _emit(args, {"formula": text, "shape": fc.shape}, text)
    return OK


def cmd_minsky_validate(args) -> int:
    machine = _machine(args)
    v = minsky.validate(machine, args.max_steps, literal=args.literal)
    if not v.halted:
        _emit(args, {"halted": False, "verdict": "unknown"},
              f"machine did not halt within {args.max_steps} steps")
        return UNKNOWN
    if args.witness:
        _write_model(args.witness, v.model)
    payload = {"halted": True, "steps": v.run.steps,
               "verdict": "unknown" if v.verdict.is_unknown else str(v.verdict.value).lower(),
               "model": model_to_dict(v.model)}
    _emit(args, payload, f"run of {v.run.steps} steps, {len(v.model.heap)} cells: {v.verdict}")
    return _code(v.verdict.value)


# -- argument parsing ------------------------------------------------------------------

def _solver_flags(p):
    p.add_argument("--max-len", type=int, default=None, help="solver bound on residual word lengths")
    p.add_argument("--max-nodes", type=int, default=None, help="solver search-node budget")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    ap = argparse.ArgumentParser(prog="seqsl", description="Sequence-heap separation logic toolkit.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="model-check a formula")
    p.add_argument("model")
    p.add_argument("formula")
    p.add_argument("--seq-bound", type=int, default=4, help="longest sequence tried for unanchored quantifiers")
    p.add_argument("--closed-world", action="store_true", help="quantifiers range over the bounded pools only")
    p.add_argument("--trace", action="store_true", help="show the splits, extensions and witnesses used")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("sat", parents=[common], help="decide satisfiability of a propositional formula")
    p.add_argument("formula")
    _solver_flags(p)
    p.add_argument("--witness", help="write the satisfying model here")
    p.set_defaults(run=cmd_sat)

    p = sub.add_parser("valid", parents=[common], help="decide validity of a universal formula")
    p.add_argument("formula")
    _solver_flags(p)
    p.add_argument("--witness", help="write the countermodel here")
    p.set_defaults(run=cmd_valid)

    p = sub.add_parser("classify", parents=[common], help="report the quantifier shape of a formula")
    p.add_argument("formula")
    p.set_defaults(run=cmd_classify)

    we = sub.add_parser("we", help="word equations").add_subparsers(dest="we_command", required=True)
    p = we.add_parser("solve", parents=[common], help="solve a Boolean combination of word equations")
    p.add_argument("equation")
    _solver_flags(p)
    p.add_argument("--alphabet", help="comma-separated letters; default: unbounded")
    p.set_defaults(run=cmd_we_solve)
    p = we.add_parser("transform", parents=[common], help="compile to a single equation")
    p.add_argument("equation")
    p.add_argument("--alphabet", help="comma-separated letters; default: letters of the input")
    p.set_defaults(run=cmd_we_transform)

    mk = sub.add_parser("minsky", help="two-counter machines").add_subparsers(dest="minsky_command", required=True)
    p = mk.add_parser("run", parents=[common], help="simulate a machine")
    p.add_argument("machine")
    p.add_argument("--max-steps", type=int, default=1000)
    p.set_defaults(run=cmd_minsky_run)
    p = mk.add_parser("encode", parents=[common], help="print the machine's formula")
    p.add_argument("machine")
    p.add_argument("--literal", action="store_true", help="construction as originally stated")
    p.add_argument("--regrouped", action="store_true", help="two-conjunct grouping")
    p.add_argument("-o", "--out", help="also write the formula to this file")
    p.set_defaults(run=cmd_minsky_encode)
    p = mk.add_parser("validate", parents=[common], help="check the encoding on the machine's run")
    p.add_argument("machine")
    p.add_argument("--max-steps", type=int, default=1000)
    p.add_argument("--literal", action="store_true", help="construction as originally stated")
    p.add_argument("--witness", help="write the run model here")
    p.set_defaults(run=cmd_minsky_validate)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return OK if e.code == 0 else ERROR
    try:
        return args.run(args)
    except (UsageError, ParseError, WordParseError, ModelFormatError, NotPSeqSL, WrongFragment,
            ClassificationError, AlphabetTooSmall, minsky.MachineError) as e:
        print(f"error: {e}", file=sys.stderr)
    except UnboundVariable as e:
        print(f"error: unbound variable {e.args[0]}", file=sys.stderr)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
    return ERROR


if __name__ == "__main__":
    sys.exit(main())
