"""Concrete syntax output; ``parse_formula(format_formula(f)) == f``."""
from __future__ import annotations

from .syntax import (And, Atom, Concat, Const, Emp, Eps, Exists, FalseF,
                     Implies, IndEq, Lt, Macro, Not, Or, PointsTo, PVar, Sep,
                     SeqEq, SVar, TrueF, Wand, as_forall)

# binding strength, low to high
_IMPLIES, _OR, _AND, _WAND, _SEP, _NOT, _ATOM = range(7)

INFIX_MACROS = {"septraction": ("-o", _WAND), "hook": ("~>", _ATOM)}


def format_term(t, nested: bool = False) -> str:
    if isinstance(t, Const):
        v = t.value
        return v.value if isinstance(v, Atom) else str(v)
    if isinstance(t, PVar):
        return t.name
    if isinstance(t, SVar):
        return "@" + t.name
    if isinstance(t, Eps):
        return "eps"
    if isinstance(t, Concat):
        s = f"{format_term(t.left)} ^ {format_term(t.right, True)}"
        return f"({s})" if nested else s
    raise TypeError(f"not a term: {t!r}")


def _arg(a) -> str:
    if isinstance(a, int) and not isinstance(a, bool):
        return str(a)
    if isinstance(a, (Const, PVar, SVar, Eps, Concat)):
        return format_term(a)
    return format_formula(a)


def _fmt(f, ctx: int, tail: bool) -> str:
    """Render ``f`` in a context of binding strength ``ctx``.

    ``tail`` is set when nothing follows ``f`` up to the enclosing bracket,
    which is the only place a quantifier may appear unbracketed.
    """
    q = as_forall(f)
    if q is not None or isinstance(f, Exists):
        var, body, word = (q[0], q[1], "forall") if q else (f.var, f.body, "exists")
        s = f"{word} {format_term(var)}. {_fmt(body, _IMPLIES, True)}"
        return s if tail else f"({s})"
    if isinstance(f, IndEq):
        return f"{format_term(f.left)} = {format_term(f.right)}"
    if isinstance(f, SeqEq):
        return f"{format_term(f.left)} == {format_term(f.right)}"
    if isinstance(f, Lt):
        return f"{format_term(f.left)} < {format_term(f.right)}"
    if isinstance(f, PointsTo):
        return f"{format_term(f.loc)} |-> {format_term(f.seq)}"
    if isinstance(f, Emp):
        return "emp"
    if isinstance(f, TrueF):
        return "true"
    if isinstance(f, FalseF):
        return "false"
    if isinstance(f, Not):
        if isinstance(f.body, IndEq):
            return f"{format_term(f.body.left)} != {format_term(f.body.right)}"
        if isinstance(f.body, SeqEq):
            return f"{format_term(f.body.left)} !== {format_term(f.body.right)}"
        return "~" + _fmt(f.body, _NOT, tail)
    if isinstance(f, Macro):
        if f.name in INFIX_MACROS and len(f.args) == 2:
            op, prec = INFIX_MACROS[f.name]
            if f.name == "hook":
                return f"{format_term(f.args[0])} ~> {format_term(f.args[1])}"
            s = f"{_fmt(f.args[0], prec + 1, False)} {op} {_fmt(f.args[1], prec, tail or prec < ctx)}"
            return f"({s})" if prec < ctx else s
        return f"{f.name}({', '.join(_arg(a) for a in f.args)})"
    binops = {Implies: ("=>", _IMPLIES, True), Or: ("\\/", _OR, False),
              And: ("/\\", _AND, False), Wand: ("-*", _WAND, True),
              Sep: ("*", _SEP, False)}
    if type(f) in binops:
        op, prec, right_assoc = binops[type(f)]
        lctx, rctx = (prec + 1, prec) if right_assoc else (prec, prec + 1)
        paren = prec < ctx
        left = _fmt(f.left, lctx, False)
        right = _fmt(f.right, rctx, tail or paren)
        s = f"{left} {op} {right}"
        return f"({s})" if paren else s
    raise TypeError(f"not a formula: {f!r}")


def format_formula(f) -> str:
    return _fmt(f, _IMPLIES, True)
