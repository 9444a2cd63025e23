"""Reader for the formula syntax.

Binding strength, loosest first: ``=>`` (right associative), ``\\/``,
``/\\``, ``-*`` and ``-o`` (right associative), ``*``, ``~``, atoms.  A
quantifier body extends as far right as possible.
"""
from __future__ import annotations

import re

from .syntax import (EMP, EPS, FALSE, HASH, NIL, TRUE, And, Concat, Const,
                     Exists, Implies, IndEq, Lt, Macro, Not, Or, PointsTo,
                     PVar, Sep, SeqEq, SVar, Wand, forall)


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


KEYWORDS = {"nil", "eps", "emp", "true", "false", "exists", "forall"}

_OPS = ["|->", "!==", "==", "!=", "=>", "-*", "-o", "~>", "\\/", "/\\",
        "=", "<", "~", "*", "^", "(", ")", ",", ".", "#"]
_TOKEN = re.compile(
    r"(?P<op>" + "|".join(re.escape(o) for o in _OPS) + r")"
    r"|(?P<svar>@[A-Za-z][A-Za-z0-9_']*)"
    r"|(?P<num>\d+)"
    r"|(?P<ident>[A-Za-z][A-Za-z0-9_']*)"
)
_RELATIONS = {"=", "==", "!=", "!==", "<", "|->", "~>"}


def tokenize(text: str) -> list:
    out = []
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        value = m.group(kind)
        if kind == "num":
            value = int(value)
        elif kind == "svar":
            value = value[1:]
        out.append((kind, value, pos))
        pos = m.end()
    out.append(("eof", None, n))
    return out


class _Parser:
    def __init__(self, text: str):
        from .macros import MACROS
        self.macros = MACROS
        self.toks = tokenize(text)
        self.i = 0

    # -- token helpers ---------------------------------------------------

    def peek(self, k: int = 0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, value) -> bool:
        kind, v, _ = self.peek()
        return kind == "op" and v == value

    def take(self):
        tok = self.toks[self.i]
        if tok[0] != "eof":
            self.i += 1
        return tok

    def expect(self, value):
        tok = self.take()
        if tok[0] != "op" or tok[1] != value:
            raise ParseError(f"expected {value!r}", tok[2])
        return tok

    def error(self, message: str):
        raise ParseError(message, self.peek()[2])

    # -- formulas --------------------------------------------------------

    def formula(self):
        left = self.disjunction()
        if self.at("=>"):
            self.take()
            return Implies(left, self.formula())
        return left

    def disjunction(self):
        left = self.conjunction()
        while self.at("\\/"):
            self.take()
            left = Or(left, self.conjunction())
        return left

    def conjunction(self):
        left = self.wand()
        while self.at("/\\"):
            self.take()
            left = And(left, self.wand())
        return left

    def wand(self):
        left = self.star()
        if self.at("-*"):
            self.take()
            return Wand(left, self.wand())
        if self.at("-o"):
            self.take()
            return Macro("septraction", (left, self.wand()))
        return left

    def star(self):
        left = self.unary()
        while self.at("*"):
            self.take()
            left = Sep(left, self.unary())
        return left

    def unary(self):
        if self.at("~"):
            self.take()
            return Not(self.unary())
        return self.atom()

    def atom(self):
        kind, value, pos = self.peek()
        if kind == "ident" and value in ("exists", "forall"):
            self.take()
            var = self.variable()
            self.expect(".")
            body = self.formula()
            return Exists(var, body) if value == "exists" else forall(var, body)
        if kind == "ident" and value in ("emp", "true", "false"):
            self.take()
            return {"emp": EMP, "true": TRUE, "false": FALSE}[value]
        if kind == "ident" and value not in KEYWORDS and self.peek(1)[:2] == ("op", "("):
            return self.macro_call()
        if kind == "op" and value == "(":
            save = self.i
            try:
                lhs = self.seq_term()
                if self.peek()[0] == "op" and self.peek()[1] in _RELATIONS:
                    return self.relation(lhs)
            except ParseError:
                pass
            self.i = save
            self.take()
            inner = self.formula()
            self.expect(")")
            return inner
        return self.relation(self.seq_term())

    def variable(self):
        kind, value, pos = self.take()
        if kind == "svar":
            return SVar(value)
        if kind == "ident" and value not in KEYWORDS:
            return PVar(value)
        raise ParseError("expected a variable", pos)

    def relation(self, lhs):
        kind, op, pos = self.take()
        if kind != "op" or op not in _RELATIONS:
            raise ParseError("expected a relation ('=', '==', '!=', '!==', '<', '|->', '~>')", pos)
        rhs = self.seq_term()
        if op == "==":
            return SeqEq(lhs, rhs)
        if op == "!==":
            return Not(SeqEq(lhs, rhs))
        if op == "!=" and not (self.individual(lhs) and self.individual(rhs)):
            return Not(SeqEq(lhs, rhs))
        if op in ("=", "!=", "<"):
            for side, t in (("left", lhs), ("right", rhs)):
                if not self.individual(t):
                    raise ParseError(f"'{op}' needs individual terms on the {side}", pos)
            if op == "=":
                return IndEq(lhs, rhs)
            if op == "!=":
                return Not(IndEq(lhs, rhs))
            return Lt(lhs, rhs)
        if not self.individual(lhs):
            raise ParseError(f"the location of '{op}' must be an individual term", pos)
        if op == "|->":
            return PointsTo(lhs, rhs)
        return Macro("hook", (lhs, rhs))

    @staticmethod
    def individual(t) -> bool:
        return isinstance(t, (Const, PVar))

    def macro_call(self):
        kind, name, pos = self.take()
        if name not in self.macros:
            raise ParseError(f"unknown predicate {name!r}", pos)
        kinds = self.macros[name].kinds
        self.expect("(")
        args = []
        for idx, k in enumerate(kinds):
            if idx:
                self.expect(",")
            args.append(self.macro_arg(k))
        if self.at(","):
            raise ParseError(f"{name} takes {len(kinds)} arguments", self.peek()[2])
        self.expect(")")
        return Macro(name, tuple(args))

    def macro_arg(self, kind: str):
        pos = self.peek()[2]
        if kind == "f":
            return self.formula()
        if kind == "n":
            tok = self.take()
            if tok[0] != "num":
                raise ParseError("expected a natural number literal", tok[2])
            return tok[1]
        t = self.seq_term()
        if kind == "x" and not self.individual(t):
            raise ParseError("expected an individual term", pos)
        return t

    # -- terms -----------------------------------------------------------

    def seq_term(self):
        left = self.term_atom()
        while self.at("^"):
            self.take()
            left = Concat(left, self.term_atom())
        return left

    def term_atom(self):
        kind, value, pos = self.take()
        if kind == "num":
            return Const(value)
        if kind == "svar":
            return SVar(value)
        if kind == "op" and value == "#":
            return Const(HASH)
        if kind == "ident":
            if value == "nil":
                return Const(NIL)
            if value == "eps":
                return EPS
            if value not in KEYWORDS:
                return PVar(value)
        if kind == "op" and value == "(":
            inner = self.seq_term()
            self.expect(")")
            return inner
        raise ParseError("expected a term", pos)


def parse_formula(text: str):
    """Parse one formula; raises :class:`ParseError` with a character offset."""
    p = _Parser(text)
    f = p.formula()
    kind, value, pos = p.peek()
    if kind != "eof":
        raise ParseError(f"unexpected {value!r}", pos)
    return f


def parse_term(text: str):
    p = _Parser(text)
    t = p.seq_term()
    kind, value, pos = p.peek()
    if kind != "eof":
        raise ParseError(f"unexpected {value!r}", pos)
    return t
