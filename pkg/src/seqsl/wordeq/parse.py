"""Reader for the word-equation text format.

Letters are naturals, ``nil`` or ``#``; variables start with ``@``; ``^``
concatenates, ``eps`` is the empty word.  Formulas combine ``==`` and
``!=`` with ``&``, ``|`` and ``~``; ``exists @a.`` opens an existential.
"""
from __future__ import annotations

import re

from ..syntax import HASH, NIL, SVar
from .formula import W_FALSE, W_TRUE, WEq, WExists, WNot, wand, wor

_TOKEN = re.compile(r"\s*(?:(==|!=|\^|&|\||~|\(|\)|\.|#)|(@[A-Za-z][A-Za-z0-9_']*)|(\d+)|([A-Za-z][A-Za-z0-9_']*))")


class WordParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


def _tokenize(text: str) -> list:
    out = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise WordParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        op, var, num, word = m.groups()
        if op:
            out.append(("op", op, start))
        elif var:
            out.append(("var", var[1:], start))
        elif num:
            out.append(("num", int(num), start))
        else:
            out.append(("word", word, start))
        pos = m.end()
    out.append(("eof", None, len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        tok = self.take()
        if tok[1] != value:
            raise WordParseError(f"expected {value!r}", tok[2])
        return tok

    def formula(self):
        parts = [self.conj()]
        while self.peek()[1] == "|":
            self.take()
            parts.append(self.conj())
        return wor(*parts) if len(parts) > 1 else parts[0]

    def conj(self):
        parts = [self.unary()]
        while self.peek()[1] == "&":
            self.take()
            parts.append(self.unary())
        return wand(*parts) if len(parts) > 1 else parts[0]

    def unary(self):
        tok = self.peek()
        if tok[1] == "~":
            self.take()
            return WNot(self.unary())
        if tok == ("word", "exists", tok[2]):
            self.take()
            v = self.take()
            if v[0] != "var":
                raise WordParseError("expected a variable after 'exists'", v[2])
            self.expect(".")
            return WExists(SVar(v[1]), self.formula())
        if tok[0] == "word" and tok[1] in ("true", "false"):
            self.take()
            return W_TRUE if tok[1] == "true" else W_FALSE
        if tok[1] == "(":
            save = self.i
            try:
                return self.relation()
            except WordParseError:
                self.i = save
            self.take()
            inner = self.formula()
            self.expect(")")
            return inner
        return self.relation()

    def relation(self):
        lhs = self.word()
        tok = self.take()
        if tok[1] not in ("==", "!="):
            raise WordParseError("expected '==' or '!='", tok[2])
        rhs = self.word()
        eq = WEq(lhs, rhs)
        return eq if tok[1] == "==" else WNot(eq)

    def word(self) -> tuple:
        out = list(self.symbol())
        while self.peek()[1] == "^":
            self.take()
            out.extend(self.symbol())
        return tuple(out)

    def symbol(self) -> tuple:
        tok = self.take()
        kind, value, pos = tok
        if kind == "var":
            return (SVar(value),)
        if kind == "num":
            return (value,)
        if kind == "op" and value == "#":
            return (HASH,)
        if kind == "word" and value == "nil":
            return (NIL,)
        if kind == "word" and value == "eps":
            return ()
        if kind == "op" and value == "(":
            inner = self.word()
            self.expect(")")
            return inner
        raise WordParseError("expected a letter, variable or 'eps'", pos)


def parse_word_formula(text: str):
    p = _Parser(text)
    f = p.formula()
    tok = p.peek()
    if tok[0] != "eof":
        raise WordParseError("trailing input", tok[2])
    return f
