"""Compile a quantifier-free Boolean combination of word equations into one
equation under an existential prefix.

Building blocks, for two distinct marker letters ``n`` and ``n2``:

* ``F(t, t2) = t n t2 t n2 t2``; ``F(u1, u2) == F(v1, v2)`` holds exactly
  when ``u1 == v1`` and ``u2 == v2``.
* ``G(t) = t n t n2`` and ``Z = G(u u2) G(u u2)``; with
  ``X = Z u Z u2 Z`` and ``Y = Z v Z``, the equation
  ``X == b Y b2`` (``b``, ``b2`` fresh) is solvable exactly when
  ``v == u`` or ``v == u2``, provided ``u u2`` is nonempty or ``v`` is empty.
  Disjunctions are first rewritten as ``t1 s2 == t2 s2 | t2 s1 == t2 s2`` so
  both sides share the right-hand word; that rewrite never produces the
  degenerate case.
* A disequation ``t1 != t2`` becomes a disjunction of three families over
  the alphabet: ``t1 == t2 c b``, ``t2 == t1 c b`` and
  ``t1 == b c b1 & t2 == b d b2`` for letters ``c != d``.

Besides the equation, :func:`lift_solution` maps any solution of the source
formula to values for every auxiliary variable, so the compiled equation can
be checked by plain substitution.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from ..syntax import SVar
from .formula import (WAnd, WEq, WExists, WFalse, WNot, WOr, WTrue, all_vars,
                      letter_key, nnf, subst_word)


class AlphabetTooSmall(ValueError):
    pass


@dataclass
class _Node:
    """Compiled subformula: the equation plus how to recover its auxiliaries."""
    lhs: tuple
    rhs: tuple
    kind: str
    children: tuple = ()
    aux: tuple = ()
    payload: object = None


@dataclass
class SingleEquation:
    prefix: tuple
    equation: WEq
    alphabet: tuple
    _root: _Node = field(repr=False, default=None)

    def as_formula(self):
        f = self.equation
        for v in reversed(self.prefix):
            f = WExists(v, f)
        return f

    def size(self) -> int:
        return len(self.equation.lhs) + len(self.equation.rhs)


class _Compiler:
    def __init__(self, alphabet: Sequence, taken: set):
        self.sigma = tuple(alphabet)
        self.n, self.n2 = self.sigma[0], self.sigma[1]
        self.taken = set(taken)
        self.counter = 0
        self.prefix: list = []

    def fresh(self) -> SVar:
        while True:
            self.counter += 1
            v = SVar(f"b{self.counter}")
            if v not in self.taken:
                self.taken.add(v)
                self.prefix.append(v)
                return v

    def F(self, t, t2):
        return t + (self.n,) + t2 + t + (self.n2,) + t2

    def G(self, t):
        return t + (self.n,) + t + (self.n2,)

    def compile(self, f) -> _Node:
        if isinstance(f, WEq):
            return _Node(f.lhs, f.rhs, "eq")
        if isinstance(f, WTrue):
            return _Node((), (), "eq")
        if isinstance(f, WFalse):
            return _Node((self.n,), (self.n2,), "eq")
        if isinstance(f, WNot):
            return self.compile_neq(f.body)
        if isinstance(f, WAnd):
            return self.fold(f.parts, self.conj)
        if isinstance(f, WOr):
            return self.fold(f.parts, self.disj)
        raise TypeError(f"unexpected node in negation normal form: {f!r}")

    def fold(self, parts, combine) -> _Node:
        nodes = [self.compile(p) for p in parts]
        while len(nodes) > 1:
            paired = [combine(nodes[i], nodes[i + 1]) for i in range(0, len(nodes) - 1, 2)]
            if len(nodes) % 2:
                paired.append(nodes[-1])
            nodes = paired
        return nodes[0]

    def conj(self, a: _Node, b: _Node) -> _Node:
        return _Node(self.F(a.lhs, b.lhs), self.F(a.rhs, b.rhs), "and", (a, b))

    def disj(self, a: _Node, b: _Node) -> _Node:
        u = a.lhs + b.rhs
        u2 = a.rhs + b.lhs
        v = a.rhs + b.rhs
        z = self.G(u + u2) * 2
        x = z + u + z + u2 + z
        y = z + v + z
        beta, beta2 = self.fresh(), self.fresh()
        return _Node(x, (beta,) + y + (beta2,), "or", (a, b), (beta, beta2), (z, u, u2, v))

    def compile_neq(self, eq: WEq) -> _Node:
        t1, t2 = eq.lhs, eq.rhs
        b0, b1, b2 = self.fresh(), self.fresh(), self.fresh()
        alts = []
        for c in self.sigma:
            alts.append(WEq(t1, t2 + (c, b0)))
        for c in self.sigma:
            alts.append(WEq(t2, t1 + (c, b0)))
        for c in self.sigma:
            for d in self.sigma:
                if c != d:
                    alts.append(WAnd((WEq(t1, (b0, c, b1)), WEq(t2, (b0, d, b2)))))
        inner = self.fold(alts, self.disj)
        return _Node(inner.lhs, inner.rhs, "neq", (inner,), (b0, b1, b2), (t1, t2))


def to_single_equation(phi, alphabet: Sequence) -> SingleEquation:
    """Compile ``phi`` into ``exists prefix. U == V``, equisatisfiable over ``alphabet``."""
    sigma = tuple(sorted(set(alphabet), key=letter_key))
    if len(sigma) < 2:
        raise AlphabetTooSmall("the alphabet needs at least two letters")
    comp = _Compiler(sigma, all_vars(phi))
    root = comp.compile(nnf(phi))
    return SingleEquation(tuple(comp.prefix), WEq(root.lhs, root.rhs), sigma, root)


def _holds(node: _Node, sub: Mapping) -> bool:
    return subst_word(node.lhs, sub) == subst_word(node.rhs, sub)


def _fill(node: _Node, sub: dict, sigma: tuple) -> None:
    """Assign the auxiliaries under ``node`` so its equation matches the source."""
    if node.kind != "neq":
        for child in node.children:
            _fill(child, sub, sigma)
    if node.kind == "or":
        z, u, u2, v = (subst_word(w, sub) for w in node.payload)
        x = z + u + z + u2 + z
        y = z + v + z
        pos = _find(x, y)
        beta, beta2 = node.aux
        if pos is None:
            sub[beta], sub[beta2] = (), ()
        else:
            sub[beta], sub[beta2] = x[:pos], x[pos + len(y):]
    elif node.kind == "neq":
        t1, t2 = (subst_word(w, sub) for w in node.payload)
        b0, b1, b2 = node.aux
        sub[b0] = sub[b1] = sub[b2] = ()
        if t1 != t2:
            if len(t1) > len(t2) and t1[:len(t2)] == t2:
                sub[b0] = t1[len(t2) + 1:]
            elif len(t2) > len(t1) and t2[:len(t1)] == t1:
                sub[b0] = t2[len(t1) + 1:]
            else:
                i = next(k for k in range(min(len(t1), len(t2))) if t1[k] != t2[k])
                sub[b0], sub[b1], sub[b2] = t1[:i], t1[i + 1:], t2[i + 1:]
        _fill(node.children[0], sub, sigma)


def _find(hay: tuple, needle: tuple):
    codes: dict = {}
    enc = lambda w: "".join(chr(codes.setdefault(x, len(codes))) for x in w)
    pos = enc(hay).find(enc(needle))
    return None if pos < 0 else pos


def lift_solution(single: SingleEquation, source_solution: Mapping) -> dict:
    """Extend a solution of the source formula to the auxiliary variables.

    The result satisfies ``single.equation`` whenever ``source_solution``
    satisfies the source formula and only uses letters of the alphabet.
    """
    sub = {k: tuple(v) for k, v in source_solution.items()}
    for v in single.prefix:
        sub[v] = ()
    _fill(single._root, sub, single.alphabet)
    return sub
