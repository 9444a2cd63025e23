"""Library of derived predicates and their expansion into core formulas.

Each entry declares its argument kinds (``x`` individual term, ``s``
sequence term, ``n`` natural literal, ``f`` formula) and an expander.
Bound variables introduced by an expansion get counter-suffixed names that
do not clash with any name already in the formula.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

from .syntax import (EPS, FALSE, HASH, NIL, TRUE, And, Const, Exists,
                     Implies, IndEq, Lt, Macro, Not, Or, PointsTo, PVar, Sep,
                     SeqEq, SVar, Wand, concat, conj, disj,
                     exists_many, forall_many, is_term, subformulas,
                     term_vars)


class MacroError(ValueError):
    pass


class Fresh:
    """Supplies names ``base_k`` with one global counter, skipping taken names."""

    def __init__(self, taken: set):
        self.taken = set(taken)
        self.counter = itertools.count(1)

    def name(self, base: str) -> str:
        while True:
            cand = f"{base}_{next(self.counter)}"
            if cand not in self.taken:
                self.taken.add(cand)
                return cand

    def pvar(self, base: str = "x") -> PVar:
        return PVar(self.name(base))

    def svar(self, base: str = "a") -> SVar:
        return SVar(self.name(base))


@dataclass(frozen=True)
class MacroDef:
    kinds: str
    expand: Callable
    summary: str


def _hook(x, t):
    return Sep(PointsTo(x, t), TRUE)


def _alloc(fr: Fresh, x):
    a = fr.svar()
    return Exists(a, _hook(x, a))


def _unit(fr: Fresh, s):
    y = fr.pvar("y")
    return disj(Exists(y, SeqEq(s, y)), SeqEq(s, Const(NIL)), SeqEq(s, Const(HASH)))


def _len_eq(fr: Fresh, s, n: int):
    if n == 0:
        return SeqEq(s, EPS)
    bs = [fr.svar("b") for _ in range(n)]
    body = conj(SeqEq(s, concat(*bs)), *[_unit(fr, b) for b in bs])
    return exists_many(bs, body)


def _len_le(fr: Fresh, s, n: int):
    if n == 0:
        return SeqEq(s, EPS)
    bs = [fr.svar("b") for _ in range(n)]
    body = conj(SeqEq(s, concat(*bs)), *[Or(_unit(fr, b), SeqEq(b, EPS)) for b in bs])
    return exists_many(bs, body)


def _len_ge(fr: Fresh, s, n: int):
    bs = [fr.svar("b") for _ in range(n)]
    g = fr.svar("g")
    body = conj(SeqEq(s, concat(*bs, g)), *[_unit(fr, b) for b in bs])
    return exists_many(bs + [g], body)


def _in(fr: Fresh, x, s):
    a1, a2 = fr.svar(), fr.svar()
    return exists_many([a1, a2], SeqEq(s, concat(a1, x, a2)))


def _lookup(fr: Fresh, x, s, n: int):
    if n < 1:
        raise MacroError("lookup indices start at 1")
    a1, a2 = fr.svar(), fr.svar()
    return exists_many([a1, a2], And(SeqEq(s, concat(a1, x, a2)), _len_eq(fr, a1, n - 1)))


def _eq_items(fr: Fresh, s1, n1: int, s2, n2: int):
    y = fr.pvar("y")
    return Exists(y, And(_lookup(fr, y, s1, n1), _lookup(fr, y, s2, n2)))


def _count(fr: Fresh, s, x, n: int):
    gs = [fr.svar("g") for _ in range(n + 1)]
    parts = [gs[0]]
    for g in gs[1:]:
        parts += [x, g]
    body = conj(SeqEq(s, concat(*parts)), *[Not(_in(fr, x, g)) for g in gs])
    return exists_many(gs, body)


def _pairs(fr: Fresh, s, relation):
    x1, x2 = fr.pvar(), fr.pvar()
    a1, a2, a3 = fr.svar(), fr.svar(), fr.svar()
    body = Implies(SeqEq(s, concat(a1, x1, a2, x2, a3)), relation(x1, x2))
    return forall_many([x1, x2, a1, a2, a3], body)


def _inc(fr: Fresh, s):
    return _pairs(fr, s, Lt)


def _diff(fr: Fresh, s):
    return _pairs(fr, s, lambda a, b: Not(IndEq(a, b)))


def _seg(fr: Fresh, sub, whole):
    a3, a4 = fr.svar(), fr.svar()
    return exists_many([a3, a4], SeqEq(whole, concat(a3, sub, a4)))


def _trunc(fr: Fresh, sub, whole, n1: int, n2: int):
    if n1 < 1 or n2 < n1:
        raise MacroError("Trunc needs 1 <= start <= end")
    a3, a4 = fr.svar(), fr.svar()
    body = conj(SeqEq(whole, concat(a3, sub, a4)),
                _len_eq(fr, a3, n1 - 1), _len_eq(fr, concat(a3, sub), n2 - 1))
    return exists_many([a3, a4], body)


def _ini(fr: Fresh, s):
    return SeqEq(concat(Const(NIL), s), concat(s, Const(NIL)))


def _outdeg(fr: Fresh, x, n: int):
    al, ax = fr.svar("al"), fr.svar("ax")
    return exists_many([al, ax], And(_hook(x, concat(al, Const(HASH), ax)), _len_eq(fr, al, n)))


def _edge(fr: Fresh, x1, x2):
    l1, l2, ax = fr.svar("al"), fr.svar("al"), fr.svar("ax")
    return exists_many([l1, l2, ax], _hook(x1, concat(l1, x2, l2, Const(HASH), ax)))


def _reach(fr: Fresh, x1, x2, n: int):
    if n == 0:
        return IndEq(x1, x2)
    x3 = fr.pvar()
    return Exists(x3, Sep(_edge(fr, x1, x3), _reach(fr, x3, x2, n - 1)))


def _reach_upto(fr: Fresh, x1, x2, n: int):
    return disj(*[_reach(fr, x1, x2, k) for k in range(n + 1)])


def _inc_index(fr: Fresh, s, n: int):
    return conj(_inc(fr, s), _len_eq(fr, s, n + 1),
                _lookup(fr, Const(1), s, 1), _lookup(fr, Const(n + 1), s, n + 1))


def _two_tier(fr: Fresh, loc, s):
    l1, ax = fr.pvar("l"), fr.svar("ax")
    inner = Exists(ax, Implies(_in(fr, l1, s), _hook(l1, concat(EPS, Const(HASH), ax))))
    return Sep(_hook(loc, concat(s, Const(HASH), EPS)), forall_many([l1], inner))


# -- sapling ------------------------------------------------------------------

def unique_predecessors(fr: Fresh):
    """No location is the first entry of two different cells."""
    x1, x2, x3, x4 = (fr.pvar() for _ in range(4))
    a1, a2 = fr.svar(), fr.svar()
    body = Implies(Sep(_hook(x1, concat(x3, a1)), _hook(x2, concat(x4, a2))),
                   Not(IndEq(x3, x4)))
    return forall_many([x1, x2, x3, x4, a1, a2], body)


def no_predecessor(fr: Fresh, x0):
    x1, a = fr.pvar(), fr.svar()
    return forall_many([x1, a], Not(_hook(x1, concat(x0, a))))


def endpoints(fr: Fresh, x0, x0p):
    x1, a = fr.pvar(), fr.svar()
    return And(Exists(x1, _hook(x0, concat(x1, EPS))), Exists(a, _hook(x0p, concat(EPS, a))))


def successor_exists(fr: Fresh, x0p):
    x1, x2, x3 = fr.pvar(), fr.pvar(), fr.pvar()
    a1, a2 = fr.svar(), fr.svar()
    body = exists_many([x3, a1, a2], Implies(
        And(_hook(x1, concat(x2, a1)), Not(IndEq(x2, x0p))),
        _hook(x2, concat(x3, a2))))
    return forall_many([x1, x2], body)


def _sapling(fr: Fresh, x0, x0p):
    return conj(unique_predecessors(fr), no_predecessor(fr, x0),
                endpoints(fr, x0, x0p), successor_exists(fr, x0p))


MACROS: dict = {
    "septraction": MacroDef("ff", lambda fr, a, b: Not(Wand(a, Not(b))),
                            "some disjoint extension satisfying the left side makes the right side true"),
    "hook": MacroDef("xs", lambda fr, x, t: _hook(x, t), "cell at x stores t, other cells allowed"),
    "alloc": MacroDef("x", lambda fr, x: _alloc(fr, x), "x is allocated"),
    "alloc_pseqsl": MacroDef("x", lambda fr, x: Wand(PointsTo(x, Const(NIL)), FALSE),
                             "x is allocated, quantifier-free form"),
    "unit": MacroDef("s", _unit, "s has length one"),
    "len_eq": MacroDef("sn", _len_eq, "|s| = n"),
    "len_le": MacroDef("sn", _len_le, "|s| <= n"),
    "len_ge": MacroDef("sn", _len_ge, "|s| >= n"),
    "in": MacroDef("xs", _in, "x occurs in s"),
    "lookup": MacroDef("xsn", _lookup, "the n-th item of s is x (1-based)"),
    "eq_items": MacroDef("snsn", _eq_items, "item n1 of s1 equals item n2 of s2"),
    "count": MacroDef("sxn", _count, "x occurs exactly n times in s"),
    "Inc": MacroDef("s", _inc, "the naturals in s strictly increase"),
    "Diff": MacroDef("s", _diff, "the naturals in s are pairwise distinct"),
    "Seg": MacroDef("ss", _seg, "the first argument is a factor of the second"),
    "Trunc": MacroDef("ssnn", _trunc, "the first argument is the slice [n1, n2) of the second"),
    "ini": MacroDef("s", _ini, "s consists of nil only"),
    "Outdeg": MacroDef("xn", _outdeg, "the cell at x lists n locations before #"),
    "edge": MacroDef("xx", _edge, "the cell at x1 lists x2 before a #"),
    "reach": MacroDef("xxn", _reach, "a path of n edges with pairwise distinct sources"),
    "reach_upto": MacroDef("xxn", _reach_upto, "reach with some length <= n"),
    "IncIndex": MacroDef("sn", _inc_index, "s = 1 < ... < n+1, strictly increasing"),
    "two_tier": MacroDef("xs", _two_tier, "index cell at loc, data cells for every listed location"),
    "sapling": MacroDef("xx", _sapling, "fishbone chain from the first to the second argument"),
}


def names_in(f) -> set:
    """Every variable name occurring in ``f``, free or bound."""
    out: set = set()

    def term(t):
        out.update(v.name for v in term_vars(t))

    for g in subformulas(f):
        if isinstance(g, (IndEq, SeqEq, Lt)):
            term(g.left)
            term(g.right)
        elif isinstance(g, PointsTo):
            term(g.loc)
            term(g.seq)
        elif isinstance(g, Exists):
            out.add(g.var.name)
        elif isinstance(g, Macro):
            for a in g.args:
                if is_term(a):
                    term(a)
    return out


def expand_macros(f, fresh: Fresh | None = None):
    """Replace every library call by its definition."""
    fresh = fresh or Fresh(names_in(f))
    return _expand(f, fresh)


def _expand(f, fr: Fresh):
    if isinstance(f, Macro):
        spec = MACROS.get(f.name)
        if spec is None:
            raise MacroError(f"unknown predicate {f.name!r}")
        if len(f.args) != len(spec.kinds):
            raise MacroError(f"{f.name} takes {len(spec.kinds)} arguments, got {len(f.args)}")
        args = tuple(_expand(a, fr) if k == "f" else a for a, k in zip(f.args, spec.kinds))
        for a, k in zip(args, spec.kinds):
            if k == "n" and not (isinstance(a, int) and a >= 0):
                raise MacroError(f"{f.name} expects a natural number literal, got {a!r}")
        return _expand(spec.expand(fr, *args), fr)
    if isinstance(f, Not):
        return Not(_expand(f.body, fr))
    if isinstance(f, (And, Or, Implies, Sep, Wand)):
        return type(f)(_expand(f.left, fr), _expand(f.right, fr))
    if isinstance(f, Exists):
        return Exists(f.var, _expand(f.body, fr))
    return f


def has_macros(f) -> bool:
    return any(isinstance(g, Macro) for g in subformulas(f))
