"""Boolean combinations of word equations.

A word is a tuple of symbols.  A symbol is either a letter (any hashable
value other than :class:`~seqsl.syntax.SVar`, normally a Value) or a
sequence variable.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from ..syntax import Atom, SVar, format_value

Word = tuple


def is_var(sym) -> bool:
    return isinstance(sym, SVar)


def letter_key(a) -> tuple:
    """Total order on letters: atoms, then naturals, then anything else."""
    if isinstance(a, Atom):
        return (0, 0 if a is Atom.NIL else 1, "")
    if isinstance(a, int):
        return (1, a, "")
    return (2, 0, str(a))


def word_vars(w: Word) -> set:
    return {s for s in w if isinstance(s, SVar)}


@dataclass(frozen=True)
class WEq:
    lhs: Word
    rhs: Word


@dataclass(frozen=True)
class WNot:
    body: "WordFormula"


@dataclass(frozen=True)
class WAnd:
    parts: tuple


@dataclass(frozen=True)
class WOr:
    parts: tuple


@dataclass(frozen=True)
class WTrue:
    pass


@dataclass(frozen=True)
class WFalse:
    pass


@dataclass(frozen=True)
class WExists:
    var: SVar
    body: "WordFormula"


WordFormula = object
W_TRUE = WTrue()
W_FALSE = WFalse()


def wand(*parts) -> "WordFormula":
    """Flattening conjunction with unit/zero simplification."""
    out = []
    for p in parts:
        if isinstance(p, WTrue):
            continue
        if isinstance(p, WFalse):
            return W_FALSE
        if isinstance(p, WAnd):
            out.extend(p.parts)
        else:
            out.append(p)
    if not out:
        return W_TRUE
    if len(out) == 1:
        return out[0]
    return WAnd(tuple(out))


def wor(*parts) -> "WordFormula":
    out = []
    for p in parts:
        if isinstance(p, WFalse):
            continue
        if isinstance(p, WTrue):
            return W_TRUE
        if isinstance(p, WOr):
            out.extend(p.parts)
        else:
            out.append(p)
    if not out:
        return W_FALSE
    if len(out) == 1:
        return out[0]
    return WOr(tuple(out))


def wnot(p) -> "WordFormula":
    if isinstance(p, WTrue):
        return W_FALSE
    if isinstance(p, WFalse):
        return W_TRUE
    if isinstance(p, WNot):
        return p.body
    return WNot(p)


def wimplies(a, b) -> "WordFormula":
    return wor(wnot(a), b)


def formula_vars(f) -> set:
    """Free sequence variables."""
    if isinstance(f, WEq):
        return word_vars(f.lhs) | word_vars(f.rhs)
    if isinstance(f, WNot):
        return formula_vars(f.body)
    if isinstance(f, (WAnd, WOr)):
        out: set = set()
        for p in f.parts:
            out |= formula_vars(p)
        return out
    if isinstance(f, WExists):
        return formula_vars(f.body) - {f.var}
    return set()


def all_vars(f) -> set:
    """Free and bound sequence variables."""
    if isinstance(f, WEq):
        return word_vars(f.lhs) | word_vars(f.rhs)
    if isinstance(f, WNot):
        return all_vars(f.body)
    if isinstance(f, (WAnd, WOr)):
        out: set = set()
        for p in f.parts:
            out |= all_vars(p)
        return out
    if isinstance(f, WExists):
        return all_vars(f.body) | {f.var}
    return set()


def formula_letters(f) -> set:
    if isinstance(f, WEq):
        return {s for s in f.lhs + f.rhs if not is_var(s)}
    if isinstance(f, (WNot, WExists)):
        return formula_letters(f.body)
    if isinstance(f, (WAnd, WOr)):
        out: set = set()
        for p in f.parts:
            out |= formula_letters(p)
        return out
    return set()


def formula_size(f) -> int:
    """Total number of symbols in all equations."""
    if isinstance(f, WEq):
        return len(f.lhs) + len(f.rhs)
    if isinstance(f, (WNot, WExists)):
        return formula_size(f.body)
    if isinstance(f, (WAnd, WOr)):
        return sum(formula_size(p) for p in f.parts)
    return 0


def subst_word(w: Word, sub: Mapping) -> Word:
    out: list = []
    for s in w:
        if isinstance(s, SVar) and s in sub:
            out.extend(sub[s])
        else:
            out.append(s)
    return tuple(out)


def substitute(f, sub: Mapping):
    """Replace free variables by words (which may contain variables)."""
    if isinstance(f, WEq):
        return WEq(subst_word(f.lhs, sub), subst_word(f.rhs, sub))
    if isinstance(f, WNot):
        return WNot(substitute(f.body, sub))
    if isinstance(f, WAnd):
        return WAnd(tuple(substitute(p, sub) for p in f.parts))
    if isinstance(f, WOr):
        return WOr(tuple(substitute(p, sub) for p in f.parts))
    if isinstance(f, WExists):
        inner = {k: v for k, v in sub.items() if k != f.var}
        return WExists(f.var, substitute(f.body, inner))
    return f


def evaluate(f, sub: Mapping) -> bool:
    """Ground truth value; every free variable must be assigned."""
    if isinstance(f, WEq):
        lhs = subst_word(f.lhs, sub)
        rhs = subst_word(f.rhs, sub)
        if word_vars(lhs) or word_vars(rhs):
            missing = sorted(v.name for v in word_vars(lhs) | word_vars(rhs))
            raise KeyError(f"unassigned variables: {', '.join(missing)}")
        return lhs == rhs
    if isinstance(f, WNot):
        return not evaluate(f.body, sub)
    if isinstance(f, WAnd):
        return all(evaluate(p, sub) for p in f.parts)
    if isinstance(f, WOr):
        return any(evaluate(p, sub) for p in f.parts)
    if isinstance(f, WTrue):
        return True
    if isinstance(f, WFalse):
        return False
    if isinstance(f, WExists):
        if f.var not in sub:
            raise KeyError(f"no value for bound variable @{f.var.name}")
        return evaluate(f.body, sub)
    raise TypeError(f"not a word formula: {f!r}")


def verify_substitution(f, subst: Mapping) -> bool:
    """Check a candidate solution; existential prefixes are not allowed here."""
    return evaluate(f, subst)


def strip_exists(f) -> tuple:
    """Split an outermost existential prefix: returns ``(vars, matrix)``."""
    bound = []
    while isinstance(f, WExists):
        bound.append(f.var)
        f = f.body
    return tuple(bound), f


def nnf(f, positive: bool = True):
    """Negation normal form; negations end up directly on equations."""
    if isinstance(f, WEq):
        return f if positive else WNot(f)
    if isinstance(f, WNot):
        return nnf(f.body, not positive)
    if isinstance(f, WAnd):
        parts = [nnf(p, positive) for p in f.parts]
        return wand(*parts) if positive else wor(*parts)
    if isinstance(f, WOr):
        parts = [nnf(p, positive) for p in f.parts]
        return wor(*parts) if positive else wand(*parts)
    if isinstance(f, WTrue):
        return W_TRUE if positive else W_FALSE
    if isinstance(f, WFalse):
        return W_FALSE if positive else W_TRUE
    if isinstance(f, WExists):
        if not positive:
            raise ValueError("universal quantification over sequences is not supported")
        return WExists(f.var, nnf(f.body, True))
    raise TypeError(f"not a word formula: {f!r}")


def hoist_exists(f, taken: set | None = None) -> tuple:
    """Rename positive existentials apart and pull them to the front.

    ``f`` must already be in negation normal form.  Returns
    ``(bound_vars, matrix)``.
    """
    taken = set(formula_vars(f)) if taken is None else taken
    bound: list = []

    def fresh(v: SVar) -> SVar:
        if v not in taken:
            taken.add(v)
            return v
        i = 1
        while SVar(f"{v.name}_{i}") in taken:
            i += 1
        nv = SVar(f"{v.name}_{i}")
        taken.add(nv)
        return nv

    def go(g):
        if isinstance(g, WExists):
            nv = fresh(g.var)
            body = substitute(g.body, {g.var: (nv,)}) if nv != g.var else g.body
            bound.append(nv)
            return go(body)
        if isinstance(g, WAnd):
            return wand(*[go(p) for p in g.parts])
        if isinstance(g, WOr):
            return wor(*[go(p) for p in g.parts])
        return g

    matrix = go(f)
    return tuple(bound), matrix


# -- text format -------------------------------------------------------------

def format_symbol(s) -> str:
    if isinstance(s, SVar):
        return "@" + s.name
    if isinstance(s, (Atom, int)):
        return format_value(s)
    return str(s)


def format_word(w: Word) -> str:
    if not w:
        return "eps"
    return " ^ ".join(format_symbol(s) for s in w)


def format_word_formula(f, _prec: int = 0) -> str:
    """Render in the text format accepted by ``parse_word_formula``."""
    if isinstance(f, WEq):
        return f"{format_word(f.lhs)} == {format_word(f.rhs)}"
    if isinstance(f, WNot):
        if isinstance(f.body, WEq):
            return f"{format_word(f.body.lhs)} != {format_word(f.body.rhs)}"
        return "~" + format_word_formula(f.body, 3)
    if isinstance(f, WTrue):
        return "true"
    if isinstance(f, WFalse):
        return "false"
    if isinstance(f, WOr):
        s = " | ".join(format_word_formula(p, 2) for p in f.parts)
        return f"({s})" if _prec > 1 else s
    if isinstance(f, WAnd):
        s = " & ".join(format_word_formula(p, 3) for p in f.parts)
        return f"({s})" if _prec > 2 else s
    if isinstance(f, WExists):
        s = f"exists @{f.var.name}. {format_word_formula(f.body, 0)}"
        return f"({s})" if _prec > 0 else s
    raise TypeError(f"not a word formula: {f!r}")


def format_substitution(sub: Mapping) -> str:
    items = sorted(sub.items(), key=lambda kv: kv[0].name)
    return ", ".join(f"@{k.name} = {format_word(tuple(v))}" for k, v in items)


def iter_equations(f) -> Iterable[WEq]:
    if isinstance(f, WEq):
        yield f
    elif isinstance(f, (WNot, WExists)):
        yield from iter_equations(f.body)
    elif isinstance(f, (WAnd, WOr)):
        for p in f.parts:
            yield from iter_equations(p)
