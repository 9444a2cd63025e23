"""Abstract syntax for sequence-heap separation logic.

Values are Python ints (naturals, used both as locations and as data) or one
of the two reserved atoms in :class:`Atom`.  Terms and formulas are frozen
dataclasses, so they hash, compare structurally and can be shared freely.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Union


class Atom(enum.Enum):
    NIL = "nil"
    HASH = "#"

    def __repr__(self) -> str:
        return self.value

    __str__ = __repr__


NIL = Atom.NIL
HASH = Atom.HASH

Value = Union[int, Atom]


def is_nat(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool) and v >= 0


def value_key(v: Value) -> tuple:
    """Canonical order: nil < # < 0 < 1 < ..."""
    if v is NIL:
        return (0, 0)
    if v is HASH:
        return (0, 1)
    return (1, v)


def format_value(v: Value) -> str:
    return v.value if isinstance(v, Atom) else str(v)


# -- terms -----------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: Value


@dataclass(frozen=True)
class PVar:
    name: str


@dataclass(frozen=True)
class SVar:
    name: str


@dataclass(frozen=True)
class Eps:
    pass


@dataclass(frozen=True)
class Concat:
    left: "SeqTerm"
    right: "SeqTerm"


EPS = Eps()

IndTerm = Union[Const, PVar]
SeqTerm = Union[Eps, Const, PVar, SVar, Concat]
Var = Union[PVar, SVar]


def is_term(t) -> bool:
    return isinstance(t, (Const, PVar, SVar, Eps, Concat))


def is_ind_term(t) -> bool:
    return isinstance(t, (Const, PVar))


def flatten(t: SeqTerm) -> tuple:
    """Leaves of a sequence term, left to right, with ``eps`` removed."""
    out: list = []
    stack = [t]
    while stack:
        cur = stack.pop()
        if isinstance(cur, Concat):
            stack.append(cur.right)
            stack.append(cur.left)
        elif not isinstance(cur, Eps):
            out.append(cur)
    return tuple(out)


def concat(*parts: SeqTerm) -> SeqTerm:
    """Left-nested concatenation of ``parts``; the empty call gives ``eps``."""
    leaves = [p for p in parts if not isinstance(p, Eps)]
    if not leaves:
        return EPS
    acc = leaves[0]
    for p in leaves[1:]:
        acc = Concat(acc, p)
    return acc


def normalize(t: SeqTerm) -> SeqTerm:
    return concat(*flatten(t))


def nil_block(k: int) -> SeqTerm:
    return concat(*([Const(NIL)] * k))


# -- formulas --------------------------------------------------------------

class Formula:
    """Marker base class for formula nodes."""

    __slots__ = ()

    def __str__(self) -> str:
        from .printer import format_formula
        return format_formula(self)


@dataclass(frozen=True, repr=False)
class IndEq(Formula):
    left: IndTerm
    right: IndTerm


@dataclass(frozen=True, repr=False)
class SeqEq(Formula):
    left: SeqTerm
    right: SeqTerm


@dataclass(frozen=True, repr=False)
class Lt(Formula):
    """Natural-number order between individual terms (false on atoms)."""
    left: IndTerm
    right: IndTerm


@dataclass(frozen=True, repr=False)
class Not(Formula):
    body: Formula


@dataclass(frozen=True, repr=False)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Emp(Formula):
    pass


@dataclass(frozen=True, repr=False)
class PointsTo(Formula):
    loc: IndTerm
    seq: SeqTerm


@dataclass(frozen=True, repr=False)
class Sep(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Wand(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Exists(Formula):
    var: Var
    body: Formula


@dataclass(frozen=True, repr=False)
class TrueF(Formula):
    pass


@dataclass(frozen=True, repr=False)
class FalseF(Formula):
    pass


@dataclass(frozen=True, repr=False)
class Macro(Formula):
    """Call of a derived predicate; removed by ``expand_macros``."""
    name: str
    args: tuple


for _cls in (IndEq, SeqEq, Lt, Not, And, Or, Implies, Emp, PointsTo, Sep,
             Wand, Exists, TrueF, FalseF, Macro):
    _cls.__repr__ = lambda self: f"<{type(self).__name__} {self}>"

EMP = Emp()
TRUE = TrueF()
FALSE = FalseF()


def forall(var: Var, body: Formula) -> Formula:
    return Not(Exists(var, Not(body)))


def exists_many(variables, body: Formula) -> Formula:
    for v in reversed(list(variables)):
        body = Exists(v, body)
    return body


def forall_many(variables, body: Formula) -> Formula:
    for v in reversed(list(variables)):
        body = forall(v, body)
    return body


def conj(*parts: Formula) -> Formula:
    parts = [p for p in parts if not isinstance(p, TrueF)]
    if not parts:
        return TRUE
    acc = parts[0]
    for p in parts[1:]:
        acc = And(acc, p)
    return acc


def disj(*parts: Formula) -> Formula:
    parts = [p for p in parts if not isinstance(p, FalseF)]
    if not parts:
        return FALSE
    acc = parts[0]
    for p in parts[1:]:
        acc = Or(acc, p)
    return acc


def sep(*parts: Formula) -> Formula:
    if not parts:
        return EMP
    acc = parts[0]
    for p in parts[1:]:
        acc = Sep(acc, p)
    return acc


def as_forall(f: Formula):
    """Return ``(var, body)`` if ``f`` has the shape ``~ exists v. ~ body``."""
    if isinstance(f, Not) and isinstance(f.body, Exists) and isinstance(f.body.body, Not):
        return f.body.var, f.body.body.body
    return None


def children(f: Formula) -> tuple:
    if isinstance(f, (Not,)):
        return (f.body,)
    if isinstance(f, (And, Or, Implies, Sep, Wand)):
        return (f.left, f.right)
    if isinstance(f, Exists):
        return (f.body,)
    if isinstance(f, Macro):
        return tuple(a for a in f.args if isinstance(a, Formula))
    return ()


def subformulas(f: Formula) -> Iterator[Formula]:
    stack = [f]
    while stack:
        cur = stack.pop()
        yield cur
        stack.extend(children(cur))


def term_vars(t) -> set:
    if isinstance(t, (PVar, SVar)):
        return {t}
    if isinstance(t, Concat):
        return term_vars(t.left) | term_vars(t.right)
    return set()


def term_values(t) -> set:
    if isinstance(t, Const):
        return {t.value}
    if isinstance(t, Concat):
        return term_values(t.left) | term_values(t.right)
    return set()
