"""Substitution of terms for free variables (no capture: callers substitute
ground terms or fresh names)."""
from __future__ import annotations

from .syntax import (And, Concat, Exists, Implies, IndEq, Lt, Macro, Not, Or,
                     PointsTo, PVar, Sep, SeqEq, SVar, Wand, is_term)


def subst_term(t, m: dict):
    if isinstance(t, (PVar, SVar)):
        return m.get(t, t)
    if isinstance(t, Concat):
        return Concat(subst_term(t.left, m), subst_term(t.right, m))
    return t


def subst_formula(f, m: dict):
    if not m:
        return f
    if isinstance(f, (IndEq, SeqEq, Lt)):
        return type(f)(subst_term(f.left, m), subst_term(f.right, m))
    if isinstance(f, PointsTo):
        return PointsTo(subst_term(f.loc, m), subst_term(f.seq, m))
    if isinstance(f, Not):
        return Not(subst_formula(f.body, m))
    if isinstance(f, (And, Or, Implies, Sep, Wand)):
        return type(f)(subst_formula(f.left, m), subst_formula(f.right, m))
    if isinstance(f, Exists):
        inner = {k: v for k, v in m.items() if k != f.var}
        return Exists(f.var, subst_formula(f.body, inner))
    if isinstance(f, Macro):
        return Macro(f.name, tuple(subst_term(a, m) if is_term(a)
                                   else subst_formula(a, m) if not isinstance(a, int) else a
                                   for a in f.args))
    return f


def rename_free(f, old, new):
    return subst_formula(f, {old: new})
