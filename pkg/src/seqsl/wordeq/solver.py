"""Word-equation solving by case splitting plus Nielsen/Levi transformations.

The formula is put in negation normal form with existentials hoisted.  A
depth-first search then works on a conjunction of goals:

* literals are simplified (common prefixes and suffixes cancelled, clashes
  and length/letter-count contradictions detected);
* equations in solved form ``X == w`` (``X`` not in ``w``) are applied as
  substitutions;
* disjunctions are split, smallest first;
* the remaining cube of equations and disequations goes to a Nielsen search
  with a visited-state set.

A branch where no equations remain is satisfiable iff no disequation became
syntactically trivial: over an unbounded alphabet, sending every remaining
variable to its own fresh letter maps distinct words to distinct words.  With
a fixed finite alphabet the leftover variables are enumerated up to
``max_len`` instead.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from ..syntax import SVar
from .formula import (W_FALSE, W_TRUE, WAnd, WEq, WExists, WFalse, WNot, WOr,
                      WTrue, evaluate, formula_letters, formula_vars,
                      hoist_exists, letter_key, nnf, subst_word, wand, wor)
from .verdict import Sat, Unknown, Unsat


@dataclass
class SolverConfig:
    max_len: int = 6
    max_nodes: int = 200_000


class _OutOfBudget(Exception):
    pass


def _strip(l: tuple, r: tuple) -> tuple:
    i = 0
    n = min(len(l), len(r))
    while i < n and l[i] == r[i]:
        i += 1
    if i:
        l, r = l[i:], r[i:]
    j = 0
    n = min(len(l), len(r))
    while j < n and l[-1 - j] == r[-1 - j]:
        j += 1
    if j:
        l, r = l[:len(l) - j], r[:len(r) - j]
    return l, r


def _counts_contradict(l: tuple, r: tuple) -> bool:
    """True when lengths or letter counts rule out ``l == r`` for every assignment."""
    coef: dict = {}
    letters: dict = {}
    for s in l:
        if isinstance(s, SVar):
            coef[s] = coef.get(s, 0) + 1
        else:
            letters[s] = letters.get(s, 0) - 1
    for s in r:
        if isinstance(s, SVar):
            coef[s] = coef.get(s, 0) - 1
        else:
            letters[s] = letters.get(s, 0) + 1
    cs = [c for c in coef.values() if c]
    const = sum(letters.values())
    pos = all(c >= 0 for c in cs)
    neg = all(c <= 0 for c in cs)
    if not cs:
        return const != 0 or any(letters.values())
    if pos and const < 0 or neg and const > 0:
        return True
    # per-letter counts obey the same sign argument
    for k in letters.values():
        if pos and k < 0 or neg and k > 0:
            return True
    return False


def _first_clash(l: tuple, r: tuple) -> bool:
    a, b = l[0], r[0]
    if not isinstance(a, SVar) and not isinstance(b, SVar) and a != b:
        return True
    a, b = l[-1], r[-1]
    return not isinstance(a, SVar) and not isinstance(b, SVar) and a != b


def simplify_eq(l: tuple, r: tuple):
    """Return ``True``, ``False`` or an equivalent stripped pair."""
    l, r = _strip(l, r)
    if not l and not r:
        return True
    if not l or not r:
        other = l or r
        if any(not isinstance(s, SVar) for s in other):
            return False
        return (l, r)
    if _first_clash(l, r) or _counts_contradict(l, r):
        return False
    return (l, r)


def _simplify(f):
    if isinstance(f, WEq):
        s = simplify_eq(f.lhs, f.rhs)
        if s is True:
            return W_TRUE
        if s is False:
            return W_FALSE
        return WEq(*s)
    if isinstance(f, WNot):
        s = simplify_eq(f.body.lhs, f.body.rhs)
        if s is True:
            return W_FALSE
        if s is False:
            return W_TRUE
        return WNot(WEq(*s))
    if isinstance(f, WAnd):
        return wand(*[_simplify(p) for p in f.parts])
    if isinstance(f, WOr):
        return wor(*[_simplify(p) for p in f.parts])
    return f


def _subst(f, sub):
    if isinstance(f, WEq):
        return WEq(subst_word(f.lhs, sub), subst_word(f.rhs, sub))
    if isinstance(f, WNot):
        return WNot(_subst(f.body, sub))
    if isinstance(f, WAnd):
        return WAnd(tuple(_subst(p, sub) for p in f.parts))
    if isinstance(f, WOr):
        return WOr(tuple(_subst(p, sub) for p in f.parts))
    return f


def _fvars(f, out: set) -> set:
    if isinstance(f, WEq):
        out.update(s for s in f.lhs if isinstance(s, SVar))
        out.update(s for s in f.rhs if isinstance(s, SVar))
    elif isinstance(f, WNot):
        _fvars(f.body, out)
    elif isinstance(f, (WAnd, WOr)):
        for p in f.parts:
            _fvars(p, out)
    return out


def _solved_form(f):
    """A binding implied by equation ``f``, or None."""
    l, r = f.lhs, f.rhs
    if not l or not r:
        other = l or r
        return {v: () for v in other}
    if len(l) == 1 and isinstance(l[0], SVar) and l[0] not in r:
        return {l[0]: r}
    if len(r) == 1 and isinstance(r[0], SVar) and r[0] not in l:
        return {r[0]: l}
    return None


class _Search:
    def __init__(self, alphabet: Optional[tuple], cfg: SolverConfig, fresh_base: int):
        self.alphabet = alphabet
        self.cfg = cfg
        self.nodes = 0
        self.fresh_base = fresh_base
        self.incomplete = False
        self._simplified: dict = {}

    def simplify(self, g):
        """``_simplify`` memoized by object identity; goals are shared across branches."""
        hit = self._simplified.get(id(g))
        if hit is not None and hit[0] is g:
            return hit[1]
        out = _simplify(g)
        self._simplified[id(g)] = (g, out)
        self._simplified[id(out)] = (out, out)
        return out

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.cfg.max_nodes:
            raise _OutOfBudget()

    def allowed(self, binding: dict) -> bool:
        """With a fixed alphabet, bound values may only use its letters."""
        if self.alphabet is None:
            return True
        return all(isinstance(s, SVar) or s in self.alphabet
                   for word in binding.values() for s in word)

    # -- Boolean level ---------------------------------------------------

    def run(self, goals: list, trail: list):
        """Return a leaf assignment plus its trail, or None."""
        while True:
            self.tick()
            flat: list = []
            for g in goals:
                g = self.simplify(g)
                if isinstance(g, WFalse):
                    return None
                if isinstance(g, WTrue):
                    continue
                if isinstance(g, WAnd):
                    flat.extend(g.parts)
                else:
                    flat.append(g)
            binding = None
            for g in flat:
                if isinstance(g, WEq):
                    binding = _solved_form(g)
                    if binding is not None:
                        break
            if binding is None:
                break
            if not self.allowed(binding):
                return None
            trail = trail + list(binding.items())
            goals = [_subst(h, binding) for h in flat]
        ors = [g for g in flat if isinstance(g, WOr)]
        if ors:
            pick = min(ors, key=lambda o: len(o.parts))
            rest = [g for g in flat if g is not pick]
            for part in pick.parts:
                found = self.run(rest + [part], trail)
                if found is not None:
                    return found
            return None
        eqs = [(g.lhs, g.rhs) for g in flat if isinstance(g, WEq)]
        neqs = [(g.body.lhs, g.body.rhs) for g in flat if isinstance(g, WNot)]
        return self.nielsen(eqs, neqs, trail)

    # -- Nielsen level ---------------------------------------------------

    def nielsen(self, eqs: list, neqs: list, trail: list):
        visited: set = set()
        stack = [(eqs, neqs, trail)]
        while stack:
            self.tick()
            eqs, neqs, trail = stack.pop()
            state = self._normalize(eqs, neqs, trail)
            if state is None:
                continue
            eqs, neqs, trail = state
            key = (frozenset(eqs), frozenset(neqs))
            if key in visited:
                continue
            visited.add(key)
            if not eqs:
                leaf = self.finish(neqs)
                if leaf is not None:
                    return leaf, trail
                continue
            l, r = min(eqs, key=lambda e: len(e[0]) + len(e[1]))
            a, b = l[0], r[0]
            branches = []
            if isinstance(a, SVar) and isinstance(b, SVar):
                branches = [(a, ()), (b, ()), (a, (b, a)), (b, (a, b))]
            elif isinstance(a, SVar):
                branches = [(a, ())]
                if self.alphabet is None or b in self.alphabet:
                    branches.append((a, (b, a)))
            else:
                branches = [(b, ())]
                if self.alphabet is None or a in self.alphabet:
                    branches.append((b, (a, b)))
            for var, word in reversed(branches):
                sub = {var: word}
                stack.append((
                    [(subst_word(x, sub), subst_word(y, sub)) for x, y in eqs],
                    [(subst_word(x, sub), subst_word(y, sub)) for x, y in neqs],
                    trail + [(var, word)],
                ))
        return None

    def _normalize(self, eqs, neqs, trail):
        """Simplify, apply solved forms; None when contradictory."""
        while True:
            out_eqs = []
            for l, r in eqs:
                s = simplify_eq(l, r)
                if s is False:
                    return None
                if s is not True:
                    out_eqs.append(s)
            out_neqs = []
            for l, r in neqs:
                s = simplify_eq(l, r)
                if s is True:
                    return None
                if s is not False:
                    out_neqs.append(s)
            binding = None
            for l, r in out_eqs:
                binding = _solved_form(WEq(l, r))
                if binding is not None:
                    break
            if binding is None:
                return out_eqs, out_neqs, trail
            if not self.allowed(binding):
                return None
            eqs = [(subst_word(x, binding), subst_word(y, binding)) for x, y in out_eqs]
            neqs = [(subst_word(x, binding), subst_word(y, binding)) for x, y in out_neqs]
            trail = trail + list(binding.items())

    def finish(self, neqs: list):
        """Assign variables left in disequations, or None."""
        free = sorted({s for l, r in neqs for s in l + r if isinstance(s, SVar)},
                      key=lambda v: v.name)
        if not free:
            return {}
        if self.alphabet is None:
            return {v: (self.fresh_base + i,) for i, v in enumerate(free)}
        words = [w for n in range(self.cfg.max_len + 1)
                 for w in itertools.product(self.alphabet, repeat=n)]
        for combo in itertools.product(words, repeat=len(free)):
            sub = dict(zip(free, combo))
            if all(subst_word(l, sub) != subst_word(r, sub) for l, r in neqs):
                return sub
        self.incomplete = True
        return None


def _rebuild(leaf: dict, trail: list, variables) -> dict:
    assignment = dict(leaf)
    for var, word in reversed(trail):
        value: list = []
        for s in word:
            if isinstance(s, SVar):
                value.extend(assignment.get(s, ()))
            else:
                value.append(s)
        assignment[var] = tuple(value)
    return {v: assignment.get(v, ()) for v in variables}


def solve(phi, cfg: SolverConfig | None = None, alphabet: Optional[Sequence] = None,
          fresh_base: Optional[int] = None):
    """Decide a Boolean combination of word equations.

    ``alphabet=None`` means solutions may use arbitrary letters (the monoid
    over an unbounded alphabet); otherwise every value is a word over
    ``alphabet``.  Existential prefixes are allowed; the witness then also
    covers the bound variables.
    """
    cfg = cfg or SolverConfig()
    sigma = None if alphabet is None else tuple(sorted(set(alphabet), key=letter_key))
    bound, matrix = hoist_exists(nnf(phi))
    variables = sorted(formula_vars(matrix), key=lambda v: v.name)
    if fresh_base is None:
        ints = [a for a in formula_letters(matrix) if isinstance(a, int)]
        fresh_base = max(ints, default=0) + 1
    search = _Search(sigma, cfg, fresh_base)
    try:
        found = search.run([matrix], [])
    except _OutOfBudget:
        return Unknown(f"node budget {cfg.max_nodes} exhausted", cfg.max_nodes)
    if found is None:
        if search.incomplete:
            return Unknown(f"no solution with residual lengths <= {cfg.max_len}", cfg.max_len)
        return Unsat()
    leaf, trail = found
    witness = _rebuild(leaf, trail, variables)
    if not evaluate(matrix, witness):
        raise AssertionError("solver produced a substitution that does not verify")
    return Sat(witness)
