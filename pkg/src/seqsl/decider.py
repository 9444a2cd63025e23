"""Satisfiability for the propositional fragment by reduction to word equations.

``reduce`` turns a formula, a stack and a symbolic heap into a Boolean
combination of word equations over the sequence variables.  Cells of a
symbolic heap are words whose symbols are values or sequence variables.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .analysis import (PI1, ClassificationError, classify, desugar_to_pseqsl,
                       formula_size, free_program_vars, free_seq_vars,
                       nat_constants, prenex, seq_terms)
from .heap import Model, heap_splits
from .macros import Fresh, names_in
from .semantics import check
from .syntax import (HASH, NIL, TRUE, Const, Emp, FalseF, Implies, IndEq, Not,
                     PointsTo, PVar, Sep, SeqEq, SVar, Wand, flatten, is_nat,
                     is_term)
from .wordeq import (W_FALSE, W_TRUE, Sat, SolverConfig, Unknown, Unsat, WEq,
                     solve, wand, wimplies, wnot, wor)
from .wordeq.formula import formula_letters


class WrongFragment(ValueError):
    pass


@dataclass(frozen=True)
class SatResult:
    status: str
    model: Optional[Model] = None
    reason: str = ""
    bound: Optional[int] = None

    @property
    def is_sat(self) -> bool:
        return self.status == "sat"


@dataclass(frozen=True)
class ValidityResult:
    status: str
    countermodel: Optional[Model] = None
    reason: str = ""
    matrix: object = None


SAT, UNSAT, UNKNOWN = "sat", "unsat", "unknown"
VALID, INVALID = "valid", "invalid"


# -- reduction -------------------------------------------------------------------

def _word(stack: dict, t) -> tuple:
    out = []
    for leaf in flatten(t):
        if isinstance(leaf, Const):
            out.append(leaf.value)
        elif isinstance(leaf, PVar):
            if leaf.name not in stack:
                raise KeyError(f"unbound program variable {leaf.name}")
            out.append(stack[leaf.name])
        else:
            out.append(leaf)
    return tuple(out)


def _ind(stack: dict, t):
    if isinstance(t, Const):
        return t.value
    if t.name not in stack:
        raise KeyError(f"unbound program variable {t.name}")
    return stack[t.name]


def _as_cell(c) -> tuple:
    return _word({}, c) if is_term(c) else tuple(c)


@dataclass
class Reduction:
    """A reduction run: the word formula plus the context it was built in."""
    formula: object
    beta: SVar
    side_constraints: object
    terms: tuple = field(default_factory=tuple)


class _Reducer:
    def __init__(self, stack: dict, phi, beta: SVar, max_branches: int):
        self.stack = stack
        self.beta = beta
        self.budget = max_branches
        self.terms = sorted({_word(stack, t) for t in seq_terms(phi)}, key=repr)
        self.consts = nat_constants(phi)

    def spend(self, n: int = 1):
        self.budget -= n
        if self.budget < 0:
            raise _TooLarge()

    def go(self, h: dict, f):
        self.spend()
        if isinstance(f, IndEq):
            return W_TRUE if _ind(self.stack, f.left) == _ind(self.stack, f.right) else W_FALSE
        if isinstance(f, SeqEq):
            lhs, rhs = _word(self.stack, f.left), _word(self.stack, f.right)
            return W_TRUE if lhs == rhs else WEq(lhs, rhs)
        if isinstance(f, FalseF):
            return W_FALSE
        if isinstance(f, Emp):
            return W_TRUE if not h else W_FALSE
        if isinstance(f, PointsTo):
            loc = _ind(self.stack, f.loc)
            if not is_nat(loc) or set(h) != {loc}:
                return W_FALSE
            lhs, rhs = h[loc], _word(self.stack, f.seq)
            return W_TRUE if lhs == rhs else WEq(lhs, rhs)
        if isinstance(f, Implies):
            a = self.go(h, f.left)
            if a is W_FALSE:
                return W_TRUE
            return wimplies(a, self.go(h, f.right))
        if isinstance(f, Sep):
            out = []
            for h1, h2 in heap_splits(h):
                a = self.go(h1, f.left)
                if a is W_FALSE:
                    continue
                b = self.go(h2, f.right)
                if b is W_TRUE and a is W_TRUE:
                    return W_TRUE
                out.append(wand(a, b))
            return wor(*out)
        if isinstance(f, Wand):
            out = []
            for ext in self.extensions(h, f):
                a = self.go(ext, f.left)
                if a is W_FALSE:
                    continue
                b = self.go({**h, **ext}, f.right)
                c = wimplies(a, b)
                if c is W_FALSE:
                    return W_FALSE
                out.append(c)
            return wand(*out)
        raise WrongFragment(f"{type(f).__name__} is outside the propositional fragment")

    def extensions(self, h: dict, f) -> list:
        """Symbolic heaps over the wand's candidate locations and contents."""
        domain = wand_domain(self.stack, h, f)
        contents = wand_contents(self.stack, f, self.beta)
        out = []
        n = (len(contents) + 1) ** len(domain)
        self.spend(n)
        for choice in itertools.product([None] + contents, repeat=len(domain)):
            out.append({d: c for d, c in zip(domain, choice) if c is not None})
        return out


class _TooLarge(Exception):
    pass


def wand_domain(stack: dict, h: dict, f) -> list:
    """Locations a wand extension may use: fresh ones plus the stack image, minus ``dom(h)``."""
    image = {stack[v.name] for v in free_program_vars(f)} | nat_constants(f)
    image = {v for v in image if is_nat(v)}
    used = set(h) | image
    size = max(formula_size(f.left), formula_size(f.right))
    fresh: list = []
    cand = 1
    while len(fresh) < size:
        if cand not in used:
            fresh.append(cand)
        cand += 1
    return sorted((image | set(fresh)) - set(h))


def wand_contents(stack: dict, f, beta: SVar) -> list:
    words = {_word(stack, t) for t in seq_terms(f)} | {(), (beta,)}
    return sorted(words, key=lambda w: (len(w), repr(w)))


def beta_name(phi, stack: dict, h: dict) -> SVar:
    taken = names_in(phi) | set(stack)
    for cell in h.values():
        taken |= {s.name for s in cell if isinstance(s, SVar)}
    return SVar(Fresh(taken).name("beta"))


def reduce(stack: dict, h: dict, phi, max_branches: int = 2_000_000, beta: Optional[SVar] = None):
    """Word formula satisfiable exactly when some sequence assignment makes ``phi`` hold.

    ``h`` maps locations to cells given as words (tuples of values and
    :class:`SVar`) or as sequence terms.  The freshness disequalities for the
    extra wand content are conjoined at the top.
    """
    return reduction(stack, h, phi, max_branches, beta).formula


def reduction(stack: dict, h: dict, phi, max_branches: int = 2_000_000,
              beta: Optional[SVar] = None) -> Reduction:
    core = desugar_to_pseqsl(phi, allow_nat_constants=True)
    missing = {v.name for v in free_program_vars(core)} - set(stack)
    if missing:
        raise KeyError(f"unbound program variables {sorted(missing)}")
    heap = {loc: _as_cell(c) for loc, c in h.items()}
    beta = beta or beta_name(core, stack, heap)
    r = _Reducer(stack, core, beta, max_branches)
    body = r.go(heap, core)
    side = wand(*[wnot(WEq((beta,), t)) for t in r.terms])
    return Reduction(wand(body, side) if _has_wand(core) else body, beta, side, tuple(r.terms))


def _has_wand(f) -> bool:
    if isinstance(f, Wand):
        return True
    if isinstance(f, (Implies, Sep)):
        return _has_wand(f.left) or _has_wand(f.right)
    return False


# -- decision procedures ---------------------------------------------------------

def _solver_cfg(cfg) -> SolverConfig:
    return cfg if isinstance(cfg, SolverConfig) else SolverConfig()


def _fresh_base(wf, stack: dict, h: dict) -> int:
    nats = [a for a in formula_letters(wf) if is_nat(a)]
    nats += [v for v in stack.values() if is_nat(v)]
    nats += list(h)
    for cell in h.values():
        nats += [s for s in cell if is_nat(s)]
    return max(nats, default=0) + 1


def _instantiate(cell: tuple, sub: dict) -> tuple:
    out: list = []
    for s in cell:
        if isinstance(s, SVar):
            out.extend(sub.get(s, ()))
        else:
            out.append(s)
    return tuple(out)


def _witness(phi, stack: dict, heap: dict, sub: dict) -> Model:
    seq = {v.name: tuple(sub.get(v, ())) for v in free_seq_vars(phi)}
    ground = {loc: _instantiate(cell, sub) for loc, cell in heap.items()}
    return Model(dict(stack), seq, ground)


def _certify(model: Model, phi) -> None:
    v = check(model, phi)
    if not v.is_true:
        raise AssertionError(f"witness does not satisfy the formula ({v})")


def decide_given_stack_heap(stack: dict, h: dict, phi, cfg: Optional[SolverConfig] = None,
                            max_branches: int = 2_000_000) -> SatResult:
    """Is there a sequence assignment making ``(stack, ·, h) ⊨ phi``?"""
    try:
        red = reduction(stack, h, phi, max_branches)
    except _TooLarge:
        return SatResult(UNKNOWN, reason=f"reduction exceeded {max_branches} branches")
    heap = {loc: _as_cell(c) for loc, c in h.items()}
    verdict = solve(red.formula, _solver_cfg(cfg), None, _fresh_base(red.formula, stack, heap))
    if isinstance(verdict, Sat):
        model = _witness(phi, stack, heap, verdict.witness)
        _certify(model, phi)
        return SatResult(SAT, model)
    if isinstance(verdict, Unsat):
        return SatResult(UNSAT)
    return SatResult(UNKNOWN, reason=verdict.reason, bound=verdict.bound)


def decide_given_stack(stack: dict, phi, cfg: Optional[SolverConfig] = None,
                       max_branches: int = 2_000_000) -> SatResult:
    """Is there a sequence assignment and a heap satisfying ``phi`` under ``stack``?

    This is the empty-heap question for ``phi -o true``, whose reduction is a
    disjunction over candidate heaps; the disjuncts are tried in order so the
    satisfying heap is known when one succeeds.
    """
    core = desugar_to_pseqsl(phi, allow_nat_constants=True)
    missing = {v.name for v in free_program_vars(core)} - set(stack)
    if missing:
        raise KeyError(f"unbound program variables {sorted(missing)}")
    outer = Not(Wand(core, Not(TRUE)))
    beta = beta_name(core, stack, {})
    domain = wand_domain(stack, {}, outer.body)
    contents = wand_contents(stack, outer.body, beta)
    terms = sorted({_word(stack, t) for t in seq_terms(core)}, key=repr)
    side = wand(*[wnot(WEq((beta,), t)) for t in terms])
    unknown = None
    budget = max_branches
    for choice in itertools.product([None] + contents, repeat=len(domain)):
        heap = {d: c for d, c in zip(domain, choice) if c is not None}
        r = _Reducer(stack, core, beta, budget)
        try:
            body = r.go(heap, core)
        except _TooLarge:
            return SatResult(UNKNOWN, reason=f"reduction exceeded {max_branches} branches")
        budget = r.budget
        if body is W_FALSE:
            continue
        wf = wand(body, side)
        verdict = solve(wf, _solver_cfg(cfg), None, _fresh_base(wf, stack, heap))
        if isinstance(verdict, Sat):
            model = _witness(core, stack, heap, verdict.witness)
            _certify(model, phi)
            return SatResult(SAT, model)
        if isinstance(verdict, Unknown) and unknown is None:
            unknown = verdict
    if unknown is not None:
        return SatResult(UNKNOWN, reason=unknown.reason, bound=unknown.bound)
    return SatResult(UNSAT)


def candidate_stacks(variables: list, nat_only: frozenset = frozenset()):
    """Stacks over locations ``1..k`` and the two atoms, one per renaming class.

    Locations are interchangeable for a formula without numeric constants, so
    a variable may only use a location already taken or the next unused one.
    """
    def go(i: int, stack: dict, used: int):
        if i == len(variables):
            yield dict(stack)
            return
        v = variables[i]
        options = list(range(1, used + 2))
        if v not in nat_only:
            options = options + [NIL, HASH]
        for val in options:
            stack[v] = val
            yield from go(i + 1, stack, max(used, val) if is_nat(val) else used)
        del stack[v]

    yield from go(0, {}, 0)


def decide_sat(phi, cfg: Optional[SolverConfig] = None, nat_only=(),
               max_branches: int = 2_000_000) -> SatResult:
    """Satisfiability of a propositional formula: try each candidate stack."""
    core = desugar_to_pseqsl(phi)
    variables = sorted(v.name for v in free_program_vars(core))
    unknown = None
    for stack in candidate_stacks(variables, frozenset(nat_only)):
        r = decide_given_stack(stack, core, cfg, max_branches)
        if r.status == SAT:
            return r
        if r.status == UNKNOWN and unknown is None:
            unknown = r
    return unknown or SatResult(UNSAT)


def decide_pi1_validity(phi, cfg: Optional[SolverConfig] = None) -> ValidityResult:
    """Validity of ``forall x* forall @a*. psi`` with ``psi`` propositional."""
    try:
        shape = classify(phi)
    except ClassificationError as e:
        raise WrongFragment(str(e)) from None
    if not shape.quantifier_free and shape.shape != PI1:
        raise WrongFragment(f"expected a universal formula, got shape {shape.shape}")
    prefix, matrix = prenex(phi)
    bound_prog = [v.name for q, v in prefix if isinstance(v, PVar)]
    r = decide_sat(Not(matrix), cfg, nat_only=bound_prog)
    if r.status == UNSAT:
        return ValidityResult(VALID)
    if r.status == UNKNOWN:
        return ValidityResult(UNKNOWN, reason=r.reason)
    if not check(r.model, Not(matrix)).is_true:
        raise AssertionError("countermodel does not refute the matrix")
    return ValidityResult(INVALID, r.model, matrix=matrix)
