"""Model checking ``σ ⊨ φ``.

Quantifier-free formulas are decided exactly: ``*`` by enumerating splits
and ``-*`` by enumerating the finite candidate extensions that suffice for
the wand (fresh locations as many as the formula size, cell contents drawn
from the values of the formula's sequence terms, the empty sequence and one
sequence unequal to all of them).

Quantifiers are instantiated from candidates.  Bindings forced by atoms
that must hold (a points-to into the current heap, an equality with a known
side) are generated by matching and are complete; anything else falls back
to a bounded enumeration.  An answer that rests on a bounded enumeration and
could change with a larger bound is reported as Unknown unless
``closed_world`` is set.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .analysis import free_program_vars, free_vars, nat_constants, seq_terms
from .heap import Model, UnboundVariable, eval_ind_term, eval_seq_term, heap_splits, mentioned_nats
from .macros import expand_macros, has_macros
from .syntax import (FALSE, HASH, NIL, TRUE, And, Concat, Const, Emp, Eps, Exists, FalseF,
                     Implies, IndEq, Lt, Macro, Not, Or, PointsTo, PVar, Sep,
                     SeqEq, SVar, TrueF, Wand, children, flatten, is_nat, term_vars)


@dataclass(frozen=True)
class CheckConfig:
    loc_universe_extra: int = 1
    seq_len_bound: int = 4
    alphabet_extra: int = 1
    closed_world: bool = False
    loc_candidates: Optional[tuple] = None
    seq_candidates: Optional[tuple] = None
    max_evaluations: int = 5_000_000

    def __post_init__(self):
        for name in ("loc_universe_extra", "seq_len_bound", "alphabet_extra"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")


@dataclass(frozen=True)
class Verdict3:
    value: Optional[bool]
    reason: str = ""

    @property
    def is_true(self) -> bool:
        return self.value is True

    @property
    def is_false(self) -> bool:
        return self.value is False

    @property
    def is_unknown(self) -> bool:
        return self.value is None

    def __str__(self) -> str:
        if self.value is None:
            return f"Unknown ({self.reason})" if self.reason else "Unknown"
        return str(self.value)


class EvaluationBudgetExceeded(RuntimeError):
    pass


class Checker:
    """A formula prepared once for checking against many models."""

    _CACHE_LIMIT = 200_000

    def __init__(self, f):
        self.formula = expand_macros(f) if has_macros(f) else f
        self.free = frozenset(free_vars(self.formula))
        self.consts = nat_constants(self.formula)
        self._free: dict = {}
        self._weight: dict = {}

    def check(self, model: Model, cfg: Optional[CheckConfig] = None) -> Verdict3:
        cfg = cfg or CheckConfig()
        missing = sorted(_show(v) for v in self.free
                         if (v.name not in model.stack if isinstance(v, PVar) else v.name not in model.seq))
        if missing:
            raise UnboundVariable(", ".join(missing))
        if len(self._free) > self._CACHE_LIMIT:
            self._free.clear()
        ev = _Evaluator(model, cfg, self.consts, self._free, self._weight)
        try:
            value = ev.eval(self.formula, model)
        except EvaluationBudgetExceeded:
            return Verdict3(None, f"evaluation budget of {cfg.max_evaluations} exceeded")
        if value is None:
            return Verdict3(None, ev.reason or "bounded quantifier")
        return Verdict3(value, ev.reason if cfg.closed_world else "")


def check(model: Model, f, cfg: Optional[CheckConfig] = None) -> Verdict3:
    """Three-valued truth of ``f`` in ``model``; raises :class:`UnboundVariable`."""
    return Checker(f).check(model, cfg)


def explain(model: Model, f, cfg: Optional[CheckConfig] = None, depth: int = 8) -> list:
    """Indented lines showing the verdict of each subformula and the heap split,
    extension or binding that decided it."""
    checker = Checker(f)
    checker.check(model, cfg)
    ev = _Evaluator(model, cfg or CheckConfig(), checker.consts, checker._free, checker._weight)
    lines: list = []
    try:
        ev.explain(checker.formula, model, 0, depth, lines)
    except EvaluationBudgetExceeded:
        lines.append("... evaluation budget exceeded")
    return lines


def _brief(f, width: int = 70) -> str:
    text = str(f)
    return text if len(text) <= width else text[:width - 3] + "..."


def _heap_text(h: dict) -> str:
    return "{" + ", ".join(f"{k}: [{', '.join(_show_value(x) for x in v)}]" for k, v in sorted(h.items())) + "}"


def _show_value(x) -> str:
    return x.value if not is_nat(x) else str(x)


def check_derived(model: Model, call: Macro, cfg: Optional[CheckConfig] = None) -> Verdict3:
    return check(model, expand_macros(call), cfg)


def _show(v) -> str:
    return ("@" + v.name) if isinstance(v, SVar) else v.name


# -- size used for the wand's fresh locations --------------------------------------

def wand_size(f) -> int:
    """Size measure on the full syntax; agrees with ``formula_size`` on the propositional fragment."""
    if isinstance(f, (IndEq, SeqEq, Lt, FalseF, TrueF)):
        return 0
    if isinstance(f, (Emp, PointsTo)):
        return 1
    if isinstance(f, Not):
        return wand_size(f.body)
    if isinstance(f, (Implies, And, Or)):
        return max(wand_size(f.left), wand_size(f.right))
    if isinstance(f, Sep):
        return wand_size(f.left) + wand_size(f.right)
    if isinstance(f, Wand):
        return wand_size(f.right)
    if isinstance(f, Exists):
        return wand_size(f.body)
    raise TypeError(f"no size for {type(f).__name__}")


def _quantified(f) -> bool:
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Exists):
            return True
        if isinstance(g, Not):
            stack.append(g.body)
        elif isinstance(g, (And, Or, Implies, Sep, Wand)):
            stack += [g.left, g.right]
    return False


def _fold_not(b):
    if isinstance(b, TrueF):
        return FALSE
    if isinstance(b, FalseF):
        return TRUE
    return Not(b)


def _fold(kind, a, b):
    if kind is Implies:
        a = _fold_not(a)
        kind = Or
    unit, zero = (TrueF, FalseF) if kind is And else (FalseF, TrueF)
    if isinstance(a, zero) or isinstance(b, zero):
        return FALSE if kind is And else TRUE
    if isinstance(a, unit):
        return b
    if isinstance(b, unit):
        return a
    return kind(a, b)


def _and3(a, b):
    if a is False or b is False:
        return False
    if a is None or b is None:
        return None
    return True


def _or3(a, b):
    if a is True or b is True:
        return True
    if a is None or b is None:
        return None
    return False


def _not3(a):
    return None if a is None else not a


class _Evaluator:
    def __init__(self, model: Model, cfg: CheckConfig, consts: set, free_cache: dict, weight_cache: dict):
        self.cfg = cfg
        self.reason = ""
        self.count = 0
        self.consts = consts
        self.base_nats = mentioned_nats(model) | consts
        self._free = free_cache
        self._weight = weight_cache

    def note(self, why: str):
        if not self.reason:
            self.reason = why

    def tick(self):
        self.count += 1
        if self.count > self.cfg.max_evaluations:
            raise EvaluationBudgetExceeded()

    # -- main recursion ----------------------------------------------------------

    def eval(self, f, m: Model):
        self.tick()
        if isinstance(f, IndEq):
            return eval_ind_term(m, f.left) == eval_ind_term(m, f.right)
        if isinstance(f, SeqEq):
            return eval_seq_term(m, f.left) == eval_seq_term(m, f.right)
        if isinstance(f, Lt):
            a, b = eval_ind_term(m, f.left), eval_ind_term(m, f.right)
            return is_nat(a) and is_nat(b) and a < b
        if isinstance(f, TrueF):
            return True
        if isinstance(f, FalseF):
            return False
        if isinstance(f, Emp):
            return not m.heap
        if isinstance(f, PointsTo):
            loc = eval_ind_term(m, f.loc)
            return (len(m.heap) == 1 and is_nat(loc) and loc in m.heap
                    and tuple(m.heap[loc]) == eval_seq_term(m, f.seq))
        if isinstance(f, Not):
            return _not3(self.eval(f.body, m))
        if isinstance(f, And):
            first, second = self.cheap_first(f)
            a = self.eval(first, m)
            if a is False:
                return False
            return _and3(a, self.eval(second, m))
        if isinstance(f, Or):
            first, second = self.cheap_first(f)
            a = self.eval(first, m)
            if a is True:
                return True
            return _or3(a, self.eval(second, m))
        if isinstance(f, Implies):
            a = self.eval(f.left, m)
            if a is False:
                return True
            return _or3(_not3(a), self.eval(f.right, m))
        if isinstance(f, Sep):
            return self.eval_sep(f, m)
        if isinstance(f, Wand):
            return self.eval_wand(f, m)
        if isinstance(f, Exists):
            return self.eval_exists(f, m)
        if isinstance(f, Macro):
            return self.eval(expand_macros(f), m)
        raise TypeError(f"not a formula: {f!r}")

    # -- explanations ----------------------------------------------------------------

    def explain(self, f, m: Model, indent: int, depth: int, lines: list):
        v = self.eval(f, m)
        pad = "  " * indent
        verdict = "Unknown" if v is None else str(v)
        lines.append(f"{pad}{verdict}: {_brief(f)}   heap {_heap_text(m.heap)}")
        if indent >= depth:
            return
        if isinstance(f, Not):
            self.explain(f.body, m, indent + 1, depth, lines)
        elif isinstance(f, (And, Or, Implies)):
            self.explain(f.left, m, indent + 1, depth, lines)
            self.explain(f.right, m, indent + 1, depth, lines)
        elif isinstance(f, Sep) and v is True:
            for h1, h2 in heap_splits(m.heap):
                if self.eval(f.left, m.with_heap(h1)) is True and self.eval(f.right, m.with_heap(h2)) is True:
                    lines.append(f"{pad}  split {_heap_text(h1)} | {_heap_text(h2)}")
                    self.explain(f.left, m.with_heap(h1), indent + 1, depth, lines)
                    self.explain(f.right, m.with_heap(h2), indent + 1, depth, lines)
                    break
        elif isinstance(f, Wand) and v is False:
            domain, contents, _ = self.wand_space(f, m)
            for ext in self.extensions(domain, contents):
                if (self.eval(f.left, m.with_heap(ext)) is True
                        and self.eval(f.right, m.with_heap({**m.heap, **ext})) is False):
                    lines.append(f"{pad}  refuting extension {_heap_text(ext)}")
                    self.explain(f.right, m.with_heap({**m.heap, **ext}), indent + 1, depth, lines)
                    break
        elif isinstance(f, Exists) and v is True:
            block, body = _block(f)
            body = self.simplify(body, m, frozenset(block))
            for binding in self.candidate_bindings(block, body, m, [True]):
                inner = m
                for var in block:
                    inner = inner.bind(var, binding[var])
                if self.eval(body, inner) is True:
                    shown = ", ".join(f"{_show(k)}={_show_binding(x)}" for k, x in binding.items())
                    lines.append(f"{pad}  witness {shown}")
                    self.explain(body, inner, indent + 1, depth, lines)
                    break

    # -- separating conjunction ------------------------------------------------

    def eval_sep(self, f, m: Model):
        leaves: list = []
        stack = [f]
        while stack:
            g = stack.pop()
            if isinstance(g, Sep):
                stack += [g.right, g.left]
            else:
                leaves.append(g)
        absorb = False
        pinned: dict = {}
        rest: list = []
        for g in leaves:
            if isinstance(g, Emp):
                continue
            if isinstance(g, FalseF):
                return False
            if isinstance(g, TrueF):
                absorb = True
            elif isinstance(g, PointsTo):
                loc = eval_ind_term(m, g.loc)
                if not is_nat(loc) or loc not in m.heap or loc in pinned:
                    return False
                if tuple(m.heap[loc]) != eval_seq_term(m, g.seq):
                    return False
                pinned[loc] = True
            else:
                rest.append(g)
        remaining = {k: v for k, v in m.heap.items() if k not in pinned}
        if not rest:
            return absorb or not remaining
        return self._distribute(rest, remaining, absorb, m)

    def _distribute(self, parts: list, heap: dict, absorb: bool, m: Model):
        """Is there a way to give each part a disjoint piece of ``heap``?"""
        first, others = parts[0], parts[1:]
        if not others and not absorb:
            return self.eval(first, m.with_heap(heap))
        result = False
        for h1, h2 in heap_splits(heap):
            self.tick()
            a = self.eval(first, m.with_heap(h1))
            if a is False:
                continue
            if others:
                b = self._distribute(others, h2, absorb, m)
            else:
                b = True
            r = _and3(a, b)
            if r is True:
                return True
            result = _or3(result, r)
        return result

    # -- magic wand ----------------------------------------------------------------

    def eval_wand(self, f, m: Model):
        domain, contents, complete = self.wand_space(f, m)
        if not complete:
            self.note("magic wand over quantified operands checked on bounded extensions")
        result = True
        for ext in self.extensions(domain, contents):
            a = self.eval(f.left, m.with_heap(ext))
            if a is False:
                continue
            b = self.eval(f.right, m.with_heap({**m.heap, **ext}))
            r = _or3(_not3(a), b)
            if r is False:
                return False
            result = _and3(result, r)
        if result is True and not complete and not self.cfg.closed_world:
            return None
        return result

    def extensions(self, domain: list, contents: list):
        for choice in itertools.product([None] + contents, repeat=len(domain)):
            self.tick()
            yield {d: c for d, c in zip(domain, choice) if c is not None}

    def wand_space(self, f, m: Model):
        """Candidate extension locations and cell contents for a wand, and whether they suffice."""
        complete = not (_quantified(f.left) or _quantified(f.right))
        sz = max(wand_size(f.left), wand_size(f.right))
        image = {m.stack[v.name] for v in free_program_vars(f) if v.name in m.stack}
        image = {v for v in image if is_nat(v)} | nat_constants(f)
        used = set(m.heap) | image
        fresh = []
        cand = 1
        while len(fresh) < sz:
            if cand not in used:
                fresh.append(cand)
            cand += 1
        domain = sorted((image | set(fresh)) - set(m.heap))
        values = set()
        for t in seq_terms(f):
            try:
                values.add(eval_seq_term(m, t))
            except UnboundVariable:
                complete = False
        # a one-letter sequence above every natural in sight is unequal to each term value
        top = max(self.base_nats | mentioned_nats(m) | set(domain) | {0}) + 1
        values |= {(), (top,)}
        contents = sorted(values, key=lambda s: (len(s), [str(x) for x in s]))
        return domain, contents, complete

    # -- quantifiers -------------------------------------------------------------

    def eval_exists(self, f, m: Model):
        block, body = _block(f)
        body = self.simplify(body, m, frozenset(block))
        if isinstance(body, (TrueF, FalseF)):
            # every domain is nonempty: naturals for program variables, eps for sequences
            return isinstance(body, TrueF)
        complete = [True]
        result = False
        for binding in self.candidate_bindings(block, body, m, complete):
            inner = m
            for var in block:
                inner = inner.bind(var, binding[var])
            r = self.eval(body, inner)
            if r is True:
                return True
            result = _or3(result, r)
        if not complete[0]:
            self.note("bounded quantifier instantiation")
            if result is False and not self.cfg.closed_world:
                return None
        return result

    def free(self, f) -> frozenset:
        hit = self._free.get(id(f))
        if hit is None or hit[0] is not f:
            hit = (f, frozenset(free_vars(f)))
            self._free[id(f)] = hit
        return hit[1]

    def cheap_first(self, f):
        """Operands of a commutative connective, the one with fewer quantifiers first."""
        if self.weight(f.right)[0] < self.weight(f.left)[0]:
            return f.right, f.left
        return f.left, f.right

    def weight(self, f) -> tuple:
        """Estimated cost as ``(in positive position, in negative position)``; universals dominate."""
        hit = self._weight.get(id(f))
        if hit is not None and hit[0] is f:
            return hit[1]
        if isinstance(f, Not):
            w = self.weight(f.body)[::-1]
        elif isinstance(f, Implies):
            a, b = self.weight(f.left), self.weight(f.right)
            w = (a[1] + b[0], a[0] + b[1])
        elif isinstance(f, Exists):
            b = self.weight(f.body)
            w = (b[0] + 1, b[1] + 4)
        elif isinstance(f, Macro):
            w = self.weight(expand_macros(f))
        else:
            w = [0, 0]
            for c in children(f):
                cw = self.weight(c)
                w = [w[0] + cw[0], w[1] + cw[1]]
            if isinstance(f, (Wand, Sep)):
                w = [x + 1 for x in w]
            w = tuple(w)
        self._weight[id(f)] = (f, w)
        return w

    def simplify(self, f, m: Model, block: frozenset):
        """Replace parts of a quantifier body that do not mention the block by their value."""
        if not (self.free(f) & block):
            v = self.eval(f, m)
            return f if v is None else (TRUE if v else FALSE)
        if isinstance(f, Not):
            b = self.simplify(f.body, m, block)
            return _fold_not(b)
        if isinstance(f, (And, Or, Implies)):
            a = self.simplify(f.left, m, block)
            b = self.simplify(f.right, m, block)
            return _fold(type(f), a, b)
        return f

    def location_pool(self, m: Model) -> list:
        if self.cfg.loc_candidates is not None:
            return list(self.cfg.loc_candidates)
        seen = self.base_nats | mentioned_nats(m)
        pool = sorted(seen)
        cand = 1
        extra = 0
        while extra < self.cfg.loc_universe_extra:
            if cand not in seen:
                pool.append(cand)
                extra += 1
            cand += 1
        return pool

    def sequence_pool(self, m: Model) -> list:
        if self.cfg.seq_candidates is not None:
            return [tuple(s) for s in self.cfg.seq_candidates]
        letters = [NIL, HASH] + self.location_pool(m)
        top = max([x for x in letters if is_nat(x)] + [0])
        letters += [top + 1 + i for i in range(self.cfg.alphabet_extra)]
        out = []
        for n in range(self.cfg.seq_len_bound + 1):
            out.extend(itertools.product(letters, repeat=n))
        return out

    def candidate_bindings(self, block: list, body, m: Model, complete: list):
        """Bindings of ``block`` worth trying, lazily; clears ``complete[0]`` when they may miss a witness."""
        seen: set = set()
        for alt in _anchors(body, True, frozenset()):
            for partial in _solve_anchors(list(alt), dict.fromkeys(block), block, m):
                open_vars = [v for v in block if partial[v] is None]
                if open_vars:
                    complete[0] = False
                    pools = [self.location_pool(m) if isinstance(v, PVar) else self.sequence_pool(m)
                             for v in open_vars]
                    fills = itertools.product(*pools)
                else:
                    fills = [()]
                for fill in fills:
                    full = dict(partial)
                    full.update(zip(open_vars, fill))
                    key = tuple(full[v] for v in block)
                    if key not in seen:
                        seen.add(key)
                        yield full


def _block(f) -> tuple:
    """Leading block of distinct existential variables and the body below it."""
    block: list = []
    body = f
    while isinstance(body, Exists) and body.var not in block:
        block.append(body.var)
        body = body.body
    return block, body


def _show_binding(x) -> str:
    if isinstance(x, tuple):
        return "[" + ", ".join(_show_value(v) for v in x) + "]"
    return _show_value(x)


# -- anchors: atoms every witness must satisfy -------------------------------------

_ALT_CAP = 64


def _anchors(f, positive: bool, wild: frozenset) -> list:
    """Alternatives (a disjunction) of anchor lists (conjunctions) implied by ``f``.

    Each anchor is ``(atom, wildcards)``; wildcards are names bound between the
    quantifier block and the atom, which matching may set to anything.
    """
    if isinstance(f, Not):
        return _anchors(f.body, not positive, wild)
    if isinstance(f, (IndEq, SeqEq, PointsTo)):
        return [[(f, wild)]] if positive else [[]]
    if isinstance(f, TrueF):
        return [[]] if positive else []
    if isinstance(f, FalseF):
        return [] if positive else [[]]
    if isinstance(f, Exists):
        # under negation this is a universal; any one instance of it is implied
        return _anchors(f.body, positive, wild | {f.var})
    if isinstance(f, And):
        return (_product(_anchors(f.left, True, wild), _anchors(f.right, True, wild)) if positive
                else _anchors(f.left, False, wild) + _anchors(f.right, False, wild))
    if isinstance(f, Or):
        return (_anchors(f.left, True, wild) + _anchors(f.right, True, wild) if positive
                else _product(_anchors(f.left, False, wild), _anchors(f.right, False, wild)))
    if isinstance(f, Implies):
        return (_anchors(f.left, False, wild) + _anchors(f.right, True, wild) if positive
                else _product(_anchors(f.left, True, wild), _anchors(f.right, False, wild)))
    if isinstance(f, Sep) and positive:
        return _product(_anchors(f.left, True, wild), _anchors(f.right, True, wild))
    return [[]]


def _product(a: list, b: list) -> list:
    if len(a) * len(b) > _ALT_CAP:
        # keep one side's alternatives and only what every alternative of the other shares
        keep_a = [x + _common(b) for x in a]
        keep_b = [_common(a) + y for y in b]
        return keep_a if sum(map(len, keep_a)) >= sum(map(len, keep_b)) else keep_b
    return [x + y for x in a for y in b]


def _common(alts: list) -> list:
    """Anchors present in every alternative."""
    return [x for x in alts[0] if all(x in alt for alt in alts[1:])] if alts else []


def _solve_anchors(anchors: list, binding: dict, block: list, m: Model):
    """Yield extensions of ``binding`` (None = open) consistent with ``anchors``."""
    open_vars = {v for v in block if binding[v] is None}
    if not open_vars:
        yield binding
        return
    best = None
    for i, (atom, wild) in enumerate(anchors):
        rank = _readiness(atom, wild, binding, open_vars, m)
        if rank is not None and (best is None or rank < best[0]):
            best = (rank, i)
    if best is None:
        yield binding
        return
    atom, wild = anchors[best[1]]
    rest = anchors[:best[1]] + anchors[best[1] + 1:]
    for found in _match_atom(atom, wild, binding, m):
        yield from _solve_anchors(rest, found, block, m)


def _unknowns(t, wild, binding, open_vars) -> set:
    return {v for v in term_vars(t) if v in wild or v in open_vars}


def _readiness(atom, wild, binding, open_vars, m: Model):
    if isinstance(atom, PointsTo):
        vs = _unknowns(atom.loc, wild, binding, open_vars) | _unknowns(atom.seq, wild, binding, open_vars)
        if not (vs & open_vars):
            return None
        if _unknowns(atom.loc, wild, binding, open_vars):
            return 3
        return 2
    if isinstance(atom, (IndEq, SeqEq)):
        lu = _unknowns(atom.left, wild, binding, open_vars)
        ru = _unknowns(atom.right, wild, binding, open_vars)
        if not ((lu | ru) & open_vars):
            return None
        if lu and ru:
            return None
        return 0 if isinstance(atom, IndEq) else 1
    return None


def _piece(var, wild, b: dict, m: Model):
    """Known value of ``var`` as a tuple, or None while it is still open."""
    if var in b or var in wild:
        val = b.get(var)
        if val is None:
            return None
    elif isinstance(var, PVar):
        val = m.stack[var.name]
    else:
        val = m.seq[var.name]
    return tuple(val) if isinstance(var, SVar) else (val,)


def _match_atom(atom, wild, binding: dict, m: Model):
    if isinstance(atom, PointsTo):
        known = (atom.loc.value,) if isinstance(atom.loc, Const) else _piece(atom.loc, wild, binding, m)
        locs = list(known) if known is not None else sorted(m.heap)
        for loc in locs:
            if not is_nat(loc) or loc not in m.heap:
                continue
            b = dict(binding)
            if known is None:
                b[atom.loc] = loc
            yield from _clean(_match(flatten(atom.seq), 0, tuple(m.heap[loc]), 0, b, wild, m), binding)
        return
    left, right = atom.left, atom.right
    open_vars = {v for v in binding if binding[v] is None}
    if _unknowns(left, wild, binding, open_vars):
        left, right = right, left
    word = _ground(flatten(left), binding, wild, m)
    yield from _clean(_match(flatten(right), 0, word, 0, dict(binding), wild, m), binding)


def _ground(leaves, binding, wild, m) -> tuple:
    out: tuple = ()
    for leaf in leaves:
        out += (leaf.value,) if isinstance(leaf, Const) else _piece(leaf, wild, binding, m)
    return out


def _clean(found, binding: dict):
    """Project matches onto the quantifier block, dropping wildcards."""
    for b in found:
        yield {k: b[k] for k in binding}


def _match(leaves: tuple, i: int, word: tuple, j: int, b: dict, wild, m: Model):
    if i == len(leaves):
        if j == len(word):
            yield b
        return
    leaf = leaves[i]
    if isinstance(leaf, Const):
        if j < len(word) and word[j] == leaf.value:
            yield from _match(leaves, i + 1, word, j + 1, b, wild, m)
        return
    piece = _piece(leaf, wild, b, m)
    if piece is not None:
        if word[j:j + len(piece)] == piece:
            yield from _match(leaves, i + 1, word, j + len(piece), b, wild, m)
        return
    if isinstance(leaf, PVar):
        if j < len(word) and is_nat(word[j]):
            nb = dict(b)
            nb[leaf] = word[j]
            yield from _match(leaves, i + 1, word, j + 1, nb, wild, m)
        return
    # at least one letter per remaining individual leaf
    need = sum(1 for x in leaves[i + 1:] if isinstance(x, (Const, PVar)))
    for k in range(j, len(word) - need + 1):
        nb = dict(b)
        nb[leaf] = word[j:k]
        yield from _match(leaves, i + 1, word, k, nb, wild, m)
