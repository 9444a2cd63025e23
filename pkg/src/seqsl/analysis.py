"""Structural analyses: free variables, sequence terms, size, fragment shape."""
from __future__ import annotations

from dataclasses import dataclass

from .macros import Fresh, expand_macros, has_macros, names_in
from .syntax import (FALSE, And, Concat, Const, Emp, Eps, Exists, FalseF,
                     Implies, IndEq, Lt, Macro, Not, Or, PointsTo, PVar, Sep,
                     SeqEq, SVar, TrueF, Wand, as_forall, children, flatten,
                     is_nat, normalize, subformulas, term_vars)


class NotPSeqSL(ValueError):
    pass


class ClassificationError(ValueError):
    pass


# -- desugaring ----------------------------------------------------------------

def desugar(f):
    """Rewrite negation, conjunction, disjunction and ``true`` through ``=>``/``false``."""
    if isinstance(f, Not):
        return Implies(desugar(f.body), FALSE)
    if isinstance(f, And):
        return Implies(Implies(desugar(f.left), Implies(desugar(f.right), FALSE)), FALSE)
    if isinstance(f, Or):
        return Implies(Implies(desugar(f.left), FALSE), desugar(f.right))
    if isinstance(f, TrueF):
        return Implies(FALSE, FALSE)
    if isinstance(f, (Implies, Sep, Wand)):
        return type(f)(desugar(f.left), desugar(f.right))
    if isinstance(f, Exists):
        return Exists(f.var, desugar(f.body))
    return f


def pseqsl_violation(f, allow_nat_constants: bool = False):
    """Describe the first construct outside the propositional fragment, or None."""
    if has_macros(f):
        f = expand_macros(f)
    for g in subformulas(f):
        if isinstance(g, Exists):
            return "quantifiers are outside the propositional fragment"
        if isinstance(g, Lt):
            return "'<' is outside the propositional fragment"
        terms = ()
        if isinstance(g, (IndEq, SeqEq)):
            terms = (g.left, g.right)
        elif isinstance(g, PointsTo):
            terms = (g.loc, g.seq)
        for t in terms:
            for leaf in flatten(t):
                if isinstance(leaf, Const) and is_nat(leaf.value) and not allow_nat_constants:
                    return f"numeric constant {leaf.value} is outside the propositional fragment"
    return None


def is_pseqsl(f, allow_nat_constants: bool = False) -> bool:
    return pseqsl_violation(f, allow_nat_constants) is None


def desugar_to_pseqsl(f, allow_nat_constants: bool = False):
    """Expand macros and desugar; raise :class:`NotPSeqSL` outside the fragment."""
    why = pseqsl_violation(f, allow_nat_constants)
    if why:
        raise NotPSeqSL(why)
    return desugar(expand_macros(f) if has_macros(f) else f)


# -- size ------------------------------------------------------------------------

def formula_size(f) -> int:
    """Size measure bounding the locations a magic wand needs to consider."""
    if isinstance(f, (And, Or, Not, TrueF, Macro)) or any(
            isinstance(g, (And, Or, Not, TrueF, Macro)) for g in subformulas(f)):
        f = desugar_to_pseqsl(f, allow_nat_constants=True)
    return _sz(f)


def _sz(f) -> int:
    if isinstance(f, (IndEq, SeqEq, FalseF)):
        return 0
    if isinstance(f, (Emp, PointsTo)):
        return 1
    if isinstance(f, Implies):
        return max(_sz(f.left), _sz(f.right))
    if isinstance(f, Sep):
        return _sz(f.left) + _sz(f.right)
    if isinstance(f, Wand):
        return _sz(f.right)
    raise NotPSeqSL(f"no size for {type(f).__name__}")


# -- variables -----------------------------------------------------------------

def _atom_terms(f) -> tuple:
    if isinstance(f, (IndEq, SeqEq, Lt)):
        return (f.left, f.right)
    if isinstance(f, PointsTo):
        return (f.loc, f.seq)
    if isinstance(f, Macro):
        from .syntax import is_term
        return tuple(a for a in f.args if is_term(a))
    return ()


def _free(f, sort) -> set:
    out: set = set()
    for t in _atom_terms(f):
        out |= {v for v in term_vars(t) if isinstance(v, sort)}
    if isinstance(f, Exists):
        return _free(f.body, sort) - {f.var}
    for c in children(f):
        out |= _free(c, sort)
    return out


def free_program_vars(f) -> set:
    return _free(f, PVar)


def free_seq_vars(f) -> set:
    return _free(f, SVar)


def free_vars(f) -> set:
    return free_program_vars(f) | free_seq_vars(f)


def seq_terms(f) -> set:
    """Sequence terms occurring in equalities and points-to atoms, normalized."""
    out: set = set()
    for g in subformulas(f):
        if isinstance(g, (IndEq, SeqEq)):
            out.add(normalize(g.left))
            out.add(normalize(g.right))
        elif isinstance(g, PointsTo):
            out.add(normalize(g.loc))
            out.add(normalize(g.seq))
    return out


def nat_constants(f) -> set:
    out: set = set()
    for g in subformulas(f):
        for t in _atom_terms(g):
            for leaf in flatten(t):
                if isinstance(leaf, Const) and is_nat(leaf.value):
                    out.add(leaf.value)
    return out


# -- prenex form and classification ------------------------------------------------

@dataclass(frozen=True)
class FragmentClass:
    quantifier_free: bool
    prenex_prog_blocks: int
    prenex_seq_blocks: int
    shape: str


SIGMA1 = "Σ1"
PI1 = "Π1"
MINSKY_SHAPE = "∀x*∀α* ∩ ∀x*∃x*∃α*"
OTHER = "Other"


def _rename(f, old, new):
    from .substitution import rename_free
    return rename_free(f, old, new)


def _prenex(f, fr: Fresh, positive: bool = True) -> tuple:
    """Return ``(prefix, matrix)``; prefix items are ``('E'|'A', var)``.

    ``positive=False`` computes the prenex form of the negation.
    """
    if isinstance(f, Exists) or as_forall(f) is not None:
        if isinstance(f, Exists):
            q, var, body = "E", f.var, f.body
        else:
            var, body = as_forall(f)
            q = "A"
        if not positive:
            q = "A" if q == "E" else "E"
        nv = type(var)(fr.name(var.name))
        body = _rename(body, var, nv)
        prefix, matrix = _prenex(body, fr, positive)
        return [(q, nv)] + prefix, matrix
    if isinstance(f, Not):
        return _prenex(f.body, fr, not positive)
    if isinstance(f, (And, Or)):
        kind = type(f)
        parts = _chain(f, kind)
        results = [_prenex(p, fr, positive) for p in parts]
        op = kind if positive else (Or if kind is And else And)
        matrix = results[0][1]
        for _, m in results[1:]:
            matrix = op(matrix, m)
        return _merge(*[p for p, _ in results]), matrix
    if isinstance(f, Implies):
        pl, ml = _prenex(f.left, fr, not positive)
        pr, mr = _prenex(f.right, fr, positive)
        # the matrix below is stated for the sign already applied: ~a \/ b, or a /\ ~b
        if positive:
            return _merge(pl, pr), Or(ml, mr)
        return _merge(pl, pr), And(ml, mr)
    for g in subformulas(f):
        if isinstance(g, Exists):
            raise ClassificationError("a quantifier under '*' or '-*' cannot be moved to the prefix")
    return [], (f if positive else Not(f))


def _chain(f, kind) -> list:
    if isinstance(f, kind):
        return _chain(f.left, kind) + _chain(f.right, kind)
    return [f]


def _merge(*prefixes: list) -> list:
    """Interleave prefixes of independent subformulas with as few alternations as possible."""
    best = None
    for start in ("A", "E"):
        seqs = [list(p) for p in prefixes]
        out: list = []
        cur = start
        while any(seqs):
            moved = False
            for seq in seqs:
                while seq and seq[0][0] == cur:
                    out.append(seq.pop(0))
                    moved = True
            if not moved:
                cur = "A" if cur == "E" else "E"
        if best is None or _blocks([q for q, _ in out]) < _blocks([q for q, _ in best]):
            best = out
    return best


def _blocks(qs: list) -> int:
    n = 0
    prev = None
    for q in qs:
        if q != prev:
            n += 1
            prev = q
    return n


def prenex(f):
    """Prenex form with quantifiers hoisted across boolean connectives only.

    Returns ``(prefix, matrix)`` where ``prefix`` is a list of
    ``('E' | 'A', var)``.  Raises :class:`ClassificationError` if a quantifier
    sits below ``*`` or ``-*``.
    """
    if has_macros(f):
        f = expand_macros(f)
    fr = Fresh(names_in(f))
    return _prenex(f, fr, True)


def _conjuncts(f) -> list:
    if isinstance(f, And):
        return _conjuncts(f.left) + _conjuncts(f.right)
    return [f]


def _shape_of(prefix: list) -> str:
    """Shape of one prefix: 'qf', 'E', 'A', 'AE' (forall prog then exists) or 'other'."""
    if not prefix:
        return "qf"
    qs = [q for q, _ in prefix]
    if all(q == "E" for q in qs):
        return "E"
    if all(q == "A" for q in qs):
        return "A"
    first_e = qs.index("E")
    head, tail = prefix[:first_e], prefix[first_e:]
    if all(q == "E" for q, _ in tail) and all(isinstance(v, PVar) for _, v in head):
        return "AE"
    return "other"


def classify(f) -> FragmentClass:
    """Quantifier shape of ``f`` after expanding predicates and prenexing."""
    if has_macros(f):
        f = expand_macros(f)
    prefix, _ = prenex(f)
    prog = [q for q, v in prefix if isinstance(v, PVar)]
    seqs = [q for q, v in prefix if isinstance(v, SVar)]
    qf = not prefix
    shapes = [_shape_of(prenex(c)[0]) for c in _conjuncts(f)]
    whole = _shape_of(prefix)
    if whole in ("qf", "E"):
        tag = SIGMA1
    elif whole == "A":
        tag = PI1
    elif all(s in ("qf", "E", "A", "AE") for s in shapes):
        tag = MINSKY_SHAPE
    else:
        tag = OTHER
    return FragmentClass(qf, _blocks(prog), _blocks(seqs), tag)
