"""Random formulas, terms, models and word formulas shared by the test modules."""
from __future__ import annotations

import random

from hypothesis import strategies as st

from seqsl.heap import Model
from seqsl.syntax import (EMP, EPS, FALSE, HASH, NIL, TRUE, And, Const, Exists,
                          Implies, IndEq, Not, Or, PointsTo, PVar, Sep, SeqEq, SVar, Wand,
                          concat)
from seqsl.wordeq.formula import WEq, wand, wnot, wor

PROG = [PVar("x"), PVar("y"), PVar("z")]
SEQ = [SVar("a"), SVar("b")]


# -- hypothesis strategies -------------------------------------------------------------

values = st.one_of(st.sampled_from([NIL, HASH]), st.integers(0, 4))
ind_terms = st.one_of(st.sampled_from(PROG), values.map(Const))
leaves = st.one_of(ind_terms, st.sampled_from(SEQ))
seq_terms = st.one_of(
    st.just(EPS),
    st.lists(leaves, min_size=1, max_size=4).map(lambda ls: concat(*ls)),
)


def _compound(children):
    return st.one_of(
        children.map(Not),
        st.tuples(children, children).map(lambda p: And(*p)),
        st.tuples(children, children).map(lambda p: Or(*p)),
        st.tuples(children, children).map(lambda p: Implies(*p)),
        st.tuples(children, children).map(lambda p: Sep(*p)),
        st.tuples(children, children).map(lambda p: Wand(*p)),
        st.tuples(st.sampled_from(PROG + SEQ), children).map(lambda p: Exists(*p)),
    )


atoms = st.one_of(
    st.just(EMP), st.just(TRUE), st.just(FALSE),
    st.tuples(ind_terms, ind_terms).map(lambda p: IndEq(*p)),
    st.tuples(seq_terms, seq_terms).map(lambda p: SeqEq(*p)),
    st.tuples(ind_terms, seq_terms).map(lambda p: PointsTo(*p)),
)
formulas = st.recursive(atoms, _compound, max_leaves=8)


# -- quantifier-free PSeqSL over small variable sets -----------------------------------

def _qf_compound(children):
    return st.one_of(
        children.map(Not),
        st.tuples(children, children).map(lambda p: And(*p)),
        st.tuples(children, children).map(lambda p: Or(*p)),
        st.tuples(children, children).map(lambda p: Implies(*p)),
        st.tuples(children, children).map(lambda p: Sep(*p)),
        st.tuples(children, children).map(lambda p: Wand(*p)),
    )


small_prog = st.sampled_from(PROG[:2])
small_leaves = st.one_of(small_prog, st.just(SVar("a")), st.just(Const(NIL)))
small_seq = st.one_of(st.just(EPS), st.lists(small_leaves, min_size=1, max_size=2).map(lambda ls: concat(*ls)))
qf_atoms = st.one_of(
    st.just(EMP), st.just(FALSE),
    st.tuples(small_prog, small_prog).map(lambda p: IndEq(*p)),
    st.tuples(small_seq, small_seq).map(lambda p: SeqEq(*p)),
    st.tuples(small_prog, small_seq).map(lambda p: PointsTo(*p)),
)
qf_formulas = st.recursive(qf_atoms, _qf_compound, max_leaves=4)

cell_values = st.sampled_from([1, 2, NIL])
small_heaps = st.dictionaries(st.integers(1, 3), st.lists(cell_values, max_size=2).map(tuple), max_size=2)


@st.composite
def small_models(draw):
    stack = {v.name: draw(st.sampled_from([1, 2, 3, NIL])) for v in PROG[:2]}
    seq = {"a": tuple(draw(st.lists(cell_values, max_size=2)))}
    return Model(stack, seq, draw(small_heaps))


# -- seeded generators for the acceptance criteria ---------------------------------------

class FormulaGen:
    """Random quantifier-free PSeqSL formulas with a bounded connective count."""

    def __init__(self, rng: random.Random, prog=("x1", "x2", "x3"), seq=("a1", "a2")):
        self.rng = rng
        self.prog = [PVar(n) for n in prog]
        self.seq = [SVar(n) for n in seq]

    def term(self):
        n = self.rng.randint(0, 2)
        parts = [self.rng.choice(self.seq + self.prog + [Const(NIL)]) for _ in range(n)]
        return concat(*parts)

    def atom(self):
        k = self.rng.random()
        if k < 0.15:
            return EMP
        if k < 0.2:
            return FALSE
        if k < 0.35:
            return IndEq(self.rng.choice(self.prog), self.rng.choice(self.prog))
        if k < 0.65:
            return SeqEq(self.term(), self.term())
        return PointsTo(self.rng.choice(self.prog), self.term())

    def formula(self, connectives: int):
        if connectives == 0:
            return self.atom()
        op = self.rng.choice(["not", "and", "or", "implies", "sep", "sep", "wand", "wand"])
        if op == "not":
            return Not(self.formula(connectives - 1))
        left = self.rng.randint(0, connectives - 1)
        a, b = self.formula(left), self.formula(connectives - 1 - left)
        return {"and": And, "or": Or, "implies": Implies, "sep": Sep, "wand": Wand}[op](a, b)


def random_heap(rng: random.Random, letters=(1, 2, 3), max_cells: int = 3, max_len: int = 3) -> dict:
    locs = rng.sample([1, 2, 3], rng.randint(0, max_cells))
    return {loc: tuple(rng.choice(letters) for _ in range(rng.randint(0, max_len))) for loc in sorted(locs)}


class WordGen:
    """Random Boolean combinations of word equations over two variables and two letters."""

    def __init__(self, rng: random.Random, letters=(1, 2)):
        self.rng = rng
        self.symbols = [SVar("x"), SVar("y")] + list(letters)

    def word(self) -> tuple:
        return tuple(self.rng.choice(self.symbols) for _ in range(self.rng.randint(0, 3)))

    def formula(self, depth: int):
        if depth == 0 or self.rng.random() < 0.3:
            return WEq(self.word(), self.word())
        k = self.rng.random()
        if k < 0.25:
            return wnot(self.formula(depth - 1))
        if k < 0.6:
            return wand(self.formula(depth - 1), self.formula(depth - 1))
        return wor(self.formula(depth - 1), self.formula(depth - 1))
