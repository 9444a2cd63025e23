import itertools

import pytest
from hypothesis import assume, given, settings

from gen import qf_formulas, small_models
from seqsl.analysis import free_program_vars, seq_terms
from seqsl.heap import Model, UnboundVariable, eval_seq_term
from seqsl.parser import parse_formula
from seqsl.semantics import CheckConfig, Checker, check, check_derived, explain, wand_size
from seqsl.syntax import HASH, NIL, Macro, Not, PVar, Sep, SVar, Wand, is_nat

P = parse_formula
E1 = {"x1": 1, "x2": 2, "x3": 3}


def truth(m, text, cfg=None):
    return check(m, P(text), cfg).value


def test_basic_examples():
    empty = Model()
    assert truth(empty, "emp") is True
    assert truth(empty, "emp -* emp") is True
    m = Model(E1, {"a1": (1,)}, {1: (1, 3)})
    assert truth(m, "x1 |-> @a1 ^ x3") is True
    assert truth(m.bind(PVar("x3"), 4), "x1 |-> @a1 ^ x3") is False


def test_points_to_requires_singleton_heap():
    m = Model({"x": 1, "y": 2}, {}, {1: (2,), 2: (1,)})
    assert truth(m, "x |-> y") is False
    assert truth(m, "x |-> y * y |-> x") is True
    assert truth(m, "x |-> y * true") is True
    assert truth(m, "x ~> y /\\ y ~> x") is True
    assert truth(m, "x |-> y * x |-> y") is False


def test_atoms_are_not_locations():
    m = Model({"x": NIL}, {}, {})
    assert truth(m, "x |-> eps") is False
    assert truth(m, "(x |-> nil) -* false") is True
    assert truth(Model({"x": 1}, {}, {}), "(x |-> nil) -* false") is False
    assert truth(Model({"x": 1}, {}, {1: ()}), "(x |-> nil) -* false") is True


def test_wand_examples():
    m = Model({"x": 1}, {"a": (2,)}, {})
    assert truth(m, "x |-> @a -* x |-> @a") is True
    assert truth(m, "emp -* false") is False
    assert truth(m, "(x |-> @a) -* (x |-> @a * true)") is True
    assert truth(m, "x |-> @a -o true") is True
    assert truth(Model({"x": 1}, {"a": (2,)}, {1: ()}), "x |-> @a -o true") is False


def test_derived_predicates():
    m = Model({"x": 1}, {}, {1: (2, HASH, 5)})
    x, y = PVar("x"), PVar("y")
    assert check_derived(m, Macro("Outdeg", (x, 1))).is_true
    assert check_derived(m, Macro("Outdeg", (x, 2))).is_false
    assert check_derived(m, Macro("reach", (x, x, 0))).is_true
    chain = Model({"x": 1, "y": 2}, {}, {1: (2, HASH), 2: (HASH,)})
    assert check_derived(chain, Macro("reach", (x, y, 1))).is_true
    assert check_derived(chain, Macro("reach", (y, x, 1))).is_false


def test_sequence_predicates():
    m = Model({"x": 2}, {"a": (1, 2, 3), "b": (2, 3), "c": (3, 1)}, {})
    a, b, c, x = SVar("a"), SVar("b"), SVar("c"), PVar("x")
    assert check_derived(m, Macro("Inc", (a,))).is_true
    assert check_derived(m, Macro("Inc", (c,))).is_false
    assert check_derived(m, Macro("Diff", (a,))).is_true
    assert check_derived(m, Macro("in", (x, a))).is_true
    assert check_derived(m, Macro("in", (x, c))).is_false
    assert check_derived(m, Macro("Seg", (b, a))).is_true
    assert check_derived(m, Macro("Seg", (c, a))).is_false
    assert check_derived(m, Macro("lookup", (x, a, 2))).is_true
    assert check_derived(m, Macro("len_eq", (a, 3))).is_true
    assert check_derived(m, Macro("Trunc", (b, a, 2, 4))).is_true
    assert check_derived(m, Macro("Trunc", (b, a, 1, 3))).is_false


def test_unbound_variable():
    with pytest.raises(UnboundVariable):
        check(Model(), P("x |-> @a"))


def test_quantified_downgrade():
    assert truth(Model(), "exists @a. @a == 1 ^ @a") is None
    assert truth(Model(), "forall @a. @a == @a") is None
    assert truth(Model(), "exists x. x |-> nil") is False
    assert truth(Model(), "exists @a. @a == 1 ^ @a", CheckConfig(closed_world=True)) is False
    assert truth(Model({"x": 1}, {}, {1: (2, 3)}), "exists @a. x |-> 2 ^ @a") is True


def test_quantifier_ranges_exclude_atoms():
    m = Model({}, {}, {1: (NIL,)})
    assert truth(m, "exists x. exists y. x |-> y") is False
    assert truth(m, "exists x. exists @a. x |-> @a") is True


def test_explain_shows_split_and_witness():
    m = Model({"x": 1, "y": 2}, {}, {1: (2,), 2: (1,)})
    lines = explain(m, P("exists z. x |-> z * y |-> x"))
    assert lines[0].startswith("True")
    assert any("witness z=2" in ln for ln in lines)
    assert any("split {1: [2]} | {2: [1]}" in ln for ln in lines)


def test_checker_reuse_matches_check():
    f = P("x |-> @a -* (x |-> @a * true)")
    c = Checker(f)
    for m in (Model({"x": 1}, {"a": ()}, {}), Model({"x": 1}, {"a": ()}, {1: ()})):
        assert c.check(m) == check(m, f)


# -- properties ---------------------------------------------------------------------------

@settings(max_examples=150, deadline=None)
@given(small_models(), qf_formulas)
def test_propositional_formulas_are_decided(m, f):
    assert check(m, f).value is not None


@settings(max_examples=100, deadline=None)
@given(small_models(), qf_formulas, qf_formulas)
def test_septraction_duality(m, f, g):
    assert check(m, Macro("septraction", (f, g))) == check(m, Not(Wand(f, Not(g))))


def _all_splits(heap: dict):
    locs = sorted(heap)
    for r in range(len(locs) + 1):
        for part in itertools.combinations(locs, r):
            left = {k: heap[k] for k in part}
            yield left, {k: v for k, v in heap.items() if k not in part}


@settings(max_examples=100, deadline=None)
@given(small_models(), qf_formulas, qf_formulas)
def test_sep_matches_split_enumeration(m, f, g):
    expected = any(check(m.with_heap(h1), f).value and check(m.with_heap(h2), g).value
                   for h1, h2 in _all_splits(m.heap))
    assert check(m, Sep(f, g)).value is expected


def _wand_by_enumeration(m, f, g, bound: int):
    """All extensions over the candidate locations plus two more fresh ones, contents up to ``bound``."""
    image = {m.stack[v.name] for v in free_program_vars(Wand(f, g))}
    values = {x for t in seq_terms(Wand(f, g)) for x in eval_seq_term(m, t)}
    values |= {x for c in m.heap.values() for x in c} | {x for x in image}
    nats = {x for x in values | set(m.heap) if is_nat(x)}
    top = max(nats | {0})
    sz = max(wand_size(f), wand_size(g))
    fresh = [n for n in range(1, top + sz + 4) if n not in nats and n not in m.heap][:sz + 2]
    locs = sorted(({v for v in image if is_nat(v)} | set(fresh)) - set(m.heap))
    letters = sorted(values, key=str) + [top + 1]
    contents = [w for n in range(bound + 1) for w in itertools.product(letters, repeat=n)]
    if (len(contents) + 1) ** len(locs) > 60_000:
        return None
    for choice in itertools.product([None] + contents, repeat=len(locs)):
        ext = {d: c for d, c in zip(locs, choice) if c is not None}
        if check(m.with_heap(ext), f).value and not check(m.with_heap({**m.heap, **ext}), g).value:
            return False
    return True


@settings(max_examples=30, deadline=None)
@given(small_models(), qf_formulas, qf_formulas)
def test_wand_small_model_agrees_with_larger_enumeration(m, f, g):
    assume(max(wand_size(f), wand_size(g)) <= 2 and len(m.heap) <= 2)
    expected = _wand_by_enumeration(m, f, g, bound=2)
    assume(expected is not None)
    assert check(m, Wand(f, g)).value is expected
