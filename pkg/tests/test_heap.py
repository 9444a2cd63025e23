import pytest
from hypothesis import given
from hypothesis import strategies as st

from gen import seq_terms
from seqsl.heap import (Model, ModelFormatError, UnboundVariable, disjoint_union, eval_ind_term,
                        eval_seq_term, heap_splits, model_from_dict, model_to_dict, parse_model,
                        print_model)
from seqsl.syntax import EPS, HASH, NIL, Concat, Const, PVar, SVar

heaps = st.dictionaries(st.integers(1, 6), st.lists(st.sampled_from([1, 2, NIL, HASH]), max_size=3).map(tuple),
                        max_size=4)
full_models = st.builds(
    Model,
    st.fixed_dictionaries({n: st.sampled_from([0, 1, 2, NIL, HASH]) for n in "xyz"}),
    st.fixed_dictionaries({n: st.lists(st.sampled_from([1, 2, NIL]), max_size=3).map(tuple) for n in "ab"}),
    heaps,
)


def test_term_evaluation():
    m = Model({"x": 3}, {"a": (1, 2), "e": ()}, {})
    assert eval_ind_term(m, Const(NIL)) is NIL
    assert eval_ind_term(m, Const(7)) == 7
    assert eval_ind_term(m, PVar("x")) == 3
    assert eval_seq_term(m, EPS) == ()
    assert eval_seq_term(m, Concat(SVar("a"), SVar("a"))) == (1, 2, 1, 2)
    assert eval_seq_term(m, Concat(SVar("e"), PVar("x"))) == (3,)


def test_unbound_variables():
    with pytest.raises(UnboundVariable):
        eval_ind_term(Model(), PVar("x"))
    with pytest.raises(UnboundVariable):
        eval_seq_term(Model(), SVar("a"))


@given(full_models, seq_terms, seq_terms)
def test_evaluation_distributes_over_concat(m, s, t):
    assert eval_seq_term(m, Concat(s, t)) == eval_seq_term(m, s) + eval_seq_term(m, t)


def test_disjoint_union():
    h = {1: (2,)}
    assert disjoint_union({}, h) == h
    assert disjoint_union({1: (2,)}, {2: (1,)}) == {1: (2,), 2: (1,)}
    assert disjoint_union({1: (2,)}, {1: (3,)}) is None


@given(heaps, heaps, heaps)
def test_union_laws(h1, h2, h3):
    assert disjoint_union(h1, h2) == disjoint_union(h2, h1)
    left = disjoint_union(h1, h2)
    left = None if left is None else disjoint_union(left, h3)
    right = disjoint_union(h2, h3)
    right = None if right is None else disjoint_union(h1, right)
    assert left == right


def test_split_examples():
    assert heap_splits({}) == [({}, {})]
    assert heap_splits({1: (2,)}) == [({}, {1: (2,)}), ({1: (2,)}, {})]
    assert len(heap_splits({1: (1, 3), 2: (2, 3)})) == 4


@given(heaps)
def test_splits_recombine(h):
    splits = heap_splits(h)
    assert len(splits) == 2 ** len(h)
    assert all(disjoint_union(h1, h2) == h for h1, h2 in splits)
    assert len({(tuple(sorted(h1)), tuple(sorted(h2))) for h1, h2 in splits}) == len(splits)


def test_model_json():
    m = parse_model('{"stack":{"x":1},"seq":{},"heap":{"1":["nil"]}}')
    assert m.heap == {1: (NIL,)} and m.stack == {"x": 1}
    m = parse_model('{"stack":{},"seq":{"@a":[]},"heap":{}}')
    assert m.seq == {"a": ()} and m.heap == {}


@pytest.mark.parametrize("text", [
    '{"heap":{"nil":[1]}}', '{"heap":{"0":[1]}}', '{"heap":{"1":[true]}}', '{"seq":{"a":[]}}',
    '{"stack":{"x":-1}}', '{"stack":{"x":"foo"}}', '[1]', '{"extra":{}}', '{"heap":', '{"heap":{"1":3}}',
])
def test_malformed_models(text):
    with pytest.raises(ModelFormatError):
        parse_model(text)


@given(full_models)
def test_json_round_trip(m):
    m = Model(m.stack, m.seq, {k: v for k, v in m.heap.items() if k >= 1})
    assert parse_model(print_model(m)) == m
    assert model_from_dict(model_to_dict(m)) == m
