import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seqsl.analysis import MINSKY_SHAPE, OTHER, classify, prenex
from seqsl.heap import Model
from seqsl import minsky
from seqsl.minsky import (FIRST, LAST, Halt, Inc, Machine, MachineError, NotHaltedWithin, Run,
                          bounded_check, build_run_model, circle_locations, encode, encoding,
                          format_machine, inject_circle, parse_machine, remove_cells, sapling,
                          sapling_parts, simulate, states_model, validate)
from seqsl.printer import format_formula
from seqsl.syntax import NIL, PVar

M0 = "1: halt\n"
M1 = "1: inc C1 goto 2\n2: halt\n"
M2 = "1: test C1 zero 1 dec 1\n2: halt\n"
M3 = "1: inc C1 goto 2\n2: test C1 zero 3 dec 2\n3: halt\n"
X0, X0P = PVar(FIRST), PVar(LAST)


def _pads(model: Model) -> list:
    return [sum(1 for x in model.heap[loc] if x is NIL) for loc in sorted(model.heap)]


# -- machines ----------------------------------------------------------------------------

def test_parse_and_format():
    m = parse_machine(M3 + "// trailing comment\n")
    assert m.instructions == (Inc(1, 2), minsky.Test(1, 3, 2), Halt())
    assert parse_machine(format_machine(m)) == m


@pytest.mark.parametrize("text", [
    "1: inc C3 goto 1\n2: halt", "1: inc C1 goto 5\n2: halt", "1: halt\n1: halt",
    "2: halt", "1: halt\n2: inc C1 goto 1", "1: jump 2\n2: halt", "",
])
def test_malformed_machines(text):
    with pytest.raises(MachineError):
        parse_machine(text)


def test_simulation_examples():
    assert simulate(parse_machine(M1)) == Run(((1, 0, 0), (2, 1, 0)))
    assert simulate(parse_machine(M0)).states == ((1, 0, 0),)
    r = simulate(parse_machine(M2), 100)
    assert isinstance(r, NotHaltedWithin) and not r.halted
    assert simulate(parse_machine(M3)).states == ((1, 0, 0), (2, 1, 0), (2, 0, 0), (3, 0, 0))


# -- run models -------------------------------------------------------------------------

def test_run_model_layout():
    m1 = build_run_model(simulate(parse_machine(M1)))
    assert len(m1.heap) == 8
    assert _pads(m1) == [0, 1, 1, 1, 0, 2, 2, 1]
    m0 = build_run_model(simulate(parse_machine(M0)))
    assert _pads(m0) == [0, 1, 1, 1]
    assert m0.stack[FIRST] == min(m0.heap) and m0.stack[LAST] == max(m0.heap)


def test_run_model_chain_is_fresh_and_ends_without_successor():
    m = build_run_model(simulate(parse_machine(M3)))
    nexts = [c[0] for c in m.heap.values() if c and c[0] is not NIL]
    assert len(nexts) == len(set(nexts)) == len(m.heap) - 1
    assert m.heap[m.stack[LAST]][0] is NIL
    assert m.stack[FIRST] not in nexts


def test_non_halting_run_has_no_model():
    with pytest.raises(MachineError):
        build_run_model(simulate(parse_machine(M2), 10))


@given(st.lists(st.tuples(st.integers(1, 3), st.integers(0, 5), st.integers(0, 5)), min_size=1, max_size=4))
def test_counter_padding_is_value_plus_one(states):
    pads = _pads(states_model(states))
    for i, (k, c1, c2) in enumerate(states):
        assert pads[4 * i: 4 * i + 4] == [0, k, c1 + 1, c2 + 1]


def test_inject_and_remove_circle():
    m = build_run_model(simulate(parse_machine(M1)))
    one = inject_circle(m, 1)
    (loc,) = circle_locations(one, m)
    assert one.heap[loc] == (loc,) and loc not in m.heap
    three = inject_circle(m, 3)
    locs = circle_locations(three, m)
    assert [three.heap[x][0] for x in locs] == locs[1:] + locs[:1]
    assert remove_cells(three, locs) == m


# -- sapling and the encoding --------------------------------------------------------------

def test_sapling_holds_on_run_models():
    for text in (M0, M1, M3):
        m = build_run_model(simulate(parse_machine(text)))
        assert bounded_check(m, sapling(X0, X0P)).is_true


def test_predecessor_of_first_location_breaks_sapling():
    m = build_run_model(simulate(parse_machine(M1)))
    heap = dict(m.heap)
    heap[m.stack[LAST]] = (m.stack[FIRST],)
    bad = Model(m.stack, m.seq, heap)
    assert bounded_check(bad, sapling_parts(X0, X0P)[1]).is_false
    assert bounded_check(bad, sapling(X0, X0P)).is_false


def test_encoding_final_state_uses_machine_size():
    text = format_formula(encoding(parse_machine(M1)).phi2)
    assert "nil ^ nil" in text and "nil ^ nil ^ nil" not in text


def test_encoding_shapes():
    assert classify(sapling(X0, X0P)).shape == MINSKY_SHAPE
    assert classify(encode(parse_machine(M1), literal=True)).shape == MINSKY_SHAPE
    assert classify(encode(parse_machine(M1))).shape == OTHER


@pytest.mark.parametrize("text", [M0, M1, M3])
def test_validation_succeeds_on_halting_machines(text):
    v = validate(parse_machine(text), 50)
    assert v.ok


def test_literal_encoding_validates_m1():
    assert validate(parse_machine(M1), 50, literal=True).ok


def test_validation_reports_non_halting():
    v = validate(parse_machine(M2), 20)
    assert not v.halted and not v.ok


def test_regrouped_form_shares_the_universal_block():
    enc = encoding(parse_machine(M1))
    first, second = enc.regrouped.left, enc.regrouped.right
    assert first == enc.phi1
    assert [q for q, _ in prenex(second)[0]][:5] == ["A"] * 5
    assert classify(enc.regrouped).prenex_prog_blocks >= 2


def test_wrong_run_fails_encoding():
    machine = parse_machine(M1)
    assert bounded_check(states_model([(1, 0, 0), (2, 2, 0)]), encode(machine)).is_false
    assert bounded_check(states_model([(1, 0, 0)]), encode(machine)).is_false


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([M0, M1, M3]), st.integers(1, 3))
def test_sapling_invariant_under_circles(text, length):
    m = build_run_model(simulate(parse_machine(text)))
    aug = inject_circle(m, length)
    for part in sapling_parts(X0, X0P):
        assert bounded_check(aug, part) == bounded_check(m, part)
    assert remove_cells(aug, circle_locations(aug, m)) == m


def test_machine_rejects_bad_indices():
    with pytest.raises(MachineError):
        Machine((Inc(1, 3), Halt()))
    with pytest.raises(MachineError):
        Machine((Halt(), Halt()))
