"""Two-counter Minsky machines, their runs, and their encoding as heap formulas.

A run ``(k_0, c1_0, c2_0), ..., (k_m, c1_m, c2_m)`` is laid out as a chain of
``4 (m + 1)`` cells.  Each state takes four consecutive cells whose contents
are the next location followed by ``nil`` padding of length ``0``, ``k_i``,
``c1_i + 1`` and ``c2_i + 1``.  The last cell has no next location.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Optional, Union

from .heap import Model
from .semantics import CheckConfig, Checker, Verdict3
from .syntax import (EPS, HASH, NIL, And, Const, Exists, Implies, Macro, Not,
                     PVar, SeqEq, SVar, concat, conj, disj, exists_many,
                     forall_many, nil_block, sep)
from .macros import Fresh, endpoints, no_predecessor, successor_exists, unique_predecessors


class MachineError(ValueError):
    pass


@dataclass(frozen=True)
class Inc:
    counter: int
    goto: int


@dataclass(frozen=True)
class Test:
    counter: int
    if_zero: int
    if_dec: int


@dataclass(frozen=True)
class Halt:
    pass


Instruction = Union[Inc, Test, Halt]


@dataclass(frozen=True)
class Machine:
    """Instructions ``1 .. n``; exactly the last one halts."""
    instructions: tuple

    @property
    def n(self) -> int:
        return len(self.instructions)

    def __post_init__(self):
        n = len(self.instructions)
        if n < 1:
            raise MachineError("a machine needs at least one instruction")
        for i, ins in enumerate(self.instructions, 1):
            if isinstance(ins, Halt) != (i == n):
                raise MachineError(f"instruction {i}: exactly instruction {n} must be halt")
            if isinstance(ins, (Inc, Test)) and ins.counter not in (1, 2):
                raise MachineError(f"instruction {i}: counters are C1 and C2")
            targets = (ins.goto,) if isinstance(ins, Inc) else (
                (ins.if_zero, ins.if_dec) if isinstance(ins, Test) else ())
            for k in targets:
                if not 1 <= k <= n:
                    raise MachineError(f"instruction {i}: jump target {k} outside 1..{n}")

    def __getitem__(self, i: int) -> Instruction:
        return self.instructions[i - 1]


State = tuple  # (pointer, c1, c2)


@dataclass(frozen=True)
class Run:
    states: tuple

    @property
    def halted(self) -> bool:
        return True

    @property
    def steps(self) -> int:
        return len(self.states) - 1


@dataclass(frozen=True)
class NotHaltedWithin:
    max_steps: int
    states: tuple

    @property
    def halted(self) -> bool:
        return False


_LINE = re.compile(
    r"^\s*(\d+)\s*:\s*(?:"
    r"inc\s+C([12])\s+goto\s+(\d+)"
    r"|test\s+C([12])\s+zero\s+(\d+)\s+dec\s+(\d+)"
    r"|(halt))\s*$", re.IGNORECASE)


def parse_machine(text: str) -> Machine:
    """One instruction per line: ``I: inc Cj goto k``, ``I: test Cj zero k1 dec k2``, ``n: halt``."""
    found: dict = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        body = line.split("//")[0].strip()
        if not body:
            continue
        m = _LINE.match(body)
        if not m:
            raise MachineError(f"line {lineno}: cannot read {line.strip()!r}")
        idx = int(m.group(1))
        if idx in found:
            raise MachineError(f"line {lineno}: instruction {idx} defined twice")
        if m.group(2):
            found[idx] = Inc(int(m.group(2)), int(m.group(3)))
        elif m.group(4):
            found[idx] = Test(int(m.group(4)), int(m.group(5)), int(m.group(6)))
        else:
            found[idx] = Halt()
    if sorted(found) != list(range(1, len(found) + 1)):
        raise MachineError("instructions must be numbered 1..n without gaps")
    return Machine(tuple(found[i] for i in range(1, len(found) + 1)))


def format_machine(machine: Machine) -> str:
    lines = []
    for i, ins in enumerate(machine.instructions, 1):
        if isinstance(ins, Inc):
            lines.append(f"{i}: inc C{ins.counter} goto {ins.goto}")
        elif isinstance(ins, Test):
            lines.append(f"{i}: test C{ins.counter} zero {ins.if_zero} dec {ins.if_dec}")
        else:
            lines.append(f"{i}: halt")
    return "\n".join(lines) + "\n"


def step(machine: Machine, state: State) -> State:
    k, c1, c2 = state
    ins = machine[k]
    counters = [c1, c2]
    if isinstance(ins, Inc):
        counters[ins.counter - 1] += 1
        return (ins.goto, *counters)
    if isinstance(ins, Test):
        if counters[ins.counter - 1] == 0:
            return (ins.if_zero, *counters)
        counters[ins.counter - 1] -= 1
        return (ins.if_dec, *counters)
    raise MachineError("a halted machine has no next state")


def simulate(machine: Machine, max_steps: int = 1000):
    """The run from ``(1, 0, 0)``, or :class:`NotHaltedWithin` after ``max_steps`` steps."""
    state = (1, 0, 0)
    states = [state]
    for _ in range(max_steps):
        if state[0] == machine.n:
            return Run(tuple(states))
        state = step(machine, state)
        states.append(state)
    if state[0] == machine.n:
        return Run(tuple(states))
    return NotHaltedWithin(max_steps, tuple(states))


# -- heap models of runs -----------------------------------------------------------

FIRST, LAST = "x0", "x0'"


def paddings(states) -> list:
    out = []
    for k, c1, c2 in states:
        out += [0, k, c1 + 1, c2 + 1]
    return out


def chain_model(pads, start: int = 1) -> Model:
    """Chain of cells at ``start, start+1, ...``: next location then ``nil`` padding."""
    if not pads:
        raise ValueError("a chain needs at least one cell")
    heap = {}
    locs = list(range(start, start + len(pads)))
    for i, (loc, pad) in enumerate(zip(locs, pads)):
        nxt = (locs[i + 1],) if i + 1 < len(locs) else ()
        heap[loc] = nxt + (NIL,) * pad
    return Model({FIRST: locs[0], LAST: locs[-1]}, {}, heap)


def build_run_model(run) -> Model:
    if not isinstance(run, Run):
        raise MachineError("only a halting run has a model")
    return chain_model(paddings(run.states))


def states_model(states) -> Model:
    """Chain for an arbitrary list of states, halting or not."""
    return chain_model(paddings(states))


def inject_circle(model: Model, length: int) -> Model:
    """Add a cycle of ``length`` cells on fresh locations."""
    if length < 1:
        raise ValueError("a circle has at least one cell")
    used = set(model.heap) | {v for v in model.stack.values() if isinstance(v, int)}
    for cell in model.heap.values():
        used |= {x for x in cell if isinstance(x, int)}
    start = max(used, default=0) + 1
    locs = list(range(start, start + length))
    heap = dict(model.heap)
    for i, loc in enumerate(locs):
        heap[loc] = (locs[(i + 1) % length],)
    return Model(dict(model.stack), dict(model.seq), heap)


def remove_cells(model: Model, locations) -> Model:
    gone = set(locations)
    return Model(dict(model.stack), dict(model.seq),
                 {k: v for k, v in model.heap.items() if k not in gone})


def circle_locations(model: Model, original: Model) -> list:
    return sorted(set(model.heap) - set(original.heap))


# -- formulas ------------------------------------------------------------------------

def _hook(x, *parts):
    return Macro("hook", (x, concat(*parts)))


_N = Const(NIL)


def _pv(name: str) -> PVar:
    return PVar(name)


def _sv(name: str) -> SVar:
    return SVar(name)


def init_state(x0, xk, xc1, xc2, x1):
    return sep(_hook(x0, xk), _hook(xk, xc1, _N), _hook(xc1, xc2, _N), _hook(xc2, x1, _N))


def fin_state(x0, xk, xc1, xc2, ac1, ac2, n: int):
    return sep(_hook(x0, xk), _hook(xk, xc1, nil_block(n)),
               _hook(xc1, xc2, ac1, _N), _hook(xc2, EPS, ac2, _N))


def curr_state(x0, xk, xc1, xc2, x0n, ak, ac1, ac2):
    return sep(_hook(x0, xk), _hook(xk, xc1, ak), _hook(xc1, xc2, ac1, _N), _hook(xc2, x0n, ac2, _N))


def init_padding(*alphas):
    return conj(*[Macro("ini", (a,)) for a in alphas])


def next_relation(machine: Machine, ak, ac, akp, acp, literal: bool = False):
    """Instruction semantics on paddings; ``ac``/``acp`` are the counter paddings minus one."""
    clauses = []
    for i, ins in enumerate(machine.instructions, 1):
        if isinstance(ins, Halt):
            continue
        j = ins.counter - 1
        o = 1 - j
        at = SeqEq(ak, nil_block(i))
        if isinstance(ins, Inc):
            clauses.append(conj(at, SeqEq(acp[j], concat(ac[j], _N)), SeqEq(acp[o], ac[o]),
                                SeqEq(akp, nil_block(ins.goto))))
        else:
            zero = SeqEq(ac[j], _N if literal else EPS)
            clauses.append(conj(
                at,
                Implies(zero, conj(SeqEq(acp[0], ac[0]), SeqEq(acp[1], ac[1]),
                                   SeqEq(akp, nil_block(ins.if_zero)))),
                Implies(Not(zero), conj(SeqEq(concat(acp[j], _N), ac[j]), SeqEq(acp[o], ac[o]),
                                        SeqEq(akp, nil_block(ins.if_dec))))))
    if not clauses:
        return Not(conj()) if not literal else conj()
    return conj(*clauses) if literal else disj(*clauses)


@dataclass(frozen=True)
class Encoding:
    phi1: object
    phi2: object
    phi3: object
    regrouped: object

    @property
    def formula(self):
        return And(And(self.phi1, self.phi2), self.phi3)


def encoding(machine: Machine, literal: bool = False) -> Encoding:
    """The three parts of the machine's formula.

    ``literal=True`` builds the construction as originally stated.  The
    default differs so that bounded checks can refute non-halting machines:
    the step relation is a disjunction over instructions, a zero test
    compares the counter padding with ``eps``, a final state may follow any
    state, and the current paddings are bound universally.
    """
    n = machine.n
    x0, x0p = _pv(FIRST), _pv(LAST)
    fr = Fresh({FIRST, LAST})

    # part 1: unique predecessors, nothing points at the first cell
    phi1 = And(unique_predecessors(fr), no_predecessor(fr, x0))

    # part 2: the run starts in (1, 0, 0) and some state is a final one
    xk, xc1, xc2, x1 = _pv("xk"), _pv("xc1"), _pv("xc2"), _pv("x1")
    yk, yc1, yc2, y0 = _pv("xk'"), _pv("xc1'"), _pv("xc2'"), _pv("x0f")
    bc1, bc2 = _sv("ac1f"), _sv("ac2f")
    two = sep(init_state(x0, xk, xc1, xc2, x1), fin_state(y0, yk, yc1, yc2, bc1, bc2, n))
    phi2_vars = [xk, xc1, xc2, x1, y0, yk, yc1, yc2, bc1, bc2]
    phi2_body = two
    if not literal and n == 1:
        phi2_body = disj(two, exists_many([], fin_state(x0, xk, xc1, xc2, EPS, EPS, n)))
    phi2 = exists_many(phi2_vars, phi2_body)

    # part 3: every non-final state has a successor state
    u0, uk, uc1, uc2, u0n = _pv("y0"), _pv("yk"), _pv("yc1"), _pv("yc2"), _pv("y0'")
    vk, vc1, vc2, v0n = _pv("yk'"), _pv("yc1'"), _pv("yc2'"), _pv("y0''")
    ak, ac1, ac2 = _sv("ak"), _sv("ac1"), _sv("ac2")
    akp, ac1p, ac2p = _sv("ak'"), _sv("ac1'"), _sv("ac2'")
    nxt = next_relation(machine, ak, (ac1, ac2), akp, (ac1p, ac2p), literal)
    following = curr_state(u0n, vk, vc1, vc2, v0n, akp, ac1p, ac2p)
    if not literal:
        following = disj(following, And(fin_state(u0n, vk, vc1, vc2, ac1p, ac2p, n),
                                        SeqEq(akp, nil_block(n))))
    next_state = conj(init_padding(ak, ac1, ac2, akp, ac1p, ac2p), following, nxt)
    matrix = Implies(And(curr_state(u0, uk, uc1, uc2, u0n, ak, ac1, ac2),
                         Not(fin_state(u0, uk, uc1, uc2, ac1, ac2, n))), next_state)
    universal = [u0, uk, uc1, uc2, u0n]
    existential = [vk, vc1, vc2, v0n]
    if literal:
        existential += [ak, ac1, ac2, akp, ac1p, ac2p]
    else:
        universal += [ak, ac1, ac2]
        existential += [akp, ac1p, ac2p]
    phi3 = forall_many(universal, exists_many(existential, matrix))
    regrouped = And(phi1, forall_many(universal, exists_many(
        phi2_vars + existential, And(phi2_body, matrix))))
    return Encoding(phi1, phi2, phi3, regrouped)


def encode(machine: Machine, literal: bool = False, regrouped: bool = False):
    enc = encoding(machine, literal)
    return enc.regrouped if regrouped else enc.formula


def sapling(x0, x0p):
    """The fishbone shape predicate as a library call."""
    return Macro("sapling", (x0, x0p))


def sapling_parts(x0, x0p) -> list:
    fr = Fresh({x0.name, x0p.name})
    return [unique_predecessors(fr), no_predecessor(fr, x0), endpoints(fr, x0, x0p),
            successor_exists(fr, x0p)]


# -- bounded validation ------------------------------------------------------------

def closed_world_config(model: Model) -> CheckConfig:
    """Quantifiers range over the model's locations and ``nil`` blocks up to its longest cell."""
    locs = set(model.heap) | {v for v in model.stack.values() if isinstance(v, int)}
    for cell in model.heap.values():
        locs |= {x for x in cell if isinstance(x, int)}
    longest = max((len(c) for c in model.heap.values()), default=0)
    seqs = tuple((NIL,) * i for i in range(longest + 1))
    return CheckConfig(closed_world=True, loc_candidates=tuple(sorted(locs)), seq_candidates=seqs)


def bounded_check(model: Model, formula) -> Verdict3:
    checker = formula if isinstance(formula, Checker) else Checker(formula)
    return checker.check(model, closed_world_config(model))


@dataclass(frozen=True)
class Validation:
    halted: bool
    run: Optional[Run]
    model: Optional[Model]
    verdict: Optional[Verdict3]

    @property
    def ok(self) -> bool:
        return self.halted and self.verdict is not None and self.verdict.is_true


def validate(machine: Machine, max_steps: int = 1000, literal: bool = False) -> Validation:
    """Simulate, lay the run out as a heap, and bounded-check the encoding on it."""
    run = simulate(machine, max_steps)
    if not isinstance(run, Run):
        return Validation(False, None, None, None)
    model = build_run_model(run)
    return Validation(True, run, model, bounded_check(model, encode(machine, literal)))


def sapling_models(machine_n: int, max_periods: int, max_counter_padding: int):
    """Every chain of at most ``max_periods`` states with pointers in ``1..n`` and counter paddings ``1..max``."""
    per = [(k, c1, c2) for k in range(1, machine_n + 1)
           for c1 in range(max_counter_padding) for c2 in range(max_counter_padding)]
    for p in range(1, max_periods + 1):
        for states in itertools.product(per, repeat=p):
            yield states, states_model(states)
