"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

Instances come from fixed seeds so reruns see the same formulas, heaps and
machines.
"""
import itertools
import random
import signal
import time

from acceptance_log import WITNESSES, criterion, witness
from gen import FormulaGen, WordGen, random_heap
from seqsl.analysis import free_program_vars, free_seq_vars
from seqsl.decider import (INVALID, SAT, UNSAT, decide_given_stack_heap, decide_pi1_validity,
                           decide_sat, reduce)
from seqsl.heap import Model
from seqsl.minsky import (FIRST, LAST, bounded_check, build_run_model, circle_locations,
                          closed_world_config, encode, inject_circle, parse_machine, remove_cells,
                          sapling, sapling_models, sapling_parts, simulate, states_model, validate)
from seqsl.parser import parse_formula
from seqsl.semantics import Checker, check, check_derived
from seqsl.syntax import HASH, NIL, Exists, Macro, Not, PVar
from seqsl.wordeq import (Sat, SolverConfig, Unsat, brute_force_solve, evaluate, formula_vars,
                          lift_solution, parse_word_formula, solve, to_single_equation,
                          verify_substitution, wand, wnot)
from seqsl.wordeq.formula import substitute

P = parse_formula
STACK = {"x1": 1, "x2": 2, "x3": 3}
EXAMPLE_1 = P("(x1 |-> @a1 ^ x3) * ((x1 |-> @a1 \\/ x1 |-> @a2) -* (x1 |-> @a2 * x2 |-> @a3))")
HEAP_1 = {1: (1, 3), 2: (2, 3)}
EXAMPLE_2 = P("(x1 |-> @a1 ^ x3) /\\ ((x2 |-> @a1 \\/ x2 |-> @a2) -* (x1 |-> @a1 * x2 |-> @a3))")
HEAP_2 = {1: (1, 3)}
CONJUNCTION_1 = parse_word_formula(
    "1 ^ 3 == @a1 ^ 3 & (@a1 == @a2 & 2 ^ 3 == @a3) & (@a2 == @a2 & 2 ^ 3 == @a3)")

M0 = "1: halt\n"
M1 = "1: inc C1 goto 2\n2: halt\n"
M2 = "1: test C1 zero 1 dec 1\n2: halt\n"
M3 = "1: inc C1 goto 2\n2: test C1 zero 3 dec 2\n3: halt\n"


def _restrict(sub: dict, names) -> dict:
    return {k: v for k, v in sub.items() if k.name in names}


def test_criterion_1_first_worked_example():
    with criterion(1, "first worked example: reduction equivalent, Sat with verifying witness", 1.0) as info:
        start = time.perf_counter()
        ours = reduce(STACK, HEAP_1, EXAMPLE_1)
        r = decide_given_stack_heap(STACK, HEAP_1, EXAMPLE_1)
        pipeline = time.perf_counter() - start
        assert r.status == SAT
        assert check(r.model, EXAMPLE_1).is_true
        witness(True)

        # the fresh extra content may be any word outside the instance's letters
        beta = next(v for v in formula_vars(ours) if v.name.startswith("beta"))
        fixed = substitute(ours, {beta: (4,)})
        sigma = [1, 2, 3]
        a = brute_force_solve(fixed, 4, sigma)
        b = brute_force_solve(CONJUNCTION_1, 4, sigma)
        assert isinstance(a, Sat) and isinstance(b, Sat)
        alphas = {"a1", "a2", "a3"}
        assert _restrict(a.witness, alphas) == _restrict(b.witness, alphas)
        assert evaluate(CONJUNCTION_1, a.witness) and evaluate(fixed, {**b.witness, beta: (4,)})
        assert isinstance(solve(wand(fixed, wnot(CONJUNCTION_1))), Unsat)
        assert isinstance(solve(wand(CONJUNCTION_1, wnot(fixed))), Unsat)
        info["detail"] = (f"reduce+decide {pipeline * 1000:.0f} ms; least solutions to length 4 coincide; "
                          f"both differences unsat; witness {dict(sorted(r.model.seq.items()))}")
        assert pipeline < 1.0


def test_criterion_2_second_worked_example():
    with criterion(2, "second worked example: Unsat", 1.0) as info:
        r = decide_given_stack_heap(STACK, HEAP_2, EXAMPLE_2)
        info["detail"] = f"verdict {r.status}"
        assert r.status == UNSAT


def _words(letters):
    return [w for n in range(4) for w in itertools.product(letters, repeat=n)]


def _bounded_models(checker, stack, heap, names, pool):
    for combo in itertools.product(pool, repeat=len(names)):
        m = Model(stack, dict(zip(names, combo)), heap)
        if checker.check(m).is_true:
            return m
    return None


def test_criterion_3_reduction_agrees_with_model_enumeration():
    rng = random.Random(1)
    base, extended = _words([1, 2, 3, NIL]), _words([1, 2, 3, NIL, 4])
    counts = {"agree": 0, "disagree": 0, "unknown": 0}
    with criterion(3, "reduction vs bounded model enumeration, 300 instances", 300.0) as info:
        for _ in range(300):
            g = FormulaGen(rng)
            f = g.formula(rng.randint(0, 6))
            stack = {v.name: rng.choice([1, 2, 3]) for v in g.prog}
            heap = random_heap(rng)
            r = decide_given_stack_heap(stack, heap, f)
            names = sorted(v.name for v in free_seq_vars(f))
            checker = Checker(f)
            found = _bounded_models(checker, stack, heap, names, base)
            if r.status == SAT:
                witness(check(r.model, f).is_true)
                if found is None:
                    # the pipeline's witness may use a letter outside the instance
                    found = _bounded_models(checker, stack, heap, names, extended)
                counts["agree" if found is not None else "unknown"] += 1
            elif r.status == UNSAT:
                counts["agree" if found is None else "disagree"] += 1
            else:
                counts["unknown"] += 1
        rate = counts["unknown"] / 300
        info["detail"] = (f"agree {counts['agree']}, disagree {counts['disagree']}, "
                          f"unknown {counts['unknown']} ({rate:.1%})")
        assert counts["disagree"] == 0
        assert rate < 0.05


class _Timeout(Exception):
    pass


def _alarm(*_):
    raise _Timeout()


def test_criterion_4_single_equation_is_equisatisfiable():
    rng = random.Random(4)
    sigma = [1, 2]
    counts = {"agree": 0, "disagree": 0, "undecided": 0}
    budget = 0.5
    previous = signal.signal(signal.SIGALRM, _alarm)
    try:
        with criterion(4, "single-equation transform equisatisfiable, 200 formulas", 120.0) as info:
            for _ in range(200):
                phi = WordGen(rng).formula(2)
                source = brute_force_solve(phi, 4, sigma)
                signal.setitimer(signal.ITIMER_REAL, budget)
                try:
                    single = to_single_equation(phi, sigma)
                    if isinstance(source, Sat):
                        lifted = lift_solution(single, source.witness)
                        ok = verify_substitution(single.equation, lifted)
                        witness(ok)
                        outcome = "agree" if ok else "disagree"
                    else:
                        r = solve(single.as_formula(), SolverConfig(max_len=6, max_nodes=20_000), sigma)
                        if isinstance(r, Unsat):
                            outcome = "agree"
                        elif isinstance(r, Sat):
                            # a solution beyond the source bound must still project to one
                            projected = {v: r.witness.get(v, ()) for v in formula_vars(phi)}
                            outcome = "agree" if verify_substitution(phi, projected) else "disagree"
                        else:
                            outcome = "undecided"
                except _Timeout:
                    outcome = "undecided"
                finally:
                    signal.setitimer(signal.ITIMER_REAL, 0)
                counts[outcome] += 1
            info["detail"] = (f"agree {counts['agree']}, disagree {counts['disagree']}, "
                              f"undecided on the transform side {counts['undecided']} "
                              f"({budget:g} s per instance)")
            assert counts["disagree"] == 0 and counts["undecided"] == 0
    finally:
        signal.signal(signal.SIGALRM, previous)


def test_criterion_5_minsky_validation():
    with criterion(5, "halting machines validate, looping machine refuted on every small chain", 120.0) as info:
        for text in (M0, M1, M3):
            v = validate(parse_machine(text), 50)
            assert v.ok, text
            witness(check(v.model, encode(parse_machine(text)), closed_world_config(v.model)).is_true)
        looping = parse_machine(M2)
        checker = Checker(encode(looping))
        total = refuted = 0
        for states, model in sapling_models(looping.n, 3, 4):
            total += 1
            refuted += bounded_check(model, checker).is_false
        info["detail"] = f"M0, M1, M3 validate; looping machine refuted on {refuted}/{total} chains"
        assert refuted == total


def test_criterion_6_sapling_ignores_circles():
    rng = random.Random(6)
    x0, x0p = PVar(FIRST), PVar(LAST)
    checkers = [Checker(sapling(x0, x0p))] + [Checker(p) for p in sapling_parts(x0, x0p)]
    stable = 0
    with criterion(6, "sapling invariant under circle injection and removal, 50 run-models", 60.0) as info:
        for _ in range(50):
            states = [(rng.randint(1, 3), rng.randint(0, 3), rng.randint(0, 3))
                      for _ in range(rng.randint(1, 3))]
            model = states_model(states)
            aug = inject_circle(model, rng.randint(1, 3))
            back = remove_cells(aug, circle_locations(aug, model))
            before = [bounded_check(model, c).value for c in checkers]
            after = [bounded_check(aug, c).value for c in checkers]
            restored = [bounded_check(back, c).value for c in checkers]
            assert before[0] is True
            assert before == after == restored
            stable += 1
        info["detail"] = f"{stable}/50 models agree on sapling and each of its four parts"


def test_criterion_7_graph_predicates():
    adj = {1: [2, 3], 2: [3], 3: [1, 4], 4: [], 5: [5, 1]}
    heap = {u: tuple(vs) + (HASH,) for u, vs in adj.items()}
    x, y = PVar("x"), PVar("y")

    def paths(u, v, n, used=()):
        # walks of n edges whose source nodes are pairwise distinct
        if n == 0:
            return u == v
        return u not in used and any(paths(w, v, n - 1, used + (u,)) for w in adj[u])

    checked = 0
    with criterion(7, "Outdeg and reach on a 5-node graph vs adjacency oracle", 30.0) as info:
        for u in adj:
            for k in range(6):
                r = check_derived(Model({"x": u}, {}, heap), Macro("Outdeg", (x, k)))
                assert r.value is (len(adj[u]) == k), (u, k)
                checked += 1
            for v in adj:
                for n in range(5):
                    r = check_derived(Model({"x": u, "y": v}, {}, heap), Macro("reach", (x, y, n)))
                    assert r.value is paths(u, v, n), (u, v, n)
                    checked += 1
        info["detail"] = f"{checked} queries agree"


def test_criterion_8_witnesses_recheck():
    rng = random.Random(8)
    with criterion(8, "every Sat/Invalid verdict comes with a re-checking model", 600.0) as info:
        for _ in range(60):
            g = FormulaGen(rng, prog=("x1", "x2"), seq=("a1",))
            f = g.formula(rng.randint(0, 3))
            r = decide_sat(f)
            if r.status == SAT:
                witness(check(r.model, f).is_true)
            matrix = g.formula(rng.randint(0, 2))
            closed = matrix
            for v in sorted(free_seq_vars(matrix) | free_program_vars(matrix), key=str):
                closed = Not(Exists(v, Not(closed)))
            v = decide_pi1_validity(closed)
            if v.status == INVALID:
                witness(check(v.countermodel, v.matrix).is_false)
        for text in (M0, M1, M3):
            machine = parse_machine(text)
            model = build_run_model(simulate(machine))
            witness(bounded_check(model, encode(machine)).is_true)
        info["detail"] = f"{WITNESSES['checked']} witnesses checked, {WITNESSES['failed']} failed"
        assert WITNESSES["failed"] == 0
