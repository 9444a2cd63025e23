"""Exhaustive bounded search over substitutions; the independent oracle."""
from __future__ import annotations

import itertools
from typing import Iterator, Sequence

from .formula import evaluate, formula_vars, hoist_exists, letter_key, nnf
from .verdict import Sat, Unknown, Unsat


def words_upto(alphabet: Sequence, max_len: int) -> Iterator[tuple]:
    """All words of length <= ``max_len`` in shortlex order."""
    for n in range(max_len + 1):
        yield from itertools.product(alphabet, repeat=n)


def brute_force_solve(phi, max_len: int, alphabet: Sequence):
    """Least solution with every value of length <= ``max_len``.

    Variables are enumerated in name order, each over words in shortlex
    order, so the first hit is the least witness in that product order.
    Ground formulas are decided exactly; otherwise a miss is reported as
    ``Unknown(max_len)``.
    """
    bound, matrix = hoist_exists(nnf(phi))
    variables = sorted(formula_vars(matrix), key=lambda v: v.name)
    if not variables:
        return Sat({}) if evaluate(matrix, {}) else Unsat()
    sigma = sorted(set(alphabet), key=letter_key)
    words = list(words_upto(sigma, max_len))
    for combo in itertools.product(words, repeat=len(variables)):
        sub = dict(zip(variables, combo))
        if evaluate(matrix, sub):
            return Sat(sub)
    return Unknown(f"no solution with lengths <= {max_len}", max_len)


def count_solutions(phi, max_len: int, alphabet: Sequence) -> int:
    bound, matrix = hoist_exists(nnf(phi))
    variables = sorted(formula_vars(matrix), key=lambda v: v.name)
    sigma = sorted(set(alphabet), key=letter_key)
    words = list(words_upto(sigma, max_len))
    return sum(1 for combo in itertools.product(words, repeat=len(variables))
               if evaluate(matrix, dict(zip(variables, combo))))
