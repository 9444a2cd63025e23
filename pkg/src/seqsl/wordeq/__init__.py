"""Word equations: formulas, solver, brute-force oracle and single-equation compiler."""
from .brute import brute_force_solve, count_solutions, words_upto
from .formula import (W_FALSE, W_TRUE, WAnd, WEq, WExists, WFalse, WNot, WOr,
                      WTrue, evaluate, format_substitution, format_word,
                      format_word_formula, formula_vars, nnf, verify_substitution,
                      wand, wimplies, wnot, wor)
from .parse import WordParseError, parse_word_formula
from .solver import SolverConfig, solve
from .transform import AlphabetTooSmall, SingleEquation, lift_solution, to_single_equation
from .verdict import Sat, Unknown, Unsat

__all__ = [
    "AlphabetTooSmall", "Sat", "SingleEquation", "SolverConfig", "Unknown", "Unsat",
    "W_FALSE", "W_TRUE", "WAnd", "WEq", "WExists", "WFalse", "WNot", "WOr", "WTrue",
    "WordParseError", "brute_force_solve", "count_solutions", "evaluate",
    "format_substitution", "format_word", "format_word_formula", "formula_vars",
    "lift_solution", "nnf", "parse_word_formula", "solve", "to_single_equation",
    "verify_substitution", "wand", "wimplies", "wnot", "wor", "words_upto",
]
