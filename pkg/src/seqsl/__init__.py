"""Separation logic over heaps whose cells hold sequences.

Submodules: ``syntax``/``parser``/``printer`` for formulas, ``heap`` for
models, ``semantics`` for model checking, ``wordeq`` for word equations,
``decider`` for the propositional decision procedure, ``minsky`` for the
two-counter machine encoding, and ``cli`` for the command-line tool.
"""
__version__ = "0.1.0"
