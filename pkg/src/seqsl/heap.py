"""Stacks, sequence assignments and heaps, with term evaluation and heap algebra.

A heap is a plain ``dict`` from natural locations to cell contents.  Ground
heaps store tuples of values; symbolic heaps (used by the reduction) store
sequence terms.  The helpers here only look at the domain, so they serve both.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .syntax import (HASH, NIL, Atom, Concat, Const, Eps, PVar, SVar,
                     format_value, is_nat)


class UnboundVariable(KeyError):
    pass


class ModelFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Model:
    stack: dict = field(default_factory=dict)
    seq: dict = field(default_factory=dict)
    heap: dict = field(default_factory=dict)

    def with_heap(self, heap: dict) -> "Model":
        return Model(self.stack, self.seq, heap)

    def bind(self, var, value) -> "Model":
        if isinstance(var, PVar):
            return Model({**self.stack, var.name: value}, self.seq, self.heap)
        return Model(self.stack, {**self.seq, var.name: tuple(value)}, self.heap)


def eval_ind_term(model: Model, t):
    if isinstance(t, Const):
        return t.value
    if isinstance(t, PVar):
        try:
            return model.stack[t.name]
        except KeyError:
            raise UnboundVariable(t.name) from None
    raise TypeError(f"not an individual term: {t!r}")


def eval_seq_term(model: Model, t) -> tuple:
    if isinstance(t, Eps):
        return ()
    if isinstance(t, (Const, PVar)):
        return (eval_ind_term(model, t),)
    if isinstance(t, SVar):
        try:
            return tuple(model.seq[t.name])
        except KeyError:
            raise UnboundVariable("@" + t.name) from None
    if isinstance(t, Concat):
        return eval_seq_term(model, t.left) + eval_seq_term(model, t.right)
    raise TypeError(f"not a sequence term: {t!r}")


def disjoint_union(h1: dict, h2: dict):
    """``h1 ⊎ h2``, or None when the domains overlap."""
    if h1.keys() & h2.keys():
        return None
    return {**h1, **h2}


def heap_splits(h: dict) -> list:
    """All ``(h1, h2)`` with ``h1 ⊎ h2 = h``; bit i of the counter puts the i-th smallest location in ``h1``."""
    dom = sorted(h)
    out = []
    for mask in range(1 << len(dom)):
        h1, h2 = {}, {}
        for i, loc in enumerate(dom):
            (h1 if mask >> i & 1 else h2)[loc] = h[loc]
        out.append((h1, h2))
    return out


# -- JSON format ----------------------------------------------------------------

def _read_value(v, where: str):
    if isinstance(v, bool):
        raise ModelFormatError(f"{where}: booleans are not values")
    if isinstance(v, int) and v >= 0:
        return v
    if v == "nil":
        return NIL
    if v == "#":
        return HASH
    raise ModelFormatError(f"{where}: expected a natural, \"nil\" or \"#\", got {v!r}")


def _read_list(v, where: str) -> tuple:
    if not isinstance(v, list):
        raise ModelFormatError(f"{where}: expected an array")
    return tuple(_read_value(x, f"{where}[{i}]") for i, x in enumerate(v))


def model_from_dict(doc) -> Model:
    if not isinstance(doc, dict):
        raise ModelFormatError("a model is a JSON object")
    extra = set(doc) - {"stack", "seq", "heap"}
    if extra:
        raise ModelFormatError(f"unknown keys {sorted(extra)}")
    stack, seq, heap = doc.get("stack", {}), doc.get("seq", {}), doc.get("heap", {})
    for name, part in (("stack", stack), ("seq", seq), ("heap", heap)):
        if not isinstance(part, dict):
            raise ModelFormatError(f"{name!r} must be an object")
    s = {k: _read_value(v, f"stack.{k}") for k, v in stack.items()}
    a = {}
    for k, v in seq.items():
        if not k.startswith("@") or len(k) < 2:
            raise ModelFormatError(f"sequence variable {k!r} must start with '@'")
        a[k[1:]] = _read_list(v, f"seq.{k}")
    h = {}
    for k, v in heap.items():
        if not (isinstance(k, str) and k.isdigit()):
            raise ModelFormatError(f"heap key {k!r} is not a location")
        loc = int(k)
        if loc < 1:
            raise ModelFormatError("heap locations start at 1")
        h[loc] = _read_list(v, f"heap.{k}")
    return Model(s, a, h)


def _write_value(v):
    return v.value if isinstance(v, Atom) else v


def model_to_dict(model: Model) -> dict:
    return {
        "stack": {k: _write_value(v) for k, v in sorted(model.stack.items())},
        "seq": {"@" + k: [_write_value(x) for x in v] for k, v in sorted(model.seq.items())},
        "heap": {str(k): [_write_value(x) for x in v] for k, v in sorted(model.heap.items())},
    }


def parse_model(text: str) -> Model:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelFormatError(f"malformed JSON: {e}") from None
    return model_from_dict(doc)


def print_model(model: Model) -> str:
    return json.dumps(model_to_dict(model), indent=2)


def format_model(model: Model) -> str:
    """One-line human-readable rendering."""
    def seq(v):
        return "[" + ", ".join(format_value(x) for x in v) + "]"
    parts = [f"{k}={format_value(v)}" for k, v in sorted(model.stack.items())]
    parts += [f"@{k}={seq(v)}" for k, v in sorted(model.seq.items())]
    heap = ", ".join(f"{k}: {seq(v)}" for k, v in sorted(model.heap.items()))
    return "; ".join(parts + ["heap {" + heap + "}"])


def mentioned_nats(model: Model) -> set:
    out = {v for v in model.stack.values() if is_nat(v)}
    for v in model.seq.values():
        out |= {x for x in v if is_nat(x)}
    for k, v in model.heap.items():
        out.add(k)
        out |= {x for x in v if is_nat(x)}
    return out
