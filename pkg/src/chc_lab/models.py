"""Finite model search: ground over a domain ``0..n-1`` and solve with DPLL.

The only unknowns are the ``n*n`` membership cells; equality between
domain elements is identity. Cell ``(i, j)`` (meaning ``i in j``) is the
propositional variable ``i*n + j + 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Optional, Union

from .formula import And, Equal, Exists, Forall, Iff, Implies, Member, Not, Or

DEFINITION_THRESHOLD = 5000


class ModelFinderError(RuntimeError):
    """A decoded model failed re-verification; the grounder is wrong."""


@dataclass(frozen=True)
class Model:
    size: int
    membership: tuple  # membership[i][j] is True iff i in j

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("model size must be at least 1")
        if len(self.membership) != self.size or any(
            len(row) != self.size for row in self.membership
        ):
            raise ValueError("membership table does not match model size")

    @classmethod
    def from_rows(cls, rows) -> "Model":
        rows = tuple(tuple(bool(c) for c in row) for row in rows)
        return cls(len(rows), rows)

    def to_text(self) -> str:
        lines = [f"n={self.size}"]
        lines += ["".join("1" if c else "0" for c in row) for row in self.membership]
        return "\n".join(lines) + "\n"

    def rows(self) -> list[str]:
        return ["".join("1" if c else "0" for c in row) for row in self.membership]


@dataclass(frozen=True)
class NoneUpTo:
    max_size: int


@dataclass
class GroundClauseSet:
    size: int
    variables: int
    clauses: list

    @property
    def cell_variables(self) -> int:
        return self.size * self.size


def cell(n: int, i: int, j: int) -> int:
    return i * n + j + 1


# -- grounding ---------------------------------------------------------------
#
# Ground NNF nodes: True, False, an int literal, ("and", [..]) or ("or", [..]).


def _mk(op, parts):
    unit, zero = (True, False) if op == "and" else (False, True)
    flat = []
    for p in parts:
        if p is zero:
            return zero
        if p is unit:
            continue
        if isinstance(p, tuple) and p[0] == op:
            flat.extend(p[1])
        else:
            flat.append(p)
    if not flat:
        return unit
    if len(flat) == 1:
        return flat[0]
    return (op, flat)


def _expand(f, env, n, positive):
    if isinstance(f, Member):
        lit = cell(n, env[f.lhs], env[f.rhs])
        return lit if positive else -lit
    if isinstance(f, Equal):
        return (env[f.lhs] == env[f.rhs]) == positive
    if isinstance(f, Not):
        return _expand(f.body, env, n, not positive)
    if isinstance(f, (And, Or)):
        op = "and" if isinstance(f, And) == positive else "or"
        return _mk(op, [_expand(f.left, env, n, positive), _expand(f.right, env, n, positive)])
    if isinstance(f, Implies):
        op = "or" if positive else "and"
        return _mk(op, [_expand(f.left, env, n, not positive), _expand(f.right, env, n, positive)])
    if isinstance(f, Iff):
        a, b = f.left, f.right
        if positive:
            return _mk("and", [
                _mk("or", [_expand(a, env, n, False), _expand(b, env, n, True)]),
                _mk("or", [_expand(a, env, n, True), _expand(b, env, n, False)]),
            ])
        return _mk("and", [
            _mk("or", [_expand(a, env, n, True), _expand(b, env, n, True)]),
            _mk("or", [_expand(a, env, n, False), _expand(b, env, n, False)]),
        ])
    if isinstance(f, (Forall, Exists)):
        op = "and" if isinstance(f, Forall) == positive else "or"
        return _mk(op, [_expand(f.body, {**env, f.var: d}, n, positive) for d in range(n)])
    raise TypeError(f"not a formula: {f!r}")


class _CNF:
    def __init__(self, first_free: int, threshold: int):
        self.next_var = first_free
        self.threshold = threshold
        self.extra: list = []

    def define(self, clauses):
        """Fresh ``d`` with ``d -> clauses``; returns the unit ``[[d]]``."""
        self.next_var += 1
        d = self.next_var
        self.extra.extend([-d] + c for c in clauses)
        return [[d]]

    def convert(self, node) -> list:
        if node is True:
            return []
        if node is False:
            return [[]]
        if isinstance(node, int):
            return [[node]]
        op, parts = node
        if op == "and":
            out = []
            for p in parts:
                out.extend(self.convert(p))
            return out
        acc = [[]]
        for p in parts:
            cnf = self.convert(p)
            cost = len(acc) * len(cnf) * (max(map(len, acc)) + max(map(len, cnf), default=0))
            if len(cnf) > 1 and cost > self.threshold:
                cnf = self.define(cnf)
                cost = len(acc) * (max(map(len, acc)) + 1)
            if len(acc) > 1 and cost > self.threshold:
                acc = self.define(acc)
            acc = [a + c for a in acc for c in cnf]
        return acc


def _tidy(clause):
    lits = sorted(set(clause), key=lambda l: (abs(l), l))
    s = set(lits)
    if any(-l in s for l in lits):
        return None
    return lits


def ground(sentences, n: int, threshold: int = DEFINITION_THRESHOLD) -> GroundClauseSet:
    if n < 1:
        raise ValueError("domain size must be at least 1")
    tree = _mk("and", [
        _expand(s.formula if hasattr(s, "formula") else s, {}, n, True) for s in sentences
    ])
    conv = _CNF(n * n, threshold)
    raw = conv.convert(tree) + conv.extra
    clauses = []
    seen = set()
    for c in raw:
        c = _tidy(c)
        if c is None:
            continue
        key = tuple(c)
        if key not in seen:
            seen.add(key)
            clauses.append(c)
    return GroundClauseSet(n, conv.next_var, clauses)


# -- DPLL ------------------------------------------------------------------------


def sat_solve(g: Union[GroundClauseSet, list], variables: Optional[int] = None):
    """Backtracking search with unit propagation.

    Branches on the lowest-numbered unassigned variable, trying false first.
    Returns a dict ``var -> bool`` over every variable, or ``None`` if unsat.
    """
    if isinstance(g, GroundClauseSet):
        clauses, variables = g.clauses, g.variables
    else:
        clauses = g
        if variables is None:
            variables = max((abs(l) for c in clauses for l in c), default=0)
    clauses = [list(c) for c in clauses]
    if any(not c for c in clauses):
        return None

    watches: dict[int, list] = {}
    units = []
    for idx, c in enumerate(clauses):
        if len(c) == 1:
            units.append(c[0])
        else:
            watches.setdefault(c[0], []).append(idx)
            watches.setdefault(c[1], []).append(idx)

    value: dict[int, bool] = {}
    trail: list[int] = []

    def lit_value(l):
        v = value.get(abs(l))
        if v is None:
            return None
        return v == (l > 0)

    def assign(l):
        value[abs(l)] = l > 0
        trail.append(abs(l))

    def propagate(queue):
        while queue:
            l = queue.pop()
            cur = lit_value(l)
            if cur is False:
                return False
            if cur is True:
                continue
            assign(l)
            false_lit = -l
            watching = watches.get(false_lit, [])
            keep = []
            conflict = False
            for k, idx in enumerate(watching):
                if conflict:
                    keep.append(idx)
                    continue
                c = clauses[idx]
                if c[0] == false_lit:
                    c[0], c[1] = c[1], c[0]
                if lit_value(c[0]) is True:
                    keep.append(idx)
                    continue
                for m in range(2, len(c)):
                    if lit_value(c[m]) is not False:
                        c[1], c[m] = c[m], c[1]
                        watches.setdefault(c[1], []).append(idx)
                        break
                else:
                    keep.append(idx)
                    other = lit_value(c[0])
                    if other is False:
                        conflict = True
                    elif other is None:
                        queue.append(c[0])
            watches[false_lit] = keep
            if conflict:
                return False
        return True

    def undo(mark):
        while len(trail) > mark:
            del value[trail.pop()]

    if not propagate(list(reversed(units))):
        return None

    # Each frame is (trail mark, variable, true phase already tried).
    stack = []
    while True:
        var = next((v for v in range(1, variables + 1) if v not in value), None)
        if var is None:
            return {v: value[v] for v in range(1, variables + 1)}
        mark = len(trail)
        stack.append((mark, var, False))
        if propagate([-var]):
            continue
        while True:
            if not stack:
                return None
            mark, var, tried = stack.pop()
            undo(mark)
            if tried:
                continue
            stack.append((mark, var, True))
            if propagate([var]):
                break


# -- evaluation ------------------------------------------------------------------


def evaluate(f, model: Model, env=None) -> bool:
    """Truth of ``f`` in ``model`` by direct recursion over the domain."""
    env = {} if env is None else env
    if isinstance(f, Member):
        return model.membership[env[f.lhs]][env[f.rhs]]
    if isinstance(f, Equal):
        return env[f.lhs] == env[f.rhs]
    if isinstance(f, Not):
        return not evaluate(f.body, model, env)
    if isinstance(f, And):
        return evaluate(f.left, model, env) and evaluate(f.right, model, env)
    if isinstance(f, Or):
        return evaluate(f.left, model, env) or evaluate(f.right, model, env)
    if isinstance(f, Implies):
        return (not evaluate(f.left, model, env)) or evaluate(f.right, model, env)
    if isinstance(f, Iff):
        return evaluate(f.left, model, env) == evaluate(f.right, model, env)
    if isinstance(f, Forall):
        return all(evaluate(f.body, model, {**env, f.var: d}) for d in range(model.size))
    if isinstance(f, Exists):
        return any(evaluate(f.body, model, {**env, f.var: d}) for d in range(model.size))
    raise TypeError(f"not a formula: {f!r}")


def eval_sentence(sentence, model: Model) -> bool:
    return evaluate(sentence.formula if hasattr(sentence, "formula") else sentence, model)


def all_models(n: int):
    """Every membership table over ``n`` elements, in binary counting order."""
    for bits in product((False, True), repeat=n * n):
        yield Model(n, tuple(tuple(bits[i * n:(i + 1) * n]) for i in range(n)))


# -- search ----------------------------------------------------------------------


def find_model(sentences, max_size: int, min_size: int = 1):
    """Smallest model of size ``min_size..max_size``, or ``NoneUpTo``."""
    if max_size < 1:
        raise ValueError("max_size must be at least 1")
    sentences = list(sentences)
    for n in range(min_size, max_size + 1):
        g = ground(sentences, n)
        assignment = sat_solve(g)
        if assignment is None:
            continue
        model = Model(n, tuple(
            tuple(assignment[cell(n, i, j)] for j in range(n)) for i in range(n)
        ))
        for s in sentences:
            if not eval_sentence(s, model):
                raise ModelFinderError(f"decoded model at n={n} falsifies {s}")
        return model
    return NoneUpTo(max_size)
