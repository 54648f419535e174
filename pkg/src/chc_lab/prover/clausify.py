"""Sentences to clauses: NNF, Skolemization, CNF, equality axioms."""

from __future__ import annotations

from itertools import product

from ..formula import (
    And,
    Equal,
    Exists,
    Forall,
    Iff,
    Implies,
    Member,
    Not,
    Or,
    subformulas,
)
from .terms import EQ, IN, clause_vars, is_tautology, normalize

# Internal NNF nodes: ("lit", literal), ("and", a, b), ("or", a, b),
# ("all", var, body), ("ex", var, body). Literals carry variable names from the
# source formula until Skolemization replaces them with terms.


def _nnf(f, positive=True):
    if isinstance(f, Member):
        return ("lit", (positive, IN, f.lhs, f.rhs))
    if isinstance(f, Equal):
        return ("lit", (positive, EQ, f.lhs, f.rhs))
    if isinstance(f, Not):
        return _nnf(f.body, not positive)
    if isinstance(f, And):
        op = "and" if positive else "or"
        return (op, _nnf(f.left, positive), _nnf(f.right, positive))
    if isinstance(f, Or):
        op = "or" if positive else "and"
        return (op, _nnf(f.left, positive), _nnf(f.right, positive))
    if isinstance(f, Implies):
        if positive:
            return ("or", _nnf(f.left, False), _nnf(f.right, True))
        return ("and", _nnf(f.left, True), _nnf(f.right, False))
    if isinstance(f, Iff):
        if positive:
            return (
                "and",
                ("or", _nnf(f.left, False), _nnf(f.right, True)),
                ("or", _nnf(f.left, True), _nnf(f.right, False)),
            )
        return (
            "and",
            ("or", _nnf(f.left, True), _nnf(f.right, True)),
            ("or", _nnf(f.left, False), _nnf(f.right, False)),
        )
    if isinstance(f, Forall):
        return ("all" if positive else "ex", f.var, _nnf(f.body, positive))
    if isinstance(f, Exists):
        return ("ex" if positive else "all", f.var, _nnf(f.body, positive))
    raise TypeError(f"not a formula: {f!r}")


def _free(node, bound=frozenset()):
    kind = node[0]
    if kind == "lit":
        _, _, a, b = node[1]
        return {v for v in (a, b) if v not in bound}
    if kind in ("all", "ex"):
        return _free(node[2], bound | {node[1]})
    return _free(node[1], bound) | _free(node[2], bound)


class _Skolemizer:
    def __init__(self):
        self.counter = 0
        self.var_counter = 0
        self.functions: dict[str, int] = {}

    def fresh_symbol(self, arity):
        self.counter += 1
        name = f"sk{self.counter}"
        self.functions[name] = arity
        return name

    def fresh_var(self):
        self.var_counter += 1
        return f"V{self.var_counter}"

    def run(self, node, env, universals):
        """Return a quantifier-free tree of ("lit"|"and"|"or") nodes.

        ``env`` maps source variables to terms; ``universals`` lists the
        clause variables of enclosing universal quantifiers, outermost first.
        """
        kind = node[0]
        if kind == "lit":
            pos, pred, a, b = node[1]
            return ("lit", (pos, pred, env[a], env[b]))
        if kind == "all":
            v = self.fresh_var()
            return self.run(node[2], {**env, node[1]: v}, universals + [v])
        if kind == "ex":
            # Only universals that actually reach the body become arguments.
            used = set()
            for name in _free(node):
                t = env[name]
                used.update(clause_vars([(True, IN, t, t)]))
            args = tuple(u for u in universals if u in used)
            sym = self.fresh_symbol(len(args))
            return self.run(node[2], {**env, node[1]: (sym,) + args}, universals)
        return (kind, self.run(node[1], env, universals), self.run(node[2], env, universals))


def _cnf(node):
    kind = node[0]
    if kind == "lit":
        return [[node[1]]]
    left = _cnf(node[1])
    right = _cnf(node[2])
    if kind == "and":
        return left + right
    return [a + b for a, b in product(left, right)]


def equality_axioms(functions: dict[str, int]) -> list[tuple]:
    X, Y, Z = "X", "Y", "Z"
    raw = [
        [(True, EQ, X, X)],
        [(False, EQ, X, Y), (True, EQ, Y, X)],
        [(False, EQ, X, Y), (False, EQ, Y, Z), (True, EQ, X, Z)],
        [(False, EQ, X, Y), (False, IN, X, Z), (True, IN, Y, Z)],
        [(False, EQ, X, Y), (False, IN, Z, X), (True, IN, Z, Y)],
    ]
    for sym in sorted(functions):
        arity = functions[sym]
        others = [f"A{i}" for i in range(arity)]
        for pos in range(arity):
            left = list(others)
            right = list(others)
            left[pos] = X
            right[pos] = Y
            raw.append(
                [(False, EQ, X, Y), (True, EQ, (sym, *left), (sym, *right))]
            )
    return [normalize(c) for c in raw]


def clausify(sentences, with_equality_axioms: bool = True):
    """Clauses for a list of sentences, Skolem symbols shared across them.

    Returns the clause list; equality axioms are appended when requested and
    some input mentions ``=``.
    """
    sk = _Skolemizer()
    clauses = []
    seen = set()
    uses_eq = False
    for s in sentences:
        f = s.formula if hasattr(s, "formula") else s
        uses_eq = uses_eq or any(isinstance(g, Equal) for g in subformulas(f))
        qfree = sk.run(_nnf(f), {}, [])
        for raw in _cnf(qfree):
            if is_tautology(raw):
                continue
            # ~(t = t) is false under any reading of equality
            raw = [l for l in raw if l[0] or l[1] != EQ or l[2] != l[3]]
            c = normalize(raw)
            if c not in seen:
                seen.add(c)
                clauses.append(c)
    if with_equality_axioms and uses_eq:
        for c in equality_axioms(sk.functions):
            if c not in seen:
                seen.add(c)
                clauses.append(c)
    return clauses


def skolem_functions(clauses) -> dict[str, int]:
    """Skolem symbols with their arities, as they occur in ``clauses``."""
    out: dict[str, int] = {}

    def visit(t):
        if isinstance(t, str):
            return
        if t[0].startswith("sk"):
            out[t[0]] = len(t) - 1
        for a in t[1:]:
            visit(a)

    for c in clauses:
        for lit in c:
            visit(lit[2])
            visit(lit[3])
    return out
