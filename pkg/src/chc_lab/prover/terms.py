"""First-order terms, literals and clauses for the refutation engine.

Representation is deliberately flat so the saturation loop stays fast:

* a variable is a ``str`` starting with an upper-case letter (``X0``);
* an application is a tuple ``(symbol, *args)``; constants are ``(symbol,)``;
* a literal is ``(positive, pred, lhs, rhs)`` with ``pred`` in ``{"in", "="}``;
* a clause is a sorted tuple of distinct literals.
"""

from __future__ import annotations

from typing import Optional

IN = "in"
EQ = "="


def is_var(t) -> bool:
    return isinstance(t, str)


def term_str(t) -> str:
    if isinstance(t, str):
        return t
    if len(t) == 1:
        return t[0]
    return f"{t[0]}({','.join(term_str(a) for a in t[1:])})"


def literal_str(lit) -> str:
    pos, pred, a, b = lit
    atom = f"{term_str(a)} {pred} {term_str(b)}"
    return atom if pos else f"~({atom})"


def clause_str(clause) -> str:
    if not clause:
        return "$false"
    return " | ".join(literal_str(lit) for lit in clause)


def subst_str(subst: dict) -> str:
    body = ", ".join(f"{v} -> {term_str(subst[v])}" for v in sorted(subst))
    return "{" + body + "}"


def term_depth(t) -> int:
    if isinstance(t, str) or len(t) == 1:
        return 1
    return 1 + max(term_depth(a) for a in t[1:])


def clause_depth(clause) -> int:
    return max((max(term_depth(l[2]), term_depth(l[3])) for l in clause), default=0)


def term_weight(t) -> int:
    if isinstance(t, str):
        return 1
    return 1 + sum(term_weight(a) for a in t[1:])


def clause_weight(clause) -> int:
    return sum(1 + term_weight(l[2]) + term_weight(l[3]) for l in clause)


def term_vars(t, out: list):
    if isinstance(t, str):
        if t not in out:
            out.append(t)
    else:
        for a in t[1:]:
            term_vars(a, out)


def clause_vars(clause) -> list:
    out: list = []
    for lit in clause:
        term_vars(lit[2], out)
        term_vars(lit[3], out)
    return out


# -- substitution and unification ---------------------------------------------


def walk(t, subst):
    while isinstance(t, str) and t in subst:
        t = subst[t]
    return t


def apply(t, subst):
    """Apply a (possibly triangular) substitution fully."""
    if isinstance(t, str):
        if t in subst:
            return apply(subst[t], subst)
        return t
    if len(t) == 1:
        return t
    return (t[0],) + tuple(apply(a, subst) for a in t[1:])


def occurs(v, t, subst) -> bool:
    t = walk(t, subst)
    if isinstance(t, str):
        return t == v
    return any(occurs(v, a, subst) for a in t[1:])


def unify(a, b, subst: Optional[dict] = None) -> Optional[dict]:
    """Most general unifier extending ``subst`` (triangular), or ``None``."""
    subst = {} if subst is None else dict(subst)
    stack = [(a, b)]
    while stack:
        s, t = stack.pop()
        s = walk(s, subst)
        t = walk(t, subst)
        if s == t:
            continue
        if isinstance(s, str):
            if occurs(s, t, subst):
                return None
            subst[s] = t
        elif isinstance(t, str):
            if occurs(t, s, subst):
                return None
            subst[t] = s
        else:
            if s[0] != t[0] or len(s) != len(t):
                return None
            stack.extend(zip(s[1:], t[1:]))
    return subst


def resolve_subst(subst: dict) -> dict:
    """Idempotent form of a triangular substitution."""
    return {v: apply(t, subst) for v, t in subst.items()}


def apply_literal(lit, subst):
    return (lit[0], lit[1], apply(lit[2], subst), apply(lit[3], subst))


# -- normal form ----------------------------------------------------------------


def _mask(t):
    if isinstance(t, str):
        return "?"
    return term_str(t) if len(t) == 1 else (t[0], tuple(_mask(a) for a in t[1:]))


def _lit_key(lit):
    return (not lit[0], lit[1], term_str(lit[2]), term_str(lit[3]))


def _shape_key(lit):
    return (not lit[0], lit[1], repr(_mask(lit[2])), repr(_mask(lit[3])))


def rename(t, mapping):
    if isinstance(t, str):
        return mapping.get(t, t)
    if len(t) == 1:
        return t
    return (t[0],) + tuple(rename(a, mapping) for a in t[1:])


def normalize(literals) -> tuple:
    """Deduplicate, rename variables to ``X0, X1, ...`` and sort.

    Variables are numbered in order of first appearance after sorting by a
    variable-blind key, so variants usually normalize identically.
    """
    lits = sorted(set(literals), key=lambda l: (_shape_key(l), _lit_key(l)))
    mapping = {v: f"X{i}" for i, v in enumerate(clause_vars(lits))}
    out = {(l[0], l[1], rename(l[2], mapping), rename(l[3], mapping)) for l in lits}
    return tuple(sorted(out, key=_lit_key))


def is_tautology(clause) -> bool:
    pos = {l[1:] for l in clause if l[0]}
    for l in clause:
        if not l[0] and l[1:] in pos:
            return True
        if l[0] and l[1] == EQ and l[2] == l[3]:
            return True
    return False


def rename_apart(clause, prefix="Y"):
    """Rename clause variables ``X<k>`` to ``<prefix><k>``."""
    mapping = {v: prefix + v[1:] for v in clause_vars(clause)}
    return tuple((l[0], l[1], rename(l[2], mapping), rename(l[3], mapping)) for l in clause)


# -- subsumption -----------------------------------------------------------------


def _match(pattern, target, subst):
    if isinstance(pattern, str):
        bound = subst.get(pattern)
        if bound is None:
            subst[pattern] = target
            return True
        return bound == target
    if isinstance(target, str) or pattern[0] != target[0] or len(pattern) != len(target):
        return False
    return all(_match(p, t, subst) for p, t in zip(pattern[1:], target[1:]))


def subsumes(c, d) -> bool:
    """True if some instance of ``c`` is a subset of ``d``.

    ``c`` and ``d`` must not share variables in a way that matters; callers
    pass ``d`` with variables treated as constants.
    """
    if len(c) > len(d):
        return False

    def go(i, subst):
        if i == len(c):
            return True
        lit = c[i]
        for cand in d:
            if cand[0] != lit[0] or cand[1] != lit[1]:
                continue
            trial = dict(subst)
            if _match(lit[2], cand[2], trial) and _match(lit[3], cand[3], trial):
                if go(i + 1, trial):
                    return True
        return False

    return go(0, {})
