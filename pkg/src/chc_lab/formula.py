"""Formulas over the signature {in, =}.

Atoms take variables only. Variables are plain strings; the AST nodes are
frozen dataclasses so formulas hash and compare structurally.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

VAR_RE = re.compile(r"[a-z][a-z0-9]*\Z")

KEYWORDS = frozenset({"in", "not", "and", "or", "forall", "exists"})


@dataclass(frozen=True, slots=True)
class Member:
    lhs: str
    rhs: str


@dataclass(frozen=True, slots=True)
class Equal:
    lhs: str
    rhs: str


@dataclass(frozen=True, slots=True)
class Not:
    body: "Formula"


@dataclass(frozen=True, slots=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True, slots=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True, slots=True)
class Exists:
    var: str
    body: "Formula"


Atom = Union[Member, Equal]
Binary = Union[And, Or, Implies, Iff]
Quantifier = Union[Forall, Exists]
Formula = Union[Member, Equal, Not, And, Or, Implies, Iff, Forall, Exists]

ATOMS = (Member, Equal)
BINARIES = (And, Or, Implies, Iff)
QUANTIFIERS = (Forall, Exists)

BINARY_OPS = {And: "and", Or: "or", Implies: "->", Iff: "<->"}
QUANTIFIER_WORDS = {Forall: "forall", Exists: "exists"}


def is_var_name(name: str) -> bool:
    return bool(VAR_RE.match(name)) and name not in KEYWORDS


class FormulaError(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class PredicateBody:
    """A formula whose only possible free variable is ``compression_var``."""

    formula: Formula
    compression_var: str = "x"

    def __post_init__(self):
        extra = free_vars(self.formula) - {self.compression_var}
        if extra:
            raise FormulaError(
                f"predicate body has free variables besides "
                f"{self.compression_var}: {sorted(extra)}"
            )

    def __str__(self):
        return print_formula(self.formula)


# -- printing ---------------------------------------------------------------


def print_formula(f: Formula) -> str:
    """Fully parenthesized rendering; atoms print bare at the top level."""
    if isinstance(f, Member):
        return f"{f.lhs} in {f.rhs}"
    if isinstance(f, Equal):
        return f"{f.lhs} = {f.rhs}"
    if isinstance(f, Not):
        return f"not ({print_formula(f.body)})"
    if isinstance(f, BINARIES):
        op = BINARY_OPS[type(f)]
        return f"({print_formula(f.left)}) {op} ({print_formula(f.right)})"
    if isinstance(f, QUANTIFIERS):
        word = QUANTIFIER_WORDS[type(f)]
        return f"{word} {f.var}. ({print_formula(f.body)})"
    raise TypeError(f"not a formula: {f!r}")


# -- structure ----------------------------------------------------------------


def children(f: Formula) -> tuple:
    if isinstance(f, ATOMS):
        return ()
    if isinstance(f, (Not, Forall, Exists)):
        return (f.body,)
    return (f.left, f.right)


def size(f: Formula) -> int:
    """Number of AST nodes."""
    if isinstance(f, ATOMS):
        return 1
    if isinstance(f, BINARIES):
        return 1 + size(f.left) + size(f.right)
    return 1 + size(f.body)


def subformulas(f: Formula) -> Iterator[Formula]:
    """Pre-order walk over every subformula occurrence, ``f`` first."""
    yield f
    for c in children(f):
        yield from subformulas(c)


def all_vars(f: Formula) -> set[str]:
    """Every variable name occurring in ``f``, bound, free or binding."""
    if isinstance(f, ATOMS):
        return {f.lhs, f.rhs}
    if isinstance(f, QUANTIFIERS):
        return {f.var} | all_vars(f.body)
    out: set[str] = set()
    for c in children(f):
        out |= all_vars(c)
    return out


def free_vars(f: Formula) -> set[str]:
    if isinstance(f, ATOMS):
        return {f.lhs, f.rhs}
    if isinstance(f, QUANTIFIERS):
        return free_vars(f.body) - {f.var}
    if isinstance(f, Not):
        return free_vars(f.body)
    return free_vars(f.left) | free_vars(f.right)


def rebuild(f: Formula, kids) -> Formula:
    """Same node type as ``f`` with new children."""
    if isinstance(f, Not):
        return Not(kids[0])
    if isinstance(f, BINARIES):
        return type(f)(kids[0], kids[1])
    if isinstance(f, QUANTIFIERS):
        return type(f)(f.var, kids[0])
    return f


def fresh_name(base: str, avoid) -> str:
    """``base`` followed by the smallest numeric suffix not in ``avoid``."""
    stem = base.rstrip("0123456789") or "v"
    i = 1
    while f"{stem}{i}" in avoid:
        i += 1
    return f"{stem}{i}"


def rename_free(f: Formula, mapping: dict[str, str]) -> Formula:
    """Simultaneous renaming of free variables; callers ensure no capture."""
    if not mapping:
        return f
    if isinstance(f, Member):
        return Member(mapping.get(f.lhs, f.lhs), mapping.get(f.rhs, f.rhs))
    if isinstance(f, Equal):
        return Equal(mapping.get(f.lhs, f.lhs), mapping.get(f.rhs, f.rhs))
    if isinstance(f, QUANTIFIERS):
        inner = {k: v for k, v in mapping.items() if k != f.var}
        return type(f)(f.var, rename_free(f.body, inner))
    return rebuild(f, [rename_free(c, mapping) for c in children(f)])


def substitute(f: Formula, v: str, w: str) -> Formula:
    """Replace free occurrences of ``v`` by ``w`` without capturing ``w``.

    A binder that would capture ``w`` is renamed to ``<name><k>`` with the
    smallest ``k`` that is fresh for the whole subtree.
    """
    if v == w:
        return f
    if isinstance(f, Member):
        return Member(w if f.lhs == v else f.lhs, w if f.rhs == v else f.rhs)
    if isinstance(f, Equal):
        return Equal(w if f.lhs == v else f.lhs, w if f.rhs == v else f.rhs)
    if isinstance(f, QUANTIFIERS):
        if f.var == v or v not in free_vars(f.body):
            return f
        if f.var == w:
            new = fresh_name(f.var, all_vars(f.body) | {v, w})
            body = rename_free(f.body, {f.var: new})
            return type(f)(new, substitute(body, v, w))
        return type(f)(f.var, substitute(f.body, v, w))
    return rebuild(f, [substitute(c, v, w) for c in children(f)])


# -- alpha-equivalence --------------------------------------------------------


def alpha_canonical(f: Formula, prefix: str = "y") -> Formula:
    """Rename binders to ``y1, y2, ...`` in pre-order binder order.

    Names that clash with a free variable of ``f`` are skipped, so the
    result is alpha-equivalent to ``f``.
    """
    taken = free_vars(f)
    counter = [0]

    def next_name():
        while True:
            counter[0] += 1
            name = f"{prefix}{counter[0]}"
            if name not in taken:
                return name

    def go(g, env):
        if isinstance(g, Member):
            return Member(env.get(g.lhs, g.lhs), env.get(g.rhs, g.rhs))
        if isinstance(g, Equal):
            return Equal(env.get(g.lhs, g.lhs), env.get(g.rhs, g.rhs))
        if isinstance(g, QUANTIFIERS):
            name = next_name()
            return type(g)(name, go(g.body, {**env, g.var: name}))
        return rebuild(g, [go(c, env) for c in children(g)])

    return go(f, {})


def alpha_equal(f: Formula, g: Formula) -> bool:
    return alpha_canonical(f) == alpha_canonical(g)


def close_universally(f: Formula, keep: str = "x") -> Formula:
    """Bind every free variable other than ``keep`` with ``forall``.

    The binders are added in sorted name order, innermost first.
    """
    for name in sorted(free_vars(f) - {keep}, reverse=True):
        f = Forall(name, f)
    return f


def designated_subformulas(p: PredicateBody) -> list[PredicateBody]:
    """Every subformula occurrence of ``p`` made into a predicate body.

    Free variables other than the compression variable are universally
    closed; results are deduplicated by alpha-canonical form, keeping the
    first occurrence in pre-order (so ``p`` itself comes first).
    """
    seen = set()
    out = []
    for sub in subformulas(p.formula):
        body = close_universally(sub, p.compression_var)
        key = alpha_canonical(body)
        if key in seen:
            continue
        seen.add(key)
        out.append(PredicateBody(body, p.compression_var))
    return out


def strip_double_negations(f: Formula) -> Formula:
    if isinstance(f, Not) and isinstance(f.body, Not):
        return strip_double_negations(f.body.body)
    if isinstance(f, ATOMS):
        return f
    return rebuild(f, [strip_double_negations(c) for c in children(f)])


def has_double_negation(f: Formula) -> bool:
    return any(isinstance(g, Not) and isinstance(g.body, Not) for g in subformulas(f))
