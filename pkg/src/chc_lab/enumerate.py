"""Exhaustive generation of predicate bodies in size order.

Bodies are built directly in alpha-canonical form (binders named ``y1, y2,
...`` in pre-order), so each alpha-equivalence class appears once without a
dedup pass. Trees containing a double negation are skipped.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

from .formula import (
    And,
    Equal,
    Exists,
    Forall,
    Iff,
    Implies,
    Member,
    Not,
    Or,
    PredicateBody,
    print_formula,
)

CONNECTIVES = ("not", "and", "or", "->", "<->", "forall", "exists")
_BINARY = {"and": And, "or": Or, "->": Implies, "<->": Iff}
_QUANT = {"forall": Forall, "exists": Exists}

@dataclass(frozen=True)
class EnumConfig:
    max_nodes: int = 3
    max_bound_vars: int = 1
    connectives: frozenset = field(default_factory=lambda: frozenset(CONNECTIVES))

    def __post_init__(self):
        if self.max_nodes < 1:
            raise ValueError("max_nodes must be at least 1")
        if self.max_bound_vars < 0:
            raise ValueError("max_bound_vars must be non-negative")
        unknown = set(self.connectives) - set(CONNECTIVES)
        if unknown:
            raise ValueError(f"unknown connectives: {sorted(unknown)}")


def _binder(k: int) -> str:
    return f"y{k}"


def _generator(config: EnumConfig):
    conn = [c for c in CONNECTIVES if c in config.connectives]
    binaries = [_BINARY[c] for c in conn if c in _BINARY]
    quants = [_QUANT[c] for c in conn if c in _QUANT]
    allow_not = "not" in config.connectives

    @lru_cache(maxsize=None)
    def build(n: int, scope: tuple, used: int) -> tuple:
        """``(formula, binders spent)`` pairs with exactly ``n`` nodes.

        ``scope`` holds the binder names visible here and ``used`` counts
        binders already spent to the left, which fixes the next name.
        """
        out = []
        if n == 1:
            names = ("x",) + scope
            for a in names:
                for b in names:
                    out.append((Member(a, b), 0))
                    out.append((Equal(a, b), 0))
            return tuple(out)
        if allow_not:
            for f, k in build(n - 1, scope, used):
                if not isinstance(f, Not):
                    out.append((Not(f), k))
        if used < config.max_bound_vars:
            name = _binder(used + 1)
            for f, k in build(n - 1, scope + (name,), used + 1):
                for q in quants:
                    out.append((q(name, f), k + 1))
        for left_n in range(1, n - 1):
            right_n = n - 1 - left_n
            for lf, lk in build(left_n, scope, used):
                rights = build(right_n, scope, used + lk)
                for rf, rk in rights:
                    for op in binaries:
                        out.append((op(lf, rf), lk + rk))
        return tuple(out)

    return build


def enumerate_bodies(config: EnumConfig) -> Iterator[PredicateBody]:
    """Every canonical body up to ``config.max_nodes`` nodes.

    Ordered by node count, then by printed form.
    """
    build = _generator(config)
    for n in range(1, config.max_nodes + 1):
        batch = sorted((print_formula(f), f) for f, _ in build(n, (), 0))
        for _, f in batch:
            yield PredicateBody(f)


def count_by_size(config: EnumConfig) -> dict[int, int]:
    build = _generator(config)
    return {n: len(build(n, (), 0)) for n in range(1, config.max_nodes + 1)}
