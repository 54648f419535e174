"""Given-clause saturation with binary resolution and positive factoring.

Proof-format conventions, shared with the checker:

* stored clauses use variables ``X0, X1, ...``;
* in ``resolve i j`` the variables of clause ``j`` are renamed ``X<k>`` to
  ``Y<k>`` before unification, and the recorded unifier acts on both sets;
* conclusions are stored in normalized form, so the checker compares up to
  variable renaming.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field
from typing import Optional, Union

from .terms import (
    apply_literal,
    clause_depth,
    clause_str,
    clause_weight,
    is_tautology,
    normalize,
    rename_apart,
    resolve_subst,
    subst_str,
    subsumes,
    unify,
)


@dataclass(frozen=True)
class Budget:
    max_generated_clauses: int = 3000
    max_clause_literals: int = 6
    max_term_depth: int = 3
    max_seconds: Optional[float] = None

    def __post_init__(self):
        for name in ("max_generated_clauses", "max_clause_literals", "max_term_depth"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.max_seconds is not None and self.max_seconds <= 0:
            raise ValueError("max_seconds must be positive")

    def dominates(self, other: "Budget") -> bool:
        return (
            self.max_generated_clauses >= other.max_generated_clauses
            and self.max_clause_literals >= other.max_clause_literals
            and self.max_term_depth >= other.max_term_depth
        )

    def to_dict(self) -> dict:
        return {
            "max_generated_clauses": self.max_generated_clauses,
            "max_clause_literals": self.max_clause_literals,
            "max_term_depth": self.max_term_depth,
        }


@dataclass(frozen=True)
class ProofStep:
    clause: tuple
    rule: str  # "input" | "resolve" | "factor"
    parents: tuple = ()
    unifier: tuple = ()  # sorted (var, term) pairs

    @property
    def subst(self) -> dict:
        return dict(self.unifier)


@dataclass(frozen=True)
class Proof:
    steps: tuple

    def __len__(self):
        return len(self.steps)

    def to_text(self) -> str:
        lines = []
        for n, step in enumerate(self.steps, 1):
            if step.rule == "input":
                how = "input"
            elif step.rule == "resolve":
                i, j = step.parents
                how = f"resolve {i} {j} {subst_str(step.subst)}"
            else:
                how = f"factor {step.parents[0]} {subst_str(step.subst)}"
            lines.append(f"{n}. {clause_str(step.clause)} [{how}]")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Refuted:
    proof: Proof
    generated: int


@dataclass(frozen=True)
class Exhausted:
    generated: int
    reason: str  # "saturated" | "clause_limit" | "time_limit"
    lossy: bool  # some conclusions were discarded by the caps


RefuteResult = Union[Refuted, Exhausted]


def _frozen_subst(subst: dict) -> tuple:
    return tuple(sorted(resolve_subst(subst).items()))


def resolvents(c1, c2):
    """Binary resolvents of ``c1`` with a renamed copy of ``c2``.

    Yields ``(literals, unifier)``; ``c2``'s variables appear as ``Y<k>``.
    """
    d2 = rename_apart(c2)
    for p, a in enumerate(c1):
        for q, b in enumerate(d2):
            if a[0] == b[0] or a[1] != b[1]:
                continue
            sigma = unify(a[2], b[2])
            if sigma is None:
                continue
            sigma = unify(a[3], b[3], sigma)
            if sigma is None:
                continue
            lits = [apply_literal(l, sigma) for k, l in enumerate(c1) if k != p]
            lits += [apply_literal(l, sigma) for k, l in enumerate(d2) if k != q]
            yield lits, sigma


def factors(c):
    """Factors on pairs of positive literals."""
    for p in range(len(c)):
        a = c[p]
        if not a[0]:
            continue
        for q in range(p + 1, len(c)):
            b = c[q]
            if not b[0] or a[1] != b[1]:
                continue
            sigma = unify(a[2], b[2])
            if sigma is None:
                continue
            sigma = unify(a[3], b[3], sigma)
            if sigma is None:
                continue
            yield [apply_literal(l, sigma) for l in c], sigma


@dataclass
class _State:
    budget: Budget
    clauses: list = field(default_factory=list)  # id -> ProofStep
    seen: set = field(default_factory=set)
    passive: list = field(default_factory=list)
    active: list = field(default_factory=list)
    generated: int = 0
    lossy: bool = False

    def add(self, clause, rule, parents=(), unifier=(), passive=True):
        """Register a clause; returns its id, or None if it was dropped."""
        if clause in self.seen:
            return None
        self.seen.add(clause)
        cid = len(self.clauses)
        self.clauses.append(ProofStep(clause, rule, parents, unifier))
        if passive:
            heapq.heappush(self.passive, (clause_weight(clause), cid))
        return cid

    def conclude(self, lits, sigma, rule, parents):
        self.generated += 1
        if is_tautology(lits):
            return None
        clause = normalize(lits)
        if (
            len(clause) > self.budget.max_clause_literals
            or clause_depth(clause) > self.budget.max_term_depth
        ):
            self.lossy = True
            return None
        if clause in self.seen:
            return None
        for aid in self.active:
            if subsumes(self.clauses[aid].clause, clause):
                return None
        return self.add(clause, rule, parents, _frozen_subst(sigma))


def _extract(state: _State, empty_id: int) -> Proof:
    needed = set()
    stack = [empty_id]
    while stack:
        cid = stack.pop()
        if cid in needed:
            continue
        needed.add(cid)
        stack.extend(state.clauses[cid].parents)
    order = sorted(needed)
    index = {cid: n for n, cid in enumerate(order, 1)}
    steps = []
    for cid in order:
        s = state.clauses[cid]
        steps.append(ProofStep(s.clause, s.rule, tuple(index[p] for p in s.parents), s.unifier))
    return Proof(tuple(steps))


def refute(clauses, budget: Budget = Budget(), axioms=()) -> RefuteResult:
    """Search for a refutation of ``clauses`` plus ``axioms`` within ``budget``.

    ``axioms`` go straight to the active set and are never selected as given
    clauses (set of support), so every inference involves a descendant of
    ``clauses``. This stays complete as long as ``axioms`` are satisfiable.

    Given clauses are picked lightest first (symbol count), FIFO on ties.
    Conclusions over the literal or depth caps are dropped, which makes an
    exhausted search inconclusive even when the passive set runs dry.
    """
    state = _State(budget)
    deadline = None if budget.max_seconds is None else time.monotonic() + budget.max_seconds
    for c in axioms:
        cid = state.add(c, "input", passive=False)
        if cid is not None:
            state.active.append(cid)
    for c in clauses:
        cid = state.add(c, "input")
        if cid is not None and not c:
            return Refuted(_extract(state, cid), 0)

    while state.passive:
        if state.generated >= budget.max_generated_clauses:
            return Exhausted(state.generated, "clause_limit", state.lossy)
        if deadline is not None and time.monotonic() > deadline:
            return Exhausted(state.generated, "time_limit", state.lossy)
        _, gid = heapq.heappop(state.passive)
        given = state.clauses[gid].clause
        if any(subsumes(state.clauses[aid].clause, given) for aid in state.active):
            continue
        state.active.append(gid)
        new_ids = []
        for lits, sigma in factors(given):
            new_ids.append(state.conclude(lits, sigma, "factor", (gid,)))
        for aid in list(state.active):
            for lits, sigma in resolvents(given, state.clauses[aid].clause):
                new_ids.append(state.conclude(lits, sigma, "resolve", (gid, aid)))
        for cid in new_ids:
            if cid is not None and not state.clauses[cid].clause:
                return Refuted(_extract(state, cid), state.generated)
    return Exhausted(state.generated, "saturated", state.lossy)
