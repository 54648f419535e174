"""Comprehension instances, extensionality, schemes and the named corpus."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .formula import (
    Exists,
    Forall,
    Formula,
    FormulaError,
    Iff,
    Implies,
    Member,
    Not,
    Or,
    And,
    PredicateBody,
    all_vars,
    fresh_name,
    free_vars,
    print_formula,
    substitute,
)
from .parser import parse


@dataclass(frozen=True, slots=True)
class Sentence:
    formula: Formula

    def __post_init__(self):
        fv = free_vars(self.formula)
        if fv:
            raise FormulaError(f"sentence has free variables: {sorted(fv)}")

    def __str__(self):
        return print_formula(self.formula)


def _fresh(base, avoid):
    return base if base not in avoid else fresh_name(base, avoid)


def _instantiate(p: PredicateBody, avoid: set[str]):
    """Pick a fresh element variable and return it with ``A[x:=it]``."""
    y = _fresh("y", avoid)
    return y, substitute(p.formula, p.compression_var, y)


def cos_instance(p: PredicateBody) -> Sentence:
    """``exists s. forall y. (y in s <-> A(y))`` with ``s, y`` fresh for A."""
    used = all_vars(p.formula) | {p.compression_var}
    s = _fresh("s", used)
    y, body = _instantiate(p, used | {s})
    return Sentence(Exists(s, Forall(y, Iff(Member(y, s), body))))


def extensionality() -> Sentence:
    return Sentence(parse("forall a. forall b. ((forall z. (z in a <-> z in b)) -> a = b)"))


def complement_scheme() -> Sentence:
    return Sentence(parse("forall m. exists s. forall y. (y in s <-> not y in m)"))


def separation_scheme(p: PredicateBody) -> Sentence:
    """``forall m. exists s. forall y. (y in s <-> (y in m and A(y)))``."""
    used = all_vars(p.formula) | {p.compression_var}
    m = _fresh("m", used)
    s = _fresh("s", used | {m})
    y, body = _instantiate(p, used | {m, s})
    return Sentence(Forall(m, Exists(s, Forall(y, Iff(Member(y, s), And(Member(y, m), body))))))


# An empty element exists. Both it and its negation are satisfiable.
UD = parse("exists u. forall y. not y in u")


def body(text: str) -> PredicateBody:
    return PredicateBody(parse(text))


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    item: Union[PredicateBody, Sentence]
    expected_verdict: Optional[str] = None
    note: str = ""

    @property
    def is_predicate(self) -> bool:
        return isinstance(self.item, PredicateBody)


def corpus() -> list[CorpusEntry]:
    russell = body("not x in x")
    return [
        CorpusEntry("russell", russell, "pathological", "x not in x"),
        CorpusEntry("anti_russell", body("x in x"), "satisfiable", "x in x"),
        CorpusEntry("universal", body("x = x"), "satisfiable", "universal set"),
        CorpusEntry("empty", body("not x = x"), "satisfiable", "empty set"),
        CorpusEntry(
            "ud_a",
            PredicateBody(Or(UD, Not(Member("x", "x")))),
            "satisfiable",
            "UD or x not in x; fails hereditarily",
        ),
        CorpusEntry(
            "ud_b",
            PredicateBody(Or(Not(UD), Not(Member("x", "x")))),
            "satisfiable",
            "not UD or x not in x; fails hereditarily",
        ),
        CorpusEntry("complement_scheme", complement_scheme(), None, "every set has a complement"),
        CorpusEntry("separation_russell", separation_scheme(russell), None, "separation with x not in x"),
        CorpusEntry("extensionality", extensionality(), None, "sets with equal members are equal"),
        CorpusEntry("ud", Sentence(UD), None, "an empty element exists"),
        CorpusEntry(
            "ud_implies_russell",
            PredicateBody(Implies(UD, Not(Member("x", "x")))),
            "satisfiable",
            "UD -> x not in x",
        ),
    ]


CORPUS_ALIASES = {
    "complement": "complement_scheme",
    "sep:russell": "separation_russell",
    "sep_russell": "separation_russell",
    "ee": "extensionality",
}


def lookup(name: str) -> CorpusEntry:
    name = CORPUS_ALIASES.get(name, name)
    for entry in corpus():
        if entry.name == name:
            return entry
    raise KeyError(name)


def corpus_names() -> list[str]:
    return [e.name for e in corpus()]
