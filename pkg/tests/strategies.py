"""Hypothesis strategies for formulas and sentences."""

from hypothesis import strategies as st

from chc_lab.formula import (
    And,
    Equal,
    Exists,
    Forall,
    Iff,
    Implies,
    Member,
    Not,
    Or,
    free_vars,
    size,
)

NAMES = ["x", "y", "z", "u"]


def formulas(names=NAMES, max_leaves=6):
    var = st.sampled_from(names)
    atoms = st.one_of(st.builds(Member, var, var), st.builds(Equal, var, var))

    def extend(children):
        return st.one_of(
            st.builds(Not, children),
            st.builds(And, children, children),
            st.builds(Or, children, children),
            st.builds(Implies, children, children),
            st.builds(Iff, children, children),
            st.builds(Forall, var, children),
            st.builds(Exists, var, children),
        )

    return st.recursive(atoms, extend, max_leaves=max_leaves)


def _close(f):
    for v in sorted(free_vars(f)):
        f = Forall(v, f)
    return f


def sentences(max_nodes=9):
    """Closed formulas with at most ``max_nodes`` nodes."""
    return formulas(["x", "y", "z"], max_leaves=4).map(_close).filter(lambda f: size(f) <= max_nodes)


def bodies():
    """Formulas whose only free variable (if any) is ``x``."""

    def close_but_x(f):
        for v in sorted(free_vars(f) - {"x"}):
            f = Exists(v, f)
        return f

    return formulas().map(close_but_x)
