import itertools
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chc_lab.comprehension import complement_scheme, cos_instance, extensionality, lookup, separation_scheme
from chc_lab.models import Model, find_model
from chc_lab.prover import Budget, Exhausted, Proof, Refuted, check_proof, clause_str, clausify, refute
from chc_lab.prover.terms import apply, normalize, unify

RUSSELL_PROOF = """\
1. ~(X0 in X0) | ~(X0 in sk1) [input]
2. X0 in X0 | X0 in sk1 [input]
3. sk1 in sk1 [factor 2 {X0 -> sk1}]
4. ~(sk1 in sk1) [resolve 3 1 {Y0 -> sk1}]
5. $false [resolve 4 3 {}]
"""


def item(name):
    return lookup(name).item


def clauses_of(*sentences, eq=True):
    return clausify(list(sentences), with_equality_axioms=eq)


def test_clausify_russell():
    cl = clauses_of(cos_instance(item("russell")))
    assert [clause_str(c) for c in cl] == [
        "~(X0 in X0) | ~(X0 in sk1)",
        "X0 in X0 | X0 in sk1",
    ]


def test_clausify_extensionality():
    cl = clauses_of(extensionality(), eq=False)
    assert [clause_str(c) for c in cl] == [
        "X0 = X1 | sk1(X0,X1) in X0 | sk1(X0,X1) in X1",
        "X0 = X1 | ~(sk1(X0,X1) in X0) | ~(sk1(X0,X1) in X1)",
    ]


def test_equality_axioms_only_when_needed():
    cl = clauses_of(cos_instance(item("russell")))
    assert not any(lit[1] == "=" for c in cl for lit in c)
    with_ee = clauses_of(extensionality())
    texts = {clause_str(c) for c in with_ee}
    assert "X0 = X0" in texts
    assert "X0 = X1 | ~(X1 = X0)" in texts
    assert "X0 = X1 | ~(X0 = X2) | ~(X2 = X1)" in texts
    assert "X0 in X1 | ~(X2 = X0) | ~(X2 in X1)" in texts
    assert "X0 in X1 | ~(X2 = X1) | ~(X0 in X2)" in texts
    # one congruence clause per argument position of the binary Skolem function
    assert "sk1(X0,X1) = sk1(X2,X1) | ~(X0 = X2)" in texts
    assert "sk1(X0,X1) = sk1(X0,X2) | ~(X1 = X2)" in texts
    assert len(with_ee) == 2 + 5 + 2


def test_skolem_constants_inside_universals():
    # exists under forall with an unused universal stays a constant.
    cl = clauses_of(complement_scheme())
    assert [clause_str(c) for c in cl] == [
        "~(X0 in X1) | ~(X0 in sk1(X1))",
        "X0 in X1 | X0 in sk1(X1)",
    ]


def test_russell_refutation_golden():
    cl = clauses_of(cos_instance(item("russell")))
    result = refute(cl, Budget())
    assert isinstance(result, Refuted)
    assert result.proof.to_text() == RUSSELL_PROOF
    assert len(result.proof) <= 10
    assert check_proof(result.proof, cl)


def test_anti_russell_exhausts():
    # A model exists (n=1, 0 in 0), so no refutation can be found.
    sentences = [cos_instance(item("anti_russell"))]
    assert isinstance(find_model(sentences, 1), Model)
    for budget in (Budget(50), Budget(2000, 8, 4)):
        assert isinstance(refute(clauses_of(*sentences), budget), Exhausted)


@pytest.mark.parametrize(
    "sentences",
    [
        [cos_instance(item("anti_russell")), complement_scheme()],
        [cos_instance(item("universal")), separation_scheme(item("russell"))],
        [cos_instance(item("ud_a")), cos_instance(item("ud_b"))],
    ],
    ids=["anti_russell+complement", "universal+sep_russell", "ud_a+ud_b"],
)
def test_joint_paradoxes_refuted(sentences):
    cl = clauses_of(*sentences)
    result = refute(cl, Budget())
    assert isinstance(result, Refuted)
    assert check_proof(result.proof, cl)


def test_set_of_support_axioms():
    core = clauses_of(cos_instance(item("anti_russell")), complement_scheme(), eq=False)
    full = clauses_of(cos_instance(item("anti_russell")), complement_scheme(), extensionality())
    axioms = [c for c in full if c not in set(core)]
    result = refute(core, Budget(), axioms=axioms)
    assert isinstance(result, Refuted)
    assert check_proof(result.proof, full)


def test_determinism():
    cl = clauses_of(cos_instance(item("universal")), separation_scheme(item("russell")))
    a = refute(cl, Budget())
    b = refute(list(cl), Budget())
    assert a.proof.to_text() == b.proof.to_text()


MONOTONE_CASES = [
    [cos_instance(item("russell"))],
    [cos_instance(item("anti_russell")), complement_scheme()],
    [cos_instance(item("universal")), separation_scheme(item("russell"))],
    [cos_instance(item("ud_a")), cos_instance(item("ud_b"))],
]


@pytest.mark.parametrize("case", range(len(MONOTONE_CASES)))
def test_budget_monotonicity(case):
    cl = clauses_of(*MONOTONE_CASES[case])
    small = Budget(800, 4, 3)
    assert isinstance(refute(cl, small), Refuted)
    for bigger in (Budget(1600, 4, 3), Budget(800, 6, 3), Budget(800, 4, 5), Budget(5000, 8, 5)):
        assert isinstance(refute(cl, bigger), Refuted)


# -- proof checker ---------------------------------------------------------------


def _russell():
    cl = clauses_of(cos_instance(item("russell")))
    return refute(cl, Budget()).proof, cl


def test_check_rejects_corrupted_unifier():
    proof, cl = _russell()
    steps = list(proof.steps)
    steps[2] = replace(steps[2], unifier=(("X0", ("sk2",)),))
    assert not check_proof(Proof(tuple(steps)), cl)
    steps = list(proof.steps)
    steps[3] = replace(steps[3], unifier=(("Y0", "X5"),))
    assert not check_proof(Proof(tuple(steps)), cl)


def test_check_rejects_nonempty_final():
    proof, cl = _russell()
    assert not check_proof(Proof(proof.steps[:-1]), cl)


def test_check_rejects_foreign_input():
    proof, cl = _russell()
    assert not check_proof(proof, cl[:1])


def test_check_rejects_forward_reference():
    proof, cl = _russell()
    steps = list(proof.steps)
    steps[2] = replace(steps[2], parents=(4,))
    assert not check_proof(Proof(tuple(steps)), cl)


def test_check_rejects_wrong_conclusion():
    proof, cl = _russell()
    steps = list(proof.steps)
    steps[3] = replace(steps[3], clause=normalize([(True, "in", ("sk1",), ("sk1",))]))
    assert not check_proof(Proof(tuple(steps)), cl)


# -- unification against a brute-force reference ----------------------------------

VARS = ["X", "Y"]


def _terms(depth, symbols, variables=True):
    """All terms up to ``depth`` over ``symbols`` (name -> arity)."""
    layer = [(s,) for s, a in symbols.items() if a == 0]
    if variables:
        layer += VARS
    out = list(layer)
    for _ in range(depth - 1):
        new = []
        for s, a in symbols.items():
            if a == 0:
                continue
            for args in itertools.product(out, repeat=a):
                new.append((s, *args))
        out = list(dict.fromkeys(out + new))
    return out


def _ground_unifiers(s, t, universe):
    for choice in itertools.product(universe, repeat=len(VARS)):
        theta = dict(zip(VARS, choice))
        if apply(s, theta) == apply(t, theta):
            yield theta


def _check_against_brute_force(s, t, universe):
    sigma = unify(s, t)
    grounds = list(_ground_unifiers(s, t, universe))
    if sigma is None:
        assert grounds == []
        return
    assert apply(s, sigma) == apply(t, sigma)
    assert grounds, "a unifier exists, so some ground instance lies in the universe"
    for theta in grounds:
        # theta factors through sigma: sigma is most general
        for v in VARS:
            assert apply(apply(v, sigma), theta) == theta[v]


BINARY_SYMBOLS = {"a": 0, "f": 1, "g": 2}
BINARY_INPUTS = _terms(2, BINARY_SYMBOLS)
BINARY_UNIVERSE = _terms(3, BINARY_SYMBOLS, variables=False)
UNARY_SYMBOLS = {"a": 0, "b": 0, "f": 1, "h": 1}
UNARY_INPUTS = _terms(3, UNARY_SYMBOLS)
UNARY_UNIVERSE = _terms(5, UNARY_SYMBOLS, variables=False)


@settings(max_examples=300)
@given(st.sampled_from(BINARY_INPUTS), st.sampled_from(BINARY_INPUTS))
def test_unify_binary_terms(s, t):
    _check_against_brute_force(s, t, BINARY_UNIVERSE)


@settings(max_examples=300)
@given(st.sampled_from(UNARY_INPUTS), st.sampled_from(UNARY_INPUTS))
def test_unify_depth_three(s, t):
    _check_against_brute_force(s, t, UNARY_UNIVERSE)


def test_occurs_check():
    assert unify("X", ("f", "X")) is None
    assert unify(("g", "X", "Y"), ("g", "Y", ("f", "X"))) is None
