from .check import check_proof
from .clausify import clausify, equality_axioms
from .saturate import Budget, Exhausted, Proof, ProofStep, Refuted, refute
from .terms import clause_str, unify

__all__ = [
    "Budget",
    "Exhausted",
    "Proof",
    "ProofStep",
    "Refuted",
    "check_proof",
    "clause_str",
    "clausify",
    "equality_axioms",
    "refute",
    "unify",
]
