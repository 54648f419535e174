"""Three-way verdicts from the refutation engine and the model finder.

Every witness is re-verified before it is returned: proofs by the
independent checker against the full clause set, models by direct
evaluation. Finding both kinds for one sentence set raises
:class:`OracleConflict`.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field
from typing import Optional, Union

from .comprehension import Sentence, cos_instance, extensionality
from .formula import Not, PredicateBody, alpha_canonical, designated_subformulas, print_formula, size
from .models import Model, find_model
from .prover import Budget, Proof, Refuted, check_proof, clausify, refute

EAGER_MODEL_SIZE = 3


class OracleConflict(RuntimeError):
    """Both a refutation and a model were found for the same sentences."""


class WitnessError(RuntimeError):
    """A witness failed independent verification."""


@dataclass(frozen=True)
class Budgets:
    prover: Budget = field(default_factory=Budget)
    max_model_size: int = 4

    def __post_init__(self):
        if self.max_model_size < 1:
            raise ValueError("max_model_size must be at least 1")

    def dominates(self, other: "Budgets") -> bool:
        return self.prover.dominates(other.prover) and self.max_model_size >= other.max_model_size

    def to_dict(self) -> dict:
        return {**self.prover.to_dict(), "max_model_size": self.max_model_size}


@dataclass(frozen=True)
class Verdict:
    """Outcome of one decision run.

    ``kind`` is one of the labels of the calling operation (for example
    ``pathological``/``satisfiable``/``unknown`` for :func:`classify`).
    Exactly one of ``proof`` and ``model`` is set unless the kind is unknown.
    """

    kind: str
    proof: Optional[Proof] = None
    model: Optional[Model] = None
    inputs: tuple = ()
    budgets: Optional[Budgets] = None
    elapsed: float = 0.0
    lossy: bool = False

    def __post_init__(self):
        if self.proof is not None and self.model is not None:
            raise ValueError("a verdict carries at most one witness")

    @property
    def decided(self) -> bool:
        return self.proof is not None or self.model is not None

    def witness_text(self) -> str:
        if self.proof is not None:
            return self.proof.to_text()
        if self.model is not None:
            return self.model.to_text()
        return ""


def _split(sentences, include_ee):
    ee = extensionality()
    core = [s for s in sentences if s != ee]
    return core, ([ee] if include_ee else [])


def decide(sentences, budgets: Budgets = Budgets(), include_ee: bool = True,
           cross_check: bool = False) -> Verdict:
    """Return a verdict with kind ``refuted``, ``modeled`` or ``unknown``.

    Small models are tried first, then refutation (without extensionality,
    then with it), then larger models. With ``cross_check`` both engines run
    to their full budgets whatever the first one found, so a conflict
    between them cannot go unnoticed.
    """
    start = time.perf_counter()
    core, extra = _split(list(sentences), include_ee)
    everything = core + extra
    eager = min(EAGER_MODEL_SIZE, budgets.max_model_size)

    def done(kind, proof=None, model=None, inputs=(), lossy=False):
        return Verdict(kind, proof, model, tuple(inputs), budgets,
                       time.perf_counter() - start, lossy)

    model = find_model(everything, eager)
    if isinstance(model, Model) and not cross_check:
        return done("modeled", model=model)

    # Stage 1 leaves extensionality out; a refutation of a subset of the
    # clauses refutes the whole set, so the proof still checks against it.
    # Equality axioms and extensionality act as set-of-support axioms.
    full = clausify(everything, with_equality_axioms=True)
    inner = clausify(core, with_equality_axioms=True)
    bare = clausify(core, with_equality_axioms=False)
    assert set(inner) <= set(full)
    bare_set = set(bare)
    result = refute(bare, budgets.prover, axioms=[c for c in inner if c not in bare_set])
    lossy = getattr(result, "lossy", False)
    if not isinstance(result, Refuted) and len(full) > len(inner):
        result = refute(bare, budgets.prover, axioms=[c for c in full if c not in bare_set])
        lossy = lossy or getattr(result, "lossy", False)

    if isinstance(result, Refuted):
        if not check_proof(result.proof, full):
            raise WitnessError("refutation failed independent checking")
        if isinstance(model, Model):
            raise OracleConflict(f"refuted yet modeled at n={model.size}")
        if cross_check and budgets.max_model_size > eager:
            guard = find_model(everything, budgets.max_model_size, min_size=eager + 1)
            if isinstance(guard, Model):
                raise OracleConflict(f"refuted yet modeled at n={guard.size}")
        return done("refuted", proof=result.proof, inputs=full)

    if isinstance(model, Model):
        return done("modeled", model=model)
    if budgets.max_model_size > eager:
        model = find_model(everything, budgets.max_model_size, min_size=eager + 1)
        if isinstance(model, Model):
            return done("modeled", model=model)
    return done("unknown", lossy=lossy)


_LABELS = {
    "classify": {"refuted": "pathological", "modeled": "satisfiable"},
    "joint": {"refuted": "inconsistent", "modeled": "consistent"},
    "negation": {"refuted": "negation_refuted", "modeled": "negation_satisfiable"},
}


def _relabel(v: Verdict, op: str) -> Verdict:
    kind = _LABELS[op].get(v.kind, "unknown")
    return Verdict(kind, v.proof, v.model, v.inputs, v.budgets, v.elapsed, v.lossy)


class VerdictCache:
    """Thread-safe map from canonical body text to verdict."""

    def __init__(self):
        self._data: dict = {}
        self._lock = threading.Lock()

    def get(self, key):
        with self._lock:
            return self._data.get(key)

    def put(self, key, verdict):
        with self._lock:
            self._data.setdefault(key, verdict)
            return self._data[key]

    def __len__(self):
        with self._lock:
            return len(self._data)


def body_key(p: PredicateBody) -> str:
    return print_formula(alpha_canonical(p.formula))


def classify(p: PredicateBody, budgets: Budgets = Budgets(), include_ee: bool = True,
             cache: Optional[VerdictCache] = None, cross_check: bool = False) -> Verdict:
    """Pathological, satisfiable or unknown for the comprehension instance of ``p``."""
    key = (body_key(p), include_ee, budgets)
    if cache is not None:
        hit = cache.get(key)
        if hit is not None:
            return hit
    v = _relabel(decide([cos_instance(p)], budgets, include_ee, cross_check), "classify")
    if cache is not None:
        v = cache.put(key, v)
    return v


@dataclass(frozen=True)
class HereditaryStatus:
    kind: str  # "hc" | "fails_at" | "unknown"
    subformula: Optional[PredicateBody] = None
    witness: Optional[Verdict] = None
    unresolved: tuple = ()

    def tag(self) -> str:
        if self.kind == "fails_at":
            return f"fails_at:{body_key(self.subformula)}"
        return self.kind


def _by_size(bodies):
    return sorted(bodies, key=lambda b: (size(b.formula), body_key(b)))


def hereditary_classify(p: PredicateBody, budgets: Budgets = Budgets(), include_ee: bool = True,
                        cache: Optional[VerdictCache] = None) -> HereditaryStatus:
    """Classify every designated subformula of ``p``, smallest first."""
    cache = VerdictCache() if cache is None else cache
    unresolved = []
    for sub in _by_size(designated_subformulas(p)):
        v = classify(sub, budgets, include_ee, cache)
        if v.kind == "pathological":
            return HereditaryStatus("fails_at", sub, v)
        if v.kind == "unknown":
            unresolved.append(sub)
    if unresolved:
        return HereditaryStatus("unknown", unresolved=tuple(unresolved))
    return HereditaryStatus("hc")


Item = Union[PredicateBody, Sentence]


def _as_sentence(item: Item) -> Sentence:
    return cos_instance(item) if isinstance(item, PredicateBody) else item


def joint_check(items, budgets: Budgets = Budgets(), include_ee: bool = True) -> Verdict:
    """Consistent, inconsistent or unknown for a batch of bodies and sentences."""
    items = list(items)
    if not items:
        raise ValueError("joint_check needs at least one item")
    return _relabel(decide([_as_sentence(i) for i in items], budgets, include_ee), "joint")


def negation_check(p: PredicateBody, budgets: Budgets = Budgets(), include_ee: bool = True) -> Verdict:
    """Run both engines on the negated comprehension instance.

    ``negation_refuted`` means the instance is valid (given EE when included).
    """
    negated = Sentence(Not(cos_instance(p).formula))
    return _relabel(decide([negated], budgets, include_ee), "negation")
