"""Acceptance criteria, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v``; the lines are printed even
when output capture is on.
"""

import os
import random
import signal
import subprocess
import sys
import time

import pytest

from chc_lab.catalog import read_catalog
from chc_lab.classify import classify, hereditary_classify, joint_check
from chc_lab.cli import main
from chc_lab.comprehension import Sentence, cos_instance, extensionality, lookup
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
    PredicateBody,
    free_vars,
    size,
)
from chc_lab.models import Model, all_models, cell, eval_sentence, ground, sat_solve
from chc_lab.parser import parse
from chc_lab.prover import Refuted, check_proof, clausify, refute


@pytest.fixture
def say(capsys):
    def emit(number, title, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({detail})", flush=True)
        return ok

    return emit


def item(name):
    return lookup(name).item


def models_all(sentences, m):
    return all(eval_sentence(s, m) for s in sentences)


def timed(fn, *args, **kw):
    start = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - start


def test_1_russell_pathological(say):
    rows = []
    ok = True
    for ee in (True, False):
        v, dt = timed(classify, item("russell"), include_ee=ee)
        good = (v.kind == "pathological" and check_proof(v.proof, list(v.inputs))
                and len(v.proof) <= 10 and dt < 1.0)
        ok = ok and good
        steps = len(v.proof) if v.proof else "-"
        rows.append(f"ee={ee}: {v.kind}, {steps} steps, {dt:.3f}s")
    assert say(1, "Russell pathological with and without EE", ok, "; ".join(rows))


def test_2_small_satisfiable(say):
    rows = []
    ok = True
    for name in ("anti_russell", "universal", "empty"):
        v = classify(item(name))
        good = (v.kind == "satisfiable" and v.model.size == 1
                and models_all([cos_instance(item(name)), extensionality()], v.model))
        ok = ok and good
        rows.append(f"{name}: {v.kind} n={v.model.size if v.model else '-'}")
    assert say(2, "anti_russell, universal, empty satisfiable at size 1", ok, "; ".join(rows))


def _alone(name):
    it = item(name)
    v = joint_check([it])
    sentences = [cos_instance(it) if isinstance(it, PredicateBody) else it, extensionality()]
    return v.kind == "consistent" and v.model.size <= 2 and models_all(sentences, v.model), v


def test_3_joint_complement(say):
    v, dt = timed(joint_check, [item("anti_russell"), item("complement")])
    ok = v.kind == "inconsistent" and check_proof(v.proof, list(v.inputs)) and dt < 10
    rows = [f"joint: {v.kind} in {dt:.2f}s"]
    for name in ("anti_russell", "complement"):
        good, a = _alone(name)
        ok = ok and good
        rows.append(f"{name} alone: {a.kind} n={a.model.size if a.model else '-'}")
    assert say(3, "anti_russell + complement inconsistent, each alone consistent", ok, "; ".join(rows))


def test_4_ud_trick(say):
    rows = []
    ok = True
    for name in ("ud_a", "ud_b"):
        v = classify(item(name))
        good = (v.kind == "satisfiable" and v.model.size <= 2
                and models_all([cos_instance(item(name)), extensionality()], v.model))
        h = hereditary_classify(item(name))
        good = good and h.tag() == "fails_at:not (x in x)" and check_proof(h.witness.proof, list(h.witness.inputs))
        ok = ok and good
        rows.append(f"{name}: {v.kind} n={v.model.size if v.model else '-'}, {h.tag()}")
    j = joint_check([item("ud_a"), item("ud_b")])
    ok = ok and j.kind == "inconsistent" and check_proof(j.proof, list(j.inputs))
    rows.append(f"joint: {j.kind}")
    assert say(4, "UD trick", ok, "; ".join(rows))


def test_5_universal_separation(say):
    v, dt = timed(joint_check, [item("universal"), item("sep:russell")])
    ok = v.kind == "inconsistent" and check_proof(v.proof, list(v.inputs)) and dt < 30
    assert say(5, "universal + sep:russell inconsistent", ok, f"{v.kind} in {dt:.2f}s")


def test_6_enumeration_sweep(say, tmp_path, capsys):
    out = tmp_path / "sweep.jsonl"
    start = time.perf_counter()
    code = main(["run", "--max-nodes", "6", "--max-bound-vars", "2", "--out", str(out)])
    elapsed = time.perf_counter() - start
    capsys.readouterr()
    records = read_catalog(out)

    # Every model re-evaluated here, independently of the run's own check.
    bad_models = 0
    satisfiable = []
    pathological = []
    for r in records:
        body = PredicateBody(parse(r["canonical_body"]))
        if r["verdict"] == "satisfiable":
            m = Model.from_rows([[c == "1" for c in row] for row in r["witness"]["model"]])
            if not models_all([cos_instance(body), extensionality()], m):
                bad_models += 1
            satisfiable.append(body)
        elif r["verdict"] == "pathological":
            pathological.append(body)

    # Every refutation regenerated and replayed by the checker.
    bad_proofs = 0
    for body in pathological:
        v = classify(body)
        if v.kind != "pathological" or not check_proof(v.proof, list(v.inputs)):
            bad_proofs += 1

    # Conflicts: the run aborts on any refuted-and-modeled input (model search
    # at n <= 3 precedes every refutation). In reverse, a sample of satisfiable
    # bodies goes through the prover, which must not refute them.
    sample = random.Random(6).sample(satisfiable, 100)
    conflicts = sum(
        isinstance(refute(clausify([cos_instance(b), extensionality()])), Refuted) for b in sample
    )

    small = tmp_path / "one.jsonl"
    main(["run", "--max-nodes", "1", "--out", str(small)])
    capsys.readouterr()
    atoms = [r["canonical_body"] for r in read_catalog(small)]

    unknown = sum(r["verdict"] == "unknown" for r in records)
    ok = (code == 0 and elapsed < 600 and bad_models == 0 and bad_proofs == 0
          and conflicts == 0 and atoms == ["x = x", "x in x"])
    detail = (f"{len(records)} records in {elapsed:.0f}s, {len(pathological)} pathological, "
              f"{len(satisfiable)} satisfiable, {unknown} unknown; bad proofs {bad_proofs}, "
              f"bad models {bad_models}, conflicts {conflicts}/100 sampled; max-nodes=1 gives {atoms}")
    assert say(6, "enumeration sweep to 6 nodes, 2 binders", ok, detail)


VARS = ("x", "y", "z")


def random_formula(rng, n):
    """A random formula with exactly ``n`` nodes."""
    if n == 1:
        return rng.choice((Member, Equal))(rng.choice(VARS), rng.choice(VARS))
    kinds = ["not", "quant"] + (["binary"] if n >= 3 else [])
    kind = rng.choice(kinds)
    if kind == "not":
        return Not(random_formula(rng, n - 1))
    if kind == "quant":
        return rng.choice((Forall, Exists))(rng.choice(VARS), random_formula(rng, n - 1))
    left = rng.randint(1, n - 2)
    op = rng.choice((And, Or, Implies, Iff))
    return op(random_formula(rng, left), random_formula(rng, n - 1 - left))


def random_sentences(count, max_nodes, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        f = random_formula(rng, rng.randint(1, max_nodes))
        for v in sorted(free_vars(f)):
            f = Forall(v, f)
        if size(f) <= max_nodes:
            out.append(Sentence(f))
    return out


def satisfied_by_cells(g, m):
    n = m.size
    units = [[cell(n, i, j) if m.membership[i][j] else -cell(n, i, j)]
             for i in range(n) for j in range(n)]
    return sat_solve(units + g.clauses, g.variables) is not None


def test_7_oracle_equivalence(say):
    pairs = agree = 0
    for s in random_sentences(500, 9, seed=7):
        for n in (1, 2):
            g = ground([s], n)
            for m in all_models(n):
                pairs += 1
                agree += satisfied_by_cells(g, m) == eval_sentence(s, m)
    ok = pairs == agree and pairs == 500 * (2 + 16)
    assert say(7, "grounder agrees with evaluator", ok, f"{agree}/{pairs} pairs agree")


def _cli(*args):
    return [sys.executable, "-m", "chc_lab.cli", *args]


def test_8_determinism_and_resume(say, tmp_path):
    config = ["run", "--max-nodes", "5", "--max-bound-vars", "2"]
    a, b, c, d = (tmp_path / f"{k}.jsonl" for k in "abcd")
    subprocess.run(_cli(*config, "--out", str(a)), check=True, capture_output=True)
    subprocess.run(_cli(*config, "--out", str(b)), check=True, capture_output=True)
    subprocess.run(_cli(*config, "--jobs", "2", "--out", str(c)), check=True, capture_output=True)
    same = a.read_bytes() == b.read_bytes() == c.read_bytes()

    # Kill a real run partway through, then resume it.
    proc = subprocess.Popen(_cli(*config, "--out", str(d)), stdout=subprocess.DEVNULL,
                            stderr=subprocess.DEVNULL)
    deadline = time.time() + 120
    while time.time() < deadline and proc.poll() is None:
        if d.exists() and d.stat().st_size > 200_000:
            break
        time.sleep(0.05)
    interrupted = proc.poll() is None
    if interrupted:
        os.kill(proc.pid, signal.SIGKILL)
    proc.wait()
    partial = d.read_bytes().count(b"\n")
    subprocess.run(_cli(*config, "--resume", "--out", str(d)), check=True, capture_output=True)
    resumed = d.read_bytes() == a.read_bytes()

    ok = same and resumed and interrupted
    detail = (f"repeat and --jobs 2 identical: {same}; killed after {partial} records, "
              f"resumed equals uninterrupted: {resumed}")
    assert say(8, "determinism and resume", ok, detail)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
