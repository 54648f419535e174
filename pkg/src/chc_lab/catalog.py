"""Catalog files: one JSON record per line, in enumeration order.

Records are written with a fixed key order and compact separators so that
equal runs give byte-identical files.
"""

from __future__ import annotations

import json
import logging
import os
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from multiprocessing import get_context
from pathlib import Path

from . import __version__
from .classify import Budgets, VerdictCache, body_key, classify, hereditary_classify
from .enumerate import EnumConfig, enumerate_bodies
from .formula import PredicateBody, alpha_canonical, print_formula, size
from .models import Model, eval_sentence
from .comprehension import cos_instance, extensionality
from .parser import ParseError, parse
from .prover import Budget

log = logging.getLogger(__name__)

FIELDS = ("canonical_body", "node_count", "verdict", "hereditary", "witness", "budgets", "tool_version")
VERDICTS = ("pathological", "satisfiable", "unknown")


class MalformedRecord(ValueError):
    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no


@dataclass
class ExperimentConfig:
    enum: EnumConfig = field(default_factory=EnumConfig)
    budgets: Budgets = field(default_factory=Budgets)
    include_ee: bool = True
    jobs: int = 1
    out: Path = Path("catalog.jsonl")
    resume: bool = False

    def __post_init__(self):
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")
        self.out = Path(self.out)


def budgets_dict(budgets: Budgets, include_ee: bool) -> dict:
    return {**budgets.to_dict(), "ee": include_ee}


def encode(record: dict) -> str:
    return json.dumps({k: record[k] for k in FIELDS}, separators=(",", ":"))


def make_record(body: PredicateBody, budgets: Budgets, include_ee: bool, cache: VerdictCache) -> dict:
    v = classify(body, budgets, include_ee, cache)
    h = hereditary_classify(body, budgets, include_ee, cache)
    if v.proof is not None:
        witness = {"proof_steps": len(v.proof)}
    elif v.model is not None:
        witness = {"model": v.model.rows()}
    else:
        witness = {"lossy": v.lossy}
    return {
        "canonical_body": body_key(body),
        "node_count": size(body.formula),
        "verdict": v.kind,
        "hereditary": h.tag(),
        "witness": witness,
        "budgets": budgets_dict(budgets, include_ee),
        "tool_version": __version__,
    }


def validate(record, line_no: int) -> dict:
    if not isinstance(record, dict) or tuple(record) != FIELDS:
        raise MalformedRecord(line_no, "unexpected fields")
    try:
        f = parse(record["canonical_body"])
    except ParseError as e:
        raise MalformedRecord(line_no, f"canonical_body does not parse: {e}") from None
    if print_formula(alpha_canonical(f)) != record["canonical_body"]:
        raise MalformedRecord(line_no, "canonical_body is not canonical")
    if record["verdict"] not in VERDICTS:
        raise MalformedRecord(line_no, f"bad verdict {record['verdict']!r}")
    if record["node_count"] != size(f):
        raise MalformedRecord(line_no, "node_count does not match body")
    hc = record["hereditary"]
    if not (hc in ("hc", "unknown") or (isinstance(hc, str) and hc.startswith("fails_at:"))):
        raise MalformedRecord(line_no, f"bad hereditary tag {hc!r}")
    if record["verdict"] == "pathological" and hc == "hc":
        raise MalformedRecord(line_no, "pathological record marked hereditarily consistent")
    return record


def read_catalog(path) -> list[dict]:
    """Parse a catalog; a trailing partial line (interrupted write) is ignored."""
    text = Path(path).read_text()
    lines = text.split("\n")
    if lines and lines[-1] != "":
        log.warning("ignoring incomplete last line of %s", path)
    records = []
    for no, line in enumerate(lines[:-1], 1):
        try:
            record = json.loads(line)
        except json.JSONDecodeError as e:
            raise MalformedRecord(no, f"invalid JSON ({e.msg})") from None
        records.append(validate(record, no))
    return records


# -- workers ---------------------------------------------------------------------

_worker_state: dict = {}


def _init_worker(budgets, include_ee):
    _worker_state["args"] = (budgets, include_ee, VerdictCache())


def _work(text: str) -> dict:
    budgets, include_ee, cache = _worker_state["args"]
    return make_record(PredicateBody(parse(text)), budgets, include_ee, cache)


@dataclass
class Summary:
    by_size: dict = field(default_factory=lambda: defaultdict(Counter))
    hereditary: Counter = field(default_factory=Counter)
    pathological: list = field(default_factory=list)
    models_checked: int = 0
    written: int = 0
    skipped: int = 0

    def add(self, record):
        self.by_size[record["node_count"]][record["verdict"]] += 1
        tag = record["hereditary"]
        self.hereditary["fails_at" if tag.startswith("fails_at:") else tag] += 1
        if record["verdict"] == "pathological":
            self.pathological.append(record["canonical_body"])

    def totals(self) -> Counter:
        out = Counter()
        for c in self.by_size.values():
            out.update(c)
        return out

    def table(self) -> str:
        lines = [f"{'size':>4} {'pathological':>13} {'satisfiable':>12} {'unknown':>8} {'total':>7}"]
        for n in sorted(self.by_size):
            c = self.by_size[n]
            lines.append(
                f"{n:>4} {c['pathological']:>13} {c['satisfiable']:>12} {c['unknown']:>8} {sum(c.values()):>7}"
            )
        t = self.totals()
        lines.append(
            f"{'all':>4} {t['pathological']:>13} {t['satisfiable']:>12} {t['unknown']:>8} {sum(t.values()):>7}"
        )
        lines.append(
            "hereditary: "
            + ", ".join(f"{k}={self.hereditary[k]}" for k in ("hc", "fails_at", "unknown"))
        )
        return "\n".join(lines)


def check_model_witness(record) -> bool:
    """Re-evaluate a satisfiable record's model against its sentences."""
    model = Model.from_rows([[c == "1" for c in row] for row in record["witness"]["model"]])
    body = PredicateBody(parse(record["canonical_body"]))
    sentences = [cos_instance(body)]
    if record["budgets"]["ee"]:
        sentences.append(extensionality())
    return all(eval_sentence(s, model) for s in sentences)


def run_experiment(config: ExperimentConfig) -> Summary:
    """Enumerate, classify and append records in enumeration order."""
    existing: list[dict] = []
    if config.resume and config.out.exists():
        existing = read_catalog(config.out)
    bodies = [body_key(b) for b in enumerate_bodies(config.enum)]

    done = {r["canonical_body"]: r for r in existing}
    retry = set()
    for r in existing:
        if r["verdict"] == "unknown":
            old = Budgets(
                Budget(
                    r["budgets"]["max_generated_clauses"],
                    r["budgets"]["max_clause_literals"],
                    r["budgets"]["max_term_depth"],
                ),
                r["budgets"]["max_model_size"],
            )
            if config.budgets.dominates(old) and config.budgets != old:
                retry.add(r["canonical_body"])

    todo = [b for b in bodies if b not in done or b in retry]
    summary = Summary(skipped=len(bodies) - len(todo))
    results = _classify_all(todo, config)

    config.out.parent.mkdir(parents=True, exist_ok=True)
    prefix = [r["canonical_body"] for r in existing] == bodies[: len(existing)]
    if existing and prefix and not retry:
        # Plain resume: everything on disk is a prefix of the enumeration.
        _truncate_partial(config.out)
        for r in existing:
            summary.add(r)
        with open(config.out, "a") as fh:
            for record in results:
                fh.write(encode(record) + "\n")
                fh.flush()
                summary.written += 1
                summary.add(record)
    elif existing:
        # Retried or out-of-order records: rebuild the file in enumeration order.
        fresh = dict(zip(todo, results))
        tmp = config.out.with_suffix(config.out.suffix + ".tmp")
        with open(tmp, "w") as fh:
            for b in bodies:
                record = fresh[b] if b in fresh else done[b]
                fh.write(encode(record) + "\n")
                summary.add(record)
        os.replace(tmp, config.out)
        summary.written = len(fresh)
    else:
        with open(config.out, "w") as fh:
            for record in results:
                fh.write(encode(record) + "\n")
                fh.flush()
                summary.written += 1
                summary.add(record)
    for r in read_catalog(config.out):
        if r["verdict"] == "satisfiable":
            if not check_model_witness(r):
                raise RuntimeError(f"model witness fails for {r['canonical_body']}")
            summary.models_checked += 1
    return summary


def _truncate_partial(path: Path):
    data = path.read_bytes()
    cut = data.rfind(b"\n") + 1
    if cut != len(data):
        with open(path, "r+b") as fh:
            fh.truncate(cut)


def _classify_all(todo: list[str], config: ExperimentConfig):
    """Yield records for ``todo`` in order, using a process pool if asked."""
    if config.jobs == 1 or len(todo) < 2:
        _init_worker(config.budgets, config.include_ee)
        for text in todo:
            yield _work(text)
        return
    ctx = get_context("fork" if hasattr(os, "fork") else "spawn")
    with ctx.Pool(config.jobs, _init_worker, (config.budgets, config.include_ee)) as pool:
        # imap preserves input order: a reorder buffer for free.
        yield from pool.imap(_work, todo, chunksize=16)


def report(path) -> Summary:
    summary = Summary()
    for r in read_catalog(path):
        summary.add(r)
    return summary
