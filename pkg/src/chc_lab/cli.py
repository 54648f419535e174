"""``chc-lab`` command line.

Exit status: 0 on success, 1 on usage or parse errors, 2 on internal errors
(oracle conflicts, failed witness checks).
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

from .catalog import ExperimentConfig, MalformedRecord, report, run_experiment
from .classify import (
    Budgets,
    OracleConflict,
    WitnessError,
    classify,
    hereditary_classify,
    joint_check,
    negation_check,
)
from .comprehension import CORPUS_ALIASES, Sentence, corpus, cos_instance, lookup
from .enumerate import CONNECTIVES, EnumConfig, enumerate_bodies
from .formula import FormulaError, PredicateBody, alpha_canonical, free_vars, print_formula, size
from .models import ModelFinderError
from .parser import ParseError, parse
from .prover import Budget

log = logging.getLogger("chc_lab")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def resolve_item(text: str):
    """Corpus name (optionally ``corpus:``-prefixed), ``sentence:<text>`` or a body."""
    if text.startswith("sentence:"):
        f = parse(text[len("sentence:"):])
        try:
            return text, Sentence(f)
        except FormulaError as e:
            raise UsageError(str(e)) from None
    name = text[len("corpus:"):] if text.startswith("corpus:") else text
    try:
        entry = lookup(name)
        return entry.name, entry.item
    except KeyError:
        if text.startswith("corpus:"):
            raise UsageError(f"unknown corpus entry {name!r}") from None
    f = parse(text)
    try:
        return print_formula(f), PredicateBody(f)
    except FormulaError as e:
        raise UsageError(str(e)) from None


def _body_item(text: str) -> PredicateBody:
    label, item = resolve_item(text)
    if not isinstance(item, PredicateBody):
        raise UsageError(f"{label} is a sentence, not a predicate body")
    return item


def _budgets(args) -> Budgets:
    return Budgets(
        Budget(args.max_clauses, args.max_literals, args.max_depth, args.max_seconds),
        args.max_model_size,
    )


def _add_budget_flags(p):
    d = Budget()
    p.add_argument("--max-clauses", type=int, default=d.max_generated_clauses)
    p.add_argument("--max-literals", type=int, default=d.max_clause_literals)
    p.add_argument("--max-depth", type=int, default=d.max_term_depth)
    p.add_argument("--max-seconds", type=float, default=None)
    p.add_argument("--max-model-size", type=int, default=Budgets().max_model_size)
    p.add_argument("--no-ee", action="store_true", help="leave extensionality out")
    p.add_argument("--witness", action="store_true", help="print the proof or model")


def _print_verdict(v, args):
    print(f"verdict: {v.kind}")
    if v.proof is not None:
        print(f"proof steps: {len(v.proof)}")
    elif v.model is not None:
        print(f"model size: {v.model.size}")
    elif v.lossy:
        print("search was lossy: clauses over the caps were discarded")
    if args.witness and v.decided:
        sys.stdout.write(v.witness_text())


def cmd_parse(args):
    f = parse(args.formula)
    print(print_formula(f))
    print(f"canonical: {print_formula(alpha_canonical(f))}")
    print(f"nodes: {size(f)}")
    print(f"free: {' '.join(sorted(free_vars(f))) or '-'}")


def cmd_classify(args):
    p = _body_item(args.item)
    v = classify(p, _budgets(args), not args.no_ee)
    print(f"instance: {cos_instance(p)}")
    _print_verdict(v, args)


def cmd_hereditary(args):
    p = _body_item(args.item)
    h = hereditary_classify(p, _budgets(args), not args.no_ee)
    print(f"hereditary: {h.tag()}")
    if h.kind == "fails_at" and args.witness:
        sys.stdout.write(h.witness.witness_text())
    for sub in h.unresolved:
        print(f"unresolved: {print_formula(sub.formula)}")


def cmd_negation(args):
    p = _body_item(args.item)
    _print_verdict(negation_check(p, _budgets(args), not args.no_ee), args)


def cmd_joint(args):
    items = [resolve_item(t)[1] for t in args.items]
    if args.from_catalog:
        from .catalog import read_catalog

        hc = [r for r in read_catalog(args.from_catalog) if r["hereditary"] == "hc"]
        items += [PredicateBody(parse(r["canonical_body"])) for r in hc[: args.limit]]
    if not items:
        raise UsageError("joint needs at least one item")
    _print_verdict(joint_check(items, _budgets(args), not args.no_ee), args)


def _enum_config(args) -> EnumConfig:
    conns = frozenset(args.connectives.split(",")) if args.connectives else frozenset(CONNECTIVES)
    try:
        return EnumConfig(args.max_nodes, args.max_bound_vars, conns)
    except ValueError as e:
        raise UsageError(str(e)) from None


def cmd_enumerate(args):
    for body in enumerate_bodies(_enum_config(args)):
        print(body)


def cmd_run(args):
    config = ExperimentConfig(
        enum=_enum_config(args),
        budgets=_budgets(args),
        include_ee=not args.no_ee,
        jobs=args.jobs,
        out=Path(args.out),
        resume=args.resume,
    )
    start = time.perf_counter()
    summary = run_experiment(config)
    print(summary.table())
    print(f"written: {summary.written}, skipped: {summary.skipped}, "
          f"models re-checked: {summary.models_checked}, "
          f"elapsed: {time.perf_counter() - start:.1f}s")


def cmd_report(args):
    summary = report(args.catalog)
    print(summary.table())
    for body in summary.pathological:
        print(f"pathological: {body}")


def cmd_corpus(args):
    if args.name:
        label, item = resolve_item(args.name)
        entry = lookup(label)
        kind = "body" if entry.is_predicate else "sentence"
        print(f"{entry.name} ({kind}): {print_formula(entry.item.formula)}")
        if entry.is_predicate:
            print(f"instance: {cos_instance(entry.item)}")
        if entry.expected_verdict:
            print(f"expected: {entry.expected_verdict}")
        return
    aliases = {}
    for alias, name in CORPUS_ALIASES.items():
        aliases.setdefault(name, []).append(alias)
    for entry in corpus():
        extra = f" (alias {', '.join(aliases[entry.name])})" if entry.name in aliases else ""
        print(f"{entry.name}{extra}: {print_formula(entry.item.formula)}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="chc-lab", description="Comprehension-instance workbench.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("parse", help="parse and pretty-print a formula")
    p.add_argument("formula")
    p.set_defaults(func=cmd_parse)

    for name, func, help_ in (
        ("classify", cmd_classify, "classify a body or corpus entry"),
        ("hereditary", cmd_hereditary, "hereditary-consistency test"),
        ("negation", cmd_negation, "run both engines on the negated instance"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("item")
        _add_budget_flags(p)
        p.set_defaults(func=func)

    p = sub.add_parser("joint", help="joint consistency of several items (extensionality added)")
    p.add_argument("items", nargs="*")
    p.add_argument("--from-catalog", metavar="PATH",
                   help="experimental: add hereditarily consistent bodies from a catalog")
    p.add_argument("--limit", type=int, default=20)
    _add_budget_flags(p)
    p.set_defaults(func=cmd_joint)

    for name, func in (("enumerate", cmd_enumerate), ("run", cmd_run)):
        p = sub.add_parser(name)
        p.add_argument("--max-nodes", type=int, default=3)
        p.add_argument("--max-bound-vars", type=int, default=1)
        p.add_argument("--connectives", help=f"comma list from {','.join(CONNECTIVES)}")
        if name == "run":
            _add_budget_flags(p)
            p.add_argument("--jobs", type=int, default=1)
            p.add_argument("--resume", action="store_true")
            p.add_argument("--out", default="catalog.jsonl")
        p.set_defaults(func=func)

    p = sub.add_parser("report", help="summarize a catalog")
    p.add_argument("catalog")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("corpus", help="list or show named predicates")
    p.add_argument("name", nargs="?")
    p.set_defaults(func=cmd_corpus)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:  # --help, or a usage error already reported
        return int(e.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 1
    except (UsageError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (OracleConflict, WitnessError, ModelFinderError) as e:
        print(f"internal error: {e}", file=sys.stderr)
        return 2
    except (OSError, MalformedRecord) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2 if isinstance(e, OSError) else 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
