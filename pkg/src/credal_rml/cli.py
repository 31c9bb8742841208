"""Command-line entry point.

Exit codes: 0 success, 2 bad input (parse errors, unknown event names,
empty lists), 3 a domain precondition fails (e.g. an event that is not
strict-nonnull), 4 an unknown axiom name.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Sequence

import numpy as np

from credal_rml.axioms import AXIOMS, ActSampler, check_axiom, rml_vs_lr_divergence
from credal_rml.core import FB, ML, RML, LikelihoodRatio, UpdateRule, meu_value, update
from credal_rml.errors import CredalError, UnknownAxiom
from credal_rml.persuasion import persuasion_sweep
from credal_rml.problem import ProblemSpec, SpecError
from credal_rml.signals import table1_rows

EXIT_OK, EXIT_PARSE, EXIT_DOMAIN, EXIT_UNKNOWN = 0, 2, 3, 4


class UsageError(Exception):
    pass


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        v = float(x)
        return "0" if v == 0 else f"{v:.12g}"
    return str(x)


def render(headers: Sequence[str], rows: Sequence[Sequence], style: str) -> str:
    if style == "json":
        return json.dumps([dict(zip(headers, r)) for r in rows], indent=2, default=float)
    cells = [[fmt(c) for c in r] for r in rows]
    if style == "md":
        lines = ["| " + " | ".join(headers) + " |", "|" + "---|" * len(headers)]
        lines += ["| " + " | ".join(r) + " |" for r in cells]
        return "\n".join(lines)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(headers)
    w.writerows(cells)
    return buf.getvalue().rstrip("\n")


def _round12(x: float) -> float:
    return float(fmt(float(x)))


def rule_from_args(args, default: UpdateRule) -> UpdateRule:
    if args.rule is None:
        if args.alpha is not None or args.lam is not None:
            raise UsageError("--alpha/--lambda need --rule")
        return default
    if args.rule == "FB":
        return FB()
    if args.rule == "ML":
        return ML()
    if args.rule == "RML":
        if args.alpha is None:
            raise UsageError("--rule RML needs --alpha")
        return RML(args.alpha)
    if args.lam is None:
        raise UsageError("--rule LR needs --lambda")
    return LikelihoodRatio(args.lam)


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------


def cmd_update(args) -> str:
    spec = ProblemSpec.load(args.spec)
    e = spec.event(args.event)
    rule = rule_from_args(args, spec.rule)
    post = update(spec.credal_set, e, rule)
    labels = list(spec.states.labels)
    acts = sorted(spec.acts.items())
    ces = [(name, meu_value(post, f)) for name, f in acts]
    if args.format == "json":
        return json.dumps(
            {
                "event": args.event,
                "posterior": [[_round12(x) for x in v] for v in post.vertices],
                "conditional_ce": {n: _round12(c) for n, c in ces},
            },
            indent=2,
        )
    t1 = render(["vertex"] + labels, [[i + 1, *v] for i, v in enumerate(post.vertices)], args.format)
    t2 = render(["act", "ce"], [[n, c] for n, c in ces], args.format)
    return t1 + "\n\n" + t2


def cmd_table1(args) -> str:
    if not args.alpha:
        raise UsageError("the alpha list is empty")
    rows = table1_rows(args.beta, args.lambda1, args.lambda2, args.alpha)
    headers = ["beta", "signal", "alpha", "ml_prior", "eval_f", "benchmark", "comparison"]
    return render(headers, [[getattr(r, h) for h in headers] for r in rows], args.format)


def cmd_axioms(args) -> str:
    spec = ProblemSpec.load(args.spec)
    for a in args.axiom:
        if a not in AXIOMS:
            raise UnknownAxiom(f"unknown axiom {a!r}; known: {', '.join(AXIOMS)}")
    names = args.event or sorted(spec.events)
    if not names:
        raise UsageError("events: the problem file defines no events")
    events = [spec.event(n) for n in names]
    rule = rule_from_args(args, spec.rule)
    seed = spec.seed if args.seed is None else args.seed
    low, high = spec.box if spec.box is not None else (0.0, 10.0)
    fixed = tuple(tuple(f) for _, f in sorted(spec.acts.items()) if spec.box is None or (f.min() >= low and f.max() <= high))
    sampler = ActSampler(
        n_acts=args.n_acts, low=low, high=high, seed=seed, fixed_acts=fixed, bounded=spec.box is not None
    )
    reports = [check_axiom(a, spec.credal_set, rule, events, sampler).to_dict() for a in args.axiom]
    return json.dumps(reports, indent=2)


def cmd_persuasion(args) -> str:
    if not args.lam or not args.alpha:
        raise UsageError("the lambda and alpha lists must be nonempty")
    rows = persuasion_sweep(args.lam, args.alpha)
    headers = ["lambda", "alpha", "m_l", "m_l'", "m_h", "sender_value", "uniform_likelihood"]
    body = [
        [r.lam, r.alpha, r.actions.get("m_l", ""), r.actions.get("m_l'", ""), r.actions.get("m_h", ""),
         r.sender_value, r.uniform_likelihood]
        for r in rows
    ]
    return render(headers, body, args.format)


def cmd_divergence(args) -> str:
    spec = ProblemSpec.load(args.spec)
    e = spec.event(args.event)
    if args.alpha is None:
        raise UsageError("--alpha is required")
    out = rml_vs_lr_divergence(spec.credal_set, e, args.alpha, args.grid)
    return render(["event", "alpha", "grid", "diverges"], [[args.event, args.alpha, args.grid, out]], args.format)


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------


def _add_rule_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--rule", choices=["FB", "ML", "RML", "LR"], help="override the problem file's rule")
    p.add_argument("--alpha", type=float, help="RML weight (with --rule RML)")
    p.add_argument("--lambda", dest="lam", type=float, help="likelihood-ratio threshold (with --rule LR)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="credal-rml", description="Updating credal sets under MEU.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("update", help="posterior set and conditional values for one event")
    p.add_argument("spec", help="JSON problem file")
    p.add_argument("event", help="event name from the problem file")
    _add_rule_flags(p)
    p.add_argument("--format", choices=["csv", "md", "json"], default="csv")
    p.set_defaults(func=cmd_update)

    p = sub.add_parser("table1", help="six-case summary for the ambiguous-signal model")
    p.add_argument("--beta", type=float, nargs="+", default=[0.6, 0.4, 0.5])
    p.add_argument("--lambda1", type=float, default=0.8)
    p.add_argument("--lambda2", type=float, default=0.6)
    p.add_argument("--alpha", type=float, nargs="*", default=[0.0, 0.25, 0.5, 0.75, 1.0])
    p.add_argument("--format", choices=["csv", "md", "json"], default="md")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("axioms", help="check axioms on a problem file, JSON reports")
    p.add_argument("spec")
    p.add_argument("--axiom", nargs="+", required=True, help=f"any of {', '.join(AXIOMS)}")
    p.add_argument("--event", nargs="*", help="event names (default: all)")
    p.add_argument("--seed", type=int, help="override the problem file's seed")
    p.add_argument("--n-acts", type=int, default=1000)
    _add_rule_flags(p)
    p.set_defaults(func=cmd_axioms, format="json")

    p = sub.add_parser("persuasion", help="sweep of the two-kernel persuasion example")
    p.add_argument("--lambda", dest="lam", type=float, nargs="*", default=[0.0, 0.3, 0.6, 0.9])
    p.add_argument("--alpha", type=float, nargs="*", default=[0.0, 0.1, 0.5, 1.0])
    p.add_argument("--format", choices=["csv", "md", "json"], default="csv")
    p.set_defaults(func=cmd_persuasion)

    p = sub.add_parser("divergence", help="can a likelihood-ratio cut reproduce RML(alpha)?")
    p.add_argument("spec")
    p.add_argument("event")
    p.add_argument("--alpha", type=float)
    p.add_argument("--grid", type=int, default=10_000)
    p.add_argument("--format", choices=["csv", "md", "json"], default="csv")
    p.set_defaults(func=cmd_divergence)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out = args.func(args)
    except (SpecError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except UnknownAxiom as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return EXIT_UNKNOWN
    except CredalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    print(out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
