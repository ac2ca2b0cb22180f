"""Command-line interface.

Exit status: 0 when the answer is "holds"/"true", 1 when it is
"fails"/"false", 2 on any error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import diagnostics, modelcheck, system
from .buchi import DEFAULT_MAX_STATES, Budget
from .errors import CapacityError, CasAxiomError, SoftCompError
from .logic import parse
from .sca import compose_all, sca_to_json


def _value(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _values(text):
    text = text.strip()
    if text.startswith("["):
        return json.loads(text)
    return [_value(part) for part in text.split(",")]


def _load(path):
    p = Path(path)
    if not p.exists() and system.fixture_path(p.name).exists() and p.parent == Path("."):
        p = system.fixture_path(p.name)
    return system.load(p)


def _automaton(sysf, name, args):
    a = sysf.automaton(name)
    if getattr(args, "thresholds", None):
        a = a.with_factor_thresholds(_values(args.thresholds))
    if getattr(args, "threshold", None) is not None:
        a = a.with_threshold(_value(args.threshold))
    return a


def _emit(args, payload, text):
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def cmd_validate(args):
    try:
        sysf = _load(args.file)
    except CasAxiomError as exc:
        violations = [{"axiom": v.axiom, "witness": list(v.witness)} for v in exc.report.violations]
        _emit(args, {"valid": False, "violations": violations}, str(exc))
        return 1
    payload = {
        "valid": True,
        "actions": len(sysf.cas.actions),
        "scas": sorted(sysf.scas),
        "compositions": sorted(sysf.compositions),
        "formulas": sorted(sysf.formulas),
        "lassos": sorted(sysf.lassos),
    }
    _emit(args, payload, f"ok: {len(sysf.cas.actions)} actions, {len(sysf.scas)} SCAs "
                         f"({', '.join(sorted(sysf.scas))})")
    return 0


def cmd_compose(args):
    sysf = _load(args.file)
    names = [n for n in args.scas.split(",") if n]
    composed = compose_all([sysf.automaton(n) for n in names], name=args.out)
    if args.trim:
        composed = composed.trim()
    payload = {composed.name: sca_to_json(composed)}
    lines = [f"{composed.name}: {len(composed.states)} states, "
             f"{len(composed.transitions)} transitions"]
    sr = composed.semiring
    for t in composed.transitions:
        lines.append(f"  {t.source} --{t.action}, {sr.to_json(t.pref)}--> {t.target}")
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_check(args):
    sysf = _load(args.file)
    a = _automaton(sysf, args.sca, args)
    phi = parse(args.formula_text, sysf.cas) if args.formula_text else sysf.formula(args.formula)
    budget = Budget(args.max_states)
    run = modelcheck.check_interface if args.interface else modelcheck.check
    try:
        verdict = run(a, phi, budget, args.dump_automata)
    except CapacityError as exc:
        _emit(args, modelcheck.verdict_report(exc, a, phi), f"error: {exc}")
        return 2
    report = modelcheck.verdict_report(verdict, a, phi)
    text = report["verdict"]
    if verdict.counterexample is not None:
        text += f"\ncounterexample: {verdict.counterexample}"
    _emit(args, report, text)
    return 0 if verdict.holds else 1


def cmd_member(args):
    sysf = _load(args.file)
    a = _automaton(sysf, args.sca, args)
    sigma = sysf.lasso(args.lasso)
    ok = a.accepts(sigma)
    _emit(args, {"sca": a.name, "lasso": sigma.to_json(), "member": ok,
                 "threshold": a.semiring.to_json(a.threshold)}, str(ok).lower())
    return 0 if ok else 1


def cmd_diagnose(args):
    sysf = _load(args.file)
    a = _automaton(sysf, args.sca, args)
    sigma = sysf.lasso(args.lasso)
    trace = diagnostics.diagnostic_preference(a, sigma)
    sr = a.semiring
    payload = {
        "sca": a.name,
        "lasso": sigma.to_json(),
        "state_sets": [sorted(s) for s in trace.state_sets],
        "pref_sums": [sr.to_json(x) for x in trace.pref_sums],
        "loop_start": trace.loop_start,
        "collapsed": trace.collapsed,
        "d": sr.to_json(trace.value),
        "threshold": sr.to_json(a.threshold),
        "threshold_below_d": sr.leq(a.threshold, trace.value),
    }
    lines = [f"{i}: {{{', '.join(sorted(s))}}}  xi={sr.to_json(x)}"
             for i, (s, x) in enumerate(zip(trace.state_sets, trace.pref_sums))]
    lines.append(f"loops back to step {trace.loop_start}")
    if trace.collapsed:
        lines.append("note: the state set became empty; steps from there on contribute zero")
    lines.append(f"d = {sr.to_json(trace.value)}")
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_suspects(args):
    sysf = _load(args.file)
    a = sysf.automaton(args.composition)
    thresholds = _values(args.thresholds) if args.thresholds else None
    result = diagnostics.suspects(a, sysf.lasso(args.lasso), thresholds)
    sr = a.semiring
    fam = ", ".join("{" + ", ".join(sorted(m, key=result.labels.index)) + "}"
                    for m in result.minimal)
    text = (f"d = {sr.to_json(result.d)}\nminimal suspect subsets: {{{fam}}}\n"
            f"innocent: {', '.join(result.innocent) or '-'}")
    _emit(args, result.to_json(sr), text)
    return 0


def _global_flags(parser, default):
    # accepted before or after the subcommand; subcommand copies default to
    # SUPPRESS so they do not overwrite a value given earlier
    pick = lambda value: value if default else argparse.SUPPRESS  # noqa: E731
    parser.add_argument("--json", action="store_true", default=pick(False),
                        help="machine-readable output")
    parser.add_argument("--max-states", type=int, default=pick(DEFAULT_MAX_STATES),
                        help="state ceiling for automaton constructions")
    parser.add_argument("--dump-automata", metavar="DIR", default=pick(None),
                        help="write intermediate automata in HOA format to DIR")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, default=False)

    parser = argparse.ArgumentParser(prog="softcomp", description=__doc__.splitlines()[0])
    _global_flags(parser, default=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="load a system file and check the CAS")
    p.add_argument("file")
    p.set_defaults(run=cmd_validate)

    p = sub.add_parser("compose", parents=[common], help="compose SCAs")
    p.add_argument("file")
    p.add_argument("--scas", required=True, help="comma-separated SCA names")
    p.add_argument("--out", help="name of the composed automaton")
    p.add_argument("--trim", action="store_true", help="drop unreachable states")
    p.set_defaults(run=cmd_compose)

    def thresholds(q):
        q.add_argument("--threshold", help="overall threshold (JSON value)")
        q.add_argument("--thresholds",
                       help="per-factor thresholds, comma-separated or a JSON list")

    p = sub.add_parser("check", parents=[common], help="model-check an SCA")
    p.add_argument("file")
    p.add_argument("--sca", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--formula", help="formula name in the system file")
    group.add_argument("--formula-text", help="formula in concrete syntax")
    p.add_argument("--interface", action="store_true",
                   help="check the formula against every stream composable with a behaviour")
    thresholds(p)
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("member", parents=[common], help="is a lasso a behaviour?")
    p.add_argument("file")
    p.add_argument("--sca", required=True)
    p.add_argument("--lasso", required=True)
    thresholds(p)
    p.set_defaults(run=cmd_member)

    p = sub.add_parser("diagnose", parents=[common], help="diagnostic preference of a lasso")
    p.add_argument("file")
    p.add_argument("--sca", required=True)
    p.add_argument("--lasso", required=True)
    thresholds(p)
    p.set_defaults(run=cmd_diagnose)

    p = sub.add_parser("suspects", parents=[common], help="minimal suspect subsets")
    p.add_argument("file")
    p.add_argument("--composition", required=True)
    p.add_argument("--lasso", required=True)
    p.add_argument("--thresholds", help="per-factor thresholds, comma-separated or a JSON list")
    p.set_defaults(run=cmd_suspects)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except (SoftCompError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
