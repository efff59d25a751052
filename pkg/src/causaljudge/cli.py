"""Command-line front end.

Every judgment is a subcommand over a scenario file.  Exit codes: 0 the
query completed (the verdict itself lives in the output), 2 usage error,
3 validation error, 4 an internal limit such as the variable cap.  With
``--json`` a single JSON document goes to stdout; rationals appear as exact
"p/q" strings next to a display-only decimal approximation.  Output is
fully deterministic.
"""

from __future__ import annotations

import argparse
import json
import sys
from decimal import Decimal, localcontext
from fractions import Fraction

from . import blame as B
from . import intent as I
from .cause import check_cause
from .epistemic import expected_utility
from .errors import (
    EngineError,
    ParseError,
    ScenarioError,
    VariableCapExceeded,
)
from .formulas import Do, as_conjunction, check_formula, holds, render_formula
from .model import world_under
from .parsing import parse_formula
from .scenario import load_scenario, to_epistemic_state, validate

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VALIDATION = 3
EXIT_LIMIT = 4


def _approx(value: Fraction) -> str:
    with localcontext() as ctx:
        ctx.prec = 20
        return str(Decimal(value.numerator) / Decimal(value.denominator))


def _rat(value: Fraction) -> dict:
    return {"exact": str(value), "approx": _approx(value)}


def _show(value: Fraction) -> str:
    return str(value) if value.denominator == 1 else f"{value} (~{_approx(value)})"


def _parse_rational_flag(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(
            f"expected an exact rational like 3/4, got {text!r}"
        )


def _parse_assignments(text: str) -> list[tuple[str, str]]:
    """Comma-separated 'X=x' pairs, as used by --cand and conjunctive outcomes."""
    pairs = []
    for chunk in text.split(","):
        var, sep, value = chunk.partition("=")
        var, value = var.strip(), value.strip()
        if not sep or not var or not value:
            raise EngineError(f"expected comma-separated X=x pairs, got {text!r}")
        pairs.append((var, value))
    return pairs


def _parse_ref_flag(text: str):
    if text == "default":
        return I.DefaultOnly()
    if text == "all":
        return I.AllOthers()
    if text.startswith("list:"):
        actions = tuple(a.strip() for a in text[len("list:"):].split(",") if a.strip())
        if actions:
            return I.Explicit(actions)
    raise argparse.ArgumentTypeError(
        f"expected default, all, or list:a,b,..., got {text!r}"
    )


def _diag_json(diag) -> dict:
    return {
        "severity": diag.severity,
        "code": diag.code,
        "message": diag.message,
        "file": diag.file,
        "line": diag.line,
        "column": diag.column,
    }


def _load(path: str):
    """Parse and validate; warnings go to stderr, errors abort via ScenarioError."""
    doc = load_scenario(path)
    for diag in validate(doc, filename=str(path)):
        print(diag.render(), file=sys.stderr)
    return doc


def _formula(doc, text: str):
    formula = parse_formula(text)
    check_formula(formula, doc.signature)
    return formula


def _setting(doc, index: int):
    if not 0 <= index < len(doc.settings):
        raise EngineError(
            f"setting index {index} out of range; the file has {len(doc.settings)}"
        )
    return doc.setting_for(index)


def _cost_model(doc, state):
    cm = B.validate_cost_vars(state, doc.cost_variables)
    return cm


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _cmd_validate(args):
    try:
        doc = load_scenario(args.file)
        diags = validate(doc, filename=str(args.file))
    except ScenarioError as exc:
        result = {
            "subcommand": "validate",
            "file": str(args.file),
            "ok": False,
            "diagnostics": [_diag_json(d) for d in exc.diagnostics],
        }
        lines = [d.render() for d in exc.diagnostics]
        lines.append(f"{args.file}: INVALID")
        return result, lines, EXIT_VALIDATION
    result = {
        "subcommand": "validate",
        "file": str(args.file),
        "ok": True,
        "diagnostics": [_diag_json(d) for d in diags],
    }
    lines = [d.render() for d in diags]
    lines.append(f"{args.file}: OK ({len(doc.settings)} settings)")
    return result, lines, EXIT_OK


def _cmd_eval(args):
    doc = _load(args.file)
    formula = _formula(doc, args.formula)
    setting = _setting(doc, args.setting)
    verdict = holds(setting, formula)
    world = world_under(
        setting,
        dict(formula.assignments) if isinstance(formula, Do) else {},
    )
    result = {
        "subcommand": "eval",
        "file": str(args.file),
        "setting": args.setting,
        "formula": render_formula(formula),
        "holds": verdict,
        "world": world,
    }
    lines = [
        f"{render_formula(formula)}  in setting {args.setting}: "
        + ("TRUE" if verdict else "FALSE"),
        "world: " + ", ".join(f"{k}={v}" for k, v in world.items()),
    ]
    return result, lines, EXIT_OK


def _cmd_cause(args):
    doc = _load(args.file)
    outcome = _formula(doc, args.outcome)
    candidate = dict(_parse_assignments(args.cand))
    setting = _setting(doc, args.setting)
    verdict = check_cause(setting, candidate, outcome)
    witness = verdict.ac2_witness
    result = {
        "subcommand": "cause",
        "file": str(args.file),
        "setting": args.setting,
        "candidate": candidate,
        "outcome": render_formula(outcome),
        "ac1": verdict.ac1,
        "ac3": verdict.ac3,
        "is_cause": verdict.is_cause,
        "witness": None if witness is None else {
            "contingency": dict(zip(witness.contingency, witness.contingency_values)),
            "alternative": dict(zip(candidate.keys(), witness.alternative)),
        },
    }
    cand_text = " & ".join(f"{k} = {v}" for k, v in candidate.items())
    lines = [
        f"{cand_text} for {render_formula(outcome)}: "
        + ("CAUSE" if verdict.is_cause else "NOT A CAUSE"),
        f"  ac1 (events actually hold): {'yes' if verdict.ac1 else 'no'}",
        f"  ac3 (minimal): {'yes' if verdict.ac3 else 'no'}",
    ]
    if witness is not None:
        frozen = ", ".join(
            f"{w} <- {v}" for w, v in zip(witness.contingency, witness.contingency_values)
        ) or "(empty)"
        alt = ", ".join(
            f"{k} <- {v}" for k, v in zip(candidate.keys(), witness.alternative)
        )
        lines.append(f"  ac2 witness: freeze {frozen}; switch {alt}")
    else:
        lines.append("  ac2 witness: none")
    return result, lines, EXIT_OK


def _blame_rows_json(report):
    return [
        {
            "alternative": row.alternative,
            "delta": _rat(row.delta),
            "cost_action": _rat(row.cost_action),
            "cost_alternative": _rat(row.cost_alternative),
            "mitigation": _rat(row.mitigation),
            "db": _rat(row.db),
        }
        for row in report.rows
    ]


def _blame_lines(report):
    lines = [
        f"blame of action {report.action} for {render_formula(report.outcome)}"
        f"  (N = {report.n})",
        "  alternative | delta | cost(a) | cost(a') | mitigation | db",
    ]
    for row in report.rows:
        lines.append(
            f"  {row.alternative} | {_show(row.delta)} | {_show(row.cost_action)}"
            f" | {_show(row.cost_alternative)} | {_show(row.mitigation)}"
            f" | {_show(row.db)}"
        )
    lines.append(
        f"overall: {_show(report.overall)}  argmax: {', '.join(report.argmax)}"
    )
    return lines


def _cmd_blame(args):
    doc = _load(args.file)
    state = to_epistemic_state(doc)
    outcome = _formula(doc, args.outcome)
    cm = _cost_model(doc, state)
    n = args.n if args.n is not None else doc.n_default
    if args.versus is not None:
        value = B.blame_vs(state, args.action, args.versus, outcome, n, cm)
        result = {
            "subcommand": "blame",
            "file": str(args.file),
            "action": args.action,
            "versus": args.versus,
            "outcome": render_formula(outcome),
            "N": _rat(n),
            "db": _rat(value),
        }
        lines = [
            f"db_N({args.action}, {args.versus}, {render_formula(outcome)})"
            f" = {_show(value)}  (N = {n})"
        ]
        return result, lines, EXIT_OK
    report = B.blame(state, args.action, outcome, n, cm)
    result = {
        "subcommand": "blame",
        "file": str(args.file),
        "action": report.action,
        "outcome": render_formula(outcome),
        "N": _rat(report.n),
        "rows": _blame_rows_json(report),
        "overall": _rat(report.overall),
        "argmax": list(report.argmax),
    }
    return result, _blame_lines(report), EXIT_OK


def _cmd_intended_action(args):
    doc = _load(args.file)
    state = to_epistemic_state(doc)
    actual = _setting(doc, args.setting) if args.setting is not None else None
    verdict = I.action_intended(state, args.action, actual)
    table = {a: expected_utility(state, a) for a in state.actions}
    result = {
        "subcommand": "intended-action",
        "file": str(args.file),
        "action": args.action,
        "setting": args.setting,
        "intended": verdict,
        "expected_utility": {a: _rat(v) for a, v in table.items()},
    }
    lines = [
        f"action {args.action}: " + ("INTENDED" if verdict else "NOT INTENDED"),
        "expected utility: "
        + ", ".join(f"{a}: {_show(v)}" for a, v in table.items()),
    ]
    return result, lines, EXIT_OK


def _affect_json(verdict):
    return {
        "intends": verdict.intends,
        "witness": list(verdict.witness) if verdict.witness else None,
        "witness_pins": [list(p) for p in verdict.witness_pins]
        if verdict.witness_pins
        else None,
        "truncated": verdict.truncated,
        "trace": [
            {
                "members": list(row.members),
                "action_utility": _rat(row.action_utility),
                "best_pinned": _rat(row.best_pinned),
                "decided_by": row.decided_by,
                "failing_subset": list(row.failing_subset)
                if row.failing_subset is not None
                else None,
                "failing_subset_pinned": _rat(row.failing_subset_pinned)
                if row.failing_subset_pinned is not None
                else None,
            }
            for row in verdict.trace
        ],
    }


def _affect_lines(args, verdict, variables):
    shown = "{" + ", ".join(variables) + "}"
    head = f"intends to affect {shown}: "
    if verdict.intends:
        head += "YES via {" + ", ".join(verdict.witness) + "}"
    else:
        head += "NO"
        if verdict.truncated:
            head += "  (supersets truncated at --max-superset; inconclusive)"
    lines = [head]
    for row in verdict.trace:
        entry = (
            "  {" + ", ".join(row.members) + "}: EU(a) "
            + _show(row.action_utility) + " vs best pinned " + _show(row.best_pinned)
        )
        if not row.passes_existence:
            entry += "  -> fails existence"
        elif row.failing_subset is not None:
            entry += (
                "  -> fails minimality at {" + ", ".join(row.failing_subset) + "}"
            )
        else:
            entry += "  -> witness"
        lines.append(entry)
    return lines


def _cmd_intends_affect(args):
    doc = _load(args.file)
    state = to_epistemic_state(doc)
    variables = [v.strip() for v in args.vars.split(",") if v.strip()]
    policy = args.ref if args.ref is not None else doc.reference_policy
    verdict = I.intends_to_affect(
        state, args.action, variables, policy, args.max_superset
    )
    result = {
        "subcommand": "intends-affect",
        "file": str(args.file),
        "action": args.action,
        "vars": sorted(set(variables)),
        "reference": list(I.resolve_ref(policy, args.action, state)),
        "max_superset": args.max_superset,
        **_affect_json(verdict),
    }
    return result, _affect_lines(args, verdict, sorted(set(variables))), EXIT_OK


def _cmd_intends(args):
    doc = _load(args.file)
    state = to_epistemic_state(doc)
    pairs = _parse_assignments(args.outcome)
    policy = args.ref if args.ref is not None else doc.reference_policy
    verdict = I.intends_outcome(state, args.action, pairs, policy, args.max_superset)
    outcome_text = " & ".join(f"{k} = {v}" for k, v in pairs)
    result = {
        "subcommand": "intends",
        "file": str(args.file),
        "action": args.action,
        "outcome": dict(pairs),
        "reference": list(I.resolve_ref(policy, args.action, state)),
        "max_superset": args.max_superset,
        "intends": verdict.intends,
        "possible": verdict.possible,
        "reachable": [
            {
                "values": dict(zip((v for v, _ in pairs), values)),
                "score": _rat(score),
            }
            for values, score in verdict.reachable
        ],
        "affect": _affect_json(verdict.affects),
    }
    lines = [
        f"intends {outcome_text}: " + ("YES" if verdict.intends else "NO"),
        f"  affects the variables: {'yes' if verdict.affects.intends else 'no'}"
        + (
            "  via {" + ", ".join(verdict.affects.witness) + "}"
            if verdict.affects.witness
            else ""
        ),
        f"  possible under the action: {'yes' if verdict.possible else 'no'}",
    ]
    for values, score in verdict.reachable:
        mark = " *" if values == verdict.target_values else ""
        lines.append(
            "  reachable " + ", ".join(values) + f": score {_show(score)}{mark}"
        )
    if verdict.affects.truncated and not verdict.intends:
        lines.append("  (supersets truncated at --max-superset; inconclusive)")
    return result, lines, EXIT_OK


def _cmd_praise(args):
    doc = _load(args.file)
    state = to_epistemic_state(doc)
    pairs = _parse_assignments(args.outcome)
    cm = _cost_model(doc, state)
    m = args.m if args.m is not None else doc.m_default
    outcome = B.praise(
        state, args.action, pairs, m, doc.reference_policy, cm, args.max_superset
    )
    outcome_text = " & ".join(f"{k} = {v}" for k, v in pairs)
    result = {
        "subcommand": "praise",
        "file": str(args.file),
        "action": args.action,
        "outcome": dict(pairs),
        "M": _rat(m),
        "intended": outcome.intended,
        "raw": _rat(outcome.raw),
        "value": _rat(outcome.value),
        "delta": _rat(outcome.delta) if outcome.delta is not None else None,
        "cost_factor": _rat(outcome.cost_factor)
        if outcome.cost_factor is not None
        else None,
    }
    lines = [
        f"praise of {args.action} for {outcome_text}  (M = {m})",
        f"  intended: {'yes' if outcome.intended else 'no'}",
        f"  raw: {_show(outcome.raw)}   clamped: {_show(outcome.value)}",
    ]
    return result, lines, EXIT_OK


def _cmd_report(args):
    doc = _load(args.file)
    state = to_epistemic_state(doc)
    cm = _cost_model(doc, state)
    eu = {a: expected_utility(state, a) for a in state.actions}
    costs = (
        {a: B.cost(state, a, cm) for a in state.actions} if cm.validated else None
    )
    outcomes = []
    blames = []
    intents = []
    lines = [f"report for action {args.action} on {doc.name}", "expected utility:"]
    lines += [f"  {a}: {_show(v)}" for a, v in eu.items()]
    if costs is not None and cm.cost_variables:
        lines.append("action cost:")
        lines += [f"  {a}: {_show(v)}" for a, v in costs.items()]
    lines.append("declared outcomes (utility conditions):")
    for condition, _ in doc.utility_terms:
        text = render_formula(condition)
        report = B.blame(state, args.action, condition, doc.n_default, cm)
        entry = {
            "outcome": text,
            "blame": {
                "overall": _rat(report.overall),
                "argmax": list(report.argmax),
                "rows": _blame_rows_json(report),
            },
        }
        lines.append(f"  {text}: blame {_show(report.overall)}")
        pairs = as_conjunction(condition)
        if pairs is not None:
            verdict = I.intends_outcome(
                state, args.action, pairs, doc.reference_policy
            )
            entry["intends"] = verdict.intends
            lines[-1] += f", intended {'yes' if verdict.intends else 'no'}"
        outcomes.append(entry)
    intended = I.action_intended(state, args.action)
    lines.append(
        f"the action itself: {'INTENDED' if intended else 'NOT INTENDED'}"
    )
    result = {
        "subcommand": "report",
        "file": str(args.file),
        "name": doc.name,
        "action": args.action,
        "expected_utility": {a: _rat(v) for a, v in eu.items()},
        "cost": {a: _rat(v) for a, v in costs.items()} if costs else None,
        "action_intended": intended,
        "outcomes": outcomes,
        "N": _rat(doc.n_default),
    }
    return result, lines, EXIT_OK


# ---------------------------------------------------------------------------
# Parser and dispatch
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--json", action="store_true",
        help="emit one machine-readable JSON document on stdout",
    )

    parser = argparse.ArgumentParser(
        prog="causaljudge",
        description="Exact-arithmetic causal judgments over scenario files.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common],
                       help="parse and validate a scenario file")
    p.add_argument("file")

    p = sub.add_parser("eval", parents=[common],
                       help="evaluate a formula in one setting")
    p.add_argument("file")
    p.add_argument("--setting", type=int, default=0)
    p.add_argument("--formula", required=True)

    p = sub.add_parser("cause", parents=[common],
                       help="actual-cause check with witness")
    p.add_argument("file")
    p.add_argument("--setting", type=int, default=0)
    p.add_argument("--cand", required=True, help="conjunction, e.g. 'X=1,Y=0'")
    p.add_argument("--outcome", required=True)

    p = sub.add_parser("blame", parents=[common],
                       help="degree of blameworthiness")
    p.add_argument("file")
    p.add_argument("--action", required=True)
    p.add_argument("--outcome", required=True)
    p.add_argument("--versus", default=None)
    p.add_argument("--N", dest="n", type=_parse_rational_flag, default=None)

    p = sub.add_parser("intended-action", parents=[common],
                       help="was performing the action itself intended")
    p.add_argument("file")
    p.add_argument("--action", required=True)
    p.add_argument("--setting", type=int, default=None)

    p = sub.add_parser("intends-affect", parents=[common],
                       help="does the agent intend to affect these variables")
    p.add_argument("file")
    p.add_argument("--action", required=True)
    p.add_argument("--vars", required=True, help="comma-separated variables")
    p.add_argument("--ref", type=_parse_ref_flag, default=None,
                   help="default | all | list:a,b,...")
    p.add_argument("--max-superset", type=int, default=I.DEFAULT_MAX_SUPERSET)

    p = sub.add_parser("intends", parents=[common],
                       help="does the agent intend to bring about an outcome")
    p.add_argument("file")
    p.add_argument("--action", required=True)
    p.add_argument("--outcome", required=True, help="conjunction, e.g. 'X=1,Y=0'")
    p.add_argument("--ref", type=_parse_ref_flag, default=None)
    p.add_argument("--max-superset", type=int, default=I.DEFAULT_MAX_SUPERSET)

    p = sub.add_parser("praise", parents=[common],
                       help="degree of praiseworthiness")
    p.add_argument("file")
    p.add_argument("--action", required=True)
    p.add_argument("--outcome", required=True)
    p.add_argument("--M", dest="m", type=_parse_rational_flag, default=None)
    p.add_argument("--max-superset", type=int, default=I.DEFAULT_MAX_SUPERSET)

    p = sub.add_parser("report", parents=[common],
                       help="full analysis for one action")
    p.add_argument("file")
    p.add_argument("--action", required=True)

    return parser


_DISPATCH = {
    "validate": _cmd_validate,
    "eval": _cmd_eval,
    "cause": _cmd_cause,
    "blame": _cmd_blame,
    "intended-action": _cmd_intended_action,
    "intends-affect": _cmd_intends_affect,
    "intends": _cmd_intends,
    "praise": _cmd_praise,
    "report": _cmd_report,
}


def run(argv) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        result, lines, code = _DISPATCH[args.command](args)
    except ScenarioError as exc:
        for diag in exc.diagnostics:
            print(diag.render(), file=sys.stderr)
        return EXIT_VALIDATION
    except VariableCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except EngineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    if args.json:
        print(json.dumps(result, indent=2))
    else:
        print("\n".join(lines))
    return code


def main(argv=None) -> int:
    try:
        return run(sys.argv[1:] if argv is None else argv)
    except SystemExit as exc:  # argparse usage errors and --help
        code = exc.code
        return code if isinstance(code, int) else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
