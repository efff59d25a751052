"""Scenario documents: parsing, validation, serialization, and the shipped
corpus.

A scenario is a UTF-8 JSON file with fixed top-level keys: name,
action_variable, default_action, variables, equations, settings, utility,
cost_variables, reference_policy, N, M.  All numbers are exact rational
strings ("p/q" or an integer string); equations and utility conditions are
expression and formula strings.  Equations may be overridden per setting to
express uncertainty about the mechanism itself.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from itertools import product
from pathlib import Path
from typing import Mapping

from .errors import (
    CyclicModelError,
    EquationTypeError,
    ModelError,
    ParseError,
    PreconditionViolated,
    RangeViolation,
    ScenarioError,
)
from .epistemic import EpistemicState, UtilityFunction
from .blame import validate_cost_vars, cost
from .formulas import Formula, formula_variables, is_intervention_free, render_formula
from .intent import AllOthers, DefaultOnly, DefaultPlus, Explicit, ReferencePolicy
from .model import (
    CausalModel,
    CausalSetting,
    Equation,
    IfExpr,
    Num,
    Signature,
    Sym,
    check_equation_ranges,
    expr_symbols,
    expr_variables,
    render_expr,
    solve,
    topological_order,
)
from .parsing import parse_expression, parse_formula

_RATIONAL_RE = re.compile(r"-?\d+(/\d+)?\Z")
_SCN_SUFFIX = ".scn.json"

TOP_LEVEL_KEYS = (
    "name", "action_variable", "default_action", "variables", "equations",
    "settings", "utility", "cost_variables", "reference_policy", "N", "M",
)


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    code: str
    message: str
    file: str = "<scenario>"
    line: int = 1
    column: int = 1

    def render(self) -> str:
        return (
            f"{self.severity}[{self.code}] {self.file}:{self.line}:{self.column}: "
            f"{self.message}"
        )


@dataclass(frozen=True)
class ScenarioSetting:
    context: Mapping[str, str]
    probability: Fraction
    equation_overrides: Mapping[str, Equation]

    def __post_init__(self):
        object.__setattr__(self, "context", dict(self.context))
        object.__setattr__(
            self, "equation_overrides", dict(self.equation_overrides)
        )


@dataclass(frozen=True)
class ScenarioDoc:
    name: str
    signature: Signature
    equations: Mapping[str, Equation]
    settings: tuple[ScenarioSetting, ...]
    utility_terms: tuple[tuple[Formula, Fraction], ...]
    default_action: str
    cost_variables: tuple[str, ...]
    reference_policy: ReferencePolicy
    n_default: Fraction
    m_default: Fraction

    def __post_init__(self):
        object.__setattr__(self, "equations", dict(self.equations))
        object.__setattr__(self, "settings", tuple(self.settings))
        object.__setattr__(self, "utility_terms", tuple(self.utility_terms))
        object.__setattr__(self, "cost_variables", tuple(self.cost_variables))

    def model_for(self, index: int) -> CausalModel:
        merged = dict(self.equations)
        merged.update(self.settings[index].equation_overrides)
        return CausalModel(self.signature, merged)

    def setting_for(self, index: int) -> CausalSetting:
        return CausalSetting(self.model_for(index), self.settings[index].context)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

class _DuplicateKey(Exception):
    def __init__(self, key):
        self.key = key


def _no_duplicate_keys(pairs):
    seen = set()
    for key, _ in pairs:
        if key in seen:
            raise _DuplicateKey(key)
        seen.add(key)
    return dict(pairs)


def _position_of(text: str, needle: str, occurrence: int = 1) -> tuple[int, int]:
    """Best-effort position of the n-th quoted key in the source text."""
    target = f'"{needle}"'
    start = -1
    for _ in range(occurrence):
        start = text.find(target, start + 1)
        if start < 0:
            return 1, 1
    line = text.count("\n", 0, start) + 1
    column = start - (text.rfind("\n", 0, start) + 1) + 1
    return line, column


class _Collector:
    def __init__(self, filename: str, text: str):
        self.filename = filename
        self.text = text
        self.diagnostics: list[Diagnostic] = []

    def error(self, code, message, key=None, occurrence=1):
        line, column = (1, 1)
        if key is not None:
            line, column = _position_of(self.text, key, occurrence)
        self.diagnostics.append(
            Diagnostic("error", code, message, self.filename, line, column)
        )

    def warning(self, code, message, key=None, occurrence=1):
        line, column = (1, 1)
        if key is not None:
            line, column = _position_of(self.text, key, occurrence)
        self.diagnostics.append(
            Diagnostic("warning", code, message, self.filename, line, column)
        )

    @property
    def errors(self):
        return [d for d in self.diagnostics if d.severity == "error"]

    def raise_if_errors(self):
        if self.errors:
            raise ScenarioError(self.diagnostics)


def _want(obj, key, kind, out: _Collector):
    value = obj.get(key)
    names = {str: "a string", dict: "an object", list: "an array"}
    if not isinstance(value, kind):
        out.error("bad-type", f"{key!r} must be {names[kind]}", key=key)
        return None
    return value


def _rational(text, what, out: _Collector, key=None):
    if not isinstance(text, str) or not _RATIONAL_RE.match(text):
        out.error(
            "bad-rational",
            f"{what} must be an exact rational string like \"3/4\", got {text!r}",
            key=key,
        )
        return None
    try:
        return Fraction(text)
    except ZeroDivisionError:
        out.error("bad-rational", f"{what} has a zero denominator", key=key)
        return None


def _string_list(value, what, out: _Collector, key=None):
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        out.error("bad-type", f"{what} must be an array of strings", key=key)
        return None
    return value


def _parse_equation_body(spec, target, signature, names, out, key_occurrence=1):
    """An equation is an expression string or a case list with a default."""
    if isinstance(spec, str):
        try:
            return parse_expression(spec, names)
        except ParseError as exc:
            out.error(
                "expr-syntax",
                f"equation for {target}: {exc.bare_message}",
                key=target,
                occurrence=key_occurrence,
            )
            return None
    if isinstance(spec, dict) and "cases" in spec and "default" in spec:
        def literal(value):
            if not isinstance(value, str):
                return None
            if target in signature.integer_typed and re.fullmatch(r"-?\d+", value):
                return Num(int(value))
            return Sym(value)

        body = literal(spec["default"])
        if body is None:
            out.error("bad-type", f"equation for {target}: case values must be "
                      "range value strings", key=target, occurrence=key_occurrence)
            return None
        for case in reversed(spec["cases"]):
            if not isinstance(case, dict) or "when" not in case or "value" not in case:
                out.error("bad-type", f"equation for {target}: each case needs "
                          "'when' and 'value'", key=target, occurrence=key_occurrence)
                return None
            value = literal(case["value"])
            if value is None:
                out.error("bad-type", f"equation for {target}: case values must "
                          "be range value strings", key=target,
                          occurrence=key_occurrence)
                return None
            try:
                condition = parse_expression(case["when"], names)
            except ParseError as exc:
                out.error(
                    "expr-syntax",
                    f"equation for {target}: {exc.bare_message}",
                    key=target,
                    occurrence=key_occurrence,
                )
                return None
            body = IfExpr(condition, value, body)
        return body
    out.error(
        "bad-type",
        f"equation for {target} must be an expression string or a cases object",
        key=target,
        occurrence=key_occurrence,
    )
    return None


def _check_equation_refs(eq, signature, out, occurrence=1):
    """Unknown symbols and bad references become diagnostics, not crashes."""
    all_values = set()
    for rng in signature.ranges.values():
        all_values.update(rng)
    for sym in sorted(expr_symbols(eq.body)):
        if sym not in all_values:
            out.error(
                "unknown-value",
                f"equation for {eq.target} mentions {sym!r}, which is neither a "
                "variable nor a range value",
                key=eq.target,
                occurrence=occurrence,
            )
    if eq.target in expr_variables(eq.body):
        out.error(
            "self-reference",
            f"equation for {eq.target} refers to itself",
            key=eq.target,
            occurrence=occurrence,
        )


_POLICY_STRINGS = {"default": DefaultOnly(), "all": AllOthers()}


def _parse_policy(spec, out: _Collector) -> ReferencePolicy | None:
    if isinstance(spec, str):
        policy = _POLICY_STRINGS.get(spec)
        if policy is None:
            out.error(
                "bad-policy",
                f"reference_policy must be \"default\", \"all\", or an object, "
                f"got {spec!r}",
                key="reference_policy",
            )
        return policy
    if isinstance(spec, dict):
        kind = spec.get("type")
        actions = spec.get("actions")
        if kind in ("explicit", "default_plus") and isinstance(actions, list) \
                and all(isinstance(a, str) for a in actions):
            cls = Explicit if kind == "explicit" else DefaultPlus
            return cls(tuple(actions))
    out.error(
        "bad-policy",
        "reference_policy objects need type \"explicit\" or \"default_plus\" "
        "and an actions array",
        key="reference_policy",
    )
    return None


def parse_scenario(text: str | bytes, filename: str = "<scenario>") -> ScenarioDoc:
    """Parse a scenario document; raises ScenarioError carrying diagnostics.

    Structural problems (syntax, types, unknown references) are reported
    here; semantic checks live in :func:`validate`.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ScenarioError([
                Diagnostic("error", "encoding", f"not valid UTF-8: {exc}", filename)
            ]) from None
    out = _Collector(filename, text)

    try:
        obj = json.loads(text, object_pairs_hook=_no_duplicate_keys)
    except _DuplicateKey as exc:
        out.error("duplicate-key", f"duplicate key {exc.key!r}", key=exc.key)
        out.raise_if_errors()
    except json.JSONDecodeError as exc:
        out.diagnostics.append(
            Diagnostic("error", "json-syntax", exc.msg, filename, exc.lineno, exc.colno)
        )
        out.raise_if_errors()
    except RecursionError:
        out.error("json-syntax", "document nests too deeply")
        out.raise_if_errors()

    if not isinstance(obj, dict):
        out.error("bad-type", "the top level must be a JSON object")
        out.raise_if_errors()
    for key in TOP_LEVEL_KEYS:
        if key not in obj:
            out.error("missing-key", f"missing top-level key {key!r}")
    for key in obj:
        if key not in TOP_LEVEL_KEYS:
            out.error("unknown-key", f"unknown top-level key {key!r}", key=key)
    out.raise_if_errors()

    name = _want(obj, "name", str, out)
    action_variable = _want(obj, "action_variable", str, out)
    default_action = _want(obj, "default_action", str, out)
    variables = _want(obj, "variables", dict, out)
    equations_obj = _want(obj, "equations", dict, out)
    settings_list = _want(obj, "settings", list, out)
    utility_list = _want(obj, "utility", list, out)
    cost_list = _string_list(obj.get("cost_variables"), "cost_variables", out,
                             key="cost_variables")
    policy = _parse_policy(obj.get("reference_policy"), out)
    n_default = _rational(obj.get("N"), "N", out, key="N")
    m_default = _rational(obj.get("M"), "M", out, key="M")
    out.raise_if_errors()

    # signature
    for part in ("exogenous", "endogenous"):
        if not isinstance(variables.get(part), dict):
            out.error("bad-type", f"variables.{part} must be an object", key=part)
    out.raise_if_errors()
    ranges = {}
    for part in ("exogenous", "endogenous"):
        for var, rng in variables[part].items():
            values = _string_list(rng, f"range of {var}", out, key=var)
            if values is not None:
                ranges[var] = tuple(values)
    out.raise_if_errors()
    try:
        signature = Signature(
            tuple(variables["exogenous"]),
            tuple(variables["endogenous"]),
            ranges,
            action_variable,
        )
    except ModelError as exc:
        out.error("bad-signature", str(exc), key="variables")
        out.raise_if_errors()
        raise AssertionError  # unreachable

    names = frozenset(signature.variables)

    # base equations
    equations: dict[str, Equation] = {}
    for var in signature.endogenous:
        if var not in equations_obj:
            out.error("missing-equation", f"no equation for endogenous {var!r}",
                      key="equations")
            continue
        body = _parse_equation_body(equations_obj[var], var, signature, names, out)
        if body is not None:
            eq = Equation(var, body)
            _check_equation_refs(eq, signature, out)
            equations[var] = eq
    for var in equations_obj:
        if var not in signature.endogenous:
            out.error(
                "unknown-variable",
                f"equation given for {var!r}, which is not endogenous",
                key=var,
            )

    # settings
    settings: list[ScenarioSetting] = []
    for index, item in enumerate(settings_list):
        if not isinstance(item, dict):
            out.error("bad-type", f"settings[{index}] must be an object",
                      key="settings")
            continue
        context = item.get("context")
        if not isinstance(context, dict) or not all(
            isinstance(v, str) for v in context.values()
        ):
            out.error("bad-type", f"settings[{index}].context must map exogenous "
                      "variables to value strings", key="context",
                      occurrence=index + 1)
            continue
        probability = _rational(
            item.get("probability"), f"settings[{index}].probability", out,
            key="probability",
        )
        overrides: dict[str, Equation] = {}
        for var, spec in (item.get("equations") or {}).items():
            if var not in signature.endogenous:
                out.error(
                    "unknown-variable",
                    f"settings[{index}] overrides the equation of {var!r}, "
                    "which is not endogenous",
                    key="settings",
                )
                continue
            body = _parse_equation_body(spec, var, signature, names, out,
                                        key_occurrence=2)
            if body is not None:
                eq = Equation(var, body)
                _check_equation_refs(eq, signature, out, occurrence=2)
                overrides[var] = eq
        if "variables" in item and item["variables"] != obj["variables"]:
            out.error(
                "signature-mismatch",
                f"settings[{index}] declares a different signature; all settings "
                "share the top-level one",
                key="settings",
            )
        extra = set(item) - {"context", "probability", "equations", "variables"}
        for key in sorted(extra):
            out.error("unknown-key", f"settings[{index}] has unknown key {key!r}",
                      key=key)
        if probability is not None:
            settings.append(ScenarioSetting(context, probability, overrides))

    # utility
    utility_terms: list[tuple[Formula, Fraction]] = []
    for index, item in enumerate(utility_list):
        if not isinstance(item, dict) or "when" not in item or "weight" not in item:
            out.error("bad-type", f"utility[{index}] needs 'when' and 'weight'",
                      key="utility")
            continue
        weight = _rational(item["weight"], f"utility[{index}].weight", out,
                           key="weight")
        try:
            condition = parse_formula(item["when"])
        except ParseError as exc:
            out.error("formula-syntax", f"utility[{index}]: {exc.bare_message}",
                      key="when", occurrence=index + 1)
            continue
        if not is_intervention_free(condition):
            out.error(
                "nested-intervention",
                f"utility[{index}] condition may not carry an intervention prefix",
                key="when", occurrence=index + 1,
            )
            continue
        if weight is not None:
            utility_terms.append((condition, weight))

    out.raise_if_errors()
    return ScenarioDoc(
        name=name,
        signature=signature,
        equations=equations,
        settings=tuple(settings),
        utility_terms=tuple(utility_terms),
        default_action=default_action,
        cost_variables=tuple(cost_list),
        reference_policy=policy,
        n_default=n_default,
        m_default=m_default,
    )


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def validate(doc: ScenarioDoc, filename: str = "<scenario>") -> list[Diagnostic]:
    """Semantic checks over a parsed document.

    Errors block building an epistemic state: bad probabilities, invalid
    models, out-of-range defaults.  Warnings flag modeling smells: utility
    on the action variable, contexts that break the default-action
    baseline, failed cost axioms, default scales below the cost bound.
    """
    diags: list[Diagnostic] = []
    sig = doc.signature

    def error(code, message):
        diags.append(Diagnostic("error", code, message, filename))

    def warning(code, message):
        diags.append(Diagnostic("warning", code, message, filename))

    total = sum((s.probability for s in doc.settings), Fraction(0))
    if not doc.settings:
        error("no-settings", "a scenario needs at least one setting")
    else:
        for index, s in enumerate(doc.settings):
            if s.probability <= 0:
                error(
                    "prob-nonpositive",
                    f"settings[{index}] has probability {s.probability}; "
                    "probabilities must be strictly positive",
                )
        if total != 1:
            error("prob-sum", f"probabilities sum to {total}, expected 1")

    try:
        default = sig.resolve_value(sig.action_variable, doc.default_action)
    except ModelError:
        default = None
        error(
            "default-action",
            f"default_action {doc.default_action!r} is not in the range of "
            f"{sig.action_variable!r}",
        )

    for var in doc.cost_variables:
        if var not in sig.endogenous or var == sig.action_variable:
            error(
                "cost-variable-unknown",
                f"cost variable {var!r} must be an endogenous variable other "
                "than the action variable",
            )

    models_ok = True
    for index in range(len(doc.settings)):
        try:
            model = doc.model_for(index)
            topological_order(model)
            check_equation_ranges(model)
        except CyclicModelError as exc:
            models_ok = False
            error("cycle", f"settings[{index}]: {exc}")
            continue
        except (RangeViolation, EquationTypeError, ModelError) as exc:
            models_ok = False
            error("range-violation" if isinstance(exc, RangeViolation)
                  else "equation-type", f"settings[{index}]: {exc}")
            continue
        try:
            setting = doc.setting_for(index)
        except ModelError as exc:
            models_ok = False
            error("bad-context", f"settings[{index}]: {exc}")
            continue
        if default is not None:
            world = solve(setting)
            if world[sig.action_variable] != default:
                warning(
                    "context-default",
                    f"settings[{index}] solves the action variable to "
                    f"{world[sig.action_variable]!r}, not the default "
                    f"{default!r}; the unintervened world is then not the "
                    "pre-action baseline",
                )

    for index, (condition, _) in enumerate(doc.utility_terms):
        for var in sorted(formula_variables(condition)):
            if var not in sig.endogenous:
                error(
                    "unknown-variable",
                    f"utility[{index}] mentions {var!r}, which is not endogenous",
                )
            elif var == sig.action_variable:
                warning(
                    "utility-action",
                    f"utility[{index}] conditions on the action variable; "
                    "utility should flow through outcome variables",
                )

    # reference sets must never resolve empty
    actions = sig.action_range
    policy = doc.reference_policy
    if isinstance(policy, (Explicit, DefaultPlus)):
        for a in policy.actions:
            try:
                sig.resolve_value(sig.action_variable, a)
            except ModelError:
                error(
                    "unknown-action",
                    f"reference_policy mentions {a!r}, not a value of "
                    f"{sig.action_variable!r}",
                )
    if default is not None:
        for a in actions:
            if isinstance(policy, DefaultOnly):
                resolved = {default} if a != default else set(actions) - {a}
            elif isinstance(policy, AllOthers):
                resolved = set(actions) - {a}
            elif isinstance(policy, Explicit):
                resolved = set(policy.actions) - {a}
            else:
                resolved = (set(policy.actions) | {default}) - {a}
            if not resolved:
                error(
                    "empty-ref",
                    f"the reference set for action {a!r} resolves empty",
                )
                break

    errors_so_far = any(d.severity == "error" for d in diags)
    if models_ok and not errors_so_far:
        state = to_epistemic_state(doc)
        cost_model = validate_cost_vars(state, doc.cost_variables)
        for violation in cost_model.violations:
            warning("cost-axiom", "cost-variable axiom fails: "
                    + violation.describe())
        if cost_model.validated:
            worst = max(cost(state, a, cost_model) for a in actions)
            if not doc.n_default > worst:
                warning(
                    "n-bound",
                    f"default N = {doc.n_default} does not exceed the maximum "
                    f"action cost {worst}; blame queries with it will be rejected",
                )
            if not doc.m_default > worst:
                warning(
                    "m-bound",
                    f"default M = {doc.m_default} does not exceed the maximum "
                    f"action cost {worst}; praise queries with it will be rejected",
                )
    return diags


def to_epistemic_state(doc: ScenarioDoc) -> EpistemicState:
    """Build the runtime epistemic state a validated document describes."""
    weighted = tuple(
        (doc.setting_for(index), s.probability)
        for index, s in enumerate(doc.settings)
    )
    return EpistemicState(
        settings=weighted,
        utility=UtilityFunction(doc.utility_terms),
        default_action=doc.default_action,
    )


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def _policy_to_json(policy: ReferencePolicy):
    if isinstance(policy, DefaultOnly):
        return "default"
    if isinstance(policy, AllOthers):
        return "all"
    kind = "explicit" if isinstance(policy, Explicit) else "default_plus"
    return {"type": kind, "actions": list(policy.actions)}


def serialize(doc: ScenarioDoc) -> str:
    """Canonical JSON text; parsing it back gives a structurally equal doc."""
    sig = doc.signature
    obj = {
        "name": doc.name,
        "action_variable": sig.action_variable,
        "default_action": doc.default_action,
        "variables": {
            "exogenous": {u: list(sig.ranges[u]) for u in sig.exogenous},
            "endogenous": {v: list(sig.ranges[v]) for v in sig.endogenous},
        },
        "equations": {
            v: render_expr(doc.equations[v].body) for v in sig.endogenous
        },
        "settings": [],
        "utility": [
            {"when": render_formula(cond), "weight": str(weight)}
            for cond, weight in doc.utility_terms
        ],
        "cost_variables": list(doc.cost_variables),
        "reference_policy": _policy_to_json(doc.reference_policy),
        "N": str(doc.n_default),
        "M": str(doc.m_default),
    }
    for s in doc.settings:
        entry = {
            "context": {u: s.context[u] for u in sig.exogenous},
            "probability": str(s.probability),
        }
        if s.equation_overrides:
            entry["equations"] = {
                v: render_expr(s.equation_overrides[v].body)
                for v in sig.endogenous if v in s.equation_overrides
            }
        obj["settings"].append(entry)
    return json.dumps(obj, indent=2) + "\n"


def load_scenario(path) -> ScenarioDoc:
    """Read, parse, and validate a scenario file; errors raise ScenarioError."""
    path = Path(path)
    doc = parse_scenario(path.read_bytes(), filename=str(path))
    diags = validate(doc, filename=str(path))
    if any(d.severity == "error" for d in diags):
        raise ScenarioError(diags)
    return doc


# ---------------------------------------------------------------------------
# Shipped corpus and parametric families
# ---------------------------------------------------------------------------

def _corpus_dir():
    return resources.files(__package__).joinpath("corpus")


def corpus_names() -> tuple[str, ...]:
    return tuple(sorted(
        entry.name[: -len(_SCN_SUFFIX)]
        for entry in _corpus_dir().iterdir()
        if entry.name.endswith(_SCN_SUFFIX)
    ))


def corpus_path(name: str):
    path = _corpus_dir().joinpath(name + _SCN_SUFFIX)
    if not path.is_file():
        raise FileNotFoundError(f"no corpus scenario named {name!r}")
    return path


def load_corpus(name: str) -> ScenarioDoc:
    path = corpus_path(name)
    doc = parse_scenario(path.read_bytes(), filename=str(path))
    diags = validate(doc, filename=str(path))
    if any(d.severity == "error" for d in diags):
        raise ScenarioError(diags)
    return doc


def _doc_from_obj(obj: dict, name: str) -> ScenarioDoc:
    doc = parse_scenario(json.dumps(obj), filename=f"<{name}>")
    diags = validate(doc, filename=f"<{name}>")
    if any(d.severity == "error" for d in diags):
        raise ScenarioError(diags)
    return doc


def frankfurt_doc(p) -> ScenarioDoc:
    """The poisoning-with-a-backup family.

    ``p`` is the probability that the onlooker can and would persuade the
    agent to shoot if the drink is not poisoned.  Degenerate weights drop
    the impossible setting, so p = 0 and p = 1 are single-setting states.
    """
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise PreconditionViolated("p must lie in [0, 1]")
    settings = []
    if p > 0:
        settings.append({"context": {"U_JP": "1"}, "probability": str(p)})
    if p < 1:
        settings.append({
            "context": {"U_JP": "1"},
            "probability": str(1 - p),
            "equations": {"BP": "0"},
        })
    obj = {
        "name": "frankfurt",
        "action_variable": "JP",
        "default_action": "1",
        "variables": {
            "exogenous": {"U_JP": ["0", "1"]},
            "endogenous": {
                "JP": ["0", "1"],
                "BP": ["0", "1"],
                "JS": ["0", "1"],
                "SD": ["0", "1"],
            },
        },
        "equations": {
            "JP": "U_JP",
            "BP": "1 - JP",
            "JS": "BP",
            "SD": "(JS = 1) | (JP = 1)",
        },
        "settings": settings,
        "utility": [
            {"when": "SD = 1", "weight": "10"},
            {"when": "JS = 1", "weight": "-1"},
        ],
        "cost_variables": [],
        "reference_policy": "default",
        "N": "1",
        "M": "1",
    }
    return _doc_from_obj(obj, f"frankfurt(p={p})")


def commons_doc(n: int, m: int, q) -> ScenarioDoc:
    """A shared-resource collapse family with ``n`` fishers.

    The agent decides whether to fish; the other ``n - 1`` fish
    independently with probability ``q`` each.  The stock collapses when at
    least ``m`` fish.  One setting per joint choice of the others.
    """
    q = Fraction(q)
    if n < 2:
        raise PreconditionViolated("need at least two fishers")
    if not 0 < q < 1:
        raise PreconditionViolated("q must lie strictly between 0 and 1")
    others = n - 1
    fisher = [f"F{i}" for i in range(1, others + 1)]
    exogenous = {"U_A": ["0", "1"]}
    exogenous.update({f"U_{f}": ["0", "1"] for f in fisher})
    endogenous = {"A": ["0", "1"]}
    endogenous.update({f: ["0", "1"] for f in fisher})
    endogenous.update({"Catch": ["0", "1"], "C": ["0", "1"]})
    equations = {"A": "U_A"}
    equations.update({f: f"U_{f}" for f in fisher})
    equations["Catch"] = "A"
    equations["C"] = " + ".join(fisher + ["A"]) + f" >= {m}"
    settings = []
    for bits in product((0, 1), repeat=others):
        weight = q ** sum(bits) * (1 - q) ** (others - sum(bits))
        context = {"U_A": "0"}
        context.update({f"U_{f}": str(b) for f, b in zip(fisher, bits)})
        settings.append({"context": context, "probability": str(weight)})
    obj = {
        "name": f"commons_{n}_{m}",
        "action_variable": "A",
        "default_action": "0",
        "variables": {"exogenous": exogenous, "endogenous": endogenous},
        "equations": equations,
        "settings": settings,
        "utility": [
            {"when": "Catch = 1", "weight": "1"},
            {"when": "C = 1", "weight": "-10"},
        ],
        "cost_variables": [],
        "reference_policy": "default",
        "N": "1",
        "M": "1",
    }
    return _doc_from_obj(obj, f"commons({n},{m},q={q})")
