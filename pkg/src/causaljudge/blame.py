"""Action costs over declared cost variables, degrees of blameworthiness,
and degree of praiseworthiness.

Cost is the expected utility lost when the cost variables alone are pushed
to the values an action would give them.  Blame scales the probability
advantage delta by a cost mitigation factor (N - max(c(a') - c(a), 0)) / N;
praise is gated on the outcome being intended and compares the action's
cost against every alternative at least as effective.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .errors import (
    InvalidCostModel,
    InvalidM,
    InvalidN,
    NotAConjunction,
    PreconditionViolated,
)
from .epistemic import EpistemicState, delta
from .formulas import Formula, as_conjunction, conjunction, is_intervention_free
from .intent import (
    DEFAULT_MAX_SUPERSET,
    DefaultOnly,
    OutcomeVerdict,
    ReferencePolicy,
    intends_outcome,
)
from .model import outcome_under_action, solve, world_under


@dataclass(frozen=True)
class CostViolation:
    """One failed cost-variable axiom, with both sides of the inequality."""

    setting_index: int
    action: str
    subset: tuple[str, ...] | None  # None: the baseline axiom
    lhs: Fraction
    rhs: Fraction

    def describe(self) -> str:
        if self.subset is None:
            return (
                f"setting {self.setting_index}, action {self.action}: baseline "
                f"utility {self.lhs} < projected utility {self.rhs}"
            )
        shown = "{" + ", ".join(self.subset) + "}"
        return (
            f"setting {self.setting_index}, action {self.action}: projecting all "
            f"cost variables gives {self.lhs}, more than {self.rhs} from "
            f"subset {shown}"
        )


@dataclass(frozen=True)
class CostModel:
    cost_variables: tuple[str, ...]
    violations: tuple[CostViolation, ...]

    @property
    def validated(self) -> bool:
        return not self.violations


def validate_cost_vars(
    state: EpistemicState, cost_variables: Iterable[str]
) -> CostModel:
    """Check the cost-variable axioms for every setting and action.

    Projecting the cost variables to their under-the-action values may never
    raise utility above the baseline, and dropping some of them may never
    lower it further.  Violations are collected, not raised.
    """
    sig = state.signature
    act_var = sig.action_variable
    cost_vars = tuple(sorted(set(cost_variables)))
    for name in cost_vars:
        if name not in sig.endogenous or name == act_var:
            raise PreconditionViolated(
                f"{name!r} cannot serve as a cost variable"
            )
    violations = []
    for index, (setting, _) in enumerate(state.settings):
        baseline = state.utility.value(solve(setting), sig)
        for action in sig.action_range:
            values = outcome_under_action(setting, cost_vars, action)
            projected = state.utility.value(
                world_under(setting, dict(zip(cost_vars, values))), sig
            )
            if not baseline >= projected:
                violations.append(
                    CostViolation(index, action, None, baseline, projected)
                )
            by_var = dict(zip(cost_vars, values))
            for size in range(len(cost_vars) + 1):
                for subset in combinations(cost_vars, size):
                    partial = state.utility.value(
                        world_under(
                            setting, {v: by_var[v] for v in subset}
                        ),
                        sig,
                    )
                    if not projected <= partial:
                        violations.append(
                            CostViolation(
                                index, action, subset, projected, partial
                            )
                        )
    return CostModel(cost_vars, tuple(violations))


def cost(state: EpistemicState, action: str, cost_model: CostModel) -> Fraction:
    """Expected utility lost through the cost variables when acting."""
    if not cost_model.validated:
        raise InvalidCostModel(
            "cost model has unresolved axiom violations: "
            + cost_model.violations[0].describe()
        )
    action = state.resolve_action(action)
    sig = state.signature
    cost_vars = cost_model.cost_variables
    total = Fraction(0)
    for setting, p in state.settings:
        baseline = state.utility.value(solve(setting), sig)
        values = outcome_under_action(setting, cost_vars, action)
        projected = state.utility.value(
            world_under(setting, dict(zip(cost_vars, values))), sig
        )
        total += p * (baseline - projected)
    return total


def _check_scale(state, value, cost_model, exc):
    worst = max(cost(state, a, cost_model) for a in state.actions)
    if not value > worst:
        raise exc(
            f"the scale must exceed every action cost (max {worst}), got {value}"
        )


def blame_vs(
    state: EpistemicState,
    action: str,
    alternative: str,
    outcome: Formula,
    n: Fraction,
    cost_model: CostModel,
) -> Fraction:
    """Degree of blameworthiness of the action for the outcome relative to
    one alternative: delta times the cost mitigation factor."""
    n = Fraction(n)
    _check_scale(state, n, cost_model, InvalidN)
    action = state.resolve_action(action)
    alternative = state.resolve_action(alternative)
    d = delta(state, action, alternative, outcome)
    extra = max(
        cost(state, alternative, cost_model) - cost(state, action, cost_model),
        Fraction(0),
    )
    return d * (n - extra) / n


@dataclass(frozen=True)
class BlameRow:
    alternative: str
    delta: Fraction
    cost_action: Fraction
    cost_alternative: Fraction
    mitigation: Fraction
    db: Fraction


@dataclass(frozen=True)
class BlameReport:
    action: str
    outcome: Formula
    n: Fraction
    rows: tuple[BlameRow, ...]
    overall: Fraction
    argmax: tuple[str, ...]


def blame(
    state: EpistemicState,
    action: str,
    outcome: Formula,
    n: Fraction,
    cost_model: CostModel,
) -> BlameReport:
    """Blameworthiness against every alternative; the overall degree is the
    maximum row.  The action itself appears as a row and is always zero."""
    n = Fraction(n)
    _check_scale(state, n, cost_model, InvalidN)
    if not is_intervention_free(outcome):
        raise PreconditionViolated("blame takes an intervention-free outcome")
    action = state.resolve_action(action)
    costs = {a: cost(state, a, cost_model) for a in state.actions}
    rows = []
    for alternative in state.actions:
        d = delta(state, action, alternative, outcome)
        extra = max(costs[alternative] - costs[action], Fraction(0))
        mitigation = (n - extra) / n
        rows.append(
            BlameRow(
                alternative, d, costs[action], costs[alternative],
                mitigation, d * mitigation,
            )
        )
    overall = max(row.db for row in rows)
    argmax = tuple(row.alternative for row in rows if row.db == overall)
    return BlameReport(action, outcome, n, tuple(rows), overall, argmax)


@dataclass(frozen=True)
class PraiseResult:
    """Raw and clamped praise, with the intention gate's certificate."""

    intended: bool
    raw: Fraction
    value: Fraction
    delta: Fraction | None
    cost_factor: Fraction | None
    outcome_verdict: OutcomeVerdict


def praise(
    state: EpistemicState,
    action: str,
    outcome: Formula | Sequence[tuple[str, str]],
    m: Fraction,
    policy: ReferencePolicy = DefaultOnly(),
    cost_model: CostModel | None = None,
    max_k: int = DEFAULT_MAX_SUPERSET,
) -> PraiseResult:
    """Degree of praiseworthiness of the action for a conjunctive outcome.

    Zero unless the outcome was intended.  Otherwise delta against the
    default action plus a bonus that grows with the cost of the cheapest
    action at least as effective; the raw figure can exceed one, so the
    result is clamped and both are reported.
    """
    if cost_model is None:
        cost_model = validate_cost_vars(state, ())
    if isinstance(outcome, (list, tuple)):
        pairs: tuple[tuple[str, str], ...] | None = tuple(outcome)
    else:
        pairs = as_conjunction(outcome)
    if not pairs:
        raise NotAConjunction(
            "praise takes a conjunction of primitive events over distinct variables"
        )
    m = Fraction(m)
    _check_scale(state, m, cost_model, InvalidM)
    action = state.resolve_action(action)
    default = state.default_action
    if action == default:
        raise PreconditionViolated(
            "praise compares an action against the default; got the default itself"
        )
    verdict = intends_outcome(state, action, pairs, policy, max_k)
    if not verdict.intends:
        return PraiseResult(False, Fraction(0), Fraction(0), None, None, verdict)
    outcome_formula = conjunction(pairs)
    d = delta(state, action, default, outcome_formula)
    costs = {a: cost(state, a, cost_model) for a in state.actions}
    qualifying = [
        a for a in state.actions
        if delta(state, a, default, outcome_formula) >= d
    ]
    factor = min((m - costs[default] + costs[a]) / m for a in qualifying)
    raw = d + max(Fraction(0), (1 - d) * factor)
    value = min(max(raw, Fraction(0)), Fraction(1))
    return PraiseResult(True, raw, value, d, factor, verdict)
