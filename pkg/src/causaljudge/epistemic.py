"""Epistemic states: a probability over causal settings plus a utility
function on worlds, evaluated with exact rational arithmetic."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ModelError, PreconditionViolated, ValueNotInRange
from .formulas import (
    Do,
    Formula,
    check_formula,
    formula_variables,
    holds,
    is_intervention_free,
    satisfies,
)
from .model import (
    CausalSetting,
    Signature,
    World,
    outcome_under_action,
    world_under,
)


@dataclass(frozen=True)
class UtilityFunction:
    """Additive utility: the sum of the weights whose condition a world meets.

    Conditions are intervention-free formulas over endogenous variables, so
    the function is total on worlds by construction.
    """

    terms: tuple[tuple[Formula, Fraction], ...]

    def __post_init__(self):
        object.__setattr__(
            self,
            "terms",
            tuple((cond, Fraction(weight)) for cond, weight in self.terms),
        )
        for cond, _ in self.terms:
            if not is_intervention_free(cond):
                raise PreconditionViolated(
                    "utility conditions must be intervention-free"
                )

    def value(self, world: World, signature: Signature) -> Fraction:
        total = Fraction(0)
        for cond, weight in self.terms:
            if satisfies(world, cond, signature):
                total += weight
        return total

    def variables(self) -> frozenset[str]:
        out: frozenset[str] = frozenset()
        for cond, _ in self.terms:
            out |= formula_variables(cond)
        return out


@dataclass(frozen=True)
class EpistemicState:
    """Weighted causal settings, a utility function, and the default action.

    Probabilities are exact, strictly positive, and sum to one; every
    setting shares one signature.  By convention each shipped context makes
    the action variable take the default action, so the unintervened world
    is the pre-action baseline; action comparisons always go through
    interventions on the action variable.
    """

    settings: tuple[tuple[CausalSetting, Fraction], ...]
    utility: UtilityFunction
    default_action: str

    def __post_init__(self):
        normalized = tuple(
            (setting, Fraction(p)) for setting, p in self.settings
        )
        object.__setattr__(self, "settings", normalized)
        if not normalized:
            raise ModelError("an epistemic state needs at least one setting")
        sig = normalized[0][0].model.signature
        for setting, p in normalized:
            if p <= 0:
                raise ModelError(f"setting probability {p} is not positive")
            if setting.model.signature != sig:
                raise ModelError("all settings must share one signature")
        if sum(p for _, p in normalized) != 1:
            total = sum(p for _, p in normalized)
            raise ModelError(f"probabilities sum to {total}, expected 1")
        object.__setattr__(
            self, "default_action", sig.resolve_value(sig.action_variable, self.default_action)
        )
        for cond, _ in self.utility.terms:
            check_formula(cond, sig)

    @property
    def signature(self) -> Signature:
        return self.settings[0][0].model.signature

    @property
    def actions(self) -> tuple[str, ...]:
        return self.signature.action_range

    def resolve_action(self, action: str) -> str:
        sig = self.signature
        return sig.resolve_value(sig.action_variable, action)


def prob(state: EpistemicState, formula: Formula) -> Fraction:
    """Total probability of the settings where the formula holds."""
    total = Fraction(0)
    for setting, p in state.settings:
        if holds(setting, formula):
            total += p
    return total


def delta(
    state: EpistemicState, action: str, alternative: str, outcome: Formula
) -> Fraction:
    """How much likelier the outcome is under ``action`` than under
    ``alternative``, floored at zero."""
    if not is_intervention_free(outcome):
        raise PreconditionViolated("delta takes an intervention-free outcome")
    action = state.resolve_action(action)
    alternative = state.resolve_action(alternative)
    act_var = state.signature.action_variable
    p_action = prob(state, Do(((act_var, action),), outcome))
    p_alt = prob(state, Do(((act_var, alternative),), outcome))
    return max(Fraction(0), p_action - p_alt)


def expected_utility(state: EpistemicState, action: str) -> Fraction:
    """Probability-weighted utility of the worlds the action brings about."""
    action = state.resolve_action(action)
    act_var = state.signature.action_variable
    sig = state.signature
    total = Fraction(0)
    for setting, p in state.settings:
        world = world_under(setting, {act_var: action})
        total += p * state.utility.value(world, sig)
    return total


def pinned_expected_utility(
    state: EpistemicState,
    alternative: str,
    pins: Sequence[str],
    action: str,
) -> Fraction:
    """Expected utility of the alternative with ``pins`` frozen, per setting,
    at the values they would take if ``action`` were performed."""
    sig = state.signature
    act_var = sig.action_variable
    alternative = state.resolve_action(alternative)
    action = state.resolve_action(action)
    pins = list(pins)
    if len(set(pins)) != len(pins):
        raise PreconditionViolated("pinned variables must be distinct")
    if act_var in pins:
        raise PreconditionViolated("the action variable cannot be pinned")
    total = Fraction(0)
    for setting, p in state.settings:
        values = outcome_under_action(setting, pins, action)
        iv = {act_var: alternative}
        iv.update(zip(pins, values))
        world = world_under(setting, iv)
        total += p * state.utility.value(world, sig)
    return total
