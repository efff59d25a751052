"""Intention judgments: intended actions, intending to affect variables,
and intending to bring about an outcome, against a reference set of
alternative actions.

An agent intends to affect a variable set when there is a minimal superset
whose values, frozen at what the action would make them, leave some
reference action at least as attractive as the action itself.  Witness
search is size-then-lexicographic and caps superset size, reporting the
truncation so a negative verdict under the cap reads as inconclusive.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .errors import EmptyReferenceSet, PreconditionViolated
from .epistemic import (
    EpistemicState,
    expected_utility,
    pinned_expected_utility,
)
from .formulas import Prim, holds
from .model import CausalSetting, outcome_under_action, world_under

DEFAULT_MAX_SUPERSET = 3


@dataclass(frozen=True)
class DefaultOnly:
    """Compare against the default action; against everything else when the
    action under scrutiny is itself the default."""


@dataclass(frozen=True)
class AllOthers:
    pass


@dataclass(frozen=True)
class Explicit:
    actions: tuple[str, ...]


@dataclass(frozen=True)
class DefaultPlus:
    actions: tuple[str, ...]


ReferencePolicy = DefaultOnly | AllOthers | Explicit | DefaultPlus


def resolve_ref(
    policy: ReferencePolicy, action: str, state: EpistemicState
) -> tuple[str, ...]:
    """The alternatives the action is judged against; never contains it."""
    action = state.resolve_action(action)
    everyone = state.actions
    if isinstance(policy, DefaultOnly):
        chosen = (
            {state.default_action}
            if action != state.default_action
            else set(everyone) - {action}
        )
    elif isinstance(policy, AllOthers):
        chosen = set(everyone) - {action}
    elif isinstance(policy, (Explicit, DefaultPlus)):
        chosen = {state.resolve_action(a) for a in policy.actions}
        if isinstance(policy, DefaultPlus):
            chosen.add(state.default_action)
        chosen -= {action}
    else:
        raise PreconditionViolated(f"unknown reference policy {policy!r}")
    out = tuple(a for a in everyone if a in chosen)
    if not out:
        raise EmptyReferenceSet(
            f"no reference actions left for {action!r} under {policy!r}"
        )
    return out


def action_intended(
    state: EpistemicState, action: str, actual: CausalSetting | None = None
) -> bool:
    """Whether performing the action was deliberate rather than forced or
    against the agent's own lights.

    False when the action is the only one available; when an actual setting
    is supplied, false unless the action really was taken there; otherwise
    true exactly if no action has higher expected utility.
    """
    action = state.resolve_action(action)
    if len(state.actions) < 2:
        return False
    if actual is not None:
        act_var = state.signature.action_variable
        if not holds(actual, Prim(act_var, action)):
            return False
    eu = expected_utility(state, action)
    return all(eu >= expected_utility(state, a) for a in state.actions)


@dataclass(frozen=True)
class CandidateCheck:
    """Trace row for one examined superset."""

    members: tuple[str, ...]
    action_utility: Fraction
    best_pinned: Fraction
    passes_existence: bool
    failing_subset: tuple[str, ...] | None = None
    failing_subset_pinned: Fraction | None = None

    @property
    def decided_by(self) -> str:
        return "existence" if not self.passes_existence else (
            "minimality" if self.failing_subset is not None else "witness"
        )


@dataclass(frozen=True)
class IntentVerdict:
    intends: bool
    witness: tuple[str, ...] | None
    witness_pins: tuple[tuple[str, ...], ...] | None
    trace: tuple[CandidateCheck, ...]
    truncated: bool


def _strict_subsets(members):
    for size in range(len(members)):
        yield from combinations(members, size)


def intends_to_affect(
    state: EpistemicState,
    action: str,
    targets: Iterable[str],
    policy: ReferencePolicy = DefaultOnly(),
    max_k: int = DEFAULT_MAX_SUPERSET,
) -> IntentVerdict:
    """Search for a minimal superset of ``targets`` witnessing intent.

    A candidate passes the existence clause when freezing it at its
    under-the-action values makes the best reference action at least as
    good as the action; it passes minimality when no strict subset does
    the same.  Supersets are tried in size-then-lexicographic order up to
    ``max_k`` members.
    """
    sig = state.signature
    act_var = sig.action_variable
    action = state.resolve_action(action)
    targets = tuple(sorted(set(targets)))
    if not targets:
        raise PreconditionViolated("intent queries need at least one variable")
    for name in targets:
        if name not in sig.endogenous or name == act_var:
            raise PreconditionViolated(
                f"{name!r} is not a pinnable outcome variable"
            )
    if max_k < len(targets):
        raise PreconditionViolated("max_k is smaller than the variable set itself")
    ref = resolve_ref(policy, action, state)
    eu_action = expected_utility(state, action)
    pool = [v for v in sig.endogenous if v != act_var and v not in targets]
    cap_hit = len(targets) + len(pool) > max_k

    def best_pinned(members):
        return max(
            pinned_expected_utility(state, a, members, action) for a in ref
        )

    trace: list[CandidateCheck] = []
    for size in range(len(targets), max_k + 1):
        layer = sorted(
            tuple(sorted(targets + extra))
            for extra in combinations(pool, size - len(targets))
        )
        for members in layer:
            pinned_best = best_pinned(members)
            if eu_action > pinned_best:
                trace.append(
                    CandidateCheck(members, eu_action, pinned_best, False)
                )
                continue
            failing = None
            failing_value = None
            for sub in _strict_subsets(members):
                sub_best = best_pinned(sub)
                if not eu_action > sub_best:
                    failing, failing_value = tuple(sub), sub_best
                    break
            row = CandidateCheck(
                members, eu_action, pinned_best, True, failing, failing_value
            )
            trace.append(row)
            if failing is None:
                pins = tuple(
                    outcome_under_action(setting, members, action)
                    for setting, _ in state.settings
                )
                return IntentVerdict(True, members, pins, tuple(trace), False)
    return IntentVerdict(False, None, None, tuple(trace), cap_hit)


@dataclass(frozen=True)
class OutcomeVerdict:
    """Decision for intending to bring about a specific value assignment,
    with the reachable values and their scores as the certificate."""

    intends: bool
    affects: IntentVerdict
    possible: bool
    reachable: tuple[tuple[tuple[str, ...], Fraction], ...]
    target_values: tuple[str, ...]
    target_score: Fraction | None


def intends_outcome(
    state: EpistemicState,
    action: str,
    outcome: Sequence[tuple[str, str]],
    policy: ReferencePolicy = DefaultOnly(),
    max_k: int = DEFAULT_MAX_SUPERSET,
) -> OutcomeVerdict:
    """Three gates: the agent intends to affect the variables; the values are
    a possible result of the action; and no other reachable values score
    higher when frozen into the pre-action worlds."""
    sig = state.signature
    act_var = sig.action_variable
    action = state.resolve_action(action)
    pairs = [(var, sig.resolve_value(var, val)) for var, val in outcome]
    if not pairs:
        raise PreconditionViolated("the outcome needs at least one conjunct")
    variables = [var for var, _ in pairs]
    if len(set(variables)) != len(variables):
        raise PreconditionViolated("outcome variables must be distinct")
    target = tuple(val for _, val in pairs)

    affects = intends_to_affect(state, action, variables, policy, max_k)

    reachable_values = []
    seen = set()
    for setting, _ in state.settings:
        values = outcome_under_action(setting, variables, action)
        if values not in seen:
            seen.add(values)
            reachable_values.append(values)
    axis = {var: sig.range_of(var) for var in variables}
    reachable_values.sort(
        key=lambda vals: tuple(
            axis[var].index(val) for var, val in zip(variables, vals)
        )
    )

    def score(values):
        total = Fraction(0)
        for setting, p in state.settings:
            world = world_under(setting, dict(zip(variables, values)))
            total += p * state.utility.value(world, sig)
        return total

    scored = tuple((values, score(values)) for values in reachable_values)
    possible = target in seen
    target_score = score(target) if possible else None
    best = max(s for _, s in scored)
    intends = affects.intends and possible and target_score == best
    return OutcomeVerdict(intends, affects, possible, scored, target, target_score)
