"""Actual causation over causal settings.

Implements but-for causes and the three-condition actual-cause test:
factuality (ac1), a contingency witness that flips the outcome (ac2), and
minimality among sub-conjunctions (ac3).  The witness search is canonical:
contingency sets by size then name, alternative values in range order, so
results are reproducible.  Other cause definitions could be plugged in via
the ``definition`` argument; only the contingency-witness one exists.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Mapping

from .errors import (
    PreconditionViolated,
    UnknownVariable,
    VariableCapExceeded,
)
from .formulas import Formula, is_intervention_free, satisfies
from .model import CausalSetting, solve, world_under

DEFAULT_VARIABLE_CAP = 20


@dataclass(frozen=True)
class Ac2Witness:
    """Contingency variables frozen at actual values, plus the alternative
    assignment of the candidate that together falsify the outcome."""

    contingency: tuple[str, ...]
    contingency_values: tuple[str, ...]
    alternative: tuple[str, ...]


@dataclass(frozen=True)
class CauseVerdict:
    ac1: bool
    ac2_witness: Ac2Witness | None
    ac3: bool

    @property
    def is_cause(self) -> bool:
        return self.ac1 and self.ac2_witness is not None and self.ac3


def _normalize_candidate(setting, candidate):
    sig = setting.model.signature
    pairs = tuple(dict(candidate).items())
    if not pairs:
        raise PreconditionViolated("a cause candidate needs at least one conjunct")
    out = []
    for var, value in pairs:
        if var not in sig.endogenous:
            raise UnknownVariable(var, "cause candidates are endogenous")
        out.append((var, sig.resolve_value(var, value)))
    return tuple(out)


def _guard(setting, max_variables):
    n = len(setting.model.signature.endogenous)
    if n > max_variables:
        raise VariableCapExceeded(
            f"cause search over {n} endogenous variables exceeds the cap of "
            f"{max_variables}; raise max_variables to force it"
        )


def _find_witness(setting, pairs, outcome, actual) -> Ac2Witness | None:
    """First contingency/alternative pair falsifying the outcome, in
    canonical order: contingency sets by size then name, values in range
    order along the candidate's conjunct order."""
    sig = setting.model.signature
    cand_vars = [var for var, _ in pairs]
    others = sorted(set(sig.endogenous) - set(cand_vars))
    value_axes = [sig.range_of(var) for var in cand_vars]
    for size in range(len(others) + 1):
        for contingency in combinations(others, size):
            frozen = {w: actual[w] for w in contingency}
            for alternative in product(*value_axes):
                iv = dict(zip(cand_vars, alternative))
                iv.update(frozen)
                if not satisfies(world_under(setting, iv), outcome, sig):
                    return Ac2Witness(
                        contingency,
                        tuple(actual[w] for w in contingency),
                        alternative,
                    )
    return None


def check_cause(
    setting: CausalSetting,
    candidate: Mapping[str, str],
    outcome: Formula,
    *,
    max_variables: int = DEFAULT_VARIABLE_CAP,
    definition: str = "modified",
) -> CauseVerdict:
    """Decide whether the conjunction ``candidate`` actually caused ``outcome``.

    The outcome must be intervention-free.  The verdict carries the first
    ac2 witness in canonical order, re-checkable through ``holds``.
    """
    if definition != "modified":
        raise ValueError(f"unsupported cause definition {definition!r}")
    if not is_intervention_free(outcome):
        raise PreconditionViolated("outcomes must be intervention-free formulas")
    _guard(setting, max_variables)
    pairs = _normalize_candidate(setting, candidate)
    sig = setting.model.signature
    actual = solve(setting)

    ac1 = all(actual[var] == value for var, value in pairs) and satisfies(
        actual, outcome, sig
    )
    witness = _find_witness(setting, pairs, outcome, actual)

    def passes_ac12(subpairs):
        if not all(actual[var] == value for var, value in subpairs):
            return False
        if not satisfies(actual, outcome, sig):
            return False
        return _find_witness(setting, subpairs, outcome, actual) is not None

    ac3 = True
    for size in range(1, len(pairs)):
        for sub in combinations(pairs, size):
            if passes_ac12(sub):
                ac3 = False
                break
        if not ac3:
            break

    return CauseVerdict(ac1, witness, ac3)


def is_part_of_cause(
    setting: CausalSetting,
    variable: str,
    value: str,
    outcome: Formula,
    *,
    max_variables: int = DEFAULT_VARIABLE_CAP,
) -> tuple[bool, dict[str, str] | None]:
    """Whether ``variable = value`` is a conjunct of some actual cause.

    Candidate conjunctions are drawn from the actually-true primitive
    events, smallest first, then lexicographic; the first passing cause
    comes back as a dict.
    """
    _guard(setting, max_variables)
    sig = setting.model.signature
    pairs = _normalize_candidate(setting, {variable: value})
    (variable, value), = pairs
    actual = solve(setting)
    if actual[variable] != value:
        return False, None
    others = sorted(set(sig.endogenous) - {variable})
    for size in range(len(others) + 1):
        layer = sorted(
            tuple(sorted((variable,) + extra)) for extra in combinations(others, size)
        )
        for members in layer:
            candidate = {var: actual[var] for var in members}
            verdict = check_cause(
                setting, candidate, outcome, max_variables=max_variables
            )
            if verdict.is_cause:
                return True, candidate
    return False, None


def but_for(
    setting: CausalSetting, variable: str, value: str, outcome: Formula
) -> bool:
    """Whether switching this one variable alone can falsify the outcome.

    Requires that the event and the outcome actually hold.
    """
    if not is_intervention_free(outcome):
        raise PreconditionViolated("outcomes must be intervention-free formulas")
    sig = setting.model.signature
    pairs = _normalize_candidate(setting, {variable: value})
    (variable, value), = pairs
    actual = solve(setting)
    if actual[variable] != value or not satisfies(actual, outcome, sig):
        raise PreconditionViolated(
            "but-for asks about an event and outcome that actually happened"
        )
    for other in sig.range_of(variable):
        world = world_under(setting, {variable: other})
        if not satisfies(world, outcome, sig):
            return True
    return False
