"""Event formulas: Boolean combinations of primitive events, optionally
behind a single outermost intervention prefix ``[X <- x, ...]``."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from .errors import PreconditionViolated, UnknownVariable
from .model import CausalSetting, Signature, World, intervene, solve


@dataclass(frozen=True)
class Prim:
    """The primitive event ``var = value``."""

    var: str
    value: str


@dataclass(frozen=True)
class NotF:
    operand: "Formula"


@dataclass(frozen=True)
class AndF:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class OrF:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class BoolConst:
    value: bool


@dataclass(frozen=True)
class Do:
    """``[assignments] body`` — body evaluated in the intervened model."""

    assignments: tuple[tuple[str, str], ...]
    body: "Formula"


Formula = Union[Prim, NotF, AndF, OrF, BoolConst, Do]

TRUE = BoolConst(True)
FALSE = BoolConst(False)


def formula_variables(formula: Formula) -> frozenset[str]:
    match formula:
        case Prim(var, _):
            return frozenset((var,))
        case NotF(operand):
            return formula_variables(operand)
        case AndF(left, right) | OrF(left, right):
            return formula_variables(left) | formula_variables(right)
        case Do(assignments, body):
            return frozenset(v for v, _ in assignments) | formula_variables(body)
        case _:
            return frozenset()


def is_intervention_free(formula: Formula) -> bool:
    match formula:
        case Do():
            return False
        case NotF(operand):
            return is_intervention_free(operand)
        case AndF(left, right) | OrF(left, right):
            return is_intervention_free(left) and is_intervention_free(right)
        case _:
            return True


def check_formula(formula: Formula, signature: Signature) -> None:
    """Raise if the formula mentions unknown variables or out-of-range values."""

    def walk(node, outermost):
        match node:
            case Prim(var, value):
                if var not in signature.endogenous:
                    raise UnknownVariable(var, "formulas range over endogenous variables")
                signature.resolve_value(var, value)
            case NotF(operand):
                walk(operand, False)
            case AndF(left, right) | OrF(left, right):
                walk(left, False)
                walk(right, False)
            case Do(assignments, body):
                if not outermost:
                    raise PreconditionViolated(
                        "an intervention prefix is only allowed outermost"
                    )
                seen = set()
                for var, value in assignments:
                    if var not in signature.endogenous:
                        raise UnknownVariable(var, "intervention target")
                    if var in seen:
                        raise PreconditionViolated(
                            f"intervention assigns {var!r} twice"
                        )
                    seen.add(var)
                    signature.resolve_value(var, value)
                walk(body, False)
            case BoolConst():
                pass

    walk(formula, True)


def satisfies(world: World, formula: Formula, signature: Signature) -> bool:
    """Truth of an intervention-free formula at a single world."""
    match formula:
        case Prim(var, value):
            if var not in world:
                raise UnknownVariable(var, "not an endogenous variable of this world")
            return world[var] == signature.resolve_value(var, value)
        case NotF(operand):
            return not satisfies(world, operand, signature)
        case AndF(left, right):
            return satisfies(world, left, signature) and satisfies(world, right, signature)
        case OrF(left, right):
            return satisfies(world, left, signature) or satisfies(world, right, signature)
        case BoolConst(value):
            return value
        case Do():
            raise PreconditionViolated(
                "intervention prefixes have no meaning at a single world"
            )
    raise PreconditionViolated(f"cannot evaluate {formula!r}")


def holds(setting: CausalSetting, formula: Formula) -> bool:
    """The satisfaction relation between causal settings and formulas."""
    if isinstance(formula, Do):
        assignments = dict(formula.assignments)
        if len(assignments) != len(formula.assignments):
            raise PreconditionViolated("intervention assigns a variable twice")
        inner = intervene(setting.model, assignments)
        return holds(CausalSetting(inner, setting.context), formula.body)
    return satisfies(solve(setting), formula, setting.model.signature)


def conjunction(pairs: Iterable[tuple[str, str]]) -> Formula:
    """Build ``X1 = x1 & X2 = x2 & ...`` from (variable, value) pairs."""
    out: Formula | None = None
    for var, value in pairs:
        prim = Prim(var, value)
        out = prim if out is None else AndF(out, prim)
    if out is None:
        raise PreconditionViolated("empty conjunction")
    return out


def as_conjunction(formula: Formula) -> tuple[tuple[str, str], ...] | None:
    """The (variable, value) pairs of a conjunction of primitives, else None."""
    match formula:
        case Prim(var, value):
            return ((var, value),)
        case AndF(left, right):
            lhs = as_conjunction(left)
            rhs = as_conjunction(right)
            if lhs is None or rhs is None:
                return None
            seen = {v for v, _ in lhs}
            if any(v in seen for v, _ in rhs):
                return None
            return lhs + rhs
        case _:
            return None


_PREC = {OrF: 1, AndF: 2, NotF: 3}


def render_formula(formula: Formula) -> str:
    """Canonical text form; reparses to the same tree."""

    def walk(node, parent_prec):
        match node:
            case Prim(var, value):
                return f"{var} = {value}"
            case BoolConst(value):
                return "true" if value else "false"
            case NotF(operand):
                if isinstance(operand, (BoolConst, NotF)):
                    return "!" + walk(operand, 3)
                return "!(" + walk(operand, 0) + ")"
            case AndF(left, right):
                text = walk(left, 2) + " & " + walk(right, 3)
                return "(" + text + ")" if parent_prec > 2 else text
            case OrF(left, right):
                text = walk(left, 1) + " | " + walk(right, 2)
                return "(" + text + ")" if parent_prec > 1 else text
        raise PreconditionViolated(f"cannot render {node!r}")

    if isinstance(formula, Do):
        prefix = ", ".join(f"{var} <- {value}" for var, value in formula.assignments)
        return f"[{prefix}] " + walk(formula.body, 0)
    return walk(formula, 0)
