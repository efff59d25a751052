"""Finite-domain structural causal models and their counterfactual semantics.

A model pairs a signature (exogenous and endogenous variables with finite
symbolic ranges) with one equation per endogenous variable.  Equations are
expression trees over parent variables; a context fixes the exogenous
variables and an acyclic model then has a unique solution.  Interventions
replace equations with constants.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Mapping

from .errors import (
    CyclicModelError,
    EquationTypeError,
    ModelError,
    RangeViolation,
    UnknownVariable,
    ValueNotInRange,
)

RESERVED_WORDS = frozenset({"if", "then", "else", "true", "false"})

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_INT_RE = re.compile(r"-?\d+\Z")


def is_valid_name(text: str) -> bool:
    return bool(_NAME_RE.match(text)) and text not in RESERVED_WORDS


def is_valid_value(text: str) -> bool:
    """Range values must render back into expressions: identifiers or integers."""
    if _INT_RE.match(text):
        return True
    return bool(_NAME_RE.match(text)) and text not in RESERVED_WORDS


# ---------------------------------------------------------------------------
# Expression trees for equation bodies
# ---------------------------------------------------------------------------

class Expr:
    __slots__ = ()


@dataclass(frozen=True)
class Num(Expr):
    value: int


@dataclass(frozen=True)
class Sym(Expr):
    """A symbolic range value appearing literally in an equation."""

    value: str


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class Bool(Expr):
    value: bool


@dataclass(frozen=True)
class NotOp(Expr):
    operand: Expr


ARITHMETIC_OPS = ("+", "-", "*")
COMPARISON_OPS = ("=", "!=", "<", "<=", ">", ">=")
LOGICAL_OPS = ("&", "|")


@dataclass(frozen=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True)
class IfExpr(Expr):
    condition: Expr
    then: Expr
    orelse: Expr


def expr_variables(expr: Expr) -> frozenset[str]:
    match expr:
        case Var(name):
            return frozenset((name,))
        case NotOp(operand):
            return expr_variables(operand)
        case BinOp(_, left, right):
            return expr_variables(left) | expr_variables(right)
        case IfExpr(cond, then, orelse):
            return expr_variables(cond) | expr_variables(then) | expr_variables(orelse)
        case _:
            return frozenset()


def expr_symbols(expr: Expr) -> frozenset[str]:
    """All symbolic literals mentioned anywhere in the expression."""
    match expr:
        case Sym(value):
            return frozenset((value,))
        case NotOp(operand):
            return expr_symbols(operand)
        case BinOp(_, left, right):
            return expr_symbols(left) | expr_symbols(right)
        case IfExpr(cond, then, orelse):
            return expr_symbols(cond) | expr_symbols(then) | expr_symbols(orelse)
        case _:
            return frozenset()


def _need_int(value, what):
    # bool is an int subclass; reject it explicitly
    if isinstance(value, bool) or not isinstance(value, int):
        raise EquationTypeError(f"{what} needs integer operands, got {value!r}")
    return value


def _need_bool(value, what):
    if not isinstance(value, bool):
        raise EquationTypeError(f"{what} needs boolean operands, got {value!r}")
    return value


def eval_expr(expr: Expr, env: Mapping[str, str], signature: "Signature"):
    """Evaluate an expression to an int, symbolic string, or bool.

    Variables read their canonical string value from ``env``; integer-typed
    variables are converted to ints so arithmetic works on them.
    """
    match expr:
        case Num(value):
            return value
        case Sym(value):
            return value
        case Bool(value):
            return value
        case Var(name):
            if name not in env:
                raise UnknownVariable(name, "no value while evaluating an equation")
            raw = env[name]
            return int(raw) if name in signature.integer_typed else raw
        case NotOp(operand):
            return not _need_bool(eval_expr(operand, env, signature), "'!'")
        case IfExpr(cond, then, orelse):
            branch = then if _need_bool(eval_expr(cond, env, signature), "'if'") else orelse
            return eval_expr(branch, env, signature)
        case BinOp(op, left, right):
            if op in ("&", "|"):
                lv = _need_bool(eval_expr(left, env, signature), f"'{op}'")
                rv = _need_bool(eval_expr(right, env, signature), f"'{op}'")
                return (lv and rv) if op == "&" else (lv or rv)
            lv = eval_expr(left, env, signature)
            rv = eval_expr(right, env, signature)
            if op in ("+", "-", "*"):
                lv = _need_int(lv, f"'{op}'")
                rv = _need_int(rv, f"'{op}'")
                return lv + rv if op == "+" else lv - rv if op == "-" else lv * rv
            if op in ("=", "!="):
                both_int = not isinstance(lv, bool) and isinstance(lv, int) \
                    and not isinstance(rv, bool) and isinstance(rv, int)
                both_str = isinstance(lv, str) and isinstance(rv, str)
                if not (both_int or both_str):
                    raise EquationTypeError(
                        f"'=' compares two integers or two symbolic values, got {lv!r} and {rv!r}"
                    )
                return (lv == rv) if op == "=" else (lv != rv)
            lv = _need_int(lv, f"'{op}'")
            rv = _need_int(rv, f"'{op}'")
            if op == "<":
                return lv < rv
            if op == "<=":
                return lv <= rv
            if op == ">":
                return lv > rv
            if op == ">=":
                return lv >= rv
    raise EquationTypeError(f"cannot evaluate {expr!r}")


_PREC = {"|": 1, "&": 2, "=": 4, "!=": 4, "<": 4, "<=": 4, ">": 4, ">=": 4,
         "+": 5, "-": 5, "*": 6}


def render_expr(expr: Expr, parent_prec: int = 0) -> str:
    """Render an expression to its canonical text form (reparses to itself)."""
    match expr:
        case Num(value):
            return str(value)
        case Sym(value):
            return value
        case Var(name):
            return name
        case Bool(value):
            return "true" if value else "false"
        case NotOp(operand):
            if isinstance(operand, (Num, Sym, Var, Bool, NotOp)):
                return "!" + render_expr(operand, 7)
            return "!(" + render_expr(operand, 0) + ")"
        case IfExpr(cond, then, orelse):
            text = (
                "if " + render_expr(cond, 1)
                + " then " + render_expr(then, 1)
                + " else " + render_expr(orelse, 0)
            )
            return "(" + text + ")" if parent_prec > 0 else text
        case BinOp(op, left, right):
            prec = _PREC[op]
            text = (
                render_expr(left, prec)
                + f" {op} "
                + render_expr(right, prec + 1)
            )
            return "(" + text + ")" if parent_prec > prec else text
    raise ValueError(f"cannot render {expr!r}")


# ---------------------------------------------------------------------------
# Signatures, models, settings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Signature:
    """Variable inventory: exogenous and endogenous names, ranges, action variable."""

    exogenous: tuple[str, ...]
    endogenous: tuple[str, ...]
    ranges: Mapping[str, tuple[str, ...]]
    action_variable: str
    integer_typed: frozenset[str] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "exogenous", tuple(self.exogenous))
        object.__setattr__(self, "endogenous", tuple(self.endogenous))
        object.__setattr__(
            self, "ranges", {k: tuple(v) for k, v in dict(self.ranges).items()}
        )
        names = self.exogenous + self.endogenous
        if len(set(names)) != len(names):
            raise ModelError("variable names must be unique and the exogenous/"
                             "endogenous sets disjoint")
        for name in names:
            if not is_valid_name(name):
                raise ModelError(f"invalid variable name {name!r}")
        if set(self.ranges) != set(names):
            raise ModelError("every variable needs exactly one range")
        for name, rng in self.ranges.items():
            if not rng:
                raise ModelError(f"range of {name!r} is empty")
            for value in rng:
                if not is_valid_value(value):
                    raise ModelError(f"invalid range value {value!r} for {name!r}")
        if self.action_variable not in self.endogenous:
            raise ModelError(
                f"action variable {self.action_variable!r} must be endogenous"
            )
        integer_typed = frozenset(
            name for name, rng in self.ranges.items()
            if all(_INT_RE.match(v) for v in rng)
        )
        object.__setattr__(self, "integer_typed", integer_typed)
        # canonical uniqueness: "01" and "1" may not share a range
        for name, rng in self.ranges.items():
            keys = [int(v) if name in integer_typed else v for v in rng]
            if len(set(keys)) != len(keys):
                raise ModelError(f"range of {name!r} repeats a value")

    @property
    def variables(self) -> tuple[str, ...]:
        return self.exogenous + self.endogenous

    def range_of(self, name: str) -> tuple[str, ...]:
        try:
            return self.ranges[name]
        except KeyError:
            raise UnknownVariable(name) from None

    @property
    def action_range(self) -> tuple[str, ...]:
        return self.ranges[self.action_variable]

    def resolve_value(self, name: str, value) -> str:
        """Map an int, bool, or string onto the range's own spelling of it."""
        rng = self.range_of(name)
        if isinstance(value, bool):
            value = int(value)
        if name in self.integer_typed:
            if isinstance(value, str):
                if not _INT_RE.match(value):
                    raise ValueNotInRange(name, value)
                value = int(value)
            for spelled in rng:
                if int(spelled) == value:
                    return spelled
            raise ValueNotInRange(name, value)
        if isinstance(value, str) and value in rng:
            return value
        raise ValueNotInRange(name, value)


@dataclass(frozen=True)
class Equation:
    target: str
    body: Expr


@dataclass(frozen=True)
class CausalModel:
    signature: Signature
    equations: Mapping[str, Equation]

    def __post_init__(self):
        object.__setattr__(self, "equations", dict(self.equations))
        sig = self.signature
        if set(self.equations) != set(sig.endogenous):
            raise ModelError("need exactly one equation per endogenous variable")
        allowed = set(sig.variables)
        for name, eq in self.equations.items():
            if eq.target != name:
                raise ModelError(f"equation stored under {name!r} targets {eq.target!r}")
            refs = expr_variables(eq.body)
            if name in refs:
                raise ModelError(f"equation for {name!r} refers to itself")
            for ref in refs:
                if ref not in allowed:
                    raise UnknownVariable(ref, f"in the equation for {name}")


@dataclass(frozen=True)
class CausalSetting:
    """A model plus a complete exogenous assignment; determines one world."""

    model: CausalModel
    context: Mapping[str, str]

    def __post_init__(self):
        sig = self.model.signature
        context = dict(self.context)
        for name in context:
            if name not in sig.exogenous:
                raise UnknownVariable(name, "contexts assign exogenous variables only")
        normalized = {}
        for name in sig.exogenous:
            if name not in context:
                raise ModelError(f"context gives no value for exogenous {name!r}")
            normalized[name] = sig.resolve_value(name, context[name])
        object.__setattr__(self, "context", normalized)


# A world is a complete endogenous assignment, in declaration order.
World = dict


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def topological_order(model: CausalModel) -> list[str]:
    """Order endogenous variables so each one only reads earlier ones."""
    sig = model.signature
    endo = set(sig.endogenous)
    deps = {
        name: expr_variables(eq.body) & endo
        for name, eq in model.equations.items()
    }
    order: list[str] = []
    placed: set[str] = set()
    pending = list(sig.endogenous)
    while pending:
        rest = []
        for name in pending:
            if deps[name] <= placed:
                order.append(name)
                placed.add(name)
            else:
                rest.append(name)
        if len(rest) == len(pending):
            raise CyclicModelError(_some_cycle(deps, rest))
        pending = rest
    return order


def _some_cycle(deps, stuck):
    stuck_set = set(stuck)
    seen: list[str] = []
    node = stuck[0]
    while node not in seen:
        seen.append(node)
        node = sorted(deps[node] & stuck_set)[0]
    return seen[seen.index(node):]


def check_equation_ranges(model: CausalModel) -> None:
    """Evaluate every equation over its parents' whole domain product.

    Raises RangeViolation on the first out-of-range result and
    EquationTypeError on ill-typed bodies; quiet otherwise.
    """
    sig = model.signature
    for name in sig.endogenous:
        body = model.equations[name].body
        refs = sorted(expr_variables(body))
        for combo in product(*(sig.range_of(r) for r in refs)):
            env = dict(zip(refs, combo))
            try:
                result = eval_expr(body, env, sig)
                sig.resolve_value(name, result)
            except ValueNotInRange as exc:
                raise RangeViolation(name, env, exc.value) from None
            except EquationTypeError as exc:
                raise EquationTypeError(
                    f"equation for {name}: {exc}"
                ) from None


def validate_model(model: CausalModel) -> list[str]:
    """Full load-time check; returns a topological order of the endogenous set."""
    order = topological_order(model)
    check_equation_ranges(model)
    return order


def solve(setting: CausalSetting) -> World:
    """The unique simultaneous solution of the equations in the context."""
    model = setting.model
    sig = model.signature
    env = dict(setting.context)
    for name in topological_order(model):
        body = model.equations[name].body
        try:
            result = eval_expr(body, env, sig)
            env[name] = sig.resolve_value(name, result)
        except ValueNotInRange as exc:
            parents = {r: env[r] for r in sorted(expr_variables(body))}
            raise RangeViolation(name, parents, exc.value) from None
    return {name: env[name] for name in sig.endogenous}


def intervene(model: CausalModel, assignments: Mapping[str, str]) -> CausalModel:
    """Replace the equations of the assigned variables with constants."""
    sig = model.signature
    new_equations = dict(model.equations)
    for name, value in dict(assignments).items():
        if name not in sig.endogenous:
            if name in sig.exogenous:
                raise ModelError(f"cannot intervene on exogenous {name!r}")
            raise UnknownVariable(name, "intervention target")
        spelled = sig.resolve_value(name, value)
        constant: Expr = (
            Num(int(spelled)) if name in sig.integer_typed else Sym(spelled)
        )
        new_equations[name] = Equation(name, constant)
    return CausalModel(sig, new_equations)


def world_under(setting: CausalSetting, assignments: Mapping[str, str]) -> World:
    """The world determined by the setting after the given intervention."""
    if not assignments:
        return solve(setting)
    return solve(CausalSetting(intervene(setting.model, assignments), setting.context))


def outcome_under_action(
    setting: CausalSetting, variables: Iterable[str], action: str
) -> tuple[str, ...]:
    """Values the given variables take when the action variable is forced."""
    sig = setting.model.signature
    names = list(variables)
    for name in names:
        if name not in sig.endogenous:
            raise UnknownVariable(name, "outcome variable")
    world = world_under(setting, {sig.action_variable: action})
    return tuple(world[name] for name in names)
