"""Typed failures raised across the engine."""

from __future__ import annotations


class EngineError(Exception):
    """Base class for every failure this package raises on purpose."""


class ModelError(EngineError):
    """A structural problem with a model, context, or intervention."""


class CyclicModelError(ModelError):
    def __init__(self, cycle):
        self.cycle = tuple(cycle)
        loop = " -> ".join(self.cycle + self.cycle[:1])
        super().__init__(f"cyclic dependency among endogenous variables: {loop}")


class RangeViolation(ModelError):
    def __init__(self, variable, parents, value):
        self.variable = variable
        self.parents = dict(parents)
        self.value = value
        shown = ", ".join(f"{k}={v}" for k, v in sorted(self.parents.items()))
        super().__init__(
            f"equation for {variable} yields {value!r} outside its range"
            f" at {{{shown}}}"
        )


class EquationTypeError(ModelError):
    """Arithmetic on symbolic operands, logic on non-booleans, and the like."""


class UnknownVariable(ModelError):
    def __init__(self, name, context=""):
        self.name = name
        suffix = f" ({context})" if context else ""
        super().__init__(f"unknown variable {name!r}{suffix}")


class ValueNotInRange(ModelError):
    def __init__(self, variable, value):
        self.variable = variable
        self.value = value
        super().__init__(f"value {value!r} is not in the range of {variable!r}")


class PreconditionViolated(EngineError):
    """A documented precondition of an operation does not hold."""


class VariableCapExceeded(EngineError):
    """Refused an exponential search on a model above the variable cap."""


class InvalidCostModel(EngineError):
    """Cost queries demand a cost model whose axioms all validated."""


class InvalidN(EngineError):
    """The blame cost-importance scale must exceed every action cost."""


class InvalidM(EngineError):
    """The praise cost-importance scale must exceed every action cost."""


class NotAConjunction(EngineError):
    """The outcome must be a conjunction of primitive events."""


class EmptyReferenceSet(EngineError):
    """A reference policy resolved to no alternatives at all."""


class ParseError(EngineError):
    def __init__(self, message, line=1, column=1):
        self.line = line
        self.column = column
        super().__init__(f"{message} (line {line}, column {column})")
        self.bare_message = message


class ScenarioError(EngineError):
    """A scenario document failed to parse or validate; carries diagnostics."""

    def __init__(self, diagnostics):
        self.diagnostics = tuple(diagnostics)
        first = self.diagnostics[0].message if self.diagnostics else "invalid scenario"
        extra = len(self.diagnostics) - 1
        suffix = f" (+{extra} more)" if extra > 0 else ""
        super().__init__(first + suffix)
