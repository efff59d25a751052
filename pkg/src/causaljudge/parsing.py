"""Recursive-descent parsers for formula strings and equation expressions.

Formula grammar (one optional outermost intervention prefix; ``!`` binds
tighter than ``&`` which binds tighter than ``|``)::

    cformula := '[' IDENT '<-' value (',' IDENT '<-' value)* ']' bexpr | bexpr
    bexpr    := band ('|' band)*
    band     := bterm ('&' bterm)*
    bterm    := '!' bterm | '(' bexpr ')' | IDENT '=' value | 'true' | 'false'

Equation grammar adds integer arithmetic, order comparisons, and
if/then/else on top of the same tokens.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Collection

from . import formulas as F
from . import model as M
from .errors import ParseError

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<int>\d+)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op><-|<=|>=|!=|[\[\](),=<>+\-*&|!])"
)

_MAX_DEPTH = 200


@dataclass(frozen=True)
class Token:
    kind: str  # "int" | "ident" | "op" | "end"
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    line = 1
    line_start = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise ParseError(
                f"unexpected character {text[pos]!r}", line, pos - line_start + 1
            )
        kind = match.lastgroup
        chunk = match.group()
        if kind != "ws":
            tokens.append(Token(kind, chunk, line, pos - line_start + 1))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rindex("\n") + 1
        pos = match.end()
    tokens.append(Token("end", "", line, len(text) - line_start + 1))
    return tokens


class _Cursor:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.depth = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def at_op(self, *ops: str) -> bool:
        tok = self.current
        return tok.kind == "op" and tok.text in ops

    def take_op(self, *ops: str) -> bool:
        if self.at_op(*ops):
            self.pos += 1
            return True
        return False

    def expect_op(self, op: str):
        if not self.take_op(op):
            self.fail(f"expected {op!r}")

    def fail(self, message: str):
        tok = self.current
        got = repr(tok.text) if tok.kind != "end" else "end of input"
        raise ParseError(f"{message}, got {got}", tok.line, tok.column)

    def nest(self):
        self.depth += 1
        if self.depth > _MAX_DEPTH:
            tok = self.current
            raise ParseError("expression nests too deeply", tok.line, tok.column)

    def unnest(self):
        self.depth -= 1


def _parse_value(cur: _Cursor) -> str:
    if cur.take_op("-"):
        tok = cur.current
        if tok.kind != "int":
            cur.fail("expected an integer after '-'")
        cur.advance()
        return "-" + tok.text
    tok = cur.current
    if tok.kind in ("int", "ident"):
        cur.advance()
        return tok.text
    cur.fail("expected a value")


# ---------------------------------------------------------------------------
# Formulas
# ---------------------------------------------------------------------------

def parse_formula(text: str) -> F.Formula:
    """Parse a formula string; raises ParseError with position on failure."""
    cur = _Cursor(text)
    prefix: list[tuple[str, str]] = []
    if cur.take_op("["):
        while True:
            tok = cur.current
            if tok.kind != "ident":
                cur.fail("expected a variable name in the intervention prefix")
            cur.advance()
            cur.expect_op("<-")
            prefix.append((tok.text, _parse_value(cur)))
            if cur.take_op("]"):
                break
            cur.expect_op(",")
    body = _parse_bexpr(cur)
    if cur.current.kind != "end":
        cur.fail("trailing input after the formula")
    return F.Do(tuple(prefix), body) if prefix else body


def _parse_bexpr(cur: _Cursor) -> F.Formula:
    out = _parse_band(cur)
    while cur.take_op("|"):
        out = F.OrF(out, _parse_band(cur))
    return out


def _parse_band(cur: _Cursor) -> F.Formula:
    out = _parse_bterm(cur)
    while cur.take_op("&"):
        out = F.AndF(out, _parse_bterm(cur))
    return out


def _parse_bterm(cur: _Cursor) -> F.Formula:
    cur.nest()
    try:
        if cur.at_op("["):
            cur.fail("an intervention prefix is only allowed outermost")
        if cur.take_op("!"):
            return F.NotF(_parse_bterm(cur))
        if cur.take_op("("):
            inner = _parse_bexpr(cur)
            cur.expect_op(")")
            return inner
        tok = cur.current
        if tok.kind == "ident":
            if tok.text == "true":
                cur.advance()
                return F.TRUE
            if tok.text == "false":
                cur.advance()
                return F.FALSE
            cur.advance()
            cur.expect_op("=")
            return F.Prim(tok.text, _parse_value(cur))
        cur.fail("expected a primitive event, 'true', 'false', '!', or '('")
    finally:
        cur.unnest()


# ---------------------------------------------------------------------------
# Equation expressions
# ---------------------------------------------------------------------------

def parse_expression(text: str, variables: Collection[str]) -> M.Expr:
    """Parse an equation body.  Identifiers in ``variables`` become variable
    references; any other identifier is a symbolic range value."""
    cur = _Cursor(text)
    names = frozenset(variables)
    expr = _parse_expr(cur, names)
    if cur.current.kind != "end":
        cur.fail("trailing input after the expression")
    return expr


def _parse_expr(cur: _Cursor, names) -> M.Expr:
    tok = cur.current
    if tok.kind == "ident" and tok.text == "if":
        cur.nest()
        try:
            cur.advance()
            cond = _parse_disjunction(cur, names)
            _expect_keyword(cur, "then")
            then = _parse_disjunction(cur, names)
            _expect_keyword(cur, "else")
            orelse = _parse_expr(cur, names)
            return M.IfExpr(cond, then, orelse)
        finally:
            cur.unnest()
    return _parse_disjunction(cur, names)


def _expect_keyword(cur: _Cursor, word: str):
    tok = cur.current
    if tok.kind == "ident" and tok.text == word:
        cur.advance()
        return
    cur.fail(f"expected {word!r}")


def _parse_disjunction(cur, names) -> M.Expr:
    out = _parse_conjunction(cur, names)
    while cur.take_op("|"):
        out = M.BinOp("|", out, _parse_conjunction(cur, names))
    return out


def _parse_conjunction(cur, names) -> M.Expr:
    out = _parse_negation(cur, names)
    while cur.take_op("&"):
        out = M.BinOp("&", out, _parse_negation(cur, names))
    return out


def _parse_negation(cur, names) -> M.Expr:
    if cur.take_op("!"):
        cur.nest()
        try:
            return M.NotOp(_parse_negation(cur, names))
        finally:
            cur.unnest()
    return _parse_comparison(cur, names)


def _parse_comparison(cur, names) -> M.Expr:
    out = _parse_sum(cur, names)
    for op in ("<=", ">=", "!=", "=", "<", ">"):
        if cur.take_op(op):
            return M.BinOp(op, out, _parse_sum(cur, names))
    return out


def _parse_sum(cur, names) -> M.Expr:
    if cur.take_op("-"):
        tok = cur.current
        if tok.kind == "int":
            cur.advance()
            out: M.Expr = M.Num(-int(tok.text))
        else:
            out = M.BinOp("-", M.Num(0), _parse_term(cur, names))
    else:
        out = _parse_term(cur, names)
    while True:
        if cur.take_op("+"):
            out = M.BinOp("+", out, _parse_term(cur, names))
        elif cur.take_op("-"):
            out = M.BinOp("-", out, _parse_term(cur, names))
        else:
            return out


def _parse_term(cur, names) -> M.Expr:
    out = _parse_factor(cur, names)
    while cur.take_op("*"):
        out = M.BinOp("*", out, _parse_factor(cur, names))
    return out


def _parse_factor(cur, names) -> M.Expr:
    cur.nest()
    try:
        if cur.take_op("("):
            inner = _parse_expr(cur, names)
            cur.expect_op(")")
            return inner
        tok = cur.current
        if tok.kind == "int":
            cur.advance()
            return M.Num(int(tok.text))
        if tok.kind == "ident":
            if tok.text == "true":
                cur.advance()
                return M.Bool(True)
            if tok.text == "false":
                cur.advance()
                return M.Bool(False)
            if tok.text in M.RESERVED_WORDS:
                cur.fail(f"{tok.text!r} is a reserved word")
            cur.advance()
            return M.Var(tok.text) if tok.text in names else M.Sym(tok.text)
        cur.fail("expected a value, a variable, '!', '-', or '('")
    finally:
        cur.unnest()
