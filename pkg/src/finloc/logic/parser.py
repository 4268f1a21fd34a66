"""Recursive descent parser for the formula grammar.

    formula := quant | expr
    quant   := ("sup" | "inf") IDENT ":" "S" INT "." formula
    expr    := "min(" formula "," formula ")" | "max(" formula "," formula ")"
             | "neg(" formula ")" | "plus(" formula "," formula ")"
             | "minus(" formula "," formula ")"
             | "d" INT "(" term "," term ")" | "zero" INT "(" term ")"
             | RATIONAL | "0" | "1"
    term    := IDENT | INT | RATIONAL | "(" term ("+"|"-"|"*") term ")"

Whitespace-insensitive; `#` starts a line comment. `sup inf min max neg plus
minus` and the patterns d<INT>, zero<INT>, S<INT> are reserved; rationals are
written p/q. Unary minus is accepted in term position for printability of
negative constants.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from ..errors import ParseError, UnboundVariable
from . import nodes

_KEYWORDS = {"sup", "inf", "min", "max", "neg", "plus", "minus"}
_DIST = re.compile(r"^d(\d+)$")
_ZERO = re.compile(r"^zero(\d+)$")
_SORT = re.compile(r"^S(\d+)$")

_TOKEN = re.compile(r"(\d+|[A-Za-z_][A-Za-z_0-9]*|[()+\-*/,:.])")


@dataclass(frozen=True)
class Token:
    kind: str  # INT | IDENT | one of ( ) + - * / , : .
    text: str
    line: int
    col: int


def tokenize(text: str) -> list:
    tokens = []
    for lineno, raw in enumerate(text.splitlines() or [""], start=1):
        line = raw.split("#", 1)[0]
        pos = 0
        while pos < len(line):
            if line[pos].isspace():
                pos += 1
                continue
            m = _TOKEN.match(line, pos)
            if not m:
                raise ParseError(f"unexpected character {line[pos]!r}", lineno, pos + 1)
            text_tok = m.group(1)
            kind = "INT" if text_tok.isdigit() else (
                "IDENT" if text_tok[0].isalpha() or text_tok[0] == "_" else text_tok
            )
            tokens.append(Token(kind, text_tok, lineno, pos + 1))
            pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def error(self, message, expected=()):
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else Token("", "", 1, 1)
            raise ParseError(f"unexpected end of input: {message}",
                             last.line, last.col + len(last.text), expected)
        raise ParseError(f"{message}, got {tok.text!r}", tok.line, tok.col, expected)

    def take(self, kind, expected_name=None):
        tok = self.peek()
        if tok is None or tok.kind != kind:
            self.error(f"expected {expected_name or kind}", (expected_name or kind,))
        self.pos += 1
        return tok

    # ---- formulas ----

    def formula(self, bound):
        tok = self.peek()
        if tok is None:
            self.error("expected a formula", ("formula",))
        if tok.kind == "IDENT" and tok.text in ("sup", "inf"):
            return self.quantifier(bound)
        return self.expr(bound)

    def quantifier(self, bound):
        kw = self.take("IDENT")
        var_tok = self.take("IDENT", "variable")
        name = var_tok.text
        if name in _KEYWORDS or _DIST.match(name) or _ZERO.match(name) or _SORT.match(name):
            raise ParseError(f"{name!r} is reserved", var_tok.line, var_tok.col, ("variable",))
        self.take(":", "':'")
        sort_tok = self.take("IDENT", "sort S<level>")
        m = _SORT.match(sort_tok.text)
        if not m:
            raise ParseError(f"expected sort like S1, got {sort_tok.text!r}",
                             sort_tok.line, sort_tok.col, ("S<level>",))
        level = int(m.group(1))
        if level < 1:
            raise ParseError("sort level must be >= 1", sort_tok.line, sort_tok.col)
        self.take(".", "'.'")
        body = self.formula(bound | {name})
        cls = nodes.Sup if kw.text == "sup" else nodes.Inf
        return cls(name, level, body)

    def expr(self, bound):
        tok = self.peek()
        if tok is None:
            self.error("expected a formula", ("formula",))
        if tok.kind == "INT":
            return nodes.Const(self.rational(limit_unit=True))
        if tok.kind != "IDENT":
            self.error("expected a connective, predicate, or constant",
                       ("min", "max", "neg", "plus", "minus", "d<level>", "zero<level>", "constant"))
        name = tok.text
        if name in ("min", "max", "plus", "minus"):
            self.pos += 1
            self.take("(", "'('")
            left = self.formula(bound)
            self.take(",", "','")
            right = self.formula(bound)
            self.take(")", "')'")
            cls = {"min": nodes.Min, "max": nodes.Max,
                   "plus": nodes.PlusTrunc, "minus": nodes.MinusTrunc}[name]
            return cls(left, right)
        if name == "neg":
            self.pos += 1
            self.take("(", "'('")
            body = self.formula(bound)
            self.take(")", "')'")
            return nodes.Neg(body)
        m = _DIST.match(name)
        if m:
            level = int(m.group(1))
            if level < 1:
                raise ParseError("distance level must be >= 1", tok.line, tok.col)
            self.pos += 1
            self.take("(", "'('")
            t1 = self.term(bound)
            self.take(",", "','")
            t2 = self.term(bound)
            self.take(")", "')'")
            return nodes.Dist(level, t1, t2)
        m = _ZERO.match(name)
        if m:
            level = int(m.group(1))
            if level < 1:
                raise ParseError("zero-predicate level must be >= 1", tok.line, tok.col)
            self.pos += 1
            self.take("(", "'('")
            t = self.term(bound)
            self.take(")", "')'")
            return nodes.ZeroPred(level, t)
        self.error("expected a connective, predicate, or constant",
                   ("min", "max", "neg", "plus", "minus", "d<level>", "zero<level>", "constant"))

    def rational(self, limit_unit=False) -> Fraction:
        tok = self.take("INT", "number")
        num = int(tok.text)
        value = Fraction(num)
        nxt = self.peek()
        if nxt is not None and nxt.kind == "/":
            self.pos += 1
            den_tok = self.take("INT", "denominator")
            den = int(den_tok.text)
            if den == 0:
                raise ParseError("zero denominator", den_tok.line, den_tok.col)
            value = Fraction(num, den)
        if limit_unit and not 0 <= value <= 1:
            raise ParseError(f"truth constant {value} outside [0,1]", tok.line, tok.col)
        return value

    # ---- terms ----

    def term(self, bound):
        tok = self.peek()
        if tok is None:
            self.error("expected a term", ("term",))
        if tok.kind == "(":
            self.pos += 1
            left = self.term(bound)
            op = self.peek()
            if op is None or op.kind not in ("+", "-", "*"):
                self.error("expected '+', '-' or '*'", ("+", "-", "*"))
            self.pos += 1
            right = self.term(bound)
            self.take(")", "')'")
            cls = {"+": nodes.TermAdd, "-": nodes.TermSub, "*": nodes.TermMul}[op.kind]
            return cls(left, right)
        if tok.kind == "-":
            self.pos += 1
            start = self.pos
            value = self.rational()
            # a lone INT stays an integer term; `p/q` is a rational even at q=1
            if self.pos == start + 1:
                return nodes.IntConst(-value.numerator)
            return nodes.RatConst(-value)
        if tok.kind == "INT":
            start = self.pos
            value = self.rational()
            # `p/q` became a rational; a lone INT stays an integer term
            if self.pos == start + 1:
                return nodes.IntConst(value.numerator)
            return nodes.RatConst(value)
        if tok.kind == "IDENT":
            name = tok.text
            if name in _KEYWORDS or _DIST.match(name) or _ZERO.match(name) or _SORT.match(name):
                raise ParseError(f"{name!r} is reserved and cannot be a variable",
                                 tok.line, tok.col, ("variable",))
            if name not in bound:
                raise UnboundVariable(f"variable {name!r} is not bound by any sup/inf",
                                      tok.line, tok.col)
            self.pos += 1
            return nodes.Var(name)
        self.error("expected a term", ("variable", "integer", "rational", "'('"))


def parse_formula(text: str) -> nodes.Formula:
    """Parse source text into a Formula; positions are 1-based (line, column)."""
    tokens = tokenize(text)
    if not tokens:
        raise ParseError("empty input", 1, 1, ("formula",))
    parser = _Parser(tokens)
    out = parser.formula(frozenset())
    trailing = parser.peek()
    if trailing is not None:
        raise ParseError(f"trailing input {trailing.text!r}",
                         trailing.line, trailing.col, ("end of input",))
    return out
