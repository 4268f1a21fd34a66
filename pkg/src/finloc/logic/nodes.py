"""Formula and term AST nodes, with a printer that round-trips through the parser.

Truth values live in [0,1] with 0 meaning true. Connectives are the generating
family {neg, min, max, truncated plus, truncated minus} plus rational
constants; quantifiers sup/inf bind a variable to a sort level.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union


# -- terms (ring signature only: no division) --------------------------------

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class IntConst:
    value: int


@dataclass(frozen=True)
class RatConst:
    value: Fraction


@dataclass(frozen=True)
class TermAdd:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class TermSub:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class TermMul:
    left: "Term"
    right: "Term"


Term = Union[Var, IntConst, RatConst, TermAdd, TermSub, TermMul]


# -- formulas -----------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: Fraction

    def __post_init__(self):
        if not 0 <= self.value <= 1:
            raise ValueError(f"truth constant {self.value} outside [0,1]")


@dataclass(frozen=True)
class Dist:
    level: int
    left: Term
    right: Term

    def __post_init__(self):
        if self.level < 1:
            raise ValueError("distance level must be >= 1")


@dataclass(frozen=True)
class ZeroPred:
    level: int
    term: Term

    def __post_init__(self):
        if self.level < 1:
            raise ValueError("zero-predicate level must be >= 1")


@dataclass(frozen=True)
class Neg:
    body: "Formula"


@dataclass(frozen=True)
class Min:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Max:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class PlusTrunc:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class MinusTrunc:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Sup:
    var: str
    level: int
    body: "Formula"

    def __post_init__(self):
        if self.level < 1:
            raise ValueError("sort level must be >= 1")


@dataclass(frozen=True)
class Inf:
    var: str
    level: int
    body: "Formula"

    def __post_init__(self):
        if self.level < 1:
            raise ValueError("sort level must be >= 1")


Formula = Union[Const, Dist, ZeroPred, Neg, Min, Max, PlusTrunc, MinusTrunc, Sup, Inf]


def print_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, IntConst):
        return str(t.value)
    if isinstance(t, RatConst):
        return f"{t.value.numerator}/{t.value.denominator}"
    op = {TermAdd: "+", TermSub: "-", TermMul: "*"}[type(t)]
    return f"({print_term(t.left)} {op} {print_term(t.right)})"


def print_formula(f: Formula) -> str:
    if isinstance(f, Const):
        if f.value == 0:
            return "0"
        if f.value == 1:
            return "1"
        return f"{f.value.numerator}/{f.value.denominator}"
    if isinstance(f, Dist):
        return f"d{f.level}({print_term(f.left)}, {print_term(f.right)})"
    if isinstance(f, ZeroPred):
        return f"zero{f.level}({print_term(f.term)})"
    if isinstance(f, Neg):
        return f"neg({print_formula(f.body)})"
    if isinstance(f, Min):
        return f"min({print_formula(f.left)}, {print_formula(f.right)})"
    if isinstance(f, Max):
        return f"max({print_formula(f.left)}, {print_formula(f.right)})"
    if isinstance(f, PlusTrunc):
        return f"plus({print_formula(f.left)}, {print_formula(f.right)})"
    if isinstance(f, MinusTrunc):
        return f"minus({print_formula(f.left)}, {print_formula(f.right)})"
    if isinstance(f, Sup):
        return f"sup {f.var}:S{f.level} . {print_formula(f.body)}"
    if isinstance(f, Inf):
        return f"inf {f.var}:S{f.level} . {print_formula(f.body)}"
    raise TypeError(f"not a formula node: {f!r}")


def _term_vars(t: Term, out: set) -> None:
    if isinstance(t, Var):
        out.add(t.name)
    elif isinstance(t, (TermAdd, TermSub, TermMul)):
        _term_vars(t.left, out)
        _term_vars(t.right, out)


def free_variables(f: Formula) -> set:
    if isinstance(f, Const):
        return set()
    if isinstance(f, Dist):
        out: set = set()
        _term_vars(f.left, out)
        _term_vars(f.right, out)
        return out
    if isinstance(f, ZeroPred):
        out = set()
        _term_vars(f.term, out)
        return out
    if isinstance(f, Neg):
        return free_variables(f.body)
    if isinstance(f, (Min, Max, PlusTrunc, MinusTrunc)):
        return free_variables(f.left) | free_variables(f.right)
    if isinstance(f, (Sup, Inf)):
        return free_variables(f.body) - {f.var}
    raise TypeError(f"not a formula node: {f!r}")
