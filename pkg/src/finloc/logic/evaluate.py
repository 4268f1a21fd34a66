"""Finite-field and bounded-rational evaluation of formulas.

The finite evaluator computes terms in F_q and recovers rationals only at the
predicates, through rational reconstruction at a level derived by exact
height bookkeeping (sums double the height product, products multiply it).
The limit evaluator runs the same induction directly on bounded-height
rationals; agreement between the two on windowed formulas is the transport
property the prime-ladder scans measure.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from ..errors import EnumerationBudgetExceeded, TermEscapesSorts
from ..localmetric import (
    LocalityScale,
    RandomSample,
    bounded_rationals,
    decode,
    encode,
    sort_with_values,
)
from ..residues import Modulus, Residue
from . import nodes

DEFAULT_BUDGET = 2_000_000


@dataclass(frozen=True)
class _Bounds:
    """Conservative height / ratio bounds for a term's value."""

    height: int
    ratio: Fraction

    def add(self, other: "_Bounds") -> "_Bounds":
        return _Bounds(2 * self.height * other.height, self.ratio + other.ratio)

    def mul(self, other: "_Bounds") -> "_Bounds":
        return _Bounds(self.height * other.height, self.ratio * other.ratio)


def _const_bounds(value: Fraction) -> _Bounds:
    return _Bounds(max(abs(value.numerator), value.denominator, 1), abs(value))


def _level_for_height(l: int, height: int) -> int:
    level = 1
    bound = l
    while bound < height:
        level += 1
        bound *= l
    return level


def _truncate(v: Fraction) -> Fraction:
    return min(Fraction(1), max(Fraction(0), v))


def _scaled(value: Fraction, level: int) -> Fraction:
    return min(Fraction(1), abs(value) / level)


def _term_bounds(term, env_levels, l: int) -> _Bounds:
    if isinstance(term, nodes.Var):
        level = env_levels[term.name]
        return _Bounds(l**level, Fraction(level))
    if isinstance(term, nodes.IntConst):
        return _const_bounds(Fraction(term.value))
    if isinstance(term, nodes.RatConst):
        return _const_bounds(term.value)
    left = _term_bounds(term.left, env_levels, l)
    right = _term_bounds(term.right, env_levels, l)
    if isinstance(term, nodes.TermMul):
        return left.mul(right)
    return left.add(right)


def required_modulus(formula, l: int) -> int:
    """Smallest bound B such that any prime q > B windows every quantifier
    enumeration and every predicate decode in the formula."""
    need = 0

    def visit(f, env_levels):
        nonlocal need
        if isinstance(f, nodes.Const):
            return
        if isinstance(f, nodes.Dist):
            b = _term_bounds(f.left, env_levels, l).add(_term_bounds(f.right, env_levels, l))
            L = l ** _level_for_height(l, b.height)
            need = max(need, 2 * L * L)
            return
        if isinstance(f, nodes.ZeroPred):
            b = _term_bounds(f.term, env_levels, l)
            L = l ** _level_for_height(l, b.height)
            need = max(need, 2 * L * L)
            return
        if isinstance(f, nodes.Neg):
            visit(f.body, env_levels)
            return
        if isinstance(f, (nodes.Min, nodes.Max, nodes.PlusTrunc, nodes.MinusTrunc)):
            visit(f.left, env_levels)
            visit(f.right, env_levels)
            return
        if isinstance(f, (nodes.Sup, nodes.Inf)):
            L = l**f.level
            need = max(need, 2 * L * L)
            visit(f.body, dict(env_levels, **{f.var: f.level}))
            return
        raise TypeError(f"not a formula node: {f!r}")

    visit(formula, {})
    return need


def max_quantifier_level(formula) -> int:
    if isinstance(formula, (nodes.Sup, nodes.Inf)):
        return max(formula.level, max_quantifier_level(formula.body))
    if isinstance(formula, (nodes.Min, nodes.Max, nodes.PlusTrunc, nodes.MinusTrunc)):
        return max(max_quantifier_level(formula.left), max_quantifier_level(formula.right))
    if isinstance(formula, nodes.Neg):
        return max_quantifier_level(formula.body)
    return 1


def _check_budget(formula, domain_sizes, budget) -> None:
    """Static cap on the number of leaf evaluations."""

    def cost(f):
        if isinstance(f, (nodes.Const, nodes.Dist, nodes.ZeroPred)):
            return 1
        if isinstance(f, nodes.Neg):
            return cost(f.body)
        if isinstance(f, (nodes.Min, nodes.Max, nodes.PlusTrunc, nodes.MinusTrunc)):
            return cost(f.left) + cost(f.right)
        return domain_sizes(f.level) * cost(f.body)

    total = cost(formula)
    if budget is not None and total > budget:
        raise EnumerationBudgetExceeded(f"{total} evaluations exceed budget {budget}")


def eval_finite(
    formula,
    q: Modulus,
    l: int,
    sample: Optional[RandomSample] = None,
    budget: Optional[int] = DEFAULT_BUDGET,
) -> Fraction:
    """Evaluate over F_q with quantifiers ranging over the enumerated sorts.

    Exhaustive mode is deterministic (ascending rational order); sampled mode
    draws a seeded uniform subset per quantifier, so sup underestimates and
    inf overestimates the exhaustive value.
    """
    domains: dict = {}

    def domain(level: int):
        if level not in domains:
            domains[level] = sort_with_values(LocalityScale(l, level), q, budget)
        return domains[level]

    # realize every quantifier domain up front so the budget check is honest
    def collect(f):
        if isinstance(f, (nodes.Sup, nodes.Inf)):
            domain(f.level)
            collect(f.body)
        elif isinstance(f, (nodes.Min, nodes.Max, nodes.PlusTrunc, nodes.MinusTrunc)):
            collect(f.left)
            collect(f.right)
        elif isinstance(f, nodes.Neg):
            collect(f.body)

    collect(formula)
    _check_budget(formula, lambda lvl: min(len(domain(lvl)), sample.count) if sample else len(domain(lvl)), budget)
    rng = random.Random(sample.seed) if sample is not None else None

    def term_value(t, env) -> Residue:
        if isinstance(t, nodes.Var):
            return env[t.name][0]
        if isinstance(t, nodes.IntConst):
            return q.element(t.value)
        if isinstance(t, nodes.RatConst):
            return encode(t.value, q)
        left = term_value(t.left, env)
        right = term_value(t.right, env)
        if isinstance(t, nodes.TermAdd):
            return left + right
        if isinstance(t, nodes.TermSub):
            return left - right
        return left * right

    def predicate_decode(residue: Residue, bounds: _Bounds, site: str) -> Optional[Fraction]:
        """Decode at the bookkeeping level; None when no level is windowable."""
        level = _level_for_height(l, bounds.height)
        scale = LocalityScale(l, level)
        if not scale.window_ok(q):
            return None
        value = decode(residue, scale)
        if value is None:
            # cannot happen inside the window when bookkeeping is sound
            raise TermEscapesSorts(f"{site}: value escaped its tracked level {level}")
        return value

    def walk(f, env, env_levels) -> Fraction:
        if isinstance(f, nodes.Const):
            return f.value
        if isinstance(f, nodes.Dist):
            bounds = _term_bounds(f.left, env_levels, l).add(
                _term_bounds(f.right, env_levels, l)
            )
            diff = term_value(f.left, env) - term_value(f.right, env)
            value = predicate_decode(diff, bounds, f"d{f.level}")
            if value is None:
                raise TermEscapesSorts(
                    f"d{f.level}: no windowable level for height {bounds.height} at q={q.value}"
                )
            return _scaled(value, f.level)
        if isinstance(f, nodes.ZeroPred):
            bounds = _term_bounds(f.term, env_levels, l)
            value = predicate_decode(term_value(f.term, env), bounds, f"zero{f.level}")
            if value is None:
                return Fraction(1)  # escaped terms count as far from zero
            return _scaled(value, f.level)
        if isinstance(f, nodes.Neg):
            return 1 - walk(f.body, env, env_levels)
        if isinstance(f, nodes.Min):
            return min(walk(f.left, env, env_levels), walk(f.right, env, env_levels))
        if isinstance(f, nodes.Max):
            return max(walk(f.left, env, env_levels), walk(f.right, env, env_levels))
        if isinstance(f, nodes.PlusTrunc):
            return _truncate(walk(f.left, env, env_levels) + walk(f.right, env, env_levels))
        if isinstance(f, nodes.MinusTrunc):
            return _truncate(walk(f.left, env, env_levels) - walk(f.right, env, env_levels))
        if isinstance(f, (nodes.Sup, nodes.Inf)):
            pool = domain(f.level)
            if rng is not None and sample.count < len(pool):
                pool = rng.sample(pool, sample.count)
            best = None
            for residue, _rational in pool:
                v = walk(
                    f.body,
                    dict(env, **{f.var: (residue, f.level)}),
                    dict(env_levels, **{f.var: f.level}),
                )
                if best is None:
                    best = v
                elif isinstance(f, nodes.Sup):
                    best = max(best, v)
                else:
                    best = min(best, v)
            if best is None:
                raise EnumerationBudgetExceeded("empty quantifier domain")
            return best
        raise TypeError(f"not a formula node: {f!r}")

    return walk(formula, {}, {})


def eval_limit(
    formula,
    height_bound: int,
    budget: Optional[int] = DEFAULT_BUDGET,
) -> Fraction:
    """Same induction over exact rationals with heights <= height_bound and
    ratio <= the quantifier's level; no modulus anywhere."""
    domains: dict = {}

    def domain(level: int):
        if level not in domains:
            domains[level] = bounded_rationals(height_bound, level, budget)
        return domains[level]

    def collect(f):
        if isinstance(f, (nodes.Sup, nodes.Inf)):
            domain(f.level)
            collect(f.body)
        elif isinstance(f, (nodes.Min, nodes.Max, nodes.PlusTrunc, nodes.MinusTrunc)):
            collect(f.left)
            collect(f.right)
        elif isinstance(f, nodes.Neg):
            collect(f.body)

    collect(formula)
    _check_budget(formula, lambda lvl: len(domain(lvl)), budget)

    def term_value(t, env) -> Fraction:
        if isinstance(t, nodes.Var):
            return env[t.name]
        if isinstance(t, nodes.IntConst):
            return Fraction(t.value)
        if isinstance(t, nodes.RatConst):
            return t.value
        left = term_value(t.left, env)
        right = term_value(t.right, env)
        if isinstance(t, nodes.TermAdd):
            return left + right
        if isinstance(t, nodes.TermSub):
            return left - right
        return left * right

    def walk(f, env) -> Fraction:
        if isinstance(f, nodes.Const):
            return f.value
        if isinstance(f, nodes.Dist):
            return _scaled(term_value(f.left, env) - term_value(f.right, env), f.level)
        if isinstance(f, nodes.ZeroPred):
            return _scaled(term_value(f.term, env), f.level)
        if isinstance(f, nodes.Neg):
            return 1 - walk(f.body, env)
        if isinstance(f, nodes.Min):
            return min(walk(f.left, env), walk(f.right, env))
        if isinstance(f, nodes.Max):
            return max(walk(f.left, env), walk(f.right, env))
        if isinstance(f, nodes.PlusTrunc):
            return _truncate(walk(f.left, env) + walk(f.right, env))
        if isinstance(f, nodes.MinusTrunc):
            return _truncate(walk(f.left, env) - walk(f.right, env))
        if isinstance(f, (nodes.Sup, nodes.Inf)):
            best = None
            for value in domain(f.level):
                v = walk(f.body, dict(env, **{f.var: value}))
                if best is None:
                    best = v
                elif isinstance(f, nodes.Sup):
                    best = max(best, v)
                else:
                    best = min(best, v)
            if best is None:
                raise EnumerationBudgetExceeded("empty quantifier domain")
            return best
        raise TypeError(f"not a formula node: {f!r}")

    return walk(formula, {})
