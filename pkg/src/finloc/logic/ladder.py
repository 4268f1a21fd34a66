"""Prime ladders and convergence scans: the finite stand-in for taking a limit.

A ladder is a strictly increasing list of windowed primes with their scales.
A scan evaluates a formula at every rung and against the bounded-rational
evaluator, reporting the value sequence and the gaps; non-convergence is a
reportable outcome, not an error.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from ..errors import Error
from ..localmetric import LocalityScale, RandomSample
from ..residues import Modulus, next_prime
from .evaluate import DEFAULT_BUDGET, eval_finite, eval_limit, max_quantifier_level, required_modulus


class LadderInvalid(Error):
    """Rungs out of order or outside their windows."""


@dataclass(frozen=True)
class Rung:
    q: Modulus
    scale: LocalityScale


@dataclass(frozen=True)
class PrimeLadder:
    rungs: tuple

    def __post_init__(self):
        rungs = tuple(self.rungs)
        object.__setattr__(self, "rungs", rungs)
        if not rungs:
            raise LadderInvalid("ladder needs at least one rung")
        prev_q = 0
        prev_height = 0
        for rung in rungs:
            if rung.q.value <= prev_q:
                raise LadderInvalid("rung moduli must be strictly increasing")
            if rung.scale.height_bound < prev_height:
                raise LadderInvalid("rung scales must be non-decreasing")
            if not rung.scale.window_ok(rung.q):
                raise LadderInvalid(
                    f"rung q={rung.q.value} does not window scale {rung.scale!r}"
                )
            prev_q = rung.q.value
            prev_height = rung.scale.height_bound
        object.__setattr__(self, "rungs", rungs)

    @classmethod
    def for_formula(cls, formula, ls: Sequence[int], q_floor: int = 0,
                    growth: float = 1.0) -> "PrimeLadder":
        """One rung per feasible unit, each with the smallest prime that
        windows every quantifier and predicate of the formula."""
        level = max_quantifier_level(formula)
        rungs = []
        prev_q = 0
        floor = q_floor
        for l in ls:
            bound = max(required_modulus(formula, l), floor, prev_q)
            q = next_prime(bound + 1)
            rungs.append(Rung(Modulus(q), LocalityScale(l, level)))
            prev_q = q
            if growth > 1.0:
                floor = int(floor * growth) if floor else 0
        return cls(tuple(rungs))

    @classmethod
    def from_geometric(cls, start: int, count: int, growth: float, l: int,
                       m: int = 1) -> "PrimeLadder":
        """Rungs at next_prime(start * growth**i) with one fixed scale."""
        if count < 1:
            raise LadderInvalid("need at least one rung")
        rungs = []
        target = float(start)
        prev_q = 0
        for _ in range(count):
            q = next_prime(max(int(target), prev_q + 1))
            rungs.append(Rung(Modulus(q), LocalityScale(l, m)))
            prev_q = q
            target *= growth
        return cls(tuple(rungs))


@dataclass
class ScanRow:
    q: int
    l: int
    m: int
    value: Fraction
    gap: Fraction


@dataclass
class ScanReport:
    rows: list
    limit_value: Fraction
    diffs: list = field(default_factory=list)

    def __post_init__(self):
        self.diffs = [
            self.rows[i + 1].value - self.rows[i].value for i in range(len(self.rows) - 1)
        ]

    @property
    def final_gap(self) -> Fraction:
        return self.rows[-1].gap

    @property
    def non_convergent(self) -> bool:
        """Gaps failed to shrink: nonzero at the top and no smaller than at the bottom."""
        return self.final_gap != 0 and self.final_gap >= self.rows[0].gap

    def to_rows(self) -> list:
        return [
            {
                "q": r.q,
                "l": r.l,
                "m": r.m,
                "value_num": r.value.numerator,
                "value_den": r.value.denominator,
                "gap_num": r.gap.numerator,
                "gap_den": r.gap.denominator,
            }
            for r in self.rows
        ]


def los_scan(
    formula,
    ladder: PrimeLadder,
    limit_height: int,
    sample: Optional[RandomSample] = None,
    budget: Optional[int] = DEFAULT_BUDGET,
) -> ScanReport:
    """Evaluate at every rung and against the bounded-rational limit proxy."""
    limit_value = eval_limit(formula, limit_height, budget)
    rows = []
    for rung in ladder.rungs:
        value = eval_finite(formula, rung.q, rung.scale.l, sample, budget)
        rows.append(
            ScanRow(rung.q.value, rung.scale.l, rung.scale.m, value, abs(value - limit_value))
        )
    return ScanReport(rows, limit_value)
