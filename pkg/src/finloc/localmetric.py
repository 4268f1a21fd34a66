"""Bounded rational reconstruction and the near-origin metric it induces.

A residue z mod q is "local" at scale (l, m) when it is k1 * k2^{-1} for a
reduced pair with |k1| <= L and 1 <= k2 <= L, L = l**m. Inside the uniqueness
window 2*L**2 < q that pair is unique, recovered by the extended-Euclid
remainder sequence, and everything downstream (norm, distance, sorts,
axiom audits) is exact rational arithmetic on it. No floats in this module.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (
    DenominatorNotUnit,
    EnumerationBudgetExceeded,
    NotLocalError,
    OverflowAtRequestedLevel,
    ScaleTooLargeForModulus,
)
from .polynomials import Polynomial
from .residues import Modulus, Residue

# Reduced pair with positive denominator; the stdlib type keeps the invariants.
BoundedRational = Fraction

MAX_HEIGHT_BOUND = 2**63


@dataclass(frozen=True)
class LocalityScale:
    """Feasible unit l >= 2 and sort level m >= 1, with height bound L = l**m."""

    l: int
    m: int
    height_bound: int = field(init=False, compare=False)

    def __post_init__(self):
        if self.l < 2:
            raise ValueError(f"feasible unit must be >= 2, got {self.l}")
        if self.m < 1:
            raise ValueError(f"sort level must be >= 1, got {self.m}")
        bound = self.l**self.m
        if bound > MAX_HEIGHT_BOUND:
            raise OverflowAtRequestedLevel(f"height bound {self.l}^{self.m} exceeds 2^63")
        object.__setattr__(self, "height_bound", bound)

    @property
    def ratio_bound(self) -> int:
        return self.m

    def window_ok(self, q: Modulus) -> bool:
        """Uniqueness window: 2*L**2 < q."""
        return 2 * self.height_bound * self.height_bound < q.value

    def require_window(self, q: Modulus) -> None:
        if not self.window_ok(q):
            raise ScaleTooLargeForModulus(
                f"2*{self.height_bound}^2 >= {q.value}; minimal pairs not unique"
            )

    def __repr__(self):
        return f"LocalityScale(l={self.l}, m={self.m}, L={self.height_bound})"


@dataclass(frozen=True)
class RandomSample:
    """Seeded sampling request for operations that also support exhaustive mode."""

    count: int
    seed: int

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("sample count must be >= 1")


def encode(r: Fraction, q: Modulus) -> Residue:
    """k1 * k2^{-1} mod q; ring-compatible wherever defined."""
    r = Fraction(r)
    if math.gcd(r.denominator, q.value) != 1:
        raise DenominatorNotUnit(f"denominator {r.denominator} shares a factor with {q.value}")
    inv_den = pow(r.denominator, -1, q.value)
    return Residue(r.numerator * inv_den, q)


def decode(z: Residue, scale: LocalityScale) -> Optional[Fraction]:
    """Minimal bounded pair for z, or None when no pair fits the scale.

    Runs the extended-Euclid remainder sequence on (q, z), stopping at the
    first remainder <= L; the pair is accepted when its coefficient also has
    absolute value <= L and the pair is reduced. Inside the window 2*L**2 < q
    this is the unique reduced representation with heights <= L.
    """
    q = z.modulus.value
    L = scale.height_bound
    scale.require_window(z.modulus)
    r_prev, r_cur = q, z.value
    t_prev, t_cur = 0, 1
    while r_cur > L:
        quot = r_prev // r_cur
        r_prev, r_cur = r_cur, r_prev - quot * r_cur
        t_prev, t_cur = t_cur, t_prev - quot * t_cur
    if abs(t_cur) > L or math.gcd(r_cur, abs(t_cur)) != 1:
        return None
    return Fraction(r_cur, t_cur) if t_cur > 0 else Fraction(-r_cur, -t_cur)


def in_sort(z: Residue, scale: LocalityScale) -> bool:
    """Height-local with ratio |k1|/k2 <= m."""
    found = decode(z, scale)
    if found is None:
        return False
    return abs(found) <= scale.ratio_bound


def norm(z: Residue, scale: LocalityScale) -> Fraction:
    """|k1|/k2 of the minimal pair; at finite scale the standard part is the identity."""
    found = decode(z, scale)
    if found is None:
        raise NotLocalError(f"{z!r} has no representation at {scale!r}")
    return abs(found)


def dist(z1: Residue, z2: Residue, scale: LocalityScale) -> Fraction:
    """Norm of the difference; NotLocalError tells the caller to raise the level."""
    return norm(z1 - z2, scale)


def sort_level_for(op: str, scale: LocalityScale) -> LocalityScale:
    """Smallest level (same l) guaranteed to hold op-results of level-m elements.

    Exact bookkeeping: sums of height-L pairs have heights <= 2*L**2 and ratio
    <= 2m; products have heights <= L**2 and ratio <= m**2. The returned index
    dominates both the height and the ratio requirement, which can exceed the
    coarser nominal indices (2m, m**2) for small l.
    """
    L = scale.height_bound
    if op == "add":
        height_needed = 2 * L * L
        ratio_needed = 2 * scale.m
    elif op == "mul":
        height_needed = L * L
        ratio_needed = scale.m * scale.m
    else:
        raise ValueError(f"op must be 'add' or 'mul', got {op!r}")
    level = max(scale.m, ratio_needed)
    while scale.l**level < height_needed:
        level += 1
        if scale.l**level > MAX_HEIGHT_BOUND:
            raise OverflowAtRequestedLevel(
                f"level for {op} at (l={scale.l}, m={scale.m}) exceeds 2^63"
            )
    return LocalityScale(scale.l, level)


def bounded_rationals(height: int, ratio, budget: Optional[int] = None) -> list:
    """All reduced rationals with |num| <= height, den <= height, |value| <= ratio, ascending."""
    if height < 1:
        raise ValueError("height bound must be >= 1")
    ratio = Fraction(ratio)
    values = {Fraction(0)}
    for den in range(1, height + 1):
        num_cap = min(height, int(ratio * den))
        for num in range(1, num_cap + 1):
            if math.gcd(num, den) != 1:
                continue
            v = Fraction(num, den)
            if v > ratio:
                continue
            values.add(v)
            values.add(-v)
            if budget is not None and len(values) > budget:
                raise EnumerationBudgetExceeded(f"more than {budget} sort elements")
    return sorted(values)


def enumerate_sort(scale: LocalityScale, q: Modulus, budget: Optional[int] = None) -> list:
    """Encodings of the level-m sort in ascending rational order."""
    scale.require_window(q)
    rationals = bounded_rationals(scale.height_bound, scale.ratio_bound, budget)
    return [encode(r, q) for r in rationals]


def sort_with_values(scale: LocalityScale, q: Modulus, budget: Optional[int] = None) -> list:
    """(residue, rational) pairs of the sort, ascending by rational."""
    scale.require_window(q)
    rationals = bounded_rationals(scale.height_bound, scale.ratio_bound, budget)
    return [(encode(r, q), r) for r in rationals]


# ---------------------------------------------------------------------------
# Axiom audit
# ---------------------------------------------------------------------------

AUDIT_AXIOMS = (
    "triangle",
    "identity_of_indiscernibles",
    "diameter_bound",
    "uniform_continuity_add",
    "uniform_continuity_mul",
    "zero_predicate_openness",
    "decode_coherence",
)


@dataclass
class AxiomCheck:
    axiom: str
    checked: int = 0
    failed: int = 0
    worst_witness: Optional[str] = None

    def fail(self, witness: str) -> None:
        self.failed += 1
        if self.worst_witness is None:
            self.worst_witness = witness


@dataclass
class AuditReport:
    scale: LocalityScale
    modulus: Modulus
    checks: dict

    @property
    def violations(self) -> int:
        return sum(c.failed for c in self.checks.values())

    def to_rows(self) -> list:
        return [
            {
                "axiom": name,
                "checked": self.checks[name].checked,
                "failed": self.checks[name].failed,
                "worst_witness": self.checks[name].worst_witness,
            }
            for name in AUDIT_AXIOMS
        ]

    def to_json_obj(self) -> dict:
        return {
            row["axiom"]: {
                "checked": row["checked"],
                "failed": row["failed"],
                "worst_witness": row["worst_witness"],
            }
            for row in self.to_rows()
        }

    def to_csv_rows(self) -> list:
        return [[row["axiom"], row["checked"], row["failed"]] for row in self.to_rows()]


def _height(r: Fraction) -> int:
    return max(abs(r.numerator), r.denominator)


def _largest_windowed_level(l: int, q: Modulus, cap: int) -> int:
    """Largest level k <= cap with 2*(l**k)**2 < q."""
    level = 0
    while level < cap:
        nxt = l ** (level + 1)
        if 2 * nxt * nxt >= q.value:
            break
        level += 1
    return level


def audit_metric(
    scale: LocalityScale,
    q: Modulus,
    sample: Optional[RandomSample] = None,
    zero_predicates: Optional[Sequence[Polynomial]] = None,
    epsilons: Sequence[Fraction] = (Fraction(1), Fraction(1, 2), Fraction(1, 4)),
) -> AuditReport:
    """Check the metric axioms on the level-m sort.

    Distances are computed on the decoded rationals of the sort (the metric is
    defined through the minimal pairs). Whenever a difference's true heights
    fit the largest level the modulus can window, the residue-route dist() is
    additionally required to agree; disagreements are decode_coherence
    failures. Out-of-window differences cannot be checked through residues
    without aliasing, so they are only checked on the decoded side.
    """
    scale.require_window(q)
    pairs = sort_with_values(scale, q)
    m = scale.ratio_bound

    bookkeeping_cap = sort_level_for("add", scale).m
    dec_level = _largest_windowed_level(scale.l, q, bookkeeping_cap)
    dec_scale = LocalityScale(scale.l, max(dec_level, 1))

    checks = {name: AxiomCheck(name) for name in AUDIT_AXIOMS}
    coherence = checks["decode_coherence"]

    def metric(a, b):
        """(residue, rational) x 2 -> exact distance, with residue-route cross-check."""
        dv = abs(a[1] - b[1])
        if _height(dv) <= dec_scale.height_bound:
            coherence.checked += 1
            try:
                through_residues = dist(a[0], b[0], dec_scale)
            except NotLocalError:
                coherence.fail(f"d({a[1]},{b[1]}) not local at level {dec_scale.m}")
            else:
                if through_residues != dv:
                    coherence.fail(
                        f"d({a[1]},{b[1]}): residues gave {through_residues}, exact {dv}"
                    )
        return dv

    rng = random.Random(sample.seed) if sample is not None else None

    def draw(k):
        n = len(pairs)
        if rng is None:
            if k == 2:
                return ((pairs[i], pairs[j]) for i in range(n) for j in range(n))
            if k == 3:
                return (
                    (pairs[i], pairs[j], pairs[h])
                    for i in range(n)
                    for j in range(n)
                    for h in range(n)
                )
            return (
                (pairs[i], pairs[j], pairs[h], pairs[g])
                for i in range(n)
                for j in range(n)
                for h in range(n)
                for g in range(n)
            )
        return (tuple(rng.choice(pairs) for _ in range(k)) for _ in range(sample.count))

    # (4) triangle inequality
    tri = checks["triangle"]
    for x, y, z in draw(3):
        tri.checked += 1
        if metric(x, z) > metric(x, y) + metric(y, z):
            tri.fail(f"d({x[1]},{z[1]}) > d({x[1]},{y[1]}) + d({y[1]},{z[1]})")

    # (5) identity of indiscernibles
    ident = checks["identity_of_indiscernibles"]
    for x, y in draw(2):
        ident.checked += 1
        if metric(x, y) == 0 and x[0] != y[0]:
            ident.fail(f"d({x[1]},{y[1]}) = 0 but residues differ")

    # (7) diameter bound: norms stay <= m on the sort, pair distances <= 2m.
    # (The literal pairwise "d <= m" fails on antipodal points like (m, -m);
    # the sort's actual diameter constant is 2m.)
    diam = checks["diameter_bound"]
    for x, y in draw(2):
        diam.checked += 1
        if abs(x[1]) > m or abs(y[1]) > m or metric(x, y) > 2 * m:
            diam.fail(f"d({x[1]},{y[1]}) = {metric(x, y)} exceeds the sort diameter")

    # (8) uniform continuity of + and * with explicit moduli of continuity
    cont_add = checks["uniform_continuity_add"]
    cont_mul = checks["uniform_continuity_mul"]
    for x1, x2, y1, y2 in draw(4):
        for eps in epsilons:
            delta_add = eps / 2
            if metric(x1, y1) < delta_add and metric(x2, y2) < delta_add:
                cont_add.checked += 1
                sx = (x1[0] + x2[0], x1[1] + x2[1])
                sy = (y1[0] + y2[0], y1[1] + y2[1])
                if metric(sx, sy) >= eps:
                    cont_add.fail(f"add at ({x1[1]},{x2[1]}) vs ({y1[1]},{y2[1]}), eps={eps}")
            delta_mul = eps / (2 * m + 1)
            if metric(x1, y1) < delta_mul and metric(x2, y2) < delta_mul:
                cont_mul.checked += 1
                px = (x1[0] * x2[0], x1[1] * x2[1])
                py = (y1[0] * y2[0], y1[1] * y2[1])
                if metric(px, py) >= eps:
                    cont_mul.fail(f"mul at ({x1[1]},{x2[1]}) vs ({y1[1]},{y2[1]}), eps={eps}")

    # (9) openness of predicate complements for polynomial zero-predicates
    openness = checks["zero_predicate_openness"]
    if zero_predicates:
        for poly in zero_predicates:
            k = len(poly.vars)
            lip = poly.lipschitz_on_box(m)
            base_points = list(draw(k))
            for x0 in base_points:
                v0 = abs(poly.evaluate([p[1] for p in x0]))
                if v0 == 0:
                    continue  # the point is in the predicate, nothing to witness
                if lip == 0:
                    continue
                delta = v0 / lip
                for x in base_points:
                    if all(metric(a, b) < delta for a, b in zip(x0, x)):
                        openness.checked += 1
                        if poly.evaluate([p[1] for p in x]) == 0:
                            openness.fail(
                                f"{poly} vanishes at {[str(p[1]) for p in x]} within "
                                f"delta={delta} of nonzero point"
                            )
    return AuditReport(scale, q, checks)
