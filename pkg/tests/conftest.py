"""Shared independent oracles and generators for the test suite.

The oracles here deliberately avoid the library's own code paths: minimal
pairs by exhaustive search, primality by trial division, sort enumeration by
brute force over raw pairs.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

from finloc.logic import nodes


def trial_division_is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def minimal_pair_search(z_value: int, q_value: int, height: int):
    """First pair by ascending denominator, then ascending |numerator|."""
    for k2 in range(1, height + 1):
        rep = (z_value * k2) % q_value
        candidates = sorted((rep, rep - q_value), key=abs)
        for k1 in candidates:
            if abs(k1) <= height:
                return Fraction(k1, k2)
    return None


def brute_force_sort(height: int, ratio) -> list:
    """Reduce-and-dedupe enumeration over raw pairs."""
    ratio = Fraction(ratio)
    seen = set()
    for k2 in range(1, height + 1):
        for k1 in range(-height, height + 1):
            if math.gcd(abs(k1), k2) != 1 and k1 != 0:
                continue
            value = Fraction(k1, k2)
            if abs(value) <= ratio:
                seen.add(value)
    return sorted(seen)


# ---------------------------------------------------------------------------
# Random formula generation (parser round-trip fodder)
# ---------------------------------------------------------------------------

def random_term(rng: random.Random, depth: int, scope: tuple):
    choices = ["int", "rat", "add", "sub", "mul"]
    if scope:
        choices += ["var", "var", "var"]
    if depth <= 0:
        choices = ["int", "rat"] + (["var", "var"] if scope else [])
    kind = rng.choice(choices)
    if kind == "var":
        return nodes.Var(rng.choice(scope))
    if kind == "int":
        return nodes.IntConst(rng.randint(-9, 9))
    if kind == "rat":
        return nodes.RatConst(Fraction(rng.randint(-9, 9), rng.randint(1, 9)))
    left = random_term(rng, depth - 1, scope)
    right = random_term(rng, depth - 1, scope)
    cls = {"add": nodes.TermAdd, "sub": nodes.TermSub, "mul": nodes.TermMul}[kind]
    return cls(left, right)


def random_formula(rng: random.Random, depth: int, scope: tuple = (), counter: list = None):
    if counter is None:
        counter = [0]
    leaf_kinds = ["const", "dist", "zero"]
    inner_kinds = leaf_kinds + ["neg", "min", "max", "plus", "minus", "sup", "inf"]
    kind = rng.choice(leaf_kinds if depth <= 0 else inner_kinds)
    if kind == "const":
        den = rng.randint(1, 9)
        return nodes.Const(Fraction(rng.randint(0, den), den))
    if kind == "dist":
        return nodes.Dist(
            rng.randint(1, 4),
            random_term(rng, depth - 1, scope),
            random_term(rng, depth - 1, scope),
        )
    if kind == "zero":
        return nodes.ZeroPred(rng.randint(1, 4), random_term(rng, depth - 1, scope))
    if kind == "neg":
        return nodes.Neg(random_formula(rng, depth - 1, scope, counter))
    if kind in ("min", "max", "plus", "minus"):
        cls = {"min": nodes.Min, "max": nodes.Max,
               "plus": nodes.PlusTrunc, "minus": nodes.MinusTrunc}[kind]
        return cls(
            random_formula(rng, depth - 1, scope, counter),
            random_formula(rng, depth - 1, scope, counter),
        )
    counter[0] += 1
    name = f"v{counter[0]}"
    cls = nodes.Sup if kind == "sup" else nodes.Inf
    return cls(name, rng.randint(1, 4),
               random_formula(rng, depth - 1, scope + (name,), counter))
