"""Exact arithmetic in prime fields F_q, residue rings Z_n, and their Gaussian pair extension.

Everything here is an immutable value with pure operations; results are always
in canonical form (least non-negative representative). Field-mode moduli are
certified prime by a deterministic Miller-Rabin witness set that is exact for
the whole supported 64-bit range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .errors import (
    CompositeInFieldMode,
    DimensionMismatch,
    ModulusMismatch,
    NonUnit,
    NotADivisor,
    RangeExhausted,
    SingularPivot,
    ValueTooLarge,
    ValueTooSmall,
)
from . import _linalg

MAX_MODULUS = 2**64 - 1

# Deterministic for all n < 3.3e24, which covers the 64-bit cap with room to spare.
_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin over the fixed witness set."""
    if n < 2:
        return False
    for p in _WITNESSES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(lower: int) -> int:
    """Smallest prime >= lower within the supported width."""
    if lower <= 2:
        return 2
    n = lower | 1  # primes above 2 are odd
    while n <= MAX_MODULUS:
        if is_prime(n):
            return n
        n += 2
    raise RangeExhausted(f"no prime >= {lower} within the 64-bit range")


@dataclass(frozen=True)
class Modulus:
    """A validated modulus: prime in field mode, any n >= 2 in ring mode."""

    value: int
    mode: str = "field"

    def __post_init__(self):
        if self.mode not in ("field", "ring"):
            raise ValueError(f"mode must be 'field' or 'ring', got {self.mode!r}")
        if self.value < 2:
            raise ValueTooSmall(f"modulus must be >= 2, got {self.value}")
        if self.value > MAX_MODULUS:
            raise ValueTooLarge(f"modulus {self.value} exceeds the 64-bit range")
        if self.mode == "field" and not is_prime(self.value):
            raise CompositeInFieldMode(f"{self.value} is not prime")

    @property
    def is_field(self) -> bool:
        return self.mode == "field"

    def element(self, value: int) -> "Residue":
        return Residue(value, self)

    def gaussian(self, re: int, im: int) -> "GaussianResidue":
        return GaussianResidue(Residue(re, self), Residue(im, self))

    def __repr__(self):
        return f"Modulus({self.value}, {self.mode})"


def make_modulus(value: int, mode: str = "field") -> Modulus:
    return Modulus(value, mode)


@dataclass(frozen=True)
class Residue:
    """Canonical residue 0 <= value < modulus."""

    value: int
    modulus: Modulus

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.modulus.value)

    def _same(self, other: "Residue") -> None:
        if self.modulus != other.modulus:
            raise ModulusMismatch(f"{self.modulus} vs {other.modulus}")

    def __add__(self, other):
        if not isinstance(other, Residue):
            return NotImplemented
        self._same(other)
        return Residue(self.value + other.value, self.modulus)

    def __sub__(self, other):
        if not isinstance(other, Residue):
            return NotImplemented
        self._same(other)
        return Residue(self.value - other.value, self.modulus)

    def __mul__(self, other):
        if not isinstance(other, Residue):
            return NotImplemented
        self._same(other)
        return Residue(self.value * other.value, self.modulus)

    def __neg__(self):
        return Residue(-self.value, self.modulus)

    def __pow__(self, exponent: int):
        return Residue(pow(self.value, exponent, self.modulus.value), self.modulus)

    def __bool__(self):
        return self.value != 0

    def inv(self) -> "Residue":
        """Multiplicative inverse; NonUnit when gcd(value, modulus) > 1."""
        try:
            return Residue(pow(self.value, -1, self.modulus.value), self.modulus)
        except ValueError:
            raise NonUnit(f"{self.value} is not a unit mod {self.modulus.value}") from None

    def __repr__(self):
        return f"{self.value} (mod {self.modulus.value})"


@dataclass(frozen=True)
class GaussianResidue:
    """Pair (re, im) over one modulus with (a1,b1)*(a2,b2) = (a1a2 - b1b2, a1b2 + b1a2).

    This is a ring, never assumed a field: for q = 1 (mod 4) it has zero
    divisors, so inversion goes through NonUnit like any ring element.
    """

    re: Residue
    im: Residue

    def __post_init__(self):
        if self.re.modulus != self.im.modulus:
            raise ModulusMismatch("gaussian components over different moduli")

    @property
    def modulus(self) -> Modulus:
        return self.re.modulus

    def _same(self, other: "GaussianResidue") -> None:
        if self.modulus != other.modulus:
            raise ModulusMismatch(f"{self.modulus} vs {other.modulus}")

    def __add__(self, other):
        if not isinstance(other, GaussianResidue):
            return NotImplemented
        self._same(other)
        return GaussianResidue(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        if not isinstance(other, GaussianResidue):
            return NotImplemented
        self._same(other)
        return GaussianResidue(self.re - other.re, self.im - other.im)

    def __mul__(self, other):
        if not isinstance(other, GaussianResidue):
            return NotImplemented
        self._same(other)
        return GaussianResidue(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __neg__(self):
        return GaussianResidue(-self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def conj(self) -> "GaussianResidue":
        return GaussianResidue(self.re, -self.im)

    def inv(self) -> "GaussianResidue":
        scale = (self.re * self.re + self.im * self.im).inv()  # NonUnit propagates
        return GaussianResidue(self.re * scale, -self.im * scale)

    def __repr__(self):
        return f"({self.re.value}, {self.im.value}) (mod {self.modulus.value})"


Entry = Union[Residue, GaussianResidue]


def _entry_modulus(entry: Entry) -> Modulus:
    return entry.modulus if isinstance(entry, GaussianResidue) else entry.modulus


@dataclass(frozen=True)
class ResidueMatrix:
    """Square matrix with homogeneous Residue or GaussianResidue entries."""

    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise DimensionMismatch("matrix must be square and non-empty")
        first = rows[0][0]
        kind = type(first)
        mod = _entry_modulus(first)
        for r in rows:
            for e in r:
                if type(e) is not kind:
                    raise DimensionMismatch("mixed entry kinds in one matrix")
                if _entry_modulus(e) != mod:
                    raise ModulusMismatch("matrix entries over different moduli")

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def modulus(self) -> Modulus:
        return _entry_modulus(self.rows[0][0])

    @property
    def gaussian(self) -> bool:
        return isinstance(self.rows[0][0], GaussianResidue)

    @classmethod
    def identity(cls, n: int, modulus: Modulus, gaussian: bool = False) -> "ResidueMatrix":
        if gaussian:
            one = modulus.gaussian(1, 0)
            zero = modulus.gaussian(0, 0)
        else:
            one = modulus.element(1)
            zero = modulus.element(0)
        return cls(_linalg.identity_rows(n, zero, one))

    def __matmul__(self, other: "ResidueMatrix") -> "ResidueMatrix":
        if not isinstance(other, ResidueMatrix):
            return NotImplemented
        if self.n != other.n:
            raise DimensionMismatch(f"{self.n} vs {other.n}")
        if self.modulus != other.modulus:
            raise ModulusMismatch(f"{self.modulus} vs {other.modulus}")
        return ResidueMatrix(_linalg.mat_mul(self.rows, other.rows))

    def transpose(self) -> "ResidueMatrix":
        return ResidueMatrix(_linalg.transpose(self.rows))

    def conj_transpose(self) -> "ResidueMatrix":
        """Transpose with (a, b) -> (a, -b) on Gaussian entries."""
        if not self.gaussian:
            return self.transpose()
        return ResidueMatrix(
            tuple(tuple(self.rows[j][i].conj() for j in range(self.n)) for i in range(self.n))
        )

    def det(self) -> Entry:
        """Fraction-free cofactor expansion for n <= 4, unit-pivot elimination above.

        SingularPivot from elimination (ring-mode zero divisors) signals the
        caller to fall back to det_expansion().
        """
        if self.n <= 4:
            return _linalg.det_expansion(self.rows)
        return _linalg.det_elimination(self.rows, lambda e: e.inv())

    def det_expansion(self) -> Entry:
        """Cofactor expansion at any size; exponential but division-free."""
        return _linalg.det_expansion(self.rows)


def project_ring_to_field(k: Residue, q: Modulus) -> Residue:
    """Ring homomorphism Z_n -> F_q, k -> k mod q; requires q | n and q prime."""
    n = k.modulus.value
    if not q.is_field:
        raise NotADivisor(f"target modulus {q.value} is not field mode")
    if n % q.value != 0:
        raise NotADivisor(f"{q.value} does not divide {n}")
    return Residue(k.value % q.value, q)


# re-exported so callers can catch it from this module too
__all__ = [
    "MAX_MODULUS",
    "Modulus",
    "Residue",
    "GaussianResidue",
    "ResidueMatrix",
    "make_modulus",
    "is_prime",
    "next_prime",
    "project_ring_to_field",
    "NonUnit",
    "SingularPivot",
]
