"""Integer-coefficient multivariate polynomials and the one-line-per-equation text format.

Text format: a header `vars: x y` followed by one polynomial per line in
expanded monomial form, e.g. `x^2 + y^2 - 1` or `3*x*y - 2`. Blank lines and
`#` comments are skipped.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import Error
from .residues import Residue

_TOKEN = re.compile(r"\s*(\d+|[A-Za-z_][A-Za-z_0-9]*|\^|\*|\+|-)")


class PolyFormatError(Error):
    """Malformed polynomial or system text."""


@dataclass(frozen=True)
class Polynomial:
    """Sum of integer monomials over a fixed variable tuple.

    terms: tuple of (coefficient, exponent tuple), one per monomial, with
    exponents aligned to `vars`.
    """

    vars: tuple
    terms: tuple

    @classmethod
    def parse(cls, text: str, variables: Sequence[str]) -> "Polynomial":
        variables = tuple(variables)
        index = {v: i for i, v in enumerate(variables)}
        pos = 0
        tokens = []
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m:
                if text[pos:].strip():
                    raise PolyFormatError(f"bad character at {pos}: {text[pos:pos+8]!r}")
                break
            tokens.append(m.group(1))
            pos = m.end()

        terms: dict = {}
        i = 0

        def take_monomial(sign):
            nonlocal i
            coeff = sign
            exps = [0] * len(variables)
            saw_factor = False
            while i < len(tokens):
                tok = tokens[i]
                if tok in ("+", "-"):
                    break
                if tok == "*":
                    i += 1
                    continue
                if tok.isdigit():
                    coeff *= int(tok)
                    i += 1
                elif tok == "^":
                    raise PolyFormatError("dangling '^'")
                else:
                    if tok not in index:
                        raise PolyFormatError(f"undeclared variable {tok!r}")
                    var = index[tok]
                    i += 1
                    if i < len(tokens) and tokens[i] == "^":
                        i += 1
                        if i >= len(tokens) or not tokens[i].isdigit():
                            raise PolyFormatError("'^' must be followed by an integer")
                        exps[var] += int(tokens[i])
                        i += 1
                    else:
                        exps[var] += 1
                saw_factor = True
            if not saw_factor:
                raise PolyFormatError("empty monomial")
            key = tuple(exps)
            terms[key] = terms.get(key, 0) + coeff

        sign = 1
        if i < len(tokens) and tokens[i] in ("+", "-"):
            sign = -1 if tokens[i] == "-" else 1
            i += 1
        if i >= len(tokens):
            raise PolyFormatError("empty polynomial")
        take_monomial(sign)
        while i < len(tokens):
            tok = tokens[i]
            if tok not in ("+", "-"):
                raise PolyFormatError(f"expected '+' or '-', got {tok!r}")
            i += 1
            take_monomial(-1 if tok == "-" else 1)

        packed = tuple(sorted((c, e) for e, c in terms.items() if c != 0))
        packed = tuple((c, e) for c, e in packed)
        return cls(variables, packed)

    def evaluate(self, point: Sequence):
        """Evaluate at residues or rationals; coefficients are lifted to match."""
        if not point:
            raise PolyFormatError("empty evaluation point")
        if isinstance(point[0], Residue):
            mod = point[0].modulus
            lift = mod.element
            acc = mod.element(0)
        else:
            lift = Fraction
            acc = Fraction(0)
        for coeff, exps in self.terms:
            term = lift(coeff)
            for value, e in zip(point, exps):
                for _ in range(e):
                    term = term * value
            acc = acc + term
        return acc

    def degree(self) -> int:
        return max((sum(e) for _, e in self.terms), default=0)

    def max_abs_on_box(self, radius) -> Fraction:
        """Bound on |p| over the box |x_i| <= radius."""
        radius = Fraction(radius)
        total = Fraction(0)
        for coeff, exps in self.terms:
            total += abs(coeff) * radius ** sum(exps)
        return total

    def lipschitz_on_box(self, radius) -> Fraction:
        """Bound on |p(x) - p(y)| / max_i |x_i - y_i| over the box |x_i| <= radius."""
        radius = Fraction(radius)
        total = Fraction(0)
        for coeff, exps in self.terms:
            d = sum(exps)
            if d == 0:
                continue
            total += abs(coeff) * d * radius ** (d - 1)
        return total

    def value_height_bound(self, height: int, radius) -> int:
        """Exact height bound of p(x) for rationals with heights <= height, |x_i| <= radius.

        The common denominator divides height**(sum of per-variable max degrees),
        and the numerator over it is bounded by that times max_abs_on_box.
        """
        if not self.terms:
            return 1
        per_var = [0] * len(self.vars)
        for _, exps in self.terms:
            for i, e in enumerate(exps):
                per_var[i] = max(per_var[i], e)
        den_bound = height ** sum(per_var)
        num_bound = self.max_abs_on_box(radius) * den_bound
        return max(den_bound, int(num_bound) + 1)

    def __str__(self):
        if not self.terms:
            return "0"
        chunks = []
        for coeff, exps in self.terms:
            factors = []
            if abs(coeff) != 1 or not any(exps):
                factors.append(str(abs(coeff)))
            for v, e in zip(self.vars, exps):
                if e == 1:
                    factors.append(v)
                elif e > 1:
                    factors.append(f"{v}^{e}")
            mono = "*".join(factors)
            chunks.append(("- " if coeff < 0 else "+ ") + mono)
        text = " ".join(chunks)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


@dataclass(frozen=True)
class PolySystem:
    vars: tuple
    polys: tuple

    @classmethod
    def from_text(cls, text: str) -> "PolySystem":
        variables = None
        polys = []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if variables is None:
                if not line.startswith("vars:"):
                    raise PolyFormatError("first line must declare variables: `vars: x y`")
                variables = tuple(line[len("vars:"):].split())
                if not variables:
                    raise PolyFormatError("no variables declared")
                continue
            polys.append(Polynomial.parse(line, variables))
        if variables is None:
            raise PolyFormatError("missing `vars:` header")
        if not polys:
            raise PolyFormatError("no polynomials given")
        return cls(variables, tuple(polys))

    @classmethod
    def from_path(cls, path) -> "PolySystem":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_text(fh.read())

    def satisfied_by(self, point: Sequence) -> bool:
        return all(not p.evaluate(point) for p in self.polys)
