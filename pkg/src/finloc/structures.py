"""Rational points on compact matrix groups, their finite-field images, and variety scans.

Group points are generated by exact rational parametrizations (tan-half-angle
planar rotations, stereographic unit quaternions, shear products), so the
defining equations hold with no tolerance. Floats appear only in covering
radius reporting, after all exact work is done.
"""

from __future__ import annotations

import functools
import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from . import _linalg
from .errors import (
    DegenerateParams,
    DimensionMismatch,
    EmptyPointSet,
    EnumerationBudgetExceeded,
    HeightExceeded,
    WindowTooSmall,
)
from .localmetric import LocalityScale, decode, encode, sort_with_values
from .polynomials import PolySystem
from .residues import GaussianResidue, Modulus, Residue, ResidueMatrix


@dataclass(frozen=True)
class GaussianRational:
    """Exact element of Q[i]."""

    re: Fraction
    im: Fraction = Fraction(0)

    def __add__(self, other):
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __mul__(self, other):
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def conj(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def inv(self) -> "GaussianRational":
        n2 = self.re * self.re + self.im * self.im
        if n2 == 0:
            raise ZeroDivisionError("inverse of 0 in Q[i]")
        return GaussianRational(self.re / n2, -self.im / n2)

    def height(self) -> int:
        return max(
            abs(self.re.numerator), self.re.denominator,
            abs(self.im.numerator), self.im.denominator,
        )

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"({self.re} + {self.im}i)"


RationalEntry = Union[Fraction, GaussianRational]


def _entry_height(e: RationalEntry) -> int:
    if isinstance(e, GaussianRational):
        return e.height()
    return max(abs(e.numerator), e.denominator)


@dataclass(frozen=True)
class RationalMatrix:
    """Square matrix over Q or Q[i] with exact entries."""

    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise DimensionMismatch("matrix must be square and non-empty")
        kind = type(rows[0][0])
        if any(type(e) is not kind for r in rows for e in r):
            raise DimensionMismatch("mixed entry kinds in one matrix")

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def gaussian(self) -> bool:
        return isinstance(self.rows[0][0], GaussianRational)

    @classmethod
    def identity(cls, n: int, gaussian: bool = False) -> "RationalMatrix":
        if gaussian:
            one, zero = GaussianRational(Fraction(1)), GaussianRational(Fraction(0))
        else:
            one, zero = Fraction(1), Fraction(0)
        return cls(_linalg.identity_rows(n, zero, one))

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        if self.n != other.n or self.gaussian != other.gaussian:
            raise DimensionMismatch("incompatible matrices")
        return RationalMatrix(_linalg.mat_mul(self.rows, other.rows))

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(_linalg.transpose(self.rows))

    def conj_transpose(self) -> "RationalMatrix":
        if not self.gaussian:
            return self.transpose()
        return RationalMatrix(
            tuple(tuple(self.rows[j][i].conj() for j in range(self.n)) for i in range(self.n))
        )

    def det(self) -> RationalEntry:
        if self.n <= 4:
            return _linalg.det_expansion(self.rows)
        return _linalg.det_elimination(self.rows, lambda e: e.inv() if isinstance(e, GaussianRational) else 1 / e)

    def max_height(self) -> int:
        return max(_entry_height(e) for r in self.rows for e in r)

    def is_special_orthogonal(self) -> bool:
        return (
            not self.gaussian
            and (self.transpose() @ self) == RationalMatrix.identity(self.n)
            and self.det() == 1
        )

    def is_special_unitary(self) -> bool:
        return (
            self.gaussian
            and (self.conj_transpose() @ self) == RationalMatrix.identity(self.n, gaussian=True)
            and self.det() == GaussianRational(Fraction(1))
        )

    def to_float(self) -> np.ndarray:
        if self.gaussian:
            return np.array([[complex(e) for e in r] for r in self.rows], dtype=complex)
        return np.array([[float(e) for e in r] for r in self.rows], dtype=float)


@dataclass(frozen=True)
class GroupFamily:
    kind: str  # "so" | "su" | "sl2"
    n: int

    def __post_init__(self):
        if self.kind not in ("so", "su", "sl2"):
            raise ValueError(f"unknown family kind {self.kind!r}")
        if self.kind in ("so", "su") and self.n < 2:
            raise ValueError(f"{self.kind} needs dimension >= 2")
        if self.kind == "sl2" and self.n != 2:
            raise ValueError("sl2 is fixed at dimension 2")

    @classmethod
    def so(cls, n: int) -> "GroupFamily":
        return cls("so", n)

    @classmethod
    def su(cls, n: int) -> "GroupFamily":
        return cls("su", n)

    @classmethod
    def sl2(cls) -> "GroupFamily":
        return cls("sl2", 2)

    @property
    def gaussian(self) -> bool:
        return self.kind in ("su", "sl2")

    def planes(self) -> list:
        return [(i, j) for i in range(self.n) for j in range(i + 1, self.n)]

    def __str__(self):
        return {"so": f"SO({self.n})", "su": f"SU({self.n})", "sl2": "SL2[i]"}[self.kind]


@dataclass(frozen=True)
class HeightBound:
    H: int

    def __post_init__(self):
        if self.H < 1:
            raise ValueError("height bound must be >= 1")


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------

def planar_rotation(n: int, i: int, j: int, t: Fraction) -> RationalMatrix:
    """Rotation in the (i, j) plane with cos = (1-t^2)/(1+t^2), sin = 2t/(1+t^2)."""
    t = Fraction(t)
    den = 1 + t * t
    c = (1 - t * t) / den
    s = 2 * t / den
    rows = [[Fraction(1) if a == b else Fraction(0) for b in range(n)] for a in range(n)]
    rows[i][i] = c
    rows[i][j] = -s
    rows[j][i] = s
    rows[j][j] = c
    return RationalMatrix(tuple(tuple(r) for r in rows))


def so_point(n: int, tangents: Sequence[Fraction]) -> RationalMatrix:
    """Product of planar rotations, one tangent parameter per plane in lex order."""
    planes = GroupFamily.so(n).planes()
    if len(tangents) != len(planes):
        raise DegenerateParams(f"SO({n}) needs {len(planes)} tangents, got {len(tangents)}")
    out = RationalMatrix.identity(n)
    for (i, j), t in zip(planes, tangents):
        out = out @ planar_rotation(n, i, j, t)
    return out


def so_point_cayley(n: int, upper: Sequence[Fraction]) -> RationalMatrix:
    """Alternative SO(n) generator: (I - S)(I + S)^{-1} for skew-symmetric S."""
    planes = GroupFamily.so(n).planes()
    if len(upper) != len(planes):
        raise DegenerateParams(f"SO({n}) Cayley needs {len(planes)} entries, got {len(upper)}")
    skew = [[Fraction(0)] * n for _ in range(n)]
    for (i, j), v in zip(planes, upper):
        skew[i][j] = Fraction(v)
        skew[j][i] = -Fraction(v)
    ident = _linalg.identity_rows(n, Fraction(0), Fraction(1))
    plus = [[ident[i][j] + skew[i][j] for j in range(n)] for i in range(n)]
    minus = [[ident[i][j] - skew[i][j] for j in range(n)] for i in range(n)]
    inv_plus = _rational_inverse(plus)
    if inv_plus is None:
        raise DegenerateParams("I + S is singular")
    return RationalMatrix(_linalg.mat_mul(tuple(map(tuple, minus)), inv_plus))


def _rational_inverse(rows):
    n = len(rows)
    work = [list(r) + [Fraction(1) if i == j else Fraction(0) for j in range(n)]
            for i, r in enumerate(rows)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if work[r][col] != 0), None)
        if pivot is None:
            return None
        work[col], work[pivot] = work[pivot], work[col]
        inv = 1 / work[col][col]
        work[col] = [v * inv for v in work[col]]
        for r in range(n):
            if r != col and work[r][col] != 0:
                f = work[r][col]
                work[r] = [a - f * b for a, b in zip(work[r], work[col])]
    return tuple(tuple(row[n:]) for row in work)


def unit_quaternion(u, v, w) -> tuple:
    """Stereographic rational point of the unit 3-sphere."""
    u, v, w = Fraction(u), Fraction(v), Fraction(w)
    r2 = u * u + v * v + w * w
    den = 1 + r2
    return ((1 - r2) / den, 2 * u / den, 2 * v / den, 2 * w / den)


def su2_block(quat) -> RationalMatrix:
    """SU(2) element [[a+bi, c+di], [-c+di, a-bi]] from a unit quaternion."""
    a, b, c, d = (Fraction(x) for x in quat)
    if a * a + b * b + c * c + d * d != 1:
        raise DegenerateParams(f"quaternion {quat} is not on the unit sphere")
    return RationalMatrix((
        (GaussianRational(a, b), GaussianRational(c, d)),
        (GaussianRational(-c, d), GaussianRational(a, -b)),
    ))


def su_point(n: int, quats: Sequence) -> RationalMatrix:
    """Product of SU(2) blocks embedded along the planes of SU(n)."""
    planes = GroupFamily.su(n).planes()
    if len(quats) != len(planes):
        raise DegenerateParams(f"SU({n}) needs {len(planes)} quaternions, got {len(quats)}")
    out = RationalMatrix.identity(n, gaussian=True)
    zero = GaussianRational(Fraction(0))
    one = GaussianRational(Fraction(1))
    for (i, j), quat in zip(planes, quats):
        block = su2_block(quat)
        rows = [[one if a == b else zero for b in range(n)] for a in range(n)]
        rows[i][i] = block.rows[0][0]
        rows[i][j] = block.rows[0][1]
        rows[j][i] = block.rows[1][0]
        rows[j][j] = block.rows[1][1]
        out = out @ RationalMatrix(tuple(tuple(r) for r in rows))
    return out


def sl2_point(a: GaussianRational, b: GaussianRational) -> RationalMatrix:
    """Shear product [[1, a], [0, 1]] @ [[1, 0], [b, 1]]: determinant 1 by construction."""
    one = GaussianRational(Fraction(1))
    return RationalMatrix((
        (one + a * b, a),
        (b, one),
    ))


def generate_rational_point(
    family: GroupFamily,
    params: Sequence,
    height_bound: Optional[int] = None,
) -> RationalMatrix:
    """Dispatch to the family's generator and verify exact group membership."""
    if family.kind == "so":
        point = so_point(family.n, params)
        ok = point.is_special_orthogonal()
    elif family.kind == "su":
        point = su_point(family.n, params)
        ok = point.is_special_unitary()
    else:
        a, b = params
        point = sl2_point(a, b)
        ok = point.det() == GaussianRational(Fraction(1))
    if not ok:
        raise DegenerateParams(f"generated point left {family}")
    if height_bound is not None and point.max_height() > height_bound:
        raise HeightExceeded(
            f"entry heights {point.max_height()} exceed bound {height_bound}"
        )
    return point


def _random_fraction(rng: random.Random, height: int) -> Fraction:
    den = rng.randint(1, height)
    num = rng.randint(-height, height)
    return Fraction(num, den)


def random_group_point(family: GroupFamily, height_bound: int, rng: random.Random) -> RationalMatrix:
    """Sample a group point whose entry heights stay within the bound."""
    for _ in range(1000):
        try:
            if family.kind == "so":
                params = [_random_fraction(rng, 3) for _ in family.planes()]
                point = generate_rational_point(family, params, height_bound)
            elif family.kind == "su":
                quats = [unit_quaternion(*(_random_fraction(rng, 2) for _ in range(3)))
                         for _ in family.planes()]
                point = generate_rational_point(family, quats, height_bound)
            else:
                a = GaussianRational(_random_fraction(rng, 3), _random_fraction(rng, 3))
                b = GaussianRational(_random_fraction(rng, 3), _random_fraction(rng, 3))
                point = generate_rational_point(family, (a, b), height_bound)
            return point
        except HeightExceeded:
            continue
    raise HeightExceeded(f"could not sample a {family} point with heights <= {height_bound}")


# ---------------------------------------------------------------------------
# Encode / decode between rational and residue matrices
# ---------------------------------------------------------------------------

def encode_matrix(mat: RationalMatrix, q: Modulus) -> ResidueMatrix:
    """Entrywise encoding; Gaussian entries encode componentwise."""
    def enc(e):
        if isinstance(e, GaussianRational):
            return GaussianResidue(encode(e.re, q), encode(e.im, q))
        return encode(e, q)

    return ResidueMatrix(tuple(tuple(enc(e) for e in r) for r in mat.rows))


def decode_matrix(mat: ResidueMatrix, scale: LocalityScale) -> Optional[RationalMatrix]:
    """Entrywise decoding; None when any entry fails."""
    rows = []
    for r in mat.rows:
        row = []
        for e in r:
            if isinstance(e, GaussianResidue):
                re = decode(e.re, scale)
                im = decode(e.im, scale)
                if re is None or im is None:
                    return None
                row.append(GaussianRational(re, im))
            else:
                v = decode(e, scale)
                if v is None:
                    return None
                row.append(v)
        rows.append(tuple(row))
    return RationalMatrix(tuple(rows))


# ---------------------------------------------------------------------------
# Homomorphism-defect experiment
# ---------------------------------------------------------------------------

@dataclass
class HomCheckReport:
    family: GroupFamily
    pairs_checked: int
    membership_failures: int
    roundtrip_failures: int
    witnesses: list

    @property
    def failures(self) -> int:
        return self.membership_failures + self.roundtrip_failures

    def to_rows(self) -> list:
        return [{
            "family": str(self.family),
            "pairs_checked": self.pairs_checked,
            "membership_failures": self.membership_failures,
            "roundtrip_failures": self.roundtrip_failures,
        }]


def _finite_membership_ok(family: GroupFamily, mat: ResidueMatrix) -> bool:
    q = mat.modulus
    if family.kind == "so":
        ident = ResidueMatrix.identity(family.n, q)
        return (mat.transpose() @ mat) == ident and mat.det() == q.element(1)
    one = q.gaussian(1, 0)
    if family.kind == "su":
        ident = ResidueMatrix.identity(family.n, q, gaussian=True)
        return (mat.conj_transpose() @ mat) == ident and mat.det() == one
    return mat.det() == one


def group_hom_check(
    family: GroupFamily,
    sample_size: int,
    height_bound: int,
    q: Modulus,
    scale: Optional[LocalityScale] = None,
    seed: int = 0,
) -> HomCheckReport:
    """Sample rational pairs; images must satisfy the group equations in F_q and
    products must decode back to the exact rational product."""
    worst = 2 * family.n * height_bound * height_bound
    if 2 * worst * worst >= q.value:
        raise WindowTooSmall(
            f"modulus {q.value} cannot window products at height bound {height_bound}"
        )
    rng = random.Random(seed)
    membership_failures = 0
    roundtrip_failures = 0
    witnesses = []
    for _ in range(sample_size):
        m1 = random_group_point(family, height_bound, rng)
        m2 = random_group_point(family, height_bound, rng)
        a1 = encode_matrix(m1, q)
        a2 = encode_matrix(m2, q)
        for rational, finite in ((m1, a1), (m2, a2)):
            if not _finite_membership_ok(family, finite):
                membership_failures += 1
                if len(witnesses) < 5:
                    witnesses.append(f"membership: {rational.rows}")
        exact = m1 @ m2
        dec_scale = scale
        if dec_scale is None:
            need = max(exact.max_height(), 2)
            dec_scale = LocalityScale(need, 1)
        if not dec_scale.window_ok(q):
            raise WindowTooSmall(
                f"product heights {exact.max_height()} break the window for {q.value}"
            )
        decoded = decode_matrix(a1 @ a2, dec_scale)
        if decoded != exact:
            roundtrip_failures += 1
            if len(witnesses) < 5:
                witnesses.append(f"roundtrip: {exact.rows}")
    return HomCheckReport(family, sample_size, membership_failures, roundtrip_failures, witnesses)


# ---------------------------------------------------------------------------
# Variety scans
# ---------------------------------------------------------------------------

@dataclass
class VarietyReport:
    points: list            # tuples of Fractions that satisfy the system exactly
    spurious: int           # satisfied mod q but not over Q after decoding
    spurious_witnesses: list
    tuples_checked: int
    value_height_bound: int
    window_guaranteed: bool

    def to_rows(self) -> list:
        return [{"point": "(" + ", ".join(str(c) for c in p) + ")"} for p in self.points]


def variety_points(
    system: PolySystem,
    q: Modulus,
    scale: LocalityScale,
    budget: Optional[int] = None,
) -> VarietyReport:
    """Scan sort tuples satisfying the system mod q; keep those exact over Q.

    Spurious tuples (zero mod q, nonzero over Q) are counted, never dropped;
    they cannot occur when 2*B**2 < q for the computed value-height bound B.
    """
    pairs = sort_with_values(scale, q)
    k = len(system.vars)
    total = len(pairs) ** k
    if budget is not None and total > budget:
        raise EnumerationBudgetExceeded(f"{total} tuples exceed budget {budget}")

    bound = max(
        p.value_height_bound(scale.height_bound, scale.ratio_bound) for p in system.polys
    )
    window_guaranteed = 2 * bound * bound < q.value

    points = []
    spurious = 0
    witnesses = []
    zero = q.element(0)
    for combo in itertools.product(pairs, repeat=k):
        residues = [c[0] for c in combo]
        if any(p.evaluate(residues) != zero for p in system.polys):
            continue
        decoded = tuple(decode(r, scale) for r in residues)
        # sort tuples always decode: they were built from in-window rationals
        if system.satisfied_by(decoded):
            points.append(decoded)
        else:
            spurious += 1
            if len(witnesses) < 10:
                witnesses.append(decoded)
    return VarietyReport(points, spurious, witnesses, total, bound, window_guaranteed)


# ---------------------------------------------------------------------------
# Covering radius
# ---------------------------------------------------------------------------

def _halton(index: int, base: int) -> float:
    out, f = 0.0, 1.0
    while index > 0:
        f /= base
        out += f * (index % base)
        index //= base
    return out


def _quaternion_matrix_so3(a, b, c, d) -> np.ndarray:
    return np.array([
        [a * a + b * b - c * c - d * d, 2 * (b * c - a * d), 2 * (b * d + a * c)],
        [2 * (b * c + a * d), a * a - b * b + c * c - d * d, 2 * (c * d - a * b)],
        [2 * (b * d - a * c), 2 * (c * d + a * b), a * a - b * b - c * c + d * d],
    ])


def _uniform_quaternion(u1: float, u2: float, u3: float) -> tuple:
    s1, s2 = math.sqrt(1 - u1), math.sqrt(u1)
    return (
        s1 * math.sin(2 * math.pi * u2),
        s1 * math.cos(2 * math.pi * u2),
        s2 * math.sin(2 * math.pi * u3),
        s2 * math.cos(2 * math.pi * u3),
    )


def make_reference_grid(family: GroupFamily, size: int) -> list:
    """Deterministic low-discrepancy grid: Halton points (bases 2, 3, 5) mapped
    through the uniform-quaternion construction (SO(3), SU(2)) or the circle (SO(2))."""
    if size < 1:
        raise EmptyPointSet("grid size must be >= 1")
    grid = []
    for i in range(size):
        u1, u2, u3 = _halton(i, 2), _halton(i, 3), _halton(i, 5)
        if family.kind == "so" and family.n == 2:
            theta = 2 * math.pi * u1
            grid.append(np.array([
                [math.cos(theta), -math.sin(theta)],
                [math.sin(theta), math.cos(theta)],
            ]))
        elif family.kind == "so" and family.n == 3:
            grid.append(_quaternion_matrix_so3(*_uniform_quaternion(u1, u2, u3)))
        elif family.kind == "su" and family.n == 2:
            a, b, c, d = _uniform_quaternion(u1, u2, u3)
            grid.append(np.array([[a + b * 1j, c + d * 1j], [-c + d * 1j, a - b * 1j]]))
        else:
            raise EmptyPointSet(f"no built-in grid for {family}; pass explicit matrices")
    return grid


# tangent / stereographic parameter pools are fixed so point sets nest across H
def _pool_fractions(height: int) -> list:
    out = [Fraction(0)]
    for den in range(1, height + 1):
        for num in range(1, height + 1):
            if math.gcd(num, den) == 1:
                out.append(Fraction(num, den))
                out.append(Fraction(-num, den))
    return out


@functools.lru_cache(maxsize=8)
def _point_pool(family: GroupFamily, pool_height: int) -> tuple:
    """(max_height, float_matrix) for every pool point, heights ascending."""
    entries = []
    if family.kind == "so":
        params = _pool_fractions(pool_height)
        for combo in itertools.product(params, repeat=len(family.planes())):
            point = so_point(family.n, combo)
            entries.append((point.max_height(), point.to_float()))
    elif family.kind == "su" and family.n == 2:
        params = _pool_fractions(max(2, pool_height - 1))
        for combo in itertools.product(params, repeat=3):
            point = su_point(2, [unit_quaternion(*combo)])
            entries.append((point.max_height(), point.to_float()))
            entries.append((point.max_height(), -point.to_float()))
    else:
        raise EmptyPointSet(f"no built-in point pool for {family}")
    entries.sort(key=lambda e: e[0])
    return tuple(entries)


def covering_radius(
    family: GroupFamily,
    height_bound: int,
    grid: Sequence[np.ndarray],
    pool_height: int = 3,
) -> float:
    """Max over grid points of the min Frobenius distance to generated points
    with entry heights <= height_bound. Point sets are nested in height_bound."""
    grid = list(grid)
    if not grid:
        raise EmptyPointSet("empty reference grid")
    pool = _point_pool(family, pool_height)
    mats = [m for h, m in pool if h <= height_bound]
    if not mats:
        raise EmptyPointSet(f"no generated point with heights <= {height_bound}")
    flat_points = np.stack([m.reshape(-1) for m in mats])          # (P, n*n)
    flat_grid = np.stack([np.asarray(g).reshape(-1) for g in grid])  # (G, n*n)
    # |A - B|_F^2 = |A|^2 + |B|^2 - 2 Re <A, B>
    p_norm = np.sum(np.abs(flat_points) ** 2, axis=1)
    g_norm = np.sum(np.abs(flat_grid) ** 2, axis=1)
    cross = np.real(flat_grid @ flat_points.conj().T)
    d2 = g_norm[:, None] + p_norm[None, :] - 2 * cross
    np.maximum(d2, 0.0, out=d2)
    return float(np.sqrt(d2.min(axis=1)).max())
