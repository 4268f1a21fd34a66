"""Group-point generators, matrix encode/decode, variety scans, covering radii."""

import random
from fractions import Fraction

import numpy as np
import pytest

from finloc.errors import (
    DegenerateParams,
    EmptyPointSet,
    EnumerationBudgetExceeded,
    HeightExceeded,
    WindowTooSmall,
)
from finloc.localmetric import LocalityScale
from finloc.polynomials import PolySystem
from finloc.residues import Modulus, next_prime
from finloc.structures import (
    GaussianRational,
    GroupFamily,
    RationalMatrix,
    covering_radius,
    decode_matrix,
    encode_matrix,
    generate_rational_point,
    group_hom_check,
    make_reference_grid,
    random_group_point,
    sl2_point,
    so_point,
    so_point_cayley,
    su_point,
    unit_quaternion,
    variety_points,
)

F1009 = Modulus(1009)
M61 = Modulus(2**61 - 1)


def frac(n, d=1):
    return Fraction(n, d)


class TestGenerators:
    def test_so2_half_tangent(self):
        m = so_point(2, [frac(1, 2)])
        assert m.rows == (
            (frac(3, 5), frac(-4, 5)),
            (frac(4, 5), frac(3, 5)),
        )
        assert m.is_special_orthogonal()

    def test_so3_random_members(self):
        rng = random.Random(99)
        for _ in range(20):
            tangents = [Fraction(rng.randint(-5, 5), rng.randint(1, 5)) for _ in range(3)]
            assert so_point(3, tangents).is_special_orthogonal()

    def test_so_param_count(self):
        with pytest.raises(DegenerateParams):
            so_point(3, [frac(1)])

    def test_cayley_members(self):
        rng = random.Random(5)
        for n in (2, 3, 4):
            k = n * (n - 1) // 2
            params = [Fraction(rng.randint(-4, 4), rng.randint(1, 4)) for _ in range(k)]
            assert so_point_cayley(n, params).is_special_orthogonal()

    def test_su2_identity_quaternion(self):
        m = su_point(2, [(frac(1), frac(0), frac(0), frac(0))])
        assert m == RationalMatrix.identity(2, gaussian=True)

    def test_su2_i_quaternion(self):
        m = su_point(2, [(frac(0), frac(1), frac(0), frac(0))])
        assert m.rows == (
            (GaussianRational(frac(0), frac(1)), GaussianRational(frac(0), frac(0))),
            (GaussianRational(frac(0), frac(0)), GaussianRational(frac(0), frac(-1))),
        )
        assert m.is_special_unitary()

    def test_su_rejects_non_unit_quaternion(self):
        with pytest.raises(DegenerateParams):
            su_point(2, [(frac(1), frac(1), frac(0), frac(0))])

    def test_stereographic_quaternions_are_unit(self):
        rng = random.Random(31)
        for _ in range(25):
            u, v, w = (Fraction(rng.randint(-4, 4), rng.randint(1, 4)) for _ in range(3))
            a, b, c, d = unit_quaternion(u, v, w)
            assert a * a + b * b + c * c + d * d == 1

    def test_su3_members(self):
        rng = random.Random(13)
        quats = [unit_quaternion(*(Fraction(rng.randint(-2, 2), rng.randint(1, 2))
                                   for _ in range(3))) for _ in range(3)]
        assert su_point(3, quats).is_special_unitary()

    def test_sl2_det_one(self):
        a = GaussianRational(frac(3, 2), frac(-1, 3))
        b = GaussianRational(frac(0), frac(5, 7))
        m = sl2_point(a, b)
        assert m.det() == GaussianRational(frac(1))

    def test_generate_dispatch_and_height_bound(self):
        m = generate_rational_point(GroupFamily.so(2), [frac(1, 2)], height_bound=5)
        assert m.max_height() == 5
        with pytest.raises(HeightExceeded):
            generate_rational_point(GroupFamily.so(2), [frac(1, 2)], height_bound=4)

    def test_random_group_point_respects_bound(self):
        rng = random.Random(3)
        for family in (GroupFamily.so(3), GroupFamily.su(2), GroupFamily.sl2()):
            point = random_group_point(family, 10**4, rng)
            assert point.max_height() <= 10**4

    def test_family_validation(self):
        with pytest.raises(ValueError):
            GroupFamily("so", 1)
        with pytest.raises(ValueError):
            GroupFamily("sl2", 3)
        with pytest.raises(ValueError):
            GroupFamily("weird", 2)


class TestMatrixCodec:
    def test_round_trip_so2(self):
        m = so_point(2, [frac(1, 2)])
        scale = LocalityScale(10, 1)
        assert decode_matrix(encode_matrix(m, F1009), scale) == m

    def test_identity_round_trip(self):
        ident = RationalMatrix.identity(3)
        assert decode_matrix(encode_matrix(ident, F1009), LocalityScale(2, 1)) == ident

    def test_gaussian_round_trip(self):
        m = su_point(2, [unit_quaternion(frac(1, 2), frac(0), frac(1))])
        scale = LocalityScale(13, 1)
        q = Modulus(next_prime(2 * 13**2 + 1))
        assert decode_matrix(encode_matrix(m, q), scale) == m

    def test_non_local_matrix_decodes_to_none(self):
        rows = ((F1009.element(500), F1009.element(0)),
                (F1009.element(0), F1009.element(1)))
        from finloc.residues import ResidueMatrix

        assert decode_matrix(ResidueMatrix(rows), LocalityScale(3, 1)) is None


class TestGroupHom:
    def test_so3_no_failures(self):
        report = group_hom_check(GroupFamily.so(3), 10, 100, M61, seed=42)
        assert report.failures == 0
        assert report.pairs_checked == 10

    def test_su2_no_failures(self):
        report = group_hom_check(GroupFamily.su(2), 10, 10**4, M61, seed=42)
        assert report.failures == 0

    def test_sl2_no_failures(self):
        report = group_hom_check(GroupFamily.sl2(), 10, 1000, M61, seed=42)
        assert report.failures == 0

    def test_identity_pair_passes(self):
        report = group_hom_check(GroupFamily.so(2), 1, 1, M61, seed=0)
        assert report.failures == 0

    def test_window_too_small(self):
        with pytest.raises(WindowTooSmall):
            group_hom_check(GroupFamily.so(3), 1, 10**4, Modulus(101), seed=0)


CIRCLE_SYSTEM = PolySystem.from_text("vars: x y\nx^2 + y^2 - 1")


class TestVariety:
    def test_circle_points(self):
        report = variety_points(CIRCLE_SYSTEM, F1009, LocalityScale(5, 1))
        as_set = set(report.points)
        assert (frac(3, 5), frac(4, 5)) in as_set
        assert (frac(0), frac(1)) in as_set
        assert (frac(1), frac(0)) in as_set
        assert report.spurious == 0
        for x, y in report.points:
            assert x * x + y * y == 1

    def test_zero_polynomial_keeps_everything(self):
        system = PolySystem.from_text("vars: x\nx - x")
        report = variety_points(system, F1009, LocalityScale(5, 1))
        assert len(report.points) == report.tuples_checked

    def test_no_rational_solutions(self):
        system = PolySystem.from_text("vars: x\nx^2 + 1")
        report = variety_points(system, F1009, LocalityScale(5, 1))
        assert report.points == []
        assert report.spurious == 0

    def test_window_guarantee_flag(self):
        report = variety_points(CIRCLE_SYSTEM, F1009, LocalityScale(5, 1))
        assert not report.window_guaranteed  # 2*B^2 > 1009 at these parameters
        big_q = Modulus(next_prime(2 * report.value_height_bound**2 + 1))
        big = variety_points(CIRCLE_SYSTEM, big_q, LocalityScale(5, 1))
        assert big.window_guaranteed
        assert big.spurious == 0
        assert set(big.points) == set(report.points)

    def test_budget(self):
        with pytest.raises(EnumerationBudgetExceeded):
            variety_points(CIRCLE_SYSTEM, F1009, LocalityScale(5, 1), budget=10)


class TestCovering:
    def test_identity_grid_radius_zero(self):
        radius = covering_radius(GroupFamily.so(2), 1, [np.eye(2)])
        assert radius == 0.0

    def test_so3_monotone(self):
        family = GroupFamily.so(3)
        grid = make_reference_grid(family, 32)
        radii = [covering_radius(family, h, grid) for h in (10, 100, 1000)]
        assert radii[0] >= radii[1] >= radii[2]
        assert radii[2] < radii[0]

    def test_su2_small_height_positive(self):
        family = GroupFamily.su(2)
        grid = make_reference_grid(family, 16)
        assert covering_radius(family, 1, grid) > 0

    def test_empty_grid(self):
        with pytest.raises(EmptyPointSet):
            covering_radius(GroupFamily.so(2), 10, [])

    def test_grid_elements_are_rotations(self):
        for mat in make_reference_grid(GroupFamily.so(3), 20):
            assert np.allclose(mat @ mat.T, np.eye(3), atol=1e-9)
            assert abs(np.linalg.det(mat) - 1) < 1e-9
        for mat in make_reference_grid(GroupFamily.su(2), 20):
            assert np.allclose(mat @ mat.conj().T, np.eye(2), atol=1e-9)
            assert abs(np.linalg.det(mat) - 1) < 1e-9

    def test_unsupported_grid_family(self):
        with pytest.raises(EmptyPointSet):
            make_reference_grid(GroupFamily.su(3), 4)
