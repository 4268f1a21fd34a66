"""Residue arithmetic, primality, Gaussian pairs, matrices, ring projection."""

import random

import pytest

from finloc.errors import (
    CompositeInFieldMode,
    DimensionMismatch,
    ModulusMismatch,
    NonUnit,
    NotADivisor,
    RangeExhausted,
    SingularPivot,
    ValueTooSmall,
    ValueTooLarge,
)
from finloc.residues import (
    MAX_MODULUS,
    GaussianResidue,
    Modulus,
    ResidueMatrix,
    is_prime,
    make_modulus,
    next_prime,
    project_ring_to_field,
)

from conftest import trial_division_is_prime


F257 = Modulus(257)
Z1000 = Modulus(1000, "ring")


class TestModulus:
    def test_field_mode_accepts_prime(self):
        assert trial_division_is_prime(257)
        assert make_modulus(257, "field") == Modulus(257, "field")

    def test_field_mode_rejects_composite(self):
        with pytest.raises(CompositeInFieldMode):
            make_modulus(4, "field")

    def test_ring_mode_accepts_composite(self):
        assert make_modulus(1000, "ring").value == 1000

    def test_too_small(self):
        with pytest.raises(ValueTooSmall):
            make_modulus(1, "ring")

    def test_too_large(self):
        with pytest.raises(ValueTooLarge):
            make_modulus(2**64 + 7, "ring")

    def test_bad_mode(self):
        with pytest.raises(ValueError):
            make_modulus(7, "weird")


class TestPrimality:
    def test_agrees_with_trial_division(self):
        for n in range(2000):
            assert is_prime(n) == trial_division_is_prime(n), n

    def test_strong_pseudoprimes_rejected(self):
        # composites that fool small witness subsets
        assert not is_prime(3215031751)           # psp to 2,3,5,7
        assert not is_prime(3825123056546413051)  # psp to all bases < 24

    def test_large_primes(self):
        assert is_prime(2**61 - 1)
        assert is_prime(2**31 - 1)
        assert not is_prime(2**62 - 1)

    def test_next_prime_examples(self):
        for lower in (10000, 1000000):
            expected = lower
            while not trial_division_is_prime(expected):
                expected += 1
            assert next_prime(lower) == expected
        assert next_prime(10000) == 10007
        assert next_prime(1000000) == 1000003
        assert next_prime(2) == 2

    def test_next_prime_range_exhausted(self):
        assert next_prime(MAX_MODULUS - 58) == MAX_MODULUS - 58  # largest 64-bit prime
        with pytest.raises(RangeExhausted):
            next_prime(MAX_MODULUS - 57)


class TestResidueArithmetic:
    def test_add_wraps(self):
        assert (F257.element(200) + F257.element(100)).value == 43

    def test_mul_identity(self):
        for v in range(0, 257, 17):
            assert (F257.element(v) * F257.element(1)).value == v

    def test_sub_self_is_zero(self):
        assert (F257.element(99) - F257.element(99)).value == 0

    def test_modulus_mismatch(self):
        with pytest.raises(ModulusMismatch):
            F257.element(1) + Modulus(263).element(1)

    @pytest.mark.parametrize("q", [2, 5, 7])
    def test_ring_laws_exhaustive(self, q):
        mod = Modulus(q)
        elems = [mod.element(v) for v in range(q)]
        for a in elems:
            for b in elems:
                assert a + b == b + a
                assert a * b == b * a
                for c in elems:
                    assert (a + b) + c == a + (b + c)
                    assert (a * b) * c == a * (b * c)
                    assert a * (b + c) == a * b + a * c

    def test_ring_laws_q31_pairs(self):
        mod = Modulus(31)
        elems = [mod.element(v) for v in range(31)]
        for a in elems:
            for b in elems:
                assert a + b == b + a
                assert a * b == b * a
                assert (a - b) + b == a

    def test_inverse_examples(self):
        assert F257.element(3).inv().value == 86
        assert (F257.element(3) * F257.element(86)).value == 1
        assert F257.element(1).inv().value == 1

    def test_ring_inverse(self):
        # 5 shares a factor with 1000: a zero divisor, not a unit
        with pytest.raises(NonUnit):
            Z1000.element(5).inv()
        inv3 = Z1000.element(3).inv()
        assert (Z1000.element(3) * inv3).value == 1
        assert inv3.value == 667

    def test_inverse_involution_exhaustive(self):
        for v in range(1, 257):
            r = F257.element(v)
            assert r.inv().inv() == r

    def test_pow(self):
        assert (F257.element(2) ** 16).value == pow(2, 16, 257)


class TestGaussian:
    def test_i_squared_is_minus_one(self):
        i = F257.gaussian(0, 1)
        sq = i * i
        assert (sq.re.value, sq.im.value) == (256, 0)

    def test_multiplicative_identity(self):
        one = F257.gaussian(1, 0)
        z = F257.gaussian(3, 200)
        assert one * z == z

    def test_formula_example(self):
        z = F257.gaussian(3, 0) * F257.gaussian(0, 2)
        assert (z.re.value, z.im.value) == (0, 6)

    def test_matches_polynomial_ring_exhaustive_q13(self):
        # oracle: multiply in F_13[x]/(x^2+1) as coefficient lists
        q = 13
        mod = Modulus(q)
        for a1 in range(q):
            for b1 in range(q):
                x = mod.gaussian(a1, b1)
                for a2 in range(q):
                    for b2 in range(q):
                        const = (a1 * a2) % q
                        lin = (a1 * b2 + b1 * a2) % q
                        quad = (b1 * b2) % q
                        reduced = ((const - quad) % q, lin)
                        z = x * mod.gaussian(a2, b2)
                        assert (z.re.value, z.im.value) == reduced

    def test_conj_and_inv(self):
        z = F257.gaussian(5, 12)
        assert z.conj() == F257.gaussian(5, -12)
        w = z.inv()
        assert z * w == F257.gaussian(1, 0)

    def test_zero_divisor_not_invertible(self):
        # 13 = 1 mod 4: x^2+1 splits, (5, 1) has norm 26 = 0 mod 13
        mod = Modulus(13)
        with pytest.raises(NonUnit):
            mod.gaussian(5, 1).inv()


class TestProjection:
    def test_example(self):
        z1028 = Modulus(1028, "ring")
        assert project_ring_to_field(z1028.element(300), F257).value == 43

    def test_zero(self):
        z1028 = Modulus(1028, "ring")
        assert project_ring_to_field(z1028.element(0), F257).value == 0

    def test_additivity_spot_check(self):
        z1028 = Modulus(1028, "ring")
        a, b = z1028.element(513), z1028.element(600)
        lhs = project_ring_to_field(a + b, F257)
        rhs = project_ring_to_field(a, F257) + project_ring_to_field(b, F257)
        assert lhs == rhs

    def test_homomorphism_and_surjectivity(self):
        z1028 = Modulus(1028, "ring")
        others = [z1028.element(v) for v in (0, 1, 256, 513, 600, 1027)]
        images = set()
        for v in range(1028):
            a = z1028.element(v)
            pa = project_ring_to_field(a, F257)
            images.add(pa.value)
            for b in others:
                pb = project_ring_to_field(b, F257)
                assert project_ring_to_field(a + b, F257) == pa + pb
                assert project_ring_to_field(a * b, F257) == pa * pb
        assert images == set(range(257))

    def test_not_a_divisor(self):
        with pytest.raises(NotADivisor):
            project_ring_to_field(Z1000.element(5), F257)
        with pytest.raises(NotADivisor):
            project_ring_to_field(Modulus(1028, "ring").element(5), Modulus(514, "ring"))


def _mat(mod, rows):
    return ResidueMatrix(tuple(tuple(mod.element(v) for v in r) for r in rows))


class TestMatrices:
    def test_identity_multiplication(self):
        m = _mat(F257, [[1, 2], [3, 4]])
        ident = ResidueMatrix.identity(2, F257)
        assert ident @ m == m
        assert m @ ident == m

    def test_det_identity(self):
        assert ResidueMatrix.identity(3, F257).det().value == 1

    def test_det_example(self):
        m = _mat(F257, [[0, 1], [256, 0]])
        assert m.det().value == 1

    def test_det_multiplicative_random(self):
        rng = random.Random(20250810)
        for _ in range(50):
            a = _mat(F257, [[rng.randrange(257) for _ in range(3)] for _ in range(3)])
            b = _mat(F257, [[rng.randrange(257) for _ in range(3)] for _ in range(3)])
            assert (a @ b).det() == a.det() * b.det()

    def test_det_elimination_matches_expansion(self):
        rng = random.Random(7)
        for _ in range(10):
            m = _mat(F257, [[rng.randrange(257) for _ in range(5)] for _ in range(5)])
            assert m.det() == m.det_expansion()

    def test_singular_pivot_falls_back_to_expansion(self):
        z6 = Modulus(6, "ring")
        rows = [[2, 1, 0, 0, 0],
                [0, 2, 1, 0, 0],
                [0, 0, 2, 1, 0],
                [0, 0, 0, 2, 1],
                [0, 0, 0, 0, 2]]
        m = _mat(z6, rows)
        with pytest.raises(SingularPivot):
            m.det()
        assert m.det_expansion().value == pow(2, 5, 6)

    def test_transpose_and_conj_transpose(self):
        m = _mat(F257, [[1, 2], [3, 4]])
        assert m.transpose() == _mat(F257, [[1, 3], [2, 4]])
        g = ResidueMatrix((
            (F257.gaussian(1, 2), F257.gaussian(3, 4)),
            (F257.gaussian(5, 6), F257.gaussian(7, 8)),
        ))
        ct = g.conj_transpose()
        assert ct.rows[0][1] == F257.gaussian(5, -6)
        assert ct.rows[1][0] == F257.gaussian(3, -4)

    def test_shape_and_modulus_errors(self):
        with pytest.raises(DimensionMismatch):
            ResidueMatrix(((F257.element(1), F257.element(2)),))
        with pytest.raises(ModulusMismatch):
            ResidueMatrix((
                (F257.element(1), Modulus(263).element(2)),
                (F257.element(3), F257.element(4)),
            ))
        a = ResidueMatrix.identity(2, F257)
        b = ResidueMatrix.identity(3, F257)
        with pytest.raises(DimensionMismatch):
            a @ b
