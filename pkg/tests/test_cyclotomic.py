"""Cyclotomic polynomial table and exact arithmetic in Q(zeta_n)."""
import random
from fractions import Fraction

import pytest

from etnckit.cyclotomic import (
    CycloField,
    cyclotomic_poly,
    cyclotomic_value_at_one,
    divisors,
)


def test_divisors_ascending():
    assert divisors(1) == [1]
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert divisors(60) == [1, 2, 3, 4, 5, 6, 10, 12, 15, 20, 30, 60]


def test_cyclotomic_poly_table():
    # low-degree-first coefficient tuples
    assert cyclotomic_poly(1) == (-1, 1)
    assert cyclotomic_poly(2) == (1, 1)
    assert cyclotomic_poly(3) == (1, 1, 1)
    assert cyclotomic_poly(4) == (1, 0, 1)
    assert cyclotomic_poly(6) == (1, -1, 1)
    assert cyclotomic_poly(8) == (1, 0, 0, 0, 1)
    assert cyclotomic_poly(12) == (1, 0, -1, 0, 1)
    assert cyclotomic_poly(15) == (1, -1, 0, 1, -1, 1, 0, -1, 1)


def test_product_of_cyclotomics_is_xn_minus_1():
    for n in (1, 2, 6, 12, 20):
        prod = [1]
        for d in divisors(n):
            phi = cyclotomic_poly(d)
            out = [0] * (len(prod) + len(phi) - 1)
            for i, a in enumerate(prod):
                for j, b in enumerate(phi):
                    out[i + j] += a * b
            prod = out
        expect = [-1] + [0] * (n - 1) + [1]
        assert prod == expect


def test_value_at_one():
    # Phi_1(1) = 0, Phi_{p^a}(1) = p, else 1
    assert cyclotomic_value_at_one(1) == 0
    assert cyclotomic_value_at_one(2) == 2
    assert cyclotomic_value_at_one(9) == 3
    assert cyclotomic_value_at_one(8) == 2
    assert cyclotomic_value_at_one(6) == 1
    assert cyclotomic_value_at_one(12) == 1
    assert cyclotomic_value_at_one(15) == 1


def test_field_interned_and_shape():
    F = CycloField(12)
    assert F is CycloField(12)
    assert F.deg == 4 and F.n == 12
    assert F.zero == (Fraction(0),) * 4
    assert F.one == F.zeta_pow(0)


def test_zeta_power_cycle_and_inverse():
    for n in (4, 5, 8, 12):
        F = CycloField(n)
        assert F.zeta_pow(n) == F.one
        for j in range(n):
            assert F.mul(F.zeta_pow(j), F.zeta_pow(n - j)) == F.one
            assert F.zeta_pow(j + n) == F.zeta_pow(j)


def test_primitive_root_of_unity_relation():
    # zeta_4^2 = -1; zeta_12^6 = -1; zeta_3 satisfies 1 + z + z^2 = 0
    F4 = CycloField(4)
    assert F4.zeta_pow(2) == F4.neg(F4.one)
    F12 = CycloField(12)
    assert F12.zeta_pow(6) == F12.neg(F12.one)
    F3 = CycloField(3)
    acc = F3.add(F3.add(F3.one, F3.zeta_pow(1)), F3.zeta_pow(2))
    assert acc == F3.zero


def test_from_zeta_sum_accumulates_before_reduction():
    F = CycloField(5)
    a = F.from_zeta_sum([(Fraction(1, 2), 7), (Fraction(1, 2), 2)])
    assert a == F.zeta_pow(2)
    assert F.from_zeta_sum([]) == F.zero


def test_rationality_detection():
    F = CycloField(8)
    assert F.is_rational(F.from_rational(Fraction(3, 7)))
    assert F.rational_value(F.from_rational(Fraction(3, 7))) == Fraction(3, 7)
    assert not F.is_rational(F.zeta_pow(1))
    with pytest.raises(ValueError):
        F.rational_value(F.zeta_pow(1))


def test_ring_axioms_randomized():
    rng = random.Random(404)
    for n in (3, 4, 8, 12):
        F = CycloField(n)

        def rnd():
            return F.from_zeta_sum(
                [(Fraction(rng.randint(-5, 5), rng.randint(1, 4)), rng.randrange(n))
                 for _ in range(3)]
            )

        for _ in range(40):
            a, b, c = rnd(), rnd(), rnd()
            assert F.mul(a, b) == F.mul(b, a)
            assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
            assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
            assert F.add(a, F.neg(a)) == F.zero
            assert F.mul_zeta(a, 1) == F.mul(a, F.zeta_pow(1))
            assert F.scalar(Fraction(2, 3), a) == F.mul(F.from_rational(Fraction(2, 3)), a)
