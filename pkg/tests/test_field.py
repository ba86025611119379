from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from relguess.field import DEFAULT_PRIME, QQ, PrimeField, make_field


def test_make_field():
    assert make_field("Q") is QQ
    assert make_field("7") == PrimeField(7)
    assert make_field(DEFAULT_PRIME).p == 2**31 - 1
    with pytest.raises(ValueError):
        PrimeField(15)


def test_fraction_images():
    F = PrimeField(7)
    assert F(Fraction(1, 2)) == 4
    assert F("-1") == 6
    with pytest.raises(ZeroDivisionError):
        F(Fraction(1, 7))


@given(st.integers(0, 2**31 - 2), st.integers(1, 2**31 - 2))
def test_prime_ops_match_python_ints(a, b):
    F = PrimeField(DEFAULT_PRIME)
    p = F.p
    assert F.add(a, b) == (a + b) % p
    assert F.mul(a, b) == a * b % p
    assert F.mul(F.div(a, b), b) == a % p


@settings(max_examples=50)
@given(st.integers(1, 12), st.integers(1, 12), st.integers(0, 2**32))
def test_vecmat_matmul_exact(r, c, seed):
    F = PrimeField(DEFAULT_PRIME)
    rng = np.random.default_rng(seed)
    A = F.random(rng, r * c).reshape(r, c)
    v = F.random(rng, r)
    ref = [sum(int(v[i]) * int(A[i, j]) for i in range(r)) % F.p for j in range(c)]
    assert [int(x) for x in F.vecmat(v, A)] == ref
    B = F.random(rng, c * 3).reshape(c, 3)
    refm = (A.astype(object).dot(B.astype(object))) % F.p
    assert (F.matmul(A, B).astype(object) == refm).all()


@pytest.mark.parametrize("q", [1, 2, 3, 6])
def test_root_of_unity_is_primitive(q):
    F = PrimeField(DEFAULT_PRIME)
    z = F.root_of_unity(q)
    assert F.pow(z, q) == 1
    assert all(F.pow(z, k) != 1 for k in range(1, q))


def test_root_of_unity_missing():
    with pytest.raises(ValueError):
        PrimeField(7).root_of_unity(4)


def test_rationals():
    assert QQ.div(QQ(1), QQ(3)) == Fraction(1, 3)
    assert QQ("2/4") == Fraction(1, 2)
