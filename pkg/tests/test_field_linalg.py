from __future__ import annotations

import random
from fractions import Fraction

import pytest

from abelcert.certlib import d16
from abelcert.certlib.common import Budget
from abelcert.errors import NoSuchRoot, PreconditionError, ZeroInverse
from abelcert.field import FieldSpec, find_root_of_unity, fp_inv, is_prime, multiplicative_order
from abelcert.linalg import DenseMatrix, matrix_kernel, matrix_rank
from abelcert.polyring import PolyRing


def test_fp_inv_examples():
    assert fp_inv(3, 7) == 5
    assert fp_inv(1, 11) == 1
    with pytest.raises(ZeroInverse):
        fp_inv(0, 7)


def test_find_root_of_unity_examples():
    assert find_root_of_unity(11, 5) == 3
    assert find_root_of_unity(7, 2) == 6
    with pytest.raises(NoSuchRoot):
        find_root_of_unity(7, 16)


def test_root_orders_by_brute_force():
    for p in (11, 31, 41, 61, 97):
        for n in range(1, p):
            if (p - 1) % n == 0:
                z = find_root_of_unity(p, n)
                powers = [pow(z, k, p) for k in range(1, n + 1)]
                assert powers[-1] == 1 and 1 not in powers[:-1]
                assert multiplicative_order(z, p) == n


def test_is_prime_small_range():
    brute = [n for n in range(200) if n > 1 and all(n % k for k in range(2, n))]
    assert [n for n in range(200) if is_prime(n)] == brute


def test_field_spec_validation():
    with pytest.raises(PreconditionError):
        FieldSpec.prime(2)
    with pytest.raises(PreconditionError):
        FieldSpec.prime(15)
    f = FieldSpec.prime(31, [5, 10])
    assert f.root(5) == find_root_of_unity(31, 5)
    assert f.root(2) == 30
    with pytest.raises(NoSuchRoot):
        f.root(7)


def test_field_arithmetic_and_fractions():
    f = FieldSpec.prime(7)
    assert f(Fraction(1, 2)) == 4
    assert f.mul(f.inv(3), 3) == 1
    assert f.pow(3, -1) == 5
    q = FieldSpec.rationals()
    assert q.div(1, 3) == Fraction(1, 3)
    with pytest.raises(PreconditionError):
        q.elements()


def test_kernel_of_identity_is_empty():
    assert matrix_kernel(DenseMatrix.identity(FieldSpec.prime(7), 3)) == []


def test_kernel_of_evaluated_2x3_matrix():
    # rows (x5,x3,x1),(x2,x4,x6) at the all-ones point: rank 1, kernel of dimension 2
    ring = PolyRing(7, FieldSpec.rationals())
    rows = [[ring.gen(5), ring.gen(3), ring.gen(1)], [ring.gen(2), ring.gen(4), ring.gen(6)]]
    m = DenseMatrix(ring.field, [[e.evaluate([1] * 7) for e in row] for row in rows])
    ker = matrix_kernel(m)
    assert matrix_rank(m) == 1
    assert len(ker) == 2
    assert all(all(v == 0 for v in m.apply(k)) for k in ker)


def test_orbit_point_kernel_dimension_four():
    res = d16.orbit_scheme(7, Budget(60))
    assert res["kernel_dim"] == 4


def test_rank_kernel_and_det_random():
    rng = random.Random(3)
    f = FieldSpec.prime(101)
    for _ in range(40):
        r, c = rng.randint(1, 6), rng.randint(1, 6)
        m = DenseMatrix(f, [[rng.randrange(3) for _ in range(c)] for _ in range(r)])
        ker = m.kernel()
        assert m.rank() + len(ker) == c
        assert all(all(v == 0 for v in m.apply(k)) for k in ker)
        if r == c:
            det = m.det()
            assert (det != 0) == (m.rank() == r)
            if det:
                assert m @ m.inverse() == DenseMatrix.identity(f, r)


def test_rational_rank():
    q = FieldSpec.rationals()
    m = DenseMatrix(q, [[Fraction(1, 2), 1], [1, 2]])
    assert m.rank() == 1 and m.det() == 0
