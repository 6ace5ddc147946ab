from __future__ import annotations

import random

import pytest

from abelcert.errors import ArityMismatch, NotSkew, OddSize, ParseError
from abelcert.field import FieldSpec
from abelcert.heisenberg import minus_chart
from abelcert.moore import (
    PolyMatrix,
    determinant,
    moore_even,
    moore_odd,
    parse_matrix,
    pfaffian,
    scalar_pfaffian,
    sub_pfaffians,
)
from abelcert.linalg import DenseMatrix
from abelcert.polyring import PolyRing

Q = FieldSpec.rationals()


def generic_skew(n: int) -> PolyMatrix:
    k = n * (n - 1) // 2
    ring = PolyRing(k, Q)
    g = iter(ring.gens())
    rows = [[ring.zero()] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = next(g)
            rows[i][j], rows[j][i] = v, -v
    return PolyMatrix(ring, rows)


def test_pfaffian_2x2():
    m = generic_skew(2)
    assert pfaffian(m) == m.ring.gen(0)


def test_pfaffian_4x4_three_terms():
    m = generic_skew(4)
    a = {(i, j): m[i, j] for i in range(4) for j in range(4)}
    expected = a[0, 1] * a[2, 3] - a[0, 2] * a[1, 3] + a[0, 3] * a[1, 2]
    assert pfaffian(m) == expected
    assert len(pfaffian(m)) == 3


def test_pfaffian_squared_is_determinant_symbolic():
    for n in (2, 4, 6):
        m = generic_skew(n)
        pf = pfaffian(m)
        assert pf * pf == determinant(m)


def test_scalar_pfaffian_squared_random():
    rng = random.Random(0)
    f = FieldSpec.prime(10007)
    for _ in range(100):
        n = rng.choice((2, 4, 6, 8))
        m = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                c = rng.randrange(10007)
                m[i][j], m[j][i] = c, (-c) % 10007
        pf = scalar_pfaffian(m, f)
        assert f.mul(pf, pf) == DenseMatrix(f, m).det()


def test_pfaffian_errors():
    ring = PolyRing(2, Q)
    with pytest.raises(NotSkew):
        pfaffian(PolyMatrix(ring, [[ring.zero(), ring.gen(0)], [ring.gen(0), ring.zero()]]))
    with pytest.raises(OddSize):
        pfaffian(generic_skew(3))


def test_sub_pfaffian_counts():
    assert len(sub_pfaffians(generic_skew(5), 4)) == 5
    ring = PolyRing(18, FieldSpec.prime(11))
    half = [k * k + 1 for k in range(1, 9)]
    y = [0] + half + [0] + [(-c) % 11 for c in reversed(half)]
    m = moore_even(9, ring.gens(), y, ring)
    pf = sub_pfaffians(m, 4)
    assert len(pf) == 126
    assert all(q.is_zero() or (q.is_homogeneous() and q.degree() == 2) for q in pf)


def test_level14_moore_quadrics():
    ring = PolyRing(14, FieldSpec.prime(31))
    rng = random.Random(1)
    y = [rng.randrange(31) for _ in range(14)]
    y = [0] + y[1:7] + [0] + [(-c) % 31 for c in reversed(y[1:7])]
    m = moore_even(7, ring.gens(), y, ring)
    assert m.skew
    assert len(sub_pfaffians(m, 4)) == 35


def test_moore_even_skew_on_minus_chart():
    for half in (6, 7, 8, 9, 10):
        ch = minus_chart(2 * half, Q)
        m = moore_even(half, ch.coords, ch.coords, ch.ring)
        assert m.skew, half


def test_moore_even_not_skew_off_chart():
    ring = PolyRing(12, Q)
    m = moore_even(6, ring.gens(), ring.gens(), ring)
    assert not m.skew


def test_moore_odd_with_y_at_origin():
    ring = PolyRing(8, Q)
    x = ring.gens()[:7]
    y = [ring.gen(7)] + [ring.zero()] * 6
    m = moore_odd(7, x, y, ring)
    for i in range(7):
        for j in range(7):
            expected = x[(6 * i) % 7] * ring.gen(7) if i == j else ring.zero()
            assert m[i, j] == expected


def test_moore_arity_checks():
    ring = PolyRing(4, Q)
    with pytest.raises(ArityMismatch):
        moore_even(3, ring.gens(), ring.gens(), ring)
    with pytest.raises(ArityMismatch):
        moore_odd(4, ring.gens(), ring.gens(), ring)


def test_matrix_text_round_trip_and_errors():
    m = generic_skew(4)
    text = m.to_text()
    back = parse_matrix(text)
    assert back == m and back.to_text() == text
    with pytest.raises(ParseError) as e:
        parse_matrix("\n".join(text.splitlines()[:-1]))
    assert e.value.line is not None
