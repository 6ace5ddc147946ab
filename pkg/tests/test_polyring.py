from __future__ import annotations

import random

import pytest

from abelcert.errors import NotUnivariate, ParseError, PointNotOnVariety, RingMismatch
from abelcert.field import FieldSpec
from abelcert.groebner import parse_polynomials, serialize_polynomials
from abelcert.polyring import (
    PolyMap,
    PolyRing,
    Polynomial,
    compose,
    is_squarefree,
    lowest_form_at_point,
    partial_derivative,
    roots_over_fp,
    univariate_gcd,
)

Q = FieldSpec.rationals()


def random_poly(ring: PolyRing, rng: random.Random, terms: int = 4, maxdeg: int = 3) -> Polynomial:
    p = ring.field.p or 7
    return ring.from_terms(
        (tuple(rng.randint(0, maxdeg) for _ in range(ring.n)), rng.randint(-p, p)) for _ in range(terms)
    )


def test_difference_of_squares():
    r = PolyRing(2, Q)
    x0, x1 = r.gens()
    assert (x0 + x1) * (x0 - x1) == x0 ** 2 - x1 ** 2
    assert (x0 * x1 + 3) * r.zero() == r.zero()


def test_level12_quartic_expands_to_six_terms():
    r = PolyRing(5, Q, names=[f"x{i}" for i in range(1, 6)])
    f = r.parse("2*x3^2*(x1*x3+x3*x5) - 2*(x2^2+x4^2)*x2*x4 + 2*x1*x5*(x1^2+x5^2)")
    assert len(f) == 6
    assert f.is_homogeneous() and f.degree() == 4
    assert f == r.parse("2*x1*x3^3 + 2*x3^3*x5 - 2*x2^3*x4 - 2*x2*x4^3 + 2*x1^3*x5 + 2*x1*x5^3")


def test_canonical_form_and_subtraction():
    rng = random.Random(1)
    r = PolyRing(3, FieldSpec.prime(13))
    for _ in range(50):
        a = random_poly(r, rng)
        assert (a - a).is_zero()
        assert a + r.zero() == a


def test_ring_laws_random():
    rng = random.Random(2)
    r = PolyRing(3, FieldSpec.prime(101))
    for _ in range(30):
        a, b, c = (random_poly(r, rng) for _ in range(3))
        assert a * (b + c) == a * b + a * c
        assert (a * b) * c == a * (b * c)
        assert a * b == b * a


def test_compose_is_a_homomorphism():
    rng = random.Random(3)
    src = PolyRing(3, FieldSpec.prime(31))
    tgt = PolyRing(2, FieldSpec.prime(31))
    for _ in range(20):
        m = PolyMap([random_poly(tgt, rng, 3, 2) for _ in range(3)], tgt)
        f, g = random_poly(src, rng), random_poly(src, rng)
        assert compose(m, f * g) == compose(m, f) * compose(m, g)
        assert compose(m, f + g) == compose(m, f) + compose(m, g)


def test_compose_identity():
    r = PolyRing(4, Q)
    f = r.parse("x0^3*x1 - 1/2*x2*x3 + 7")
    assert compose(PolyMap.identity(r), f) == f


def test_partial_derivatives():
    r = PolyRing(2, Q)
    assert partial_derivative(r.parse("x0^2*x1"), 0) == r.parse("2*x0*x1")
    assert partial_derivative(r.const(5), 1).is_zero()
    r5 = PolyRing(1, FieldSpec.prime(5))
    assert partial_derivative(r5.parse("x0^5"), 0).is_zero()


def test_euler_identity_random():
    rng = random.Random(4)
    r = PolyRing(4, FieldSpec.prime(101))
    for _ in range(20):
        k = rng.randint(1, 5)
        f = r.from_terms((c, rng.randrange(1, 101)) for c in rng.sample(_compositions(k, 4), 3))
        lhs = r.zero()
        for i in range(4):
            lhs = lhs + r.gen(i) * partial_derivative(f, i)
        assert lhs == f.scale(k)


def _compositions(k: int, n: int) -> list[tuple[int, ...]]:
    if n == 1:
        return [(k,)]
    return [(a, *rest) for a in range(k + 1) for rest in _compositions(k - a, n - 1)]


def test_lowest_form_smooth_point():
    r = PolyRing(3, Q)
    f = r.parse("x0*x2 - x1^2")
    low = lowest_form_at_point(f, 2, (0, 0, 1))
    assert low == r.gen(0)


def test_lowest_form_is_homogeneous_of_positive_degree():
    rng = random.Random(5)
    r = PolyRing(3, FieldSpec.prime(31))
    for _ in range(20):
        f = random_poly(r, rng) * r.gen(0)
        low = lowest_form_at_point(f, 2, (0, rng.randrange(31), 1))
        if low:
            assert low.is_homogeneous() and low.degree() >= 1


def test_lowest_form_rejects_point_off_variety():
    r = PolyRing(2, Q)
    with pytest.raises(PointNotOnVariety):
        lowest_form_at_point(r.parse("x0 - x1"), 1, (2, 1))


def test_univariate_utilities():
    r = PolyRing(1, FieldSpec.prime(7), names=["t"])
    f = r.parse("(t-1)*(t-2)")
    assert is_squarefree(f)
    assert roots_over_fp(f) == [1, 2]
    assert not is_squarefree(r.parse("(t-1)^2"))
    g = univariate_gcd(r.parse("(t-1)^2*(t+3)"), r.parse("(t-1)*(t-3)"))
    assert g == r.parse("t-1")
    r2 = PolyRing(2, FieldSpec.prime(7))
    with pytest.raises(NotUnivariate):
        is_squarefree(r2.parse("x0*x1 + 1"))


def test_serialization_round_trip_bit_exact():
    rng = random.Random(6)
    for field in (FieldSpec.prime(31), Q):
        r = PolyRing(4, field)
        polys = [random_poly(r, rng, 5) for _ in range(5)]
        polys = [p for p in polys if p] + [r.parse("1/3*x0^2 - x1") if field is Q else r.parse("x0^2 - x1")]
        text = serialize_polynomials(r, polys)
        ring2, back = parse_polynomials(text)
        assert back == polys
        assert serialize_polynomials(ring2, back) == text


def test_canonical_term_syntax():
    r = PolyRing(3, FieldSpec.prime(7))
    f = r.parse("x0^2*x2 - x1 + 3")
    assert f.to_text() == "1*x0^2*x2 + 6*x1 + 3"


def test_parse_errors_carry_line_numbers():
    with pytest.raises(ParseError) as e:
        parse_polynomials("ring 7 2 grevlex\nx0 + x1\nx0 * * x1\n")
    assert e.value.line == 3
    with pytest.raises(ParseError) as e:
        parse_polynomials("ring 8 2 grevlex\nx0\n")
    assert e.value.line == 1


def test_ring_mismatch():
    a = PolyRing(2, Q).gen(0)
    b = PolyRing(3, Q).gen(0)
    with pytest.raises(RingMismatch):
        a + b
