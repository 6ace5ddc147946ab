from __future__ import annotations

import random
from math import comb

import pytest

from abelcert.certlib import d12, d16, d18
from abelcert.certlib.props import graded_ideal_dimension, random_poly
from abelcert.errors import GroebnerTimeout
from abelcert.field import FieldSpec
from abelcert.groebner import (
    GBCache,
    Ideal,
    dimension_and_degree,
    groebner,
    ideal_contains,
    ideal_equal,
    jacobian_ideal,
    normal_form,
    saturate_variable,
    standard_monomial_count,
)
from abelcert.polyring import PolyRing

Q = FieldSpec.rationals()
F101 = FieldSpec.prime(101)


def test_small_bases():
    r = PolyRing(2, Q)
    x0, x1 = r.gens()
    assert list(groebner([x0, x1]).polys) == [x1, x0]
    gb = groebner([x0 ** 2 - x1, x1])
    assert sorted(gb.polys, key=lambda p: p.degree()) == [x1, x0 ** 2]


def test_buchberger_criterion_holds_after_the_fact():
    rng = random.Random(1)
    r = PolyRing(4, F101)
    for _ in range(15):
        gens = [random_poly(r, rng, rng.randint(1, 3), 3) for _ in range(3)]
        assert groebner(gens).check_buchberger_criterion()


def test_membership_cross_check():
    rng = random.Random(2)
    r = PolyRing(3, F101)
    for _ in range(20):
        gens = [random_poly(r, rng, rng.randint(1, 2), 3) for _ in range(2)]
        gb = groebner(gens)
        combo = r.zero()
        for g in gens:
            combo = combo + g * random_poly(r, rng, rng.randint(0, 2), 2)
        assert normal_form(combo, gb).is_zero()
        # a unit is a member only of the whole ring
        assert normal_form(r.one(), gb).is_zero() == gb.is_unit()


def test_ideal_equal_examples():
    r = PolyRing(2, Q)
    x0, x1 = r.gens()
    assert ideal_equal(Ideal(r, [x0, x1]), Ideal(r, [x1, x0 + x1]))
    assert not ideal_equal(Ideal(r, [x0 ** 2]), Ideal(r, [x0]))
    assert ideal_contains(Ideal(r, [x0]), Ideal(r, [x0 ** 2]))


def test_hilbert_full_ring():
    for n in range(1, 5):
        r = PolyRing(n + 1, Q)
        h = dimension_and_degree(groebner([r.zero()], r))
        assert (h.dim, h.degree) == (n, 1)
        assert all(h.poly_value(t) == comb(t + n, n) for t in range(6))


def test_twisted_cubic():
    r = PolyRing(4, Q)
    gens = [r.parse(s) for s in ("x0*x2-x1^2", "x0*x3-x1*x2", "x1*x3-x2^2")]
    h = dimension_and_degree(groebner(gens))
    assert str(h) == "dim 1 degree 3 P(t)=3t+1"
    for t in range(7):
        assert h.series_value(t) == comb(t + 3, 3) - graded_ideal_dimension(gens, t) == 3 * t + 1


def test_empty_scheme_conventions():
    r = PolyRing(3, FieldSpec.prime(7))
    h = Ideal(r, jacobian_ideal(r.parse("x0^2+x1^2+x2^2")).gens).hilbert()
    assert (h.dim, h.degree) == (-1, 0)


def test_level12_quartic_smooth_over_two_primes():
    for p in (101, 103):
        fp = FieldSpec.prime(p)
        ring = PolyRing(5, fp, names=[f"x{i}" for i in range(1, 6)])
        h = jacobian_ideal(d12.quartic(ring)).hilbert()
        assert h.dim == -1


def test_level16_pfaffian_ideal_degree_40():
    ring, _, pf = d16.z_quartics(FieldSpec.prime(7))
    h = dimension_and_degree(groebner(pf, ring))
    assert (h.dim, h.degree) == (3, 40)


def test_level18_degeneration_hilbert_polynomial():
    m, pf = d18.degeneration_ideal(11)
    h = dimension_and_degree(groebner([q for q in pf if q], m.ring))
    assert (h.dim, h.degree, h.format_polynomial()) == (2, 36, "18t^2")


def test_shuffled_generators_give_identical_basis():
    rng = random.Random(3)
    r = PolyRing(4, F101)
    for _ in range(10):
        gens = [random_poly(r, rng, 3, 2) for _ in range(3)]
        other = list(gens)
        rng.shuffle(other)
        assert groebner(gens).to_text() == groebner(other).to_text()


def test_timeout_is_reported():
    m, pf = d18.degeneration_ideal(11)
    with pytest.raises(GroebnerTimeout):
        Ideal(m.ring, [q for q in pf if q]).groebner(timeout=1e-6)


def test_cache_hit_equals_recomputation(tmp_path):
    ring, _, pf = d16.z_quartics(FieldSpec.prime(13))
    cache = GBCache(str(tmp_path))
    first = Ideal(ring, pf).groebner(cache=cache)
    assert not first.cache_hit
    second = Ideal(ring, pf).groebner(cache=cache)
    assert second.cache_hit
    assert second == first == Ideal(ring, pf).groebner()
    assert not list(tmp_path.glob("*.tmp"))


def test_saturation_removes_embedded_component():
    r = PolyRing(3, Q)
    # (x0*x1, x0*x2) = (x0) cap (x1, x2); saturating by x1 leaves (x0)
    sat = saturate_variable([r.parse("x0*x1"), r.parse("x0*x2")], 1)
    assert ideal_equal(Ideal(r, sat), Ideal(r, [r.gen(0)]))


def test_standard_monomial_count_zero_dimensional():
    r = PolyRing(2, Q)
    gb = groebner([r.parse("x0^2"), r.parse("x1^3"), r.parse("x0*x1")])
    assert standard_monomial_count(gb) == 4
    assert standard_monomial_count(groebner([r.parse("x0^2")])) is None
