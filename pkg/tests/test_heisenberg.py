from __future__ import annotations

import random

import pytest

from abelcert.errors import NotInNormalizerClass, OddLevel
from abelcert.field import FieldSpec
from abelcert.heisenberg import (
    FULL_K,
    SIGMA2_TAU,
    TWO_K,
    GLHFamily,
    GroupElement,
    HeisenbergContext,
    count_level_stabilizer,
    glh_normal_form,
    in_glh,
    minus_chart,
    schrodinger_matrices,
    weil_pairing,
)
from abelcert.linalg import DenseMatrix
from abelcert.polyring import compose


def ctx_for(D: int, p: int) -> HeisenbergContext:
    return HeisenbergContext.over_prime(D, p)


def test_schrodinger_relations():
    for D, p in ((5, 11), (12, 13), (16, 17), (20, 41)):
        ctx = ctx_for(D, p)
        s, t, i = schrodinger_matrices(ctx)
        assert t @ s == (s @ t).scale(ctx.xi)
        assert i @ s @ i == ctx.sigma(-1).matrix()
        assert i @ t @ i == ctx.tau(-1).matrix()
        assert i @ i == DenseMatrix.identity(ctx.field, D)


def test_sigma_shifts_basis_down():
    ctx = ctx_for(5, 11)
    e1 = [0, 1, 0, 0, 0]
    assert ctx.sigma().apply_to_point(e1) == [1, 0, 0, 0, 0]
    # tau scales e_i by xi^-i
    assert ctx.tau().apply_to_point(e1) == [0, ctx.xi_pow(-1), 0, 0, 0]


def test_group_law_matches_matrices():
    rng = random.Random(0)
    ctx = ctx_for(8, 17)
    for _ in range(50):
        g, h = (
            GroupElement(ctx, rng.randrange(8), rng.randrange(8), ctx.xi_pow(rng.randrange(8)), rng.random() < 0.5)
            for _ in range(2)
        )
        assert (g * h).matrix() == g.matrix() @ h.matrix()
        assert (g * g.inverse()).is_identity()


def test_act_on_poly_composes():
    rng = random.Random(1)
    ctx = ctx_for(5, 11)
    ring = ctx.ring
    f = ring.parse("x0^2*x1 + 3*x2*x3*x4 - x4^3")
    g, h = ctx.sigma(rng.randrange(5)) * ctx.tau(2), ctx.tau(rng.randrange(5)) * ctx.iota()
    # x -> M^T x, so act(gh) = act(g) act(h)
    assert (g * h).act_on_poly(f) == g.act_on_poly(h.act_on_poly(f))


def test_cyclic_product_invariant():
    ctx = ctx_for(5, 11)
    f = ctx.ring.parse("x0*x1*x2*x3*x4")
    assert ctx.sigma().act_on_poly(f) == f
    assert ctx.tau().act_on_poly(f) == f


def test_weil_pairing():
    ctx = ctx_for(12, 13)
    assert weil_pairing(ctx, (1, 0), (0, 1)) == ctx.xi_pow(-1)
    rng = random.Random(2)
    for _ in range(20):
        v = (rng.randrange(12), rng.randrange(12))
        w = (rng.randrange(12), rng.randrange(12))
        assert weil_pairing(ctx, v, v) == 1
        assert ctx.field.mul(weil_pairing(ctx, v, w), weil_pairing(ctx, w, v)) == 1


def test_weil_pairing_is_the_commutator():
    ctx = ctx_for(10, 11)
    s, t = ctx.sigma().matrix(), ctx.tau().matrix()
    comm = (s @ t @ s.inverse() @ t.inverse()).scalar_value()
    assert comm in (weil_pairing(ctx, (1, 0), (0, 1)), weil_pairing(ctx, (0, 1), (1, 0)))


def test_minus_chart_sizes_and_iota_eigenspace():
    for d, n in ((12, 5), (14, 6), (16, 7), (18, 8)):
        fp = FieldSpec.prime(101)
        ch = minus_chart(d, fp)
        assert ch.ring.n == n
        ctx = HeisenbergContext(d, fp)
        iota = ctx.iota()
        # the chart image is in the (-1)-eigenspace of iota
        u = [3 + k for k in range(n)]
        x = [c.evaluate(u) for c in ch.coords]
        assert iota.apply_to_point(x) == [(-c) % 101 for c in x]
    with pytest.raises(OddLevel):
        minus_chart(7, FieldSpec.prime(101))


def test_minus_chart_level12_coordinates():
    ch = minus_chart(12, FieldSpec.rationals())
    r = ch.ring
    assert [str(c) for c in ch.coords[:7]] == ["0", "x1", "x2", "x3", "x4", "x5", "0"]
    assert ch.coords[11] == -r.gen(0) and ch.coords[7] == -r.gen(4)
    assert compose(ch, HeisenbergContext(12, FieldSpec.rationals()).ring.gen(6)).is_zero()


def test_glh_families_commute_with_iota():
    ctx = ctx_for(16, 17)
    for case, params in ((SIGMA2_TAU, [2, 5]), (TWO_K, [1, 2, 3, 7])):
        T = GLHFamily(ctx, case).instantiate(params)
        assert T @ ctx.iota().matrix() == ctx.iota().matrix() @ T
        assert in_glh(ctx, T, case)


def test_normal_form_identity_on_glh():
    ctx = ctx_for(16, 17)
    T = GLHFamily(ctx, SIGMA2_TAU).instantiate([2, 5])
    a, b, Tp = glh_normal_form(ctx, T, SIGMA2_TAU)
    assert (a, b) == (0, 0) and Tp == T


def test_normal_form_strips_tau():
    ctx = ctx_for(16, 17)
    diag = GLHFamily(ctx, SIGMA2_TAU).instantiate([2, 5])
    T = ctx.tau().matrix() @ diag
    assert not in_glh(ctx, T, SIGMA2_TAU)
    a, b, Tp = glh_normal_form(ctx, T, SIGMA2_TAU)
    assert in_glh(ctx, Tp, SIGMA2_TAU)
    assert Tp == GroupElement(ctx, a, b).matrix() @ T
    # what remains is the diagonal family member up to a scalar
    ratio = (Tp @ diag.inverse()).scalar_value()
    assert ratio is not None


def test_normal_form_rejects_generic_matrix():
    ctx = ctx_for(16, 17)
    rng = random.Random(3)
    M = DenseMatrix(ctx.field, [[rng.randrange(17) for _ in range(16)] for _ in range(16)])
    with pytest.raises(NotInNormalizerClass):
        glh_normal_form(ctx, M, TWO_K)


def test_level_stabilizer_counts():
    assert count_level_stabilizer(8, TWO_K) == 32
    assert count_level_stabilizer(8, FULL_K) == 4
    assert count_level_stabilizer(7, SIGMA2_TAU) == 8
