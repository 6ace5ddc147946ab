"""Randomized property batteries over the core modules."""

from __future__ import annotations

import random
from math import comb

from ..field import FieldSpec
from ..groebner import Ideal, dimension_and_degree
from ..heisenberg import SIGMA2_TAU, TWO_K, GLHFamily, GroupElement, HeisenbergContext, in_glh, minus_chart
from ..linalg import DenseMatrix
from ..moore import moore_even, scalar_pfaffian
from ..polyring import PolyRing, Polynomial
from .report import CertificateReport, Outcome, require

CERT_ID = "props"
DEFAULT_TRIALS = 1000
PRIME = 10007
# levels with a primitive D-th root of unity mod a small prime D*k + 1
LEVELS = (5, 6, 8, 10, 12, 14, 16, 18, 20)
EVEN_LEVELS = (12, 14, 16, 18, 20)


def _prime_with_root(D: int) -> int:
    from ..field import is_prime

    p = D + 1
    while not is_prime(p) or p == 2:
        p += D
    return p


def _contexts() -> dict[int, HeisenbergContext]:
    out = {}
    for D in LEVELS:
        p = _prime_with_root(D)
        out[D] = HeisenbergContext(D, FieldSpec.prime(p, [D]))
    return out


def random_poly(ring: PolyRing, rng: random.Random, degree: int, terms: int) -> Polynomial:
    """Random homogeneous polynomial with at most ``terms`` terms."""
    p = ring.field.p
    mons = ring.monomials_of_degree(degree)
    picks = rng.sample(mons, min(terms, len(mons)))
    return Polynomial(ring, {m: rng.randrange(1, p) for m in picks})


def graded_ideal_dimension(gens: list[Polynomial], t: int) -> int:
    """dim_k I_t by brute force: rank of all monomial multiples landing in degree t."""
    ring = gens[0].ring
    mons = ring.monomials_of_degree(t)
    index = {m: k for k, m in enumerate(mons)}
    rows = []
    for g in gens:
        e = t - g.degree()
        if e < 0:
            continue
        for m in ring.monomials_of_degree(e):
            h = g.mul_monomial(m)
            row = [0] * len(mons)
            for mm, c in h.terms.items():
                row[index[mm]] = c
            rows.append(row)
    if not rows:
        return 0
    return DenseMatrix(ring.field, rows, len(mons)).rank()


def verify(trials: int = DEFAULT_TRIALS, seed: int = 0) -> CertificateReport:
    rep = CertificateReport(CERT_ID, FieldSpec.prime(PRIME), {"trials": trials, "seed": seed})
    ctxs = _contexts()

    def pfaffian_squared() -> Outcome:
        rng = random.Random(seed)
        f = FieldSpec.prime(PRIME)
        for _ in range(trials):
            n = rng.choice((2, 4, 6, 8))
            m = [[0] * n for _ in range(n)]
            for i in range(n):
                for j in range(i + 1, n):
                    c = rng.randrange(PRIME)
                    m[i][j], m[j][i] = c, (-c) % PRIME
            pf = scalar_pfaffian(m, f)
            require(f.mul(pf, pf) == DenseMatrix(f, m).det(), f"Pf^2 != det for {m}")
        return f"{trials} random skew matrices up to 8 x 8: Pf^2 = det"

    def heisenberg_relations() -> Outcome:
        rng = random.Random(seed + 1)
        for _ in range(trials):
            ctx = ctxs[rng.choice(LEVELS)]
            s, t, i = ctx.sigma().matrix(), ctx.tau().matrix(), ctx.iota().matrix()
            require(t @ s == (s @ t).scale(ctx.xi), f"tau sigma != xi sigma tau at d={ctx.d}")
            require(i @ s @ i == ctx.sigma(-1).matrix(), f"iota sigma iota != sigma^-1 at d={ctx.d}")
            require(i @ t @ i == ctx.tau(-1).matrix(), f"iota tau iota != tau^-1 at d={ctx.d}")
            g = GroupElement(ctx, rng.randrange(ctx.d), rng.randrange(ctx.d), ctx.xi_pow(rng.randrange(ctx.d)), rng.random() < 0.5)
            h = GroupElement(ctx, rng.randrange(ctx.d), rng.randrange(ctx.d), ctx.xi_pow(rng.randrange(ctx.d)), rng.random() < 0.5)
            require((g * h).matrix() == g.matrix() @ h.matrix(), f"group law fails for {g}, {h}")
        return f"{trials} trials: tau sigma = xi sigma tau, iota-conjugation inverts, products match matrices"

    def glh_families() -> Outcome:
        rng = random.Random(seed + 2)
        for k in range(trials):
            ctx = ctxs[rng.choice(EVEN_LEVELS)]
            case = (SIGMA2_TAU, TWO_K)[k % 2]
            fam = GLHFamily(ctx, case)
            p = ctx.field.p
            if case == SIGMA2_TAU:
                T = fam.instantiate([rng.randrange(1, p), rng.randrange(1, p)], shifted=rng.random() < 0.5)
            else:
                while True:
                    al, be, ga, de = (rng.randrange(p) for _ in range(4))
                    if (al * be - ga * de) % p and (al * al - ga * ga) % p and (be * be - de * de) % p:
                        break
                T = fam.instantiate([al, be, ga, de])
                if T.rank() < ctx.d:
                    continue
            iota = ctx.iota().matrix()
            require(T @ iota == iota @ T, f"T does not commute with iota ({case}, d={ctx.d})")
            require(in_glh(ctx, T, case), f"commutators not scalar ({case}, d={ctx.d})")
        return f"{trials} family members (both cases): commute with iota, scalar commutators with H'"

    def moore_skew() -> Outcome:
        rng = random.Random(seed + 3)
        for _ in range(trials):
            D = rng.choice(EVEN_LEVELS)
            fp = FieldSpec.prime(PRIME)
            ch = minus_chart(D, fp)
            u = [rng.randrange(PRIME) for _ in range(ch.ring.n)]
            x = [c.evaluate(u) for c in ch.coords]
            m = moore_even(D // 2, [fp(c) for c in x], [fp(c) for c in x], PolyRing(1, fp))
            n = D // 2
            require(all(m[i, j] == -m[j, i] for i in range(n) for j in range(n)), f"M_{n}(x,x) not skew at {u}")
        return f"{trials} random minus-chart points: M_d(x,x) skew-symmetric"

    def gb_canonical() -> Outcome:
        rng = random.Random(seed + 4)
        f = FieldSpec.prime(PRIME)
        for _ in range(trials):
            n = rng.randint(2, 4)
            ring = PolyRing(n, f)
            gens = [random_poly(ring, rng, rng.randint(1, 2), rng.randint(1, 3)) for _ in range(rng.randint(1, 3))]
            other = list(gens)
            rng.shuffle(other)
            # same ideal: rescale and add a multiple of another generator
            other = [g.scale(rng.randrange(1, PRIME)) for g in other]
            if len(other) > 1 and other[0].degree() >= other[1].degree():
                e = other[0].degree() - other[1].degree()
                m = rng.choice(ring.monomials_of_degree(e))
                other[0] = other[0] + other[1].mul_monomial(m)
            a = Ideal(ring, gens).groebner()
            b = Ideal(ring, [g for g in other if g]).groebner()
            require(a == b, f"reduced GB differs under shuffle: {gens}")
        return f"{trials} random ideals: reduced GB invariant under shuffles and generator changes"

    def hilbert_brute_force() -> Outcome:
        rng = random.Random(seed + 5)
        f = FieldSpec.prime(PRIME)
        for _ in range(trials):
            n = rng.randint(1, 6)
            ring = PolyRing(n, f)
            gens = [random_poly(ring, rng, rng.randint(1, 3), rng.randint(1, 3)) for _ in range(rng.randint(1, 3))]
            h = dimension_and_degree(Ideal(ring, gens).groebner())
            for t in range(6):
                brute = comb(t + n - 1, n - 1) - graded_ideal_dimension(gens, t)
                require(h.series_value(t) == brute, f"H({t}) = {h.series_value(t)} vs {brute} for {gens}")
        return f"{trials} random homogeneous ideals in <= 6 variables: Hilbert function matches graded ranks for t <= 5"

    rep.run("pfaffian_squared", pfaffian_squared)
    rep.run("heisenberg_relations", heisenberg_relations)
    rep.run("glh_families", glh_families)
    rep.run("moore_skew", moore_skew)
    rep.run("gb_canonical", gb_canonical)
    rep.run("hilbert_brute_force", hilbert_brute_force)
    return rep.finish()
