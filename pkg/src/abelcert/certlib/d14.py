"""Level (1,14): the quartics f1, f2, the maps phi and psi, and V_{14,y}."""

from __future__ import annotations

import random
from itertools import combinations
from typing import Sequence

from ..field import FieldSpec
from ..groebner import poly_det, standard_monomial_count
from ..heisenberg import HeisenbergContext, minus_chart
from ..linalg import DenseMatrix
from ..moore import moore_even, pfaffian, specialize, sub_pfaffians
from ..polyring import PolyMap, PolyRing, compose
from .common import Budget, mismatches, parse_matrix_rows, ratio
from .report import CertificateReport, Outcome, Skip, require

CERT_ID = "d14"
DEFAULT_PRIME = 31
BLOCK_ROWS = (0, 1, 2, 3)
# Pf(M'_sigma) = PF_SIGMA_CONSTANT * f2 and phi^* Pluecker = PLUECKER_CONSTANT * f2
PF_SIGMA_CONSTANT = 2
PLUECKER_CONSTANT = 2
EXPECTED_V14_DEGREE = 42
EXPECTED_V14_NODES = 49

M_PRIME = [
    ["0", "-x1^2-x6^2", "-x2^2-x5^2", "-x3^2-x4^2"],
    ["x1^2+x6^2", "0", "-x1*x3-x4*x6", "-x2*x4-x3*x5"],
    ["x2^2+x5^2", "x1*x3+x4*x6", "0", "-x1*x5-x2*x6"],
    ["x3^2+x4^2", "x2*x4+x3*x5", "x1*x5+x2*x6", "0"],
]
M_SIGMA = [
    ["0", "-x1*x2-x5*x6", "-x2*x3-x4*x5", "-2*x3*x4"],
    ["x1*x2+x5*x6", "0", "-x1*x4-x3*x6", "-2*x2*x5"],
    ["x2*x3+x4*x5", "x1*x4+x3*x6", "0", "-2*x1*x6"],
    ["2*x3*x4", "2*x2*x5", "2*x1*x6", "0"],
]
F2 = "x1*x3*x4^2-x2^2*x3*x5-x2*x4*x5^2+x1^2*x2*x6+x3^2*x4*x6+x1*x5*x6^2"
KLEIN_SUM = "x1*x3^3-x2^3*x4+x1^3*x5-x3*x5^3+x4^3*x6+x2*x6^3"
PHI = ["x1*x2+x5*x6", "x2*x3+x4*x5", "x1*x4+x3*x6", "2*x3*x4", "2*x2*x5", "2*x1*x6"]
PLUECKER = "z0*z5-z1*z4+z2*z3"
SECANT = [["z5", "z2", "z0"], ["z2", "z3", "z1"], ["z0", "z1", "z4"]]
PSI = ["x3*x6-x1*x4", "x1*x2-x5*x6", "x4*x5-x2*x3"]
PSI_MATRIX = [["x5", "x3", "x1"], ["x2", "x4", "x6"]]


def _setup(field: FieldSpec):
    ctx = HeisenbergContext(14, field)
    ch = minus_chart(14, field)
    return ctx, ch, ch.ring


def random_chart_point(p: int, seed: int) -> list[int]:
    """Seeded y in the minus chart with (y5,y3,y1), (y2,y4,y6) independent."""
    rng = random.Random(seed)
    fp = FieldSpec.prime(p)
    while True:
        u = [rng.randrange(1, p) for _ in range(6)]
        m = DenseMatrix(fp, [[u[4], u[2], u[0]], [u[1], u[3], u[5]]])
        if m.rank() == 2:
            return u


def chart_to_full(u: Sequence[int], d: int) -> list[int]:
    y = [0] * d
    for i in range(1, d // 2):
        y[i] = u[i - 1]
        y[d - i] = -u[i - 1]
    return y


def v14_quadrics(p: int, u: Sequence[int]):
    fp = FieldSpec.prime(p)
    ring = PolyRing(14, fp)
    m = moore_even(7, ring.gens(), chart_to_full(u, 14), ring)
    return ring, m, [q for q in sub_pfaffians(m, 4) if q]


def _cell_system(lr: PolyRing, g: DenseMatrix, conditions, mix, cell: tuple[int, int], lead: int) -> list:
    """Lagrange system on the Schubert cell ``cell`` of Gr(2,7) and the
    multiplier cell {lambda_m = 0 for m < lead, lambda_lead = 1}."""
    i, j = cell
    free = [c for c in range(7) if c not in (i, j)]
    a = lr.gens()[:10]
    lam_vars = lr.gens()[10:]
    lam = []
    it = iter(lam_vars)
    for m in range(7):
        lam.append(lr.one() if m == lead else next(it))
    # the open chart {p_ij != 0}: identity in columns i, j
    base = [[lr.zero()] * 7, [lr.zero()] * 7]
    base[0][i] = lr.one()
    base[1][j] = lr.one()
    for k, c in enumerate(free):
        base[0][c] = a[k]
        base[1][c] = a[5 + k]
    rows = [[sum((base[r][k].scale(g[k, c]) for k in range(7) if g[k, c]), lr.zero()) for c in range(7)] for r in range(2)]
    pairs = list(combinations(range(7), 2))
    pl = [rows[0][u] * rows[1][v] - rows[0][v] * rows[1][u] for u, v in pairs]
    eqs = [sum((pl[t].scale(l[t]) for t in range(21) if l[t]), lr.zero()) for l in conditions]
    eqs = [sum((eqs[k].scale(mix[r][k]) for k in range(7)), lr.zero()) for r in range(7)]
    system = list(eqs)
    for v in range(10):
        system.append(sum((lam[k] * eqs[k].derivative(v) for k in range(7)), lr.zero()))
    # restrict to the cell: echelon zeros before each pivot, leading multiplier
    system += [a[k] for k, c in enumerate(free) if c < i]
    system += [a[5 + k] for k, c in enumerate(free) if c < j]
    system += [lam[m] for m in range(lead)]
    return system


def conormal_length(p: int, u: Sequence[int], seed: int, budget: Budget) -> int | None:
    """Length of the singular scheme of V_{14,y} = Gr(2,7) cap P(im beta).

    The 7 linear conditions cutting out im(beta) pull back to quadrics F_k on
    Gr(2,7); a singular point is a 2-plane W with F(W) = 0 and a multiplier
    lambda in P^6 with sum_k lambda_k dF_k = 0 on the tangent space at W.  A
    node contributes one reduced point.  Gr(2,7) is cut into its 21 Schubert
    cells (each written inside its own open chart, so derivatives use the full
    tangent space) and P^6 into 7 affine cells; the lengths over all 147
    disjoint pieces add up to the total.  A seeded random change of basis
    puts almost everything into the big cells.
    """
    fp = FieldSpec.prime(p)
    rng = random.Random(seed)
    ring, m, _ = v14_quadrics(p, u)
    pairs = list(combinations(range(7), 2))
    unit = [[1 if k == c else 0 for k in range(14)] for c in range(14)]
    beta = DenseMatrix(fp, [[m[i, j].coefficient(unit[c]) for c in range(14)] for i, j in pairs])
    if beta.rank() != 14:
        return None
    conditions = beta.left_kernel()
    while True:
        g = DenseMatrix(fp, [[rng.randrange(p) for _ in range(7)] for _ in range(7)])
        if g.rank() == 7:
            break
    while True:
        mix = [[rng.randrange(p) for _ in range(7)] for _ in range(7)]
        if DenseMatrix(fp, mix).rank() == 7:
            break
    lr = PolyRing(16, fp)
    total = 0
    for cell in pairs:
        for lead in range(7):
            gb = budget.gb(lr, _cell_system(lr, g, conditions, mix, cell, lead))
            n = standard_monomial_count(gb)
            if n is None:
                return None
            total += n
    return total


def verify(
    field: FieldSpec | None = None,
    prime: int = DEFAULT_PRIME,
    seed: int = 0,
    extended: bool = False,
    budget: Budget | None = None,
    extended_budget: Budget | None = None,
) -> CertificateReport:
    field = field or FieldSpec.rationals()
    budget = budget or Budget(60)
    fp = FieldSpec.prime(prime)
    rep = CertificateReport(CERT_ID, field, {"prime": prime, "seed": seed, "extended": extended, "block_rows": list(BLOCK_ROWS)})
    ctx, ch, ring = _setup(field)
    f2 = ring.parse(F2)
    klein = ring.parse(KLEIN_SUM)
    phi = PolyMap([ring.parse(s) for s in PHI], ring)
    zr = PolyRing(6, field, names=[f"z{i}" for i in range(6)])
    state: dict = {}

    def f1_block() -> Outcome:
        m = specialize(7, None, ch, ring=ctx.ring)
        require(m.skew, "M_7(x,x) on the chart is not skew")
        block = m.submatrix(BLOCK_ROWS)
        bad = mismatches(block, parse_matrix_rows(ring, M_PRIME))
        require(not bad, f"M' differs from the display at {bad}")
        f1 = pfaffian(block)
        require(f1 - f2 == klein, "f1 - f2 is not the displayed Klein sum")
        state["f1"] = f1
        rep.add_artifact("f1", [f1])
        return "M' = rows 0..3 of M_7(x,x); f1 - f2 = sum of Klein quartics"

    def f2_block() -> Outcome:
        m = specialize(7, ctx.sigma(), ch, ring=ctx.ring)
        require(m.skew, "M_7(sigma x, x) on the chart is not skew")
        block = m.submatrix(BLOCK_ROWS)
        bad = mismatches(block, parse_matrix_rows(ring, M_SIGMA))
        require(not bad, f"M'_sigma differs from the display at {bad}")
        c = ratio(pfaffian(block), f2)
        require(c == field(PF_SIGMA_CONSTANT), f"Pf(M'_sigma) = {c} * f2, expected {PF_SIGMA_CONSTANT}")
        rep.add_artifact("f2", [f2])
        return Outcome(f"Pf(M'_sigma) = {PF_SIGMA_CONSTANT}*f2 with f2 as displayed", {"constant": PF_SIGMA_CONSTANT})

    def phi_identities() -> Outcome:
        c = ratio(compose(phi, zr.parse(PLUECKER)), f2)
        require(c == field(PLUECKER_CONSTANT), f"phi^* Pluecker = {c} * f2, expected {PLUECKER_CONSTANT}")
        cubic = poly_det([[zr.parse(e) for e in row] for row in SECANT])
        require(not compose(phi, cubic), "phi^* secant cubic is not zero")
        return Outcome(f"phi^* Pluecker = {PLUECKER_CONSTANT}*f2; phi^* secant cubic = 0", {"constant": PLUECKER_CONSTANT})

    def base_locus() -> Outcome:
        quads = list(phi.coords)
        planes = [ring.gen(i) * ring.gen(j) for i in (0, 2, 4) for j in (1, 3, 5)]
        gb_phi = budget.gb(ring, quads)
        gb_planes = budget.gb(ring, planes)
        require(all(gb_planes.contains(q) for q in quads), "a quadric of phi does not vanish on P1 u P2")
        # I(P1 u P2) is saturated, so m * I(P1 u P2) inside (phi) gives equal zero schemes
        k = next((k for k in range(4) if all(gb_phi.contains(g.mul_monomial(mono)) for g in planes for mono in ring.monomials_of_degree(k))), None)
        require(k is not None, "I(P1 u P2) is not contained in the saturation of (phi)")
        h1, h2 = budget.hilbert(ring, quads), budget.hilbert(ring, planes)
        require(str(h1) == str(h2), f"Hilbert data differ: {h1} vs {h2}")
        return Outcome(f"m^{k} I(P1 u P2) in (phi) and (phi) in I(P1 u P2); both {h1}", {"hilbert": h1.to_json(), "saturation_power": k})

    def intersection() -> Outcome:
        require("f1" in state, "f1 unavailable")
        out = {}
        for fld in (field, fp):
            r = ring.with_field(fld)
            h = budget.hilbert(r, [state["f1"].change_field(r), f2.change_field(r)])
            require((h.dim, h.degree) == (3, 16), f"over {fld}: {h}")
            out[str(fld)] = h.to_json()
        return Outcome(f"f1 = f2 = 0: dim 3 degree 16 over {field} and F_{prime}", out)

    def psi_identities() -> Outcome:
        psi = [ring.parse(s) for s in PSI]
        mat = [[ring.parse(e) for e in row] for row in PSI_MATRIX]
        for row in mat:
            require(not sum((a * b for a, b in zip(row, psi)), ring.zero()), "psi is not in the kernel")
        # the annihilator equations hold on all of im(beta) when y' = psi(y)
        big = PolyRing(20, field, names=[f"x{i}" for i in range(14)] + [f"u{i}" for i in range(1, 7)])
        xs, us = big.gens()[:14], big.gens()[14:]
        y = [big.zero()] * 14
        for i in range(1, 7):
            y[i], y[14 - i] = us[i - 1], -us[i - 1]
        m = moore_even(7, xs, y, big)
        yp = [compose(PolyMap(us, big), q) for q in psi]
        for i in range(7):
            e = yp[0] * m[(1 + i) % 7, (6 + i) % 7] + yp[1] * m[(2 + i) % 7, (5 + i) % 7] + yp[2] * m[(3 + i) % 7, (4 + i) % 7]
            require(not e, f"annihilator equation {i} fails")
        u = lambda i: us[i - 1]  # noqa: E731
        require(not (yp[0] * u(5) + yp[1] * u(3) + yp[2] * u(1)), "first displayed constraint fails")
        require(not (yp[0] * u(2) + yp[1] * u(4) + yp[2] * u(6)), "second displayed constraint fails")
        # non-vacuous: a constant y' = (1, 0, 0) violates the annihilator equations
        require(bool(m[1, 6]), "annihilator check is vacuous")
        return "N psi(x) = 0; the 7 annihilator equations and both constraints hold for y' = psi(y)"

    def extended_check() -> Outcome:
        if not extended:
            raise Skip("extended check not requested")
        ext = extended_budget or Budget(7200)
        u = random_chart_point(prime, seed)
        r, _, quads = v14_quadrics(prime, u)
        h = ext.hilbert(r, quads)
        require((h.dim, h.degree) == (3, EXPECTED_V14_DEGREE), f"V_14,y: {h}")
        n = conormal_length(prime, u, seed, ext)
        require(n == EXPECTED_V14_NODES, f"singular scheme length {n}, expected {EXPECTED_V14_NODES}")
        return Outcome(
            f"y={u} over F_{prime}: {len(quads)} quadrics, {h}; singular scheme dim 0 length {n}",
            {"y": u, "hilbert": h.to_json(), "singular_length": n},
        )

    rep.run("a.f1_klein", f1_block)
    rep.run("b.f2_display", f2_block)
    rep.run("c.phi_pullbacks", phi_identities)
    rep.run("d.base_locus", base_locus)
    rep.run("e.f1_f2_intersection", intersection)
    rep.run("f.psi_annihilator", psi_identities)
    rep.run("g.v14y_extended", extended_check)
    return rep.finish()
