"""Level (1,16): the Pfaffian threefold Z, its projection Z' and the orbit count."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from ..field import FieldSpec
from ..groebner import Ideal, jacobian_ideal, multiplicity_at_point, saturate_variable, tangent_cone_at_point
from ..heisenberg import TWO_K, HeisenbergContext, count_level_stabilizer, minus_chart
from ..linalg import DenseMatrix
from ..moore import PolyMatrix, specialize, sub_pfaffian_index, sub_pfaffians
from ..polyring import PolyMap, PolyRing, compose, lowest_form_at_point
from .common import Budget, mismatches, parse_matrix_rows, ratio
from .report import CertificateReport, Outcome, Skip, require

CERT_ID = "d16"
DEFAULT_PRIMES = (7, 13)
BLOCK_ROWS = (0, 1, 2, 3, 4)
NEW_NAMES = ["y0", "y1", "z0", "z1", "t0", "t1", "u"]
# x1..x7 in terms of the new coordinates
X_IN_NEW = ["1/2*(y0+z0)", "1/2*(t1+u)", "1/2*(y1+z1)", "t0", "1/2*(y1-z1)", "1/2*(t1-u)", "1/2*(y0-z0)"]
NEW_IN_X = ["x1+x7", "x3+x5", "x1-x7", "x3-x5", "x4", "x2+x6", "x2-x6"]
M_X = [
    ["0", "-x1^2-x7^2", "-x2^2-x6^2", "-x3^2-x5^2", "-2*x4^2"],
    ["x1^2+x7^2", "0", "-x1*x3-x5*x7", "-x2*x4-x4*x6", "-2*x3*x5"],
    ["x2^2+x6^2", "x1*x3+x5*x7", "0", "-x1*x5-x3*x7", "-2*x2*x6"],
    ["x3^2+x5^2", "x2*x4+x4*x6", "x1*x5+x3*x7", "0", "-2*x1*x7"],
    ["2*x4^2", "2*x3*x5", "2*x2*x6", "2*x1*x7", "0"],
]
# displayed matrix in the new coordinates, before the global factor 1/2
M_NEW = [
    ["0", "-y0^2-z0^2", "-t1^2-u^2", "-y1^2-z1^2", "-4*t0^2"],
    ["y0^2+z0^2", "0", "-y0*y1-z0*z1", "-2*t0*t1", "-y1^2+z1^2"],
    ["t1^2+u^2", "y0*y1+z0*z1", "0", "-y0*y1+z0*z1", "-t1^2+u^2"],
    ["y1^2+z1^2", "2*t0*t1", "y0*y1-z0*z1", "0", "-y0^2+z0^2"],
    ["4*t0^2", "y1^2-z1^2", "t1^2-u^2", "y0^2-z0^2", "0"],
]
M_NEW_SCALE = Fraction(1, 2)
TANGENT_CONE = ["t0*t1", "y0^2+y1^2", "z0^2-z1^2"]
G1 = "y0^4-y1^4-z0^4+z1^4+8*t0^3*t1"
G2 = "2*y0^3*y1+2*y0*y1^3-2*z0^3*z1+2*z0*z1^3-4*t0*t1^3"
# Pf(M minus row/col 2) = G1_CONSTANT * g1 and Pf(minus 0) + Pf(minus 4) = G2_CONSTANT * g2
G1_CONSTANT = Fraction(1, 4)
G2_CONSTANT = Fraction(1, 4)
EXPECTED_DEGREE = 40
ORBIT_POINT = {"y0": 4, "y1": -1, "z0": -2, "z1": -1, "t0": 2, "t1": -2, "u": 1}
N_X = [
    ["-z1", "0", "z0", "0", "-z0", "0", "z1"],
    ["0", "t0", "0", "-t1", "0", "t0", "0"],
    ["y1", "0", "-y0", "0", "-y0", "0", "y1"],
]
EXPECTED_ORBIT = 32
EXPECTED_STABILIZER = 32
# multiplicity claimed for the six singular points of Z' (optional check)
CLAIMED_TRIPLE = 3


def new_ring(field: FieldSpec) -> PolyRing:
    return PolyRing(7, field, names=NEW_NAMES)


def z_quartics(field: FieldSpec, coords: str = "new") -> tuple[PolyRing, PolyMatrix, list]:
    """The 5x5 block M and its five 4x4 sub-Pfaffians, in x or new coordinates."""
    ctx = HeisenbergContext(16, field)
    ch = minus_chart(16, field)
    m = specialize(8, None, ch, ring=ctx.ring).submatrix(BLOCK_ROWS)
    if coords == "new":
        nr = new_ring(field)
        m = m.substitute(PolyMap([nr.parse(s) for s in X_IN_NEW], nr))
    return m.ring, m, sub_pfaffians(m, 4)


def _deleted_index() -> dict[int, int]:
    """Map 'deleted row' -> position in the sub-Pfaffian list."""
    out = {}
    for pos, s in enumerate(sub_pfaffian_index(5, 4)):
        (gone,) = set(range(5)) - set(s)
        out[gone] = pos
    return out


def singular_points(i: int) -> list[tuple[int, ...]]:
    return [(1, i, 0, 0, 0, 0), (1, -i, 0, 0, 0, 0), (0, 0, 1, 1, 0, 0), (0, 0, 1, -1, 0, 0), (0, 0, 0, 0, 1, 0), (0, 0, 0, 0, 0, 1)]


def sqrt_minus_one(p: int) -> int:
    if p % 4 != 1:
        raise ValueError(f"-1 is not a square mod {p}")
    return next(x for x in range(2, p) if x * x % p == p - 1)


def orbit_scheme(p: int, budget: Budget) -> dict:
    """P(ker N_x) cap Z at the orbit point over F_p, before and after removing
    the torus boundary."""
    fp = FieldSpec.prime(p)
    pt = [ORBIT_POINT[n] for n in NEW_NAMES]
    xr, _, quartics_x = z_quartics(fp, "x")
    nr = new_ring(fp)
    to_x = PolyMap([nr.parse(s) for s in X_IN_NEW], nr)
    x_pt = [c.evaluate(pt) for c in to_x.coords]
    on_z = all(q.evaluate(x_pt) == 0 for q in quartics_x)
    env = dict(zip(NEW_NAMES, pt))
    nx = DenseMatrix(fp, [[nr.parse(e).evaluate(pt) if e != "0" else 0 for e in row] for row in N_X])
    kernel = nx.kernel()
    # torus directions: the GL_H action scales (y), (z), (t), (u) independently
    blocks = [("y0", "y1"), ("z0", "z1"), ("t0", "t1"), ("u",)]
    torus = []
    for names in blocks:
        v_new = [env[n] if n in names else 0 for n in NEW_NAMES]
        torus.append([c.evaluate(v_new) for c in to_x.coords])
    same_span = DenseMatrix(fp, kernel + torus).rank() == len(kernel) == 4
    tr = PolyRing(4, fp, names=["A", "B", "C", "D"])
    s = tr.gens()
    param = [sum((s[j].scale(torus[j][k]) for j in range(4) if torus[j][k]), tr.zero()) for k in range(7)]
    eqs = [compose(PolyMap(param, tr), q) for q in quartics_x]
    full = budget.hilbert(tr, eqs)
    sat = eqs
    for v in range(4):
        sat = saturate_variable(sat, v, budget.seconds)
    orbit = budget.hilbert(tr, sat)
    return {
        "on_z": on_z,
        "kernel_dim": len(kernel),
        "x_point": x_pt,
        "torus_span_equals_kernel": same_span,
        "full": full,
        "orbit": orbit,
    }


def verify(
    field: FieldSpec | None = None,
    primes: Sequence[int] = DEFAULT_PRIMES,
    orbit_prime: int = 7,
    sing_prime: int = 13,
    extended: bool = False,
    budget: Budget | None = None,
) -> CertificateReport:
    field = field or FieldSpec.rationals()
    budget = budget or Budget(300)
    params = {"primes": list(primes), "orbit_prime": orbit_prime, "sing_prime": sing_prime, "extended": extended, "block_rows": list(BLOCK_ROWS)}
    rep = CertificateReport(CERT_ID, field, params)
    nr = new_ring(field)
    g1, g2 = nr.parse(G1), nr.parse(G2)
    state: dict = {}

    def coordinate_change() -> Outcome:
        ctx = HeisenbergContext(16, field)
        ch = minus_chart(16, field)
        m = specialize(8, None, ch, ring=ctx.ring)
        require(m.skew, "M_8(x,x) on the chart is not skew")
        block = m.submatrix(BLOCK_ROWS)
        bad = mismatches(block, parse_matrix_rows(ch.ring, M_X))
        require(not bad, f"5x5 block differs from the display at {bad}")
        to_new = PolyMap([nr.parse(s) for s in X_IN_NEW], nr)
        back = PolyMap([ch.ring.parse(s) for s in NEW_IN_X], ch.ring)
        require(all(compose(back, compose(to_new, x)) == x for x in ch.ring.gens()), "coordinate change is not invertible")
        moved = block.substitute(to_new)
        bad = mismatches(moved, parse_matrix_rows(nr, M_NEW, field(M_NEW_SCALE)))
        require(not bad, f"transformed block differs from 1/2 * display at {bad}")
        state["m"] = moved
        return f"block rows {list(BLOCK_ROWS)} of M_8(x,x) match; in (y,z,t,u) it equals 1/2 * display"

    def degree40() -> Outcome:
        out = {}
        for p in primes:
            r, _, pf = z_quartics(FieldSpec.prime(p))
            h = budget.hilbert(r, pf)
            require((h.dim, h.degree) == (3, EXPECTED_DEGREE), f"over F_{p}: {h}")
            out[str(p)] = h.to_json()
            if "artifact" not in state:
                state["artifact"] = True
                rep.add_artifact(f"Z_F{p}", pf)
        return Outcome(f"Z: dim 3 degree {EXPECTED_DEGREE} over {list(primes)}", out)

    def tangent_cone() -> Outcome:
        cone = [nr.parse(s) for s in TANGENT_CONE]
        _, _, pf = z_quartics(field)
        p = [0] * 6 + [1]
        lows = [lowest_form_at_point(q, 6, p) for q in pf]
        require(budget.equal(nr, lows, cone), "ideal of lowest forms differs from (t0t1, y0^2+y1^2, z0^2-z1^2)")
        require(Ideal(nr, cone).groebner().contains(g1), "g1 is not in the tangent cone ideal")
        full = tangent_cone_at_point(pf, 6, p, budget.seconds)
        require(budget.equal(nr, full, cone), "tangent cone (standard basis) differs")
        return "lowest forms and the full tangent cone at u=1 both generate (t0t1, y0^2+y1^2, z0^2-z1^2)"

    def g_equations() -> Outcome:
        m = state.get("m")
        require(m is not None, "transformed block unavailable")
        pf = sub_pfaffians(m, 4)
        at = _deleted_index()
        p2 = pf[at[2]]
        require(p2.degree_in(6) == 0, "Pf without row 3 depends on u")
        c1 = ratio(p2, g1)
        c2 = ratio(pf[at[0]] + pf[at[4]], g2)
        require(c1 == field(G1_CONSTANT), f"Pf(minus row 3) = {c1} * g1")
        require(c2 == field(G2_CONSTANT), f"Pf(minus 1) + Pf(minus 5) = {c2} * g2")
        out = []
        for p in primes:
            fp = FieldSpec.prime(p)
            r, _, zq = z_quartics(fp)
            gb = budget.gb(r, zq)
            require(gb.normal_form(g1.change_field(r)).is_zero() and gb.normal_form(g2.change_field(r)).is_zero(), f"g1, g2 not in I(Z) over F_{p}")
            out.append(p)
        return Outcome(f"g1 = 4 Pf(M^(3)), g2 = 4 (Pf(M^(1)) + Pf(M^(5))); normal forms zero over {out}", {"g1_constant": str(G1_CONSTANT), "g2_constant": str(G2_CONSTANT)})

    def singular_locus() -> Outcome:
        out = {}
        for p in sorted(set(primes) | {sing_prime}):
            fp = FieldSpec.prime(p)
            r5 = PolyRing(6, fp, names=NEW_NAMES[:6])
            a, b = r5.parse(G1), r5.parse(G2)
            ci = budget.hilbert(r5, [a, b])
            require((ci.dim, ci.degree) == (3, 16), f"Z' over F_{p}: {ci}")
            jac = jacobian_ideal([a, b], 2)
            h = budget.hilbert(r5, jac.gens)
            require(h.dim == 0, f"singular scheme of Z' over F_{p}: {h}")
            out[str(p)] = {"Zprime": ci.to_json(), "singular": h.to_json()}
            if p == sing_prime:
                i = sqrt_minus_one(p)
                gb = budget.gb(r5, jac.gens)
                for pt in singular_points(i):
                    require(all(g.evaluate(pt) == 0 for g in gb.polys), f"{pt} is not singular on Z'")
                out["i"] = i
        return Outcome(f"Z' complete intersection dim 3 degree 16, singular scheme dim 0; six points singular over F_{sing_prime} (i={out['i']})", out)

    def orbit() -> Outcome:
        res = orbit_scheme(orbit_prime, budget)
        require(res["on_z"], "orbit point is not on Z")
        require(res["kernel_dim"] == 4, f"ker N_x has dim {res['kernel_dim']}")
        require(res["torus_span_equals_kernel"], "ker N_x differs from the GL_H torus span")
        full, orb = res["full"], res["orbit"]
        require(full.dim == 0 and full.degree <= EXPECTED_DEGREE, f"P(ker N_x) cap Z: {full}")
        require(orb.dim == 0 and orb.degree % EXPECTED_ORBIT == 0 and orb.degree <= EXPECTED_DEGREE, f"orbit part: {orb}")
        require(orb.degree == EXPECTED_ORBIT, f"orbit part has degree {orb.degree}")
        return Outcome(
            f"ker N_x dim 4; P^3 cap Z degree {full.degree}; off the torus boundary degree {orb.degree}",
            {"full": full.to_json(), "orbit": orb.to_json(), "x_point": res["x_point"]},
        )

    def stabilizer() -> Outcome:
        n = count_level_stabilizer(8, TWO_K)
        require(n == EXPECTED_STABILIZER, f"count {n}")
        return Outcome(f"#(GL_H cap N(H(1,16)))/C* = {n}", {"count": n})

    def triple_points() -> Outcome:
        if not extended:
            raise Skip("extended check not requested")
        fp = FieldSpec.prime(sing_prime)
        r5 = PolyRing(6, fp, names=NEW_NAMES[:6])
        a, b = r5.parse(G1), r5.parse(G2)
        mults = []
        for pt in singular_points(sqrt_minus_one(sing_prime)):
            chart = next(k for k, c in enumerate(pt) if c % sing_prime)
            mults.append(multiplicity_at_point([a, b], chart, pt, budget.seconds))
        detail = f"tangent-cone degrees {mults} (claimed {CLAIMED_TRIPLE})"
        return Outcome(detail, {"multiplicities": mults}, ok=all(m == CLAIMED_TRIPLE for m in mults))

    rep.run("a.coordinate_change", coordinate_change)
    rep.run("b.degree40", degree40)
    rep.run("c.tangent_cone", tangent_cone)
    rep.run("d.g1_g2", g_equations)
    rep.run("e.zprime_singular_points", singular_locus)
    rep.run("f.orbit_scheme", orbit)
    rep.run("g.stabilizer_count", stabilizer)
    rep.run("h.triple_points", triple_points)
    return rep.finish()
