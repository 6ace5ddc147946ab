"""Level (1,12): the quartic Q on the minus chart and its two-quadric model."""

from __future__ import annotations

from typing import Sequence

from ..errors import PreconditionError
from ..field import FieldSpec
from ..groebner import jacobian_ideal
from ..heisenberg import HeisenbergContext, minus_chart
from ..moore import pfaffian, specialize
from ..polyring import PolyMap, PolyRing, compose
from .common import Budget, mismatches, parse_matrix_rows, ratio
from .report import CertificateReport, Outcome, require

CERT_ID = "d12"
DEFAULT_PRIMES = (101, 103)
BLOCK_ROWS = (0, 1, 2, 3)
# Pf(displayed block) = PF_CONSTANT * f, frozen from the rational run
PF_CONSTANT = 1

BLOCK = [
    ["0", "-x1^2-x5^2", "-x2^2-x4^2", "-2*x3^2"],
    ["x1^2+x5^2", "0", "-x1*x3-x3*x5", "-2*x2*x4"],
    ["x2^2+x4^2", "x1*x3+x3*x5", "0", "-2*x1*x5"],
    ["2*x3^2", "2*x2*x4", "2*x1*x5", "0"],
]
QUARTIC = "2*x3^2*(x1*x3+x3*x5) - 2*(x2^2+x4^2)*x2*x4 + 2*x1*x5*(x1^2+x5^2)"
Z_QUADRICS = ["x1^2+x5^2", "x2^2+x4^2", "x3^2", "x1*x3+x3*x5", "x2*x4", "x1*x5"]
SIGMA6 = ["x5", "x4", "x3", "x2", "x1"]
TAU6 = ["x1", "-x2", "x3", "-x4", "x5"]


def chart(field: FieldSpec) -> tuple[HeisenbergContext, PolyMap]:
    ctx = HeisenbergContext(12, field)
    return ctx, minus_chart(12, field)


def quartic(ring: PolyRing):
    return ring.parse(QUARTIC)


def _proj_equal(a: Sequence, b: Sequence) -> bool:
    """Coordinate lists equal up to one common nonzero scalar."""
    c = None
    for u, v in zip(a, b):
        r = ratio(u, v) if v else (None if u else "zero")
        if r == "zero":
            continue
        if r is None or (c is not None and r != c):
            return False
        c = r
    return c is not None


def verify(field: FieldSpec | None = None, primes: Sequence[int] = DEFAULT_PRIMES, budget: Budget | None = None) -> CertificateReport:
    field = field or FieldSpec.rationals()
    # the construction needs 2 invertible
    if field.characteristic == 2 or 2 in primes:
        raise PreconditionError("characteristic 2 is not allowed")
    budget = budget or Budget(60)
    primes = [FieldSpec.prime(p) for p in primes]
    rep = CertificateReport(CERT_ID, field, {"primes": [f.p for f in primes], "block_rows": list(BLOCK_ROWS)})
    ctx, ch = chart(field)
    ring = ch.ring
    f = quartic(ring)
    rep.add_artifact("Q", [f])

    def pf_identity() -> Outcome:
        m = specialize(6, None, ch, ring=ctx.ring)
        require(m.skew, "M_6(x,x) on the chart is not skew")
        block = m.submatrix(BLOCK_ROWS)
        bad = mismatches(block, parse_matrix_rows(ring, BLOCK))
        require(not bad, f"block differs from the display at {bad}")
        c = ratio(pfaffian(block), f)
        require(c is not None, "Pfaffian is not proportional to f")
        require(c == field(PF_CONSTANT), f"Pf = {c}*f, expected {PF_CONSTANT}*f")
        return Outcome(f"block rows {list(BLOCK_ROWS)} match; Pf(block) = {field.format(c)}*f", {"constant": str(c)})

    def smooth() -> Outcome:
        dims = {}
        for fp in primes:
            r = ring.with_field(fp)
            g = f.change_field(r)
            h = budget.hilbert(r, jacobian_ideal(g).gens)
            dims[fp.p] = h.dim
            require(h.dim == -1, f"Jacobian scheme over F_{fp.p} has dim {h.dim}")
        note = "probabilistic char-0 certificate" if len(primes) >= 2 else "single prime"
        return Outcome(f"Jacobian scheme empty over {sorted(dims)} ({note})", {"dims": {str(k): v for k, v in dims.items()}})

    def two_quadrics() -> Outcome:
        zr = PolyRing(6, field, names=[f"z{i}" for i in range(6)])
        zmap = PolyMap([ring.parse(q) for q in Z_QUADRICS], ring)
        rel = zr.parse("z0*z2 - z3^2 + 2*z2*z5")
        plucker = zr.parse("z0*z5 - z1*z4 + z2*z3")
        require(not compose(zmap, rel), "z0z2 - z3^2 + 2z2z5 does not vanish")
        require(compose(zmap, plucker).scale(2) == f, "f != 2(z0z5 - z1z4 + z2z3)")
        return "z0z2-z3^2+2z2z5 = 0 and f = 2(z0z5-z1z4+z2z3) under the z-substitution"

    def invariance() -> Outcome:
        s6 = PolyMap([ring.parse(t) for t in SIGMA6], ring)
        t6 = PolyMap([ring.parse(t) for t in TAU6], ring)
        require(compose(s6, f) == f, "f not invariant under the displayed sigma^6")
        require(compose(t6, f) == f, "f not invariant under the displayed tau^6")
        # the displayed maps are the group elements sigma^6, tau^6 seen on the chart
        gens = ctx.ring.gens()
        chart_pt = [compose(ch, x) for x in gens]
        for g, shown in ((ctx.sigma(6), s6), (ctx.tau(6), t6)):
            moved = g.apply_to_point(chart_pt)
            require(_proj_equal([moved[i] for i in range(1, 6)], list(shown.coords)), f"{g} disagrees with the displayed map")
        return "f invariant under sigma^6 and tau^6; displayed maps agree with the group action up to sign"

    rep.run("a.pfaffian_identity", pf_identity)
    rep.run("b.smoothness", smooth)
    rep.run("c.two_quadric_model", two_quadrics)
    rep.run("d.z2xz2_invariance", invariance)
    return rep.finish()
