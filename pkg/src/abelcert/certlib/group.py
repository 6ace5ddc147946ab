"""Level-stabilizer counts #(GL_H cap N(H(D)))/C^* for the cases used by the certificates."""

from __future__ import annotations

from itertools import product

from ..field import FieldSpec
from ..heisenberg import (
    FULL_K,
    SIGMA2_TAU,
    TWO_K,
    HeisenbergContext,
    _h_vectors,
    _prime_for_level,
    count_level_stabilizer,
    heisenberg_glh_count,
    sl2_fixing,
)
from .report import CertificateReport, Outcome, require

CERT_ID = "group"
# (half level d, case) -> frozen count; (7, sigma2_tau) is a regression constant
EXPECTED = {
    (8, TWO_K): 32,
    (8, FULL_K): 4,
    (7, SIGMA2_TAU): 8,
}
# the Heisenberg factor for D = (1, 16)
EXPECTED_HEISENBERG_16 = 4


def two_torsion_count(D: int) -> int:
    """#{(a, b) in Z_D^2 : 2a = 2b = 0}: the sigma^a tau^b that can commute with iota."""
    return sum(1 for a, b in product(range(D), repeat=2) if (2 * a) % D == 0 and (2 * b) % D == 0)


def verify(budget=None) -> CertificateReport:
    rep = CertificateReport(CERT_ID, FieldSpec.rationals(), {"cases": [f"{d}:{c}" for d, c in EXPECTED]})

    def case_check(d: int, case: str):
        def body() -> Outcome:
            D = 2 * d
            ctx = HeisenbergContext(D, FieldSpec.prime(_prime_for_level(D), [D]))
            fixing = len(sl2_fixing(D, _h_vectors(case)))
            heis = heisenberg_glh_count(ctx, case)
            require(heis == two_torsion_count(D), f"Heisenberg factor {heis}, 2-torsion count {two_torsion_count(D)}")
            n = count_level_stabilizer(d, case)
            require(n == fixing * heis, f"count {n} != {fixing} * {heis}")
            require(n == EXPECTED[(d, case)], f"count {n}, expected {EXPECTED[(d, case)]}")
            if D == 16:
                require(heis == EXPECTED_HEISENBERG_16, f"#(GL_H cap H(1,16))/C^* = {heis}")
            return Outcome(f"(1,{D}), H={case}: {fixing} SL_2 elements x {heis} Heisenberg elements = {n}", {"sl2": fixing, "heisenberg": heis, "count": n})

        return body

    for d, case in EXPECTED:
        rep.run(f"count.{d}.{case}", case_check(d, case))
    return rep.finish()
