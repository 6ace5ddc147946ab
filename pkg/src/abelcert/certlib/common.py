"""Small helpers shared by the certificate modules."""

from __future__ import annotations

from typing import Sequence

from ..field import FieldSpec, Scalar
from ..groebner import GBCache, HilbertData, Ideal, dimension_and_degree, ideal_equal
from ..moore import PolyMatrix
from ..polyring import PolyRing, Polynomial


class Budget:
    """Per-certificate Groebner settings: timeout in seconds and optional cache."""

    def __init__(self, seconds: float | None = None, cache: GBCache | None = None):
        self.seconds = seconds
        self.cache = cache

    def gb(self, ring: PolyRing, gens: Sequence[Polynomial]):
        return Ideal(ring, [g for g in gens if g]).groebner(timeout=self.seconds, cache=self.cache)

    def hilbert(self, ring: PolyRing, gens: Sequence[Polynomial]) -> HilbertData:
        return dimension_and_degree(self.gb(ring, gens))

    def equal(self, ring: PolyRing, a: Sequence[Polynomial], b: Sequence[Polynomial]) -> bool:
        return ideal_equal(Ideal(ring, a), Ideal(ring, b), timeout=self.seconds)


def parse_matrix_rows(ring: PolyRing, rows: Sequence[Sequence[str]], scale: Scalar = 1) -> PolyMatrix:
    return PolyMatrix(ring, [[ring.parse(e).scale(scale) for e in row] for row in rows])


def ratio(a: Polynomial, b: Polynomial) -> Scalar | None:
    """The scalar c with a == c * b, or None when there is none (b != 0)."""
    if not b:
        return None
    m, cb = b.sorted_terms()[0]
    fld = b.ring.field
    c = fld.div(a.terms.get(m, fld.zero()), cb)
    return c if a == b.scale(c) else None


def fmt_scalar(field: FieldSpec, c: Scalar) -> str:
    return field.format(c)


def mismatches(a: PolyMatrix, b: PolyMatrix) -> list[tuple[int, int]]:
    return [(i, j) for i in range(a.rows) for j in range(a.cols) if a[i, j] != b[i, j]]


def minors2(rows: Sequence[Sequence[Polynomial]]) -> list[Polynomial]:
    """All 2x2 minors of a 2 x n matrix, columns in lexicographic pairs."""
    n = len(rows[0])
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            out.append(rows[0][i] * rows[1][j] - rows[0][j] * rows[1][i])
    return out


def hessian_rank(q: Polynomial, skip: int | None = None) -> int:
    """Rank of the symmetric matrix of second partials of a quadratic form."""
    from ..linalg import DenseMatrix

    ring = q.ring
    idx = [i for i in range(ring.n) if i != skip]
    zero = [0] * ring.n
    rows = []
    for i in idx:
        di = q.derivative(i)
        rows.append([di.derivative(j).evaluate(zero) for j in idx])
    return DenseMatrix(ring.field, rows, len(idx)).rank()
