"""Moore matrices, polynomial matrices and Pfaffians."""

from __future__ import annotations

from itertools import combinations
from typing import Callable, Sequence

from .errors import ArityMismatch, NotSkew, OddSize, ParseError
from .field import Scalar
from .groebner import parse_ring_header, poly_det
from .linalg import DenseMatrix
from .polyring import PolyMap, PolyRing, Polynomial, compose


class PolyMatrix:
    """Immutable matrix of polynomials over one ring."""

    def __init__(self, ring: PolyRing, entries: Sequence[Sequence], skew: bool | None = None):
        self.ring = ring
        self.entries = tuple(tuple(ring(e) for e in row) for row in entries)
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.entries else 0
        if any(len(r) != self.cols for r in self.entries):
            raise ValueError("ragged matrix")
        self.skew = self.is_skew() if skew is None else skew

    def __getitem__(self, ij: tuple[int, int]) -> Polynomial:
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PolyMatrix) and self.ring == other.ring and self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __repr__(self) -> str:
        return f"PolyMatrix({self.rows}x{self.cols}{' skew' if self.skew else ''})"

    def is_skew(self) -> bool:
        if self.rows != self.cols:
            return False
        return all(self.entries[i][j] == -self.entries[j][i] for i in range(self.rows) for j in range(i, self.rows))

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(self.ring, [list(c) for c in zip(*self.entries)])

    def scale(self, c) -> "PolyMatrix":
        return PolyMatrix(self.ring, [[e.scale(c) for e in row] for row in self.entries], self.skew)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int] | None = None) -> "PolyMatrix":
        cols = rows if cols is None else cols
        return PolyMatrix(self.ring, [[self.entries[i][j] for j in cols] for i in rows])

    def map_entries(self, fn: Callable[[Polynomial], Polynomial], ring: PolyRing | None = None) -> "PolyMatrix":
        ring = ring or self.ring
        return PolyMatrix(ring, [[fn(e) for e in row] for row in self.entries])

    def substitute(self, pmap: PolyMap) -> "PolyMatrix":
        return self.map_entries(lambda e: compose(pmap, e), pmap.ring)

    def evaluate(self, point: Sequence) -> DenseMatrix:
        return DenseMatrix(self.ring.field, [[e.evaluate(point) for e in row] for row in self.entries], self.cols)

    def nonzero_entries(self) -> list[Polynomial]:
        return [e for row in self.entries for e in row if e]

    def to_text(self) -> str:
        lines = [self.ring.header(), f"matrix {self.rows} {self.cols}" + (" skew" if self.skew else "")]
        lines += [e.to_text() for row in self.entries for e in row]
        return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> PolyMatrix:
    lines = [(i + 1, s.strip()) for i, s in enumerate(text.splitlines()) if s.strip() and not s.strip().startswith("#")]
    if len(lines) < 2:
        raise ParseError("expected ring and matrix headers", lines[0][0] if lines else 1)
    ring = parse_ring_header(lines[0][1], lines[0][0])
    lineno, head = lines[1]
    parts = head.split()
    if len(parts) not in (3, 4) or parts[0] != "matrix" or (len(parts) == 4 and parts[3] != "skew"):
        raise ParseError("expected 'matrix r c [skew]'", lineno)
    try:
        r, c = int(parts[1]), int(parts[2])
    except ValueError:
        raise ParseError("matrix dimensions must be integers", lineno) from None
    body = lines[2:]
    if len(body) != r * c:
        raise ParseError(f"expected {r * c} entries, found {len(body)}", body[-1][0] if body else lineno)
    polys = [ring.parse_canonical(s, line=n) for n, s in body]
    m = PolyMatrix(ring, [polys[i * c:(i + 1) * c] for i in range(r)])
    if len(parts) == 4 and not m.skew:
        raise ParseError("matrix marked skew is not skew-symmetric", lineno)
    return m


# ---------------------------------------------------------------------------
# constructions


def moore_even(d: int, x: Sequence, y: Sequence, ring: PolyRing | None = None) -> PolyMatrix:
    """d x d matrix (x_{i+j} y_{i-j} + x_{i+j+d} y_{i-j+d}), indices mod 2d."""
    n = 2 * d
    if len(x) != n or len(y) != n:
        raise ArityMismatch(f"need {n} coordinates for x and y")
    ring = ring or _ring_of(x, y)
    rows = []
    for i in range(d):
        row = []
        for j in range(d):
            e = ring(x[(i + j) % n]) * ring(y[(i - j) % n]) + ring(x[(i + j + d) % n]) * ring(y[(i - j + d) % n])
            row.append(e)
        rows.append(row)
    return PolyMatrix(ring, rows)


def moore_odd(n: int, x: Sequence, y: Sequence, ring: PolyRing | None = None) -> PolyMatrix:
    """n x n matrix (x_{d(i+j)} y_{d(i-j)}) with n = 2d + 1, indices mod n."""
    if n % 2 == 0:
        raise ArityMismatch("odd Moore matrix needs odd size")
    if len(x) != n or len(y) != n:
        raise ArityMismatch(f"need {n} coordinates for x and y")
    d = (n - 1) // 2
    ring = ring or _ring_of(x, y)
    rows = [[ring(x[(d * (i + j)) % n]) * ring(y[(d * (i - j)) % n]) for j in range(n)] for i in range(n)]
    return PolyMatrix(ring, rows, skew=False)


def _ring_of(x: Sequence, y: Sequence) -> PolyRing:
    for v in list(x) + list(y):
        if isinstance(v, Polynomial):
            return v.ring
    raise ArityMismatch("cannot infer the ring: pass one explicitly")


def specialize(
    half: int,
    transform,
    chart: PolyMap | None = None,
    y: Sequence | None = None,
    ring: PolyRing | None = None,
) -> PolyMatrix:
    """M_half(g x, y) on P^{2 half - 1}, then restricted through ``chart``.

    ``transform`` is a GroupElement of level 2*half acting on the point x
    (or None for the identity); ``y`` defaults to x itself.  When ``chart``
    is given, x (and y when it is x) are pulled back to the chart ring.
    """
    n = 2 * half
    base = ring or (transform.ctx.ring if transform is not None else None)
    if base is None:
        raise ArityMismatch("need a ring for x")
    xs = base.gens()
    gx = transform.apply_to_point(xs) if transform is not None else xs
    ys = xs if y is None else [base(v) for v in y]
    m = moore_even(half, gx, ys, base)
    if chart is not None:
        m = m.substitute(chart)
    return m


# ---------------------------------------------------------------------------
# Pfaffians


def _check_skew(a: PolyMatrix) -> None:
    if a.rows != a.cols or not a.is_skew():
        raise NotSkew("matrix is not skew-symmetric")
    if a.rows % 2:
        raise OddSize("Pfaffian needs even size")


def _pf(entries, idx: tuple[int, ...], ring: PolyRing, memo: dict) -> Polynomial:
    if not idx:
        return ring.one()
    hit = memo.get(idx)
    if hit is not None:
        return hit
    first = idx[0]
    total = ring.zero()
    for pos in range(1, len(idx)):
        j = idx[pos]
        a = entries[first][j]
        if not a:
            continue
        rest = idx[1:pos] + idx[pos + 1:]
        term = a * _pf(entries, rest, ring, memo)
        total = total - term if pos % 2 == 0 else total + term
    memo[idx] = total
    return total


def pfaffian(a: PolyMatrix) -> Polynomial:
    """First-row expansion, Pf([[0, a], [-a, 0]]) = a, Pf(empty) = 1."""
    _check_skew(a)
    return _pf(a.entries, tuple(range(a.rows)), a.ring, {})


def sub_pfaffians(a: PolyMatrix, size: int) -> list[Polynomial]:
    """Pfaffians of all principal size x size submatrices, subsets in lexicographic order."""
    if a.rows != a.cols or not a.is_skew():
        raise NotSkew("matrix is not skew-symmetric")
    if size % 2:
        raise OddSize("sub-Pfaffians need even size")
    memo: dict = {}
    return [_pf(a.entries, idx, a.ring, memo) for idx in combinations(range(a.rows), size)]


def sub_pfaffian_index(n: int, size: int) -> list[tuple[int, ...]]:
    return list(combinations(range(n), size))


def determinant(a: PolyMatrix) -> Polynomial:
    if a.rows != a.cols:
        raise ArityMismatch("determinant of a non-square matrix")
    return poly_det(a.entries)


def scalar_pfaffian(m: Sequence[Sequence[Scalar]], field) -> Scalar:
    """Pfaffian of a skew matrix of scalars (used by property checks)."""
    n = len(m)
    if n % 2:
        raise OddSize("Pfaffian needs even size")
    memo: dict = {}

    def rec(idx: tuple[int, ...]):
        if not idx:
            return field.one()
        if idx in memo:
            return memo[idx]
        first = idx[0]
        total = field.zero()
        for pos in range(1, len(idx)):
            j = idx[pos]
            if m[first][j] == 0:
                continue
            t = field.mul(m[first][j], rec(idx[1:pos] + idx[pos + 1:]))
            total = field.sub(total, t) if pos % 2 == 0 else field.add(total, t)
        memo[idx] = total
        return total

    return rec(tuple(range(n)))
