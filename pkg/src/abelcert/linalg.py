"""Dense exact linear algebra over a :class:`~abelcert.field.FieldSpec`.

Prime-field elimination runs on ``int64`` numpy arrays (all residues are below
2**31 so products never overflow); rational elimination runs on lists of
Fractions.  Kernel bases come out in reduced echelon form.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .field import FieldSpec, Scalar

_NUMPY_LIMIT = 2**31


def _rref_fp(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    a = a.copy() % p
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = a[r] * pow(int(a[r, c]), p - 2, p) % p
        col = a[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            a[nzr] = (a[nzr] - np.outer(col[nzr], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def _rref_generic(rows: list[list[Scalar]], field: FieldSpec) -> tuple[list[list[Scalar]], list[int]]:
    a = [list(row) for row in rows]
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = field.inv(a[r][c])
        a[r] = [field.mul(x, inv) for x in a[r]]
        prow = a[r]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(a[i], prow)]
        pivots.append(c)
        r += 1
    return a, pivots


class DenseMatrix:
    """Immutable rows x cols matrix of scalars over ``field``."""

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field: FieldSpec, entries: Sequence[Sequence], cols: int | None = None):
        self.field = field
        self.entries = tuple(tuple(field(x) for x in row) for row in entries)
        self.rows = len(self.entries)
        if cols is None:
            cols = len(self.entries[0]) if self.entries else 0
        self.cols = cols
        if any(len(row) != cols for row in self.entries):
            raise ValueError("ragged matrix")

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "DenseMatrix":
        return cls(field, [[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> "DenseMatrix":
        return cls(field, [[0] * cols for _ in range(rows)], cols)

    @classmethod
    def diagonal(cls, field: FieldSpec, diag: Sequence) -> "DenseMatrix":
        n = len(diag)
        return cls(field, [[diag[i] if i == j else 0 for j in range(n)] for i in range(n)], n)

    def __getitem__(self, ij: tuple[int, int]) -> Scalar:
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, DenseMatrix)
            and self.field == other.field
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self) -> int:
        return hash((self.field, self.cols, self.entries))

    def __repr__(self) -> str:
        return f"DenseMatrix({self.rows}x{self.cols} over {self.field})"

    def _np(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64).reshape(self.rows, self.cols)

    def _use_numpy(self) -> bool:
        return self.field.is_prime_field and self.field.p < _NUMPY_LIMIT

    # -- arithmetic ----------------------------------------------------
    def __matmul__(self, other: "DenseMatrix") -> "DenseMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        f = self.field
        if self._use_numpy():
            p = f.p
            a, b = self._np(), other._np()
            out = np.zeros((self.rows, other.cols), dtype=np.int64)
            # chunked products keep intermediate sums inside int64
            for k in range(self.cols):
                out = (out + np.outer(a[:, k], b[k, :])) % p
            return DenseMatrix(f, out.tolist(), other.cols)
        cols_b = list(zip(*other.entries)) if other.rows else [()] * other.cols
        out = []
        for row in self.entries:
            out.append([sum((x * y for x, y in zip(row, col)), f.zero()) for col in cols_b])
        return DenseMatrix(f, out, other.cols)

    def __add__(self, other: "DenseMatrix") -> "DenseMatrix":
        f = self.field
        return DenseMatrix(f, [[f.add(x, y) for x, y in zip(r, s)] for r, s in zip(self.entries, other.entries)], self.cols)

    def __sub__(self, other: "DenseMatrix") -> "DenseMatrix":
        f = self.field
        return DenseMatrix(f, [[f.sub(x, y) for x, y in zip(r, s)] for r, s in zip(self.entries, other.entries)], self.cols)

    def scale(self, c: Scalar) -> "DenseMatrix":
        f = self.field
        return DenseMatrix(f, [[f.mul(c, x) for x in r] for r in self.entries], self.cols)

    def apply(self, v: Sequence) -> list[Scalar]:
        f = self.field
        return [f(sum(x * f(y) for x, y in zip(row, v))) for row in self.entries]

    def transpose(self) -> "DenseMatrix":
        return DenseMatrix(self.field, [list(c) for c in zip(*self.entries)] if self.rows else [], self.rows)

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    def scalar_value(self) -> Scalar | None:
        """c if the matrix equals c * identity, else None."""
        if self.rows != self.cols:
            return None
        c = self.entries[0][0] if self.rows else self.field.one()
        for i, row in enumerate(self.entries):
            for j, x in enumerate(row):
                if x != (c if i == j else 0):
                    return None
        return c

    # -- elimination ---------------------------------------------------
    def rref(self) -> tuple["DenseMatrix", list[int]]:
        if self.rows == 0 or self.cols == 0:
            return self, []
        if self._use_numpy():
            a, piv = _rref_fp(self._np(), self.field.p)
            return DenseMatrix(self.field, a.tolist(), self.cols), piv
        a, piv = _rref_generic([list(r) for r in self.entries], self.field)
        return DenseMatrix(self.field, a, self.cols), piv

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel(self) -> list[list[Scalar]]:
        """Basis of {v : M v = 0}, one vector per free column, in reduced echelon form."""
        f = self.field
        r, piv = self.rref()
        free = [c for c in range(self.cols) if c not in set(piv)]
        basis = []
        for fc in free:
            v = [f.zero()] * self.cols
            v[fc] = f.one()
            for i, pc in enumerate(piv):
                v[pc] = f.neg(r.entries[i][fc])
            basis.append(v)
        return basis

    def left_kernel(self) -> list[list[Scalar]]:
        return self.transpose().kernel()

    def inverse(self) -> "DenseMatrix":
        n = self.rows
        if n != self.cols:
            raise ValueError("not square")
        aug = DenseMatrix(self.field, [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(self.entries)], 2 * n)
        r, piv = aug.rref()
        if piv[:n] != list(range(n)):
            from .errors import ZeroInverse

            raise ZeroInverse("singular matrix")
        return DenseMatrix(self.field, [row[n:] for row in r.entries], n)

    def det(self) -> Scalar:
        """Determinant by elimination."""
        n = self.rows
        f = self.field
        a = [list(r) for r in self.entries]
        d = f.one()
        for c in range(n):
            piv = next((i for i in range(c, n) if a[i][c] != 0), None)
            if piv is None:
                return f.zero()
            if piv != c:
                a[c], a[piv] = a[piv], a[c]
                d = f.neg(d)
            d = f.mul(d, a[c][c])
            inv = f.inv(a[c][c])
            for i in range(c + 1, n):
                if a[i][c] != 0:
                    m = f.mul(a[i][c], inv)
                    a[i] = [f.sub(x, f.mul(m, y)) for x, y in zip(a[i], a[c])]
        return d


def matrix_kernel(m: DenseMatrix) -> list[list[Scalar]]:
    return m.kernel()


def matrix_rank(m: DenseMatrix) -> int:
    return m.rank()
