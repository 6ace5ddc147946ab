"""The finite Heisenberg group H_d and its extension by the involution iota.

Matrices act on the coordinate basis: ``sigma e_i = e_{i-1}``,
``tau e_i = xi^{-i} e_i`` and ``iota e_i = e_{-i}``.  A point with coordinate
vector ``v`` is moved to ``M v``; a polynomial is moved by substituting
``x_i -> sum_k M[k][i] x_k`` (the image of the i-th basis vector).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .errors import NoSuchRoot, NotInNormalizerClass, OddLevel, PreconditionError, RingMismatch
from .field import FieldSpec, Scalar
from .linalg import DenseMatrix
from .polyring import PolyMap, PolyRing, Polynomial, compose


class HeisenbergContext:
    """Level ``d`` with a designated primitive d-th root of unity ``xi``."""

    def __init__(self, d: int, field: FieldSpec, ring: PolyRing | None = None):
        if d < 1:
            raise ValueError("level must be positive")
        self.d = d
        self.field = field
        # without a designated root only the powers +-1 of xi are available
        try:
            self.xi = field.root(d) if d > 1 else field.one()
        except NoSuchRoot:
            self.xi = None
        self.ring = ring or PolyRing(d, field)
        if self.ring.n != d:
            raise RingMismatch("context ring must have d variables")

    @classmethod
    def over_prime(cls, d: int, p: int) -> "HeisenbergContext":
        return cls(d, FieldSpec.prime(p, [d]))

    def xi_pow(self, e: int) -> Scalar:
        e %= self.d
        if self.xi is not None:
            return self.field.pow(self.xi, e)
        if e == 0:
            return self.field.one()
        if 2 * e == self.d:
            return self.field(-1)
        raise NoSuchRoot(f"xi^{e} needs a primitive {self.d}-th root of unity in {self.field}")

    # -- generators ----------------------------------------------------
    def sigma(self, k: int = 1) -> "GroupElement":
        return GroupElement(self, k % self.d, 0)

    def tau(self, k: int = 1) -> "GroupElement":
        return GroupElement(self, 0, k % self.d)

    def iota(self) -> "GroupElement":
        return GroupElement(self, 0, 0, self.field.one(), True)

    def identity(self) -> "GroupElement":
        return GroupElement(self, 0, 0)

    def scalar(self, c) -> "GroupElement":
        return GroupElement(self, 0, 0, self.field(c))

    def schrodinger_matrices(self) -> tuple[DenseMatrix, DenseMatrix, DenseMatrix]:
        return self.sigma().matrix(), self.tau().matrix(), self.iota().matrix()

    def weil_pairing(self, v: Sequence[int], w: Sequence[int]) -> Scalar:
        """e((a,b),(c,e)) = xi^{-(a e - b c)}."""
        a, b = v
        c, e = w
        return self.xi_pow(-(a * e - b * c))

    def __repr__(self) -> str:
        return f"HeisenbergContext(d={self.d}, field={self.field}, xi={self.xi})"


@dataclass(frozen=True)
class GroupElement:
    """``scalar * sigma^a tau^b iota^flip``."""

    ctx: HeisenbergContext
    a: int
    b: int
    scalar: Scalar = 1
    flip: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", self.a % self.ctx.d)
        object.__setattr__(self, "b", self.b % self.ctx.d)
        object.__setattr__(self, "scalar", self.ctx.field(self.scalar))

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        ctx = self.ctx
        f = ctx.field
        a2, b2 = (-other.a, -other.b) if self.flip else (other.a, other.b)
        # tau^b1 sigma^a2 = xi^{b1 a2} sigma^a2 tau^b1
        s = f.mul(f.mul(self.scalar, other.scalar), ctx.xi_pow(self.b * a2))
        return GroupElement(ctx, self.a + a2, self.b + b2, s, self.flip != other.flip)

    def __pow__(self, k: int) -> "GroupElement":
        out = self.ctx.identity()
        for _ in range(k):
            out = out * self
        return out

    def inverse(self) -> "GroupElement":
        m = self.ctx.identity()
        g = self
        # the group is finite: g^{order-1} is the inverse
        powers = [m]
        cur = g
        while not cur.is_identity():
            powers.append(cur)
            cur = cur * g
        return powers[-1]

    def is_identity(self) -> bool:
        return self.a == 0 and self.b == 0 and self.scalar == 1 and not self.flip

    def matrix(self) -> DenseMatrix:
        ctx = self.ctx
        d = ctx.d
        f = ctx.field
        rows = [[f.zero()] * d for _ in range(d)]
        for i in range(d):
            j = (-i) % d if self.flip else i
            # tau^b then sigma^a applied to e_j
            c = f.mul(self.scalar, ctx.xi_pow(-self.b * j))
            rows[(j - self.a) % d][i] = c
        return DenseMatrix(f, rows, d)

    def coordinate_map(self, ring: PolyRing | None = None) -> PolyMap:
        """Images of x_0..x_{d-1} under the substitution action."""
        ring = ring or self.ctx.ring
        m = self.matrix()
        gens = ring.gens()
        images = []
        for i in range(self.ctx.d):
            col = {k: m[k, i] for k in range(self.ctx.d) if m[k, i] != 0}
            img = ring.zero()
            for k, c in col.items():
                img = img + gens[k].scale(c)
            images.append(img)
        return PolyMap(images, ring)

    def act_on_poly(self, f: Polynomial) -> Polynomial:
        if f.ring.n != self.ctx.d:
            raise RingMismatch("polynomial ring does not match the group level")
        return compose(self.coordinate_map(f.ring), f)

    def apply_to_point(self, v: Sequence):
        """``M v`` for a vector of scalars or polynomials."""
        m = self.matrix()
        d = self.ctx.d
        out = []
        for k in range(d):
            acc = None
            for i in range(d):
                c = m[k, i]
                if c != 0:
                    t = v[i] * c
                    acc = t if acc is None else acc + t
            out.append(acc if acc is not None else v[0] * 0)
        return out

    def __repr__(self) -> str:
        return f"GroupElement(a={self.a}, b={self.b}, scalar={self.scalar}, flip={self.flip})"


def act_on_poly(g: GroupElement, f: Polynomial) -> Polynomial:
    return g.act_on_poly(f)


def weil_pairing(ctx: HeisenbergContext, v: Sequence[int], w: Sequence[int]) -> Scalar:
    return ctx.weil_pairing(v, w)


def schrodinger_matrices(ctx: HeisenbergContext) -> tuple[DenseMatrix, DenseMatrix, DenseMatrix]:
    return ctx.schrodinger_matrices()


# ---------------------------------------------------------------------------
# minus chart


def minus_chart(d: int, field: FieldSpec, source: PolyRing | None = None, chart_ring: PolyRing | None = None) -> PolyMap:
    """Embedding of the (-1)-eigenspace of iota for even ``d = 2m``: the
    images of x_0..x_{d-1} in a ring with m-1 chart coordinates (named
    x1..x{m-1}): x_0, x_m -> 0, x_i -> u_i, x_{d-i} -> -u_i."""
    if d % 2:
        raise OddLevel(f"minus chart needs an even level, got {d}")
    m = d // 2
    ring = chart_ring or PolyRing(m - 1, field, names=[f"x{i}" for i in range(1, m)])
    images = [ring.zero()] * d
    for i in range(1, m):
        images[i] = ring.gen(i - 1)
        images[d - i] = -ring.gen(i - 1)
    return PolyMap(images, ring)


def chart_ring(d: int, field: FieldSpec) -> PolyRing:
    m = d // 2
    return PolyRing(m - 1, field, names=[f"x{i}" for i in range(1, m)])


# ---------------------------------------------------------------------------
# GL_H families for D = (1, 2d)

SIGMA2_TAU = "sigma2_tau"
TWO_K = "2K"
FULL_K = "full"


def _h_generators(ctx: HeisenbergContext, case: str) -> list[GroupElement]:
    if case == SIGMA2_TAU:
        return [ctx.sigma(2), ctx.tau(1)]
    if case == TWO_K:
        return [ctx.sigma(2), ctx.tau(2)]
    if case == FULL_K:
        return [ctx.sigma(1), ctx.tau(1)]
    raise PreconditionError(f"unknown subgroup case {case!r}")


def _h_vectors(case: str) -> list[tuple[int, int]]:
    return {SIGMA2_TAU: [(2, 0), (0, 1)], TWO_K: [(2, 0), (0, 2)], FULL_K: [(1, 0), (0, 1)]}[case]


def commutator_scalar(T: DenseMatrix, alpha: DenseMatrix) -> Scalar | None:
    """c if T alpha T^-1 alpha^-1 = c * identity, else None."""
    return (T @ alpha @ T.inverse() @ alpha.inverse()).scalar_value()


class GLHFamily:
    """Parametrized elements of GL_H for D = (1, 2d) and H = <sigma^2, tau> or 2K(D)."""

    def __init__(self, ctx: HeisenbergContext, case: str):
        if ctx.d % 2:
            raise OddLevel("GL_H families need an even level 2d")
        if case not in (SIGMA2_TAU, TWO_K):
            raise PreconditionError(f"no explicit GL_H family for case {case!r}")
        self.ctx = ctx
        self.case = case

    @property
    def half(self) -> int:
        return self.ctx.d // 2

    def instantiate(self, params: Sequence, shifted: bool = False) -> DenseMatrix:
        """``(a, b)`` [optionally composed with sigma^d] or ``(alpha, beta, gamma, delta)``."""
        f = self.ctx.field
        D = self.ctx.d
        if self.case == SIGMA2_TAU:
            a, b = (f(x) for x in params)
            diag = DenseMatrix.diagonal(f, [a if i % 2 == 0 else b for i in range(D)])
            if shifted:
                return self.ctx.sigma(self.half).matrix() @ diag
            return diag
        al, be, ga, de = (f(x) for x in params)
        rows = [[f.zero()] * D for _ in range(D)]
        for i in range(D):
            rows[i][i] = al if i % 2 == 0 else be
            rows[i][(i + self.half) % D] = ga if i % 2 == 0 else de
        return DenseMatrix(f, rows, D)

    def contains(self, T: DenseMatrix) -> bool:
        return in_glh(self.ctx, T, self.case)


def in_glh(ctx: HeisenbergContext, T: DenseMatrix, case: str) -> bool:
    """T commutes with iota and normalizes every generator of H' up to scalars."""
    try:
        Tinv = T.inverse()
    except ZeroDivisionError:
        return False
    iota = ctx.iota().matrix()
    if T @ iota != iota @ T:
        return False
    for g in _h_generators(ctx, case):
        al = g.matrix()
        if (T @ al @ Tinv @ al.inverse()).scalar_value() is None:
            return False
    return True


def glh_normal_form(ctx: HeisenbergContext, T: DenseMatrix, case: str) -> tuple[int, int, DenseMatrix]:
    """Find (a, b) with sigma^a tau^b T in GL_H, following the exponent
    bookkeeping C_1 = xi^{2n}, C_2 = xi^m (or C_3 = xi^{2m}), T' = sigma^m tau^{-n} T."""
    D = ctx.d
    if D % 2:
        raise OddLevel("GL_H normal forms need an even level")
    half = D // 2
    try:
        Tinv = T.inverse()
    except ZeroDivisionError:
        raise NotInNormalizerClass("matrix is singular") from None
    consts = []
    for g in _h_generators(ctx, case):
        al = g.matrix()
        c = (T @ al @ Tinv @ al.inverse()).scalar_value()
        if c is None:
            raise NotInNormalizerClass("commutator with a generator of H' is not scalar")
        consts.append(c)
    if in_glh(ctx, T, case):
        return 0, 0, T
    # T sigma^2 = C1 sigma^2 T  <=>  T sigma^2 T^-1 sigma^-2 = C1
    c1, c_second = consts
    logs = {ctx.xi_pow(k): k for k in range(D)}
    if c1 not in logs or c_second not in logs:
        raise NotInNormalizerClass("commutator constants are not powers of xi")
    two_n = logs[c1]
    if two_n % 2:
        raise NotInNormalizerClass("C1 is not an even power of xi")
    ns = [two_n // 2, two_n // 2 + half]
    k = logs[c_second]
    if case == SIGMA2_TAU:
        ms = [k]
    else:
        if k % 2:
            raise NotInNormalizerClass("C3 is not an even power of xi")
        ms = [k // 2, k // 2 + half]
    # C2 computed as T tau T^-1 tau^-1 equals xi^{-m} in the convention of the
    # entry relation, so try both signs of m as well
    cands = []
    for m in ms:
        for mm in (m, -m):
            for n in ns:
                for nn in (n, -n):
                    cands.append((mm % D, nn % D))
    seen = set()
    for m, n in cands:
        if (m, n) in seen:
            continue
        seen.add((m, n))
        g = ctx.sigma(m) * ctx.tau(-n)
        Tp = g.matrix() @ T
        if in_glh(ctx, Tp, case):
            return m, (-n) % D, Tp
    raise NotInNormalizerClass("no Heisenberg translate lies in GL_H")


def heisenberg_glh_count(ctx: HeisenbergContext, case: str) -> int:
    """Number of sigma^a tau^b (mod scalars) lying in GL_H."""
    D = ctx.d
    iota = ctx.iota().matrix()
    count = 0
    for a, b in product(range(D), range(D)):
        M = GroupElement(ctx, a, b).matrix()
        if M @ iota == iota @ M and in_glh(ctx, M, case):
            count += 1
    return count


def sl2_fixing(D: int, vectors: Sequence[tuple[int, int]]) -> list[tuple[int, int, int, int]]:
    """All (p, q, r, s) with [[p, q], [r, s]] in SL_2(Z_D) fixing every vector."""
    out = []
    for p, q, r, s in product(range(D), repeat=4):
        if (p * s - q * r) % D != 1:
            continue
        if all(((p * x + q * y) % D, (r * x + s * y) % D) == (x % D, y % D) for x, y in vectors):
            out.append((p, q, r, s))
    return out


def _prime_for_level(D: int) -> int:
    from .field import is_prime

    p = D + 1
    while not (is_prime(p) and p > 2):
        p += D
    return p


def count_level_stabilizer(d: int, case: str, p: int | None = None) -> int:
    """#(GL_H intersect N(H(1,2d))) / scalars as (#SL_2(Z_2d) elements fixing H
    pointwise) times (#Heisenberg elements in GL_H mod scalars)."""
    D = 2 * d
    p = p or _prime_for_level(D)
    ctx = HeisenbergContext(D, FieldSpec.prime(p, [D]))
    fixing = sl2_fixing(D, _h_vectors(case))
    return len(fixing) * heisenberg_glh_count(ctx, case)
