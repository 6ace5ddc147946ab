"""Sparse multivariate polynomials over a :class:`FieldSpec`.

A monomial is a packed ``int``: the exponent of ``x_i`` occupies bits
``[EXP_BITS*i, EXP_BITS*(i+1))``.  Multiplying monomials is integer addition
and ``a | b`` is ``((b - a) & guard) == 0`` (the top bit of every field is a
guard that catches borrows).

A monomial order is a matrix of non-negative integer weights; the sort key of
a monomial is the packed vector ``W e``.  Keys are therefore additive,
``key(a*b) == key(a) + key(b)``, which the Groebner kernels rely on.
Graded reverse lexicographic order has a fast path: its weight rows are the
partial sums ``e_0 + ... + e_k`` and the packed key is ``(m * R) & mask``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import ArityMismatch, NotUnivariate, ParseError, PointNotOnVariety, RingMismatch
from .field import FieldSpec, Scalar

EXP_BITS = 12
_FIELD = (1 << EXP_BITS) - 1
MAX_EXP = (1 << (EXP_BITS - 1)) - 1
KEY_BITS = 24


class MonomialOrder:
    """Matrix order given by non-negative weight rows; ties are impossible
    because the rows must have full rank (checked lazily by callers)."""

    def __init__(self, name: str, nvars: int, weights: Sequence[Sequence[int]] | None = None):
        self.name = name
        self.nvars = nvars
        if name == "grevlex":
            weights = [[1 if i <= k else 0 for i in range(nvars)] for k in reversed(range(nvars))]
        elif name == "lex":
            weights = [[1 if i == k else 0 for i in range(nvars)] for k in range(nvars)]
        elif weights is None:
            raise ValueError(f"order {name!r} needs explicit weights")
        self.weights = tuple(tuple(int(w) for w in row) for row in weights)
        if any(len(r) != nvars or min(r, default=0) < 0 for r in self.weights):
            raise ValueError("bad weight matrix")

    @classmethod
    def block_local(cls, nvars: int) -> "MonomialOrder":
        """Order on (h, x_1..x_{n-1}): total degree, then larger power of h,
        then grevlex on the x's.  Used for tangent cones."""
        rows = [[1] * nvars, [1] + [0] * (nvars - 1)]
        m = nvars - 1
        for k in reversed(range(m)):
            rows.append([0] + [1 if i <= k else 0 for i in range(m)])
        return cls("tangent", nvars, rows)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, MonomialOrder) and self.weights == other.weights and self.name == other.name

    def __hash__(self) -> int:
        return hash((self.name, self.weights))

    def __repr__(self) -> str:
        return f"MonomialOrder({self.name!r}, {self.nvars})"


class PolyRing:
    """k[x_0, ..., x_{n-1}] with a monomial order."""

    def __init__(self, nvars: int, field: FieldSpec, order: str | MonomialOrder = "grevlex", names: Sequence[str] | None = None):
        if nvars < 0:
            raise ValueError("nvars must be non-negative")
        self.n = nvars
        self.field = field
        self.order = order if isinstance(order, MonomialOrder) else MonomialOrder(order, nvars)
        if self.order.nvars != nvars:
            raise ValueError("order arity does not match ring")
        self.names = tuple(names) if names is not None else tuple(f"x{i}" for i in range(nvars))
        if len(self.names) != nvars:
            raise ValueError("wrong number of variable names")
        self._R = sum(1 << (EXP_BITS * i) for i in range(nvars))
        self._mask = (1 << (EXP_BITS * nvars)) - 1
        self.guard = sum(1 << (EXP_BITS * i + EXP_BITS - 1) for i in range(nvars))
        self._grevlex = self.order.name == "grevlex"
        self._degshift = EXP_BITS * (nvars - 1) if nvars else 0
        nrows = len(self.order.weights)
        self._wshift = [KEY_BITS * (nrows - 1 - r) for r in range(nrows)]
        # per-variable key contributions; key is linear in the exponents
        self._varkey = [sum(row[i] << s for row, s in zip(self.order.weights, self._wshift)) for i in range(nvars)]
        if self._grevlex:
            self._varkey = [((1 << (EXP_BITS * i)) * self._R) & self._mask for i in range(nvars)]

    # -- identity ------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        return isinstance(other, PolyRing) and self.n == other.n and self.field == other.field and self.order == other.order

    def __hash__(self) -> int:
        return hash((self.n, self.field, self.order))

    def __repr__(self) -> str:
        return f"PolyRing({self.n}, {self.field}, {self.order.name})"

    def header(self) -> str:
        return f"ring {self.field} {self.n} {self.order.name}"

    def with_names(self, names: Sequence[str]) -> "PolyRing":
        return PolyRing(self.n, self.field, self.order, names)

    def with_field(self, field: FieldSpec) -> "PolyRing":
        return PolyRing(self.n, field, self.order, self.names)

    # -- monomials -----------------------------------------------------
    def mono(self, exps: Sequence[int]) -> int:
        if len(exps) != self.n:
            raise ArityMismatch(f"expected {self.n} exponents, got {len(exps)}")
        m = 0
        for i, e in enumerate(exps):
            if e < 0 or e > MAX_EXP:
                raise ValueError(f"exponent {e} out of range")
            m |= e << (EXP_BITS * i)
        return m

    def exps(self, m: int) -> tuple[int, ...]:
        return tuple((m >> (EXP_BITS * i)) & _FIELD for i in range(self.n))

    def var_mono(self, i: int, e: int = 1) -> int:
        return e << (EXP_BITS * i)

    def deg(self, m: int) -> int:
        return (((m * self._R) & self._mask) >> self._degshift) & _FIELD if self.n else 0

    def key(self, m: int) -> int:
        if self._grevlex:
            return (m * self._R) & self._mask
        k = 0
        for i, e in enumerate(self.exps(m)):
            if e:
                k += e * self._varkey[i]
        return k

    def divides(self, a: int, b: int) -> bool:
        return not ((b - a) & self.guard)

    def lcm(self, a: int, b: int) -> int:
        out = 0
        for i in range(self.n):
            s = EXP_BITS * i
            out |= max((a >> s) & _FIELD, (b >> s) & _FIELD) << s
        return out

    def gcd_mono(self, a: int, b: int) -> int:
        out = 0
        for i in range(self.n):
            s = EXP_BITS * i
            out |= min((a >> s) & _FIELD, (b >> s) & _FIELD) << s
        return out

    def coprime(self, a: int, b: int) -> bool:
        return self.gcd_mono(a, b) == 0

    def monomials_of_degree(self, d: int) -> list[int]:
        """All monomials of total degree d, sorted descending in the ring order."""
        out: list[int] = []

        def rec(i: int, left: int, acc: int) -> None:
            if i == self.n - 1:
                out.append(acc | (left << (EXP_BITS * i)))
                return
            for e in range(left, -1, -1):
                rec(i + 1, left - e, acc | (e << (EXP_BITS * i)))

        if self.n == 0:
            return [0] if d == 0 else []
        rec(0, d, 0)
        out.sort(key=self.key, reverse=True)
        return out

    def format_mono(self, m: int, names: Sequence[str] | None = None) -> str:
        names = names or self.names
        parts = []
        for i, e in enumerate(self.exps(m)):
            if e == 1:
                parts.append(names[i])
            elif e:
                parts.append(f"{names[i]}^{e}")
        return "*".join(parts)

    # -- constructors --------------------------------------------------
    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c) -> "Polynomial":
        c = self.field(c)
        return Polynomial(self, {0: c} if c != 0 else {})

    def gen(self, i: int) -> "Polynomial":
        if not 0 <= i < self.n:
            raise IndexError(i)
        return Polynomial(self, {self.var_mono(i): self.field.one()})

    def gens(self) -> list["Polynomial"]:
        return [self.gen(i) for i in range(self.n)]

    def monomial(self, exps: Sequence[int], c=1) -> "Polynomial":
        return Polynomial.from_dict(self, {self.mono(exps): c})

    def from_terms(self, terms: Iterable[tuple[Sequence[int], object]]) -> "Polynomial":
        acc: dict[int, Scalar] = {}
        f = self.field
        for e, c in terms:
            m = self.mono(e)
            acc[m] = f.add(acc.get(m, f.zero()), f(c))
        return Polynomial.from_dict(self, acc)

    def __call__(self, x) -> "Polynomial":
        if isinstance(x, Polynomial):
            if x.ring != self:
                raise RingMismatch("polynomial from another ring")
            return x
        if isinstance(x, str):
            return self.parse(x)
        return self.const(x)

    # -- text ------------------------------------------------------------
    def parse(self, text: str, names: Sequence[str] | None = None, line: int | None = None) -> "Polynomial":
        return _Parser(self, text, names or self.names, line).parse()

    def parse_canonical(self, text: str, line: int | None = None) -> "Polynomial":
        return _Parser(self, text, tuple(f"x{i}" for i in range(self.n)), line).parse()


class Polynomial:
    """Immutable sparse polynomial: ``terms`` maps packed monomials to nonzero scalars."""

    __slots__ = ("ring", "terms", "_sorted", "_hash")

    def __init__(self, ring: PolyRing, terms: dict[int, Scalar]):
        self.ring = ring
        self.terms = terms
        self._sorted: list[tuple[int, Scalar]] | None = None
        self._hash: int | None = None

    @classmethod
    def from_dict(cls, ring: PolyRing, terms: Mapping[int, object]) -> "Polynomial":
        f = ring.field
        out = {}
        for m, c in terms.items():
            c = f(c)
            if c != 0:
                out[m] = c
        return cls(ring, out)

    # -- structure -----------------------------------------------------
    def sorted_terms(self) -> list[tuple[int, Scalar]]:
        """Terms in descending monomial order."""
        if self._sorted is None:
            key = self.ring.key
            self._sorted = sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)
        return self._sorted

    def __iter__(self) -> Iterator[tuple[int, Scalar]]:
        return iter(self.sorted_terms())

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def constant_coefficient(self) -> Scalar:
        return self.terms.get(0, self.ring.field.zero())

    def leading_monomial(self) -> int:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return self.sorted_terms()[0][0]

    def leading_coefficient(self) -> Scalar:
        if not self.terms:
            return self.ring.field.zero()
        return self.sorted_terms()[0][1]

    def leading_exponents(self) -> tuple[int, ...]:
        return self.ring.exps(self.leading_monomial())

    def degree(self) -> int:
        if not self.terms:
            return -1
        deg = self.ring.deg
        return max(deg(m) for m in self.terms)

    def degree_in(self, i: int) -> int:
        s = EXP_BITS * i
        return max(((m >> s) & _FIELD for m in self.terms), default=-1)

    def variables(self) -> list[int]:
        used = 0
        for m in self.terms:
            used |= m
        return [i for i in range(self.ring.n) if (used >> (EXP_BITS * i)) & _FIELD]

    def is_homogeneous(self) -> bool:
        deg = self.ring.deg
        return len({deg(m) for m in self.terms}) <= 1

    def homogeneous_components(self) -> dict[int, "Polynomial"]:
        deg = self.ring.deg
        parts: dict[int, dict[int, Scalar]] = {}
        for m, c in self.terms.items():
            parts.setdefault(deg(m), {})[m] = c
        return {d: Polynomial(self.ring, t) for d, t in sorted(parts.items())}

    def lowest_form(self) -> "Polynomial":
        comps = self.homogeneous_components()
        return comps[min(comps)] if comps else self

    def coefficient(self, exps: Sequence[int]) -> Scalar:
        return self.terms.get(self.ring.mono(exps), self.ring.field.zero())

    # -- arithmetic ----------------------------------------------------
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring} vs {other.ring}")
            return other
        return self.ring.const(other)

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        p = self.ring.field.p
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v = (v + c) % p if p else v + c
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        neg = self.ring.field.neg
        return Polynomial(self.ring, {m: neg(c) for m, c in self.terms.items()})

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._coerce(other) - self

    def scale(self, c) -> "Polynomial":
        f = self.ring.field
        c = f(c)
        if c == 0:
            return self.ring.zero()
        return Polynomial(self.ring, {m: f.mul(c, v) for m, v in self.terms.items()})

    def mul_monomial(self, mono: int, c=1) -> "Polynomial":
        f = self.ring.field
        c = f(c)
        if c == 0:
            return self.ring.zero()
        return Polynomial(self.ring, {m + mono: f.mul(c, v) for m, v in self.terms.items()})

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            return self.scale(other)
        other = self._coerce(other)
        if len(self.terms) > len(other.terms):
            a, b = self.terms, other.terms
        else:
            a, b = other.terms, self.terms
        p = self.ring.field.p
        out: dict[int, Scalar] = {}
        get = out.get
        for m2, c2 in b.items():
            for m1, c1 in a.items():
                m = m1 + m2
                v = get(m)
                out[m] = c1 * c2 if v is None else v + c1 * c2
        if p:
            out = {m: v % p for m, v in out.items() if v % p}
        else:
            out = {m: v for m, v in out.items() if v}
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Polynomial":
        if e < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        return self.scale(self.ring.field.inv(self.leading_coefficient()))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == self.ring.const(other).terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    # -- calculus and substitution --------------------------------------
    def derivative(self, i: int) -> "Polynomial":
        f = self.ring.field
        s = EXP_BITS * i
        one = 1 << s
        out = {}
        for m, c in self.terms.items():
            e = (m >> s) & _FIELD
            if e:
                v = f.mul(f(e), c)
                if v != 0:
                    out[m - one] = v
        return Polynomial(self.ring, out)

    def evaluate(self, point: Sequence) -> Scalar:
        f = self.ring.field
        pt = [f(x) for x in point]
        if len(pt) != self.ring.n:
            raise ArityMismatch(f"point has {len(pt)} coordinates, ring has {self.ring.n}")
        total = f.zero()
        powers: dict[tuple[int, int], Scalar] = {}
        for m, c in self.terms.items():
            v = c
            for i, e in enumerate(self.ring.exps(m)):
                if e:
                    pw = powers.get((i, e))
                    if pw is None:
                        pw = powers[(i, e)] = f.pow(pt[i], e)
                    v = f.mul(v, pw)
            total = f.add(total, v)
        return total

    def __call__(self, *point) -> Scalar:
        if len(point) == 1 and isinstance(point[0], (list, tuple)):
            point = point[0]
        return self.evaluate(point)

    def substitute(self, images: Sequence["Polynomial"], target: PolyRing | None = None) -> "Polynomial":
        """Replace x_i by ``images[i]`` (all in ``target``) and expand."""
        return compose(PolyMap(images, target), self)

    def rename(self, target: PolyRing, index_map: Sequence[int]) -> "Polynomial":
        """Move to ``target`` sending x_i to x_{index_map[i]} (a monomial relabelling)."""
        out: dict[int, Scalar] = {}
        f = target.field
        for m, c in self.terms.items():
            nm = 0
            for i, e in enumerate(self.ring.exps(m)):
                if e:
                    nm += e << (EXP_BITS * index_map[i])
            out[nm] = f.add(out.get(nm, f.zero()), f(c))
        return Polynomial.from_dict(target, out)

    def change_field(self, target: PolyRing) -> "Polynomial":
        """Reduce (or lift) coefficients into the field of ``target`` (same arity)."""
        if target.n != self.ring.n:
            raise ArityMismatch("rings of different arity")
        return Polynomial.from_dict(target, {m: target.field(c) for m, c in self.terms.items()})

    # -- text ------------------------------------------------------------
    def to_text(self) -> str:
        """Canonical serialization: descending terms, ``c*x0^e0*...`` joined by `` + ``."""
        if not self.terms:
            return "0"
        names = [f"x{i}" for i in range(self.ring.n)]
        parts = []
        for m, c in self.sorted_terms():
            ms = self.ring.format_mono(m, names)
            parts.append(f"{c}*{ms}" if ms else f"{c}")
        return " + ".join(parts)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        f = self.ring.field
        out = []
        for m, c in self.sorted_terms():
            ms = self.ring.format_mono(m)
            if f.is_prime_field and c > f.p // 2:
                sign, mag = "-", f.p - c
            elif not f.is_prime_field and c < 0:
                sign, mag = "-", -c
            else:
                sign, mag = "+", c
            body = ms if (mag == 1 and ms) else (f"{mag}*{ms}" if ms else f"{mag}")
            out.append((sign, body))
        s = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sign, body in out[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self) -> str:
        return f"Polynomial({self})"


class PolyMap:
    """A list of polynomials in a common ring: the images of target coordinates."""

    def __init__(self, coords: Sequence[Polynomial], ring: PolyRing | None = None):
        coords = list(coords)
        if ring is None:
            if not coords:
                raise ValueError("empty map needs an explicit ring")
            ring = coords[0].ring
        self.ring = ring
        self.coords = [ring(c) for c in coords]

    def __len__(self) -> int:
        return len(self.coords)

    def __getitem__(self, i: int) -> Polynomial:
        return self.coords[i]

    def __call__(self, f: Polynomial) -> Polynomial:
        return compose(self, f)

    def is_homogeneous(self) -> bool:
        degs = {c.degree() for c in self.coords if c}
        return all(c.is_homogeneous() for c in self.coords) and len(degs) <= 1

    def then(self, other: "PolyMap") -> "PolyMap":
        """The map x -> other(self(x)): substitute self into other's coordinates."""
        return PolyMap([compose(self, c) for c in other.coords], self.ring)

    @classmethod
    def identity(cls, ring: PolyRing) -> "PolyMap":
        return cls(ring.gens(), ring)


def compose(pmap: PolyMap, f: Polynomial) -> Polynomial:
    """Substitute the coordinates of ``pmap`` for the variables of ``f``."""
    if len(pmap.coords) != f.ring.n:
        raise ArityMismatch(f"map has {len(pmap.coords)} coordinates, polynomial ring has {f.ring.n} variables")
    target = pmap.ring
    tf = target.field
    p = tf.p
    powers: list[dict[int, Polynomial]] = [{1: c} for c in pmap.coords]

    def power(i: int, e: int) -> Polynomial:
        cache = powers[i]
        v = cache.get(e)
        if v is None:
            h = e // 2
            v = power(i, h) * power(i, e - h)
            cache[e] = v
        return v

    acc: dict[int, Scalar] = {}
    for m, c in f.terms.items():
        term: Polynomial | None = None
        for i, e in enumerate(f.ring.exps(m)):
            if e:
                pw = power(i, e)
                term = pw if term is None else term * pw
                if not term:
                    break
        c = tf(c)
        if term is None:
            items = [(0, 1)]
        else:
            items = term.terms.items()
        for tm, tc in items:
            v = acc.get(tm)
            w = c * tc
            acc[tm] = w if v is None else v + w
    if p:
        out = {m: v % p for m, v in acc.items() if v % p}
    else:
        out = {m: v for m, v in acc.items() if v}
    return Polynomial(target, out)


def partial_derivative(f: Polynomial, i: int) -> Polynomial:
    return f.derivative(i)


def lowest_form_at_point(f: Polynomial, chart: int, point: Sequence) -> Polynomial:
    """Dehomogenize at ``x_chart = 1``, move ``point`` to the origin and return
    the nonzero homogeneous component of lowest degree."""
    ring = f.ring
    fld = ring.field
    pt = [fld(x) for x in point]
    if pt[chart] != 1:
        raise PointNotOnVariety(f"point is not normalized on chart x{chart}")
    if f.evaluate(pt) != 0:
        raise PointNotOnVariety("polynomial does not vanish at the point")
    images = []
    for i in range(ring.n):
        if i == chart:
            images.append(ring.one())
        else:
            images.append(ring.gen(i) + pt[i])
    g = compose(PolyMap(images, ring), f)
    if not g:
        return g
    return g.lowest_form()


def homogenize(f: Polynomial, target: PolyRing, h: int, index_map: Sequence[int]) -> Polynomial:
    """Homogenize ``f`` into ``target`` with homogenizing variable ``x_h``;
    the variables of ``f`` go to ``index_map``."""
    d = f.degree()
    out: dict[int, Scalar] = {}
    for m, c in f.terms.items():
        e = f.ring.exps(m)
        nm = (d - sum(e)) << (EXP_BITS * h)
        for i, ei in enumerate(e):
            if ei:
                nm += ei << (EXP_BITS * index_map[i])
        out[nm] = target.field(c)
    return Polynomial.from_dict(target, out)


# ---------------------------------------------------------------------------
# univariate utilities (dense coefficient lists, lowest degree first)


def _trim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def to_univariate(f: Polynomial) -> tuple[int | None, list[Scalar]]:
    """(variable index, coefficients low-to-high); constants give index None."""
    vs = f.variables()
    if len(vs) > 1:
        raise NotUnivariate(f"polynomial involves {len(vs)} variables")
    if not vs:
        return None, _trim([f.constant_coefficient()])
    i = vs[0]
    coeffs = [f.ring.field.zero()] * (f.degree_in(i) + 1)
    for m, c in f.terms.items():
        coeffs[(m >> (EXP_BITS * i)) & _FIELD] = c
    return i, coeffs


def upoly_divmod(a: list, b: list, field: FieldSpec) -> tuple[list, list]:
    a = _trim(list(a))
    b = _trim(list(b))
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    q = [field.zero()] * max(len(a) - len(b) + 1, 0)
    inv = field.inv(b[-1])
    while len(a) >= len(b) and a:
        c = field.mul(a[-1], inv)
        k = len(a) - len(b)
        q[k] = c
        for i, bc in enumerate(b):
            a[i + k] = field.sub(a[i + k], field.mul(c, bc))
        _trim(a)
    return _trim(q), a


def upoly_gcd(a: list, b: list, field: FieldSpec) -> list:
    """Monic gcd (empty list for gcd(0, 0))."""
    a = _trim(list(a))
    b = _trim(list(b))
    while b:
        _, r = upoly_divmod(a, b, field)
        a, b = b, r
    if not a:
        return a
    inv = field.inv(a[-1])
    return [field.mul(c, inv) for c in a]


def upoly_derivative(a: list, field: FieldSpec) -> list:
    return _trim([field.mul(field(i), c) for i, c in enumerate(a)][1:])


def upoly_eval(a: list, x, field: FieldSpec) -> Scalar:
    acc = field.zero()
    for c in reversed(a):
        acc = field.add(field.mul(acc, x), c)
    return acc


def univariate_gcd(f: Polynomial, g: Polynomial) -> Polynomial:
    i, a = to_univariate(f)
    j, b = to_univariate(g)
    if i is not None and j is not None and i != j:
        raise NotUnivariate("polynomials in different variables")
    v = i if i is not None else j
    c = upoly_gcd(a, b, f.ring.field)
    if v is None:
        return f.ring.const(c[0]) if c else f.ring.zero()
    return f.ring.from_terms((tuple(k if t == v else 0 for t in range(f.ring.n)), x) for k, x in enumerate(c))


def is_squarefree(f: Polynomial) -> bool:
    """True when gcd(f, f') is constant (f nonzero)."""
    _, a = to_univariate(f)
    if not a:
        return False
    g = upoly_gcd(a, upoly_derivative(a, f.ring.field), f.ring.field)
    return len(g) <= 1


def roots_over_fp(f: Polynomial) -> list[int]:
    """All roots in F_p by exhaustive scan."""
    fld = f.ring.field
    _, a = to_univariate(f)
    if not a:
        raise ValueError("zero polynomial")
    return [x for x in fld.elements() if upoly_eval(a, x, fld) == 0]


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*^()]))")


class _Parser:
    def __init__(self, ring: PolyRing, text: str, names: Sequence[str], line: int | None):
        self.ring = ring
        self.line = line
        self.index = {n: i for i, n in enumerate(names)}
        self.toks: list[tuple[str, str]] = []
        pos = 0
        text = text.strip()
        while pos < len(text):
            mt = _TOKEN.match(text, pos)
            if not mt or mt.end() == pos:
                raise ParseError(f"unexpected character {text[pos]!r} at column {pos + 1}", line)
            num, name, op = mt.groups()
            if num is not None:
                self.toks.append(("num", num))
            elif name is not None:
                self.toks.append(("name", name))
            elif op is not None:
                self.toks.append(("op", "^" if op == "**" else op))
            pos = mt.end()
            while pos < len(text) and text[pos].isspace():
                pos += 1
        self.pos = 0

    def peek(self) -> tuple[str, str] | None:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def take(self) -> tuple[str, str]:
        t = self.peek()
        if t is None:
            raise ParseError("unexpected end of input", self.line)
        self.pos += 1
        return t

    def parse(self) -> Polynomial:
        if not self.toks:
            raise ParseError("empty polynomial", self.line)
        v = self.expr()
        if self.peek() is not None:
            raise ParseError(f"unexpected token {self.peek()[1]!r}", self.line)
        return v

    def expr(self) -> Polynomial:
        v = self.term()
        while (t := self.peek()) is not None and t[0] == "op" and t[1] in "+-":
            self.take()
            w = self.term()
            v = v + w if t[1] == "+" else v - w
        return v

    def term(self) -> Polynomial:
        v = self.factor()
        while (t := self.peek()) is not None and (
            (t[0] == "op" and t[1] == "*") or t[0] in ("name", "num") or t == ("op", "(")
        ):
            if t == ("op", "*"):
                self.take()
            v = v * self.factor()
        return v

    def factor(self) -> Polynomial:
        t = self.peek()
        if t is not None and t[0] == "op" and t[1] in "+-":
            self.take()
            v = self.factor()
            return -v if t[1] == "-" else v
        base = self.atom()
        if (t := self.peek()) is not None and t == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num" or "/" in val:
                raise ParseError("exponent must be a non-negative integer", self.line)
            return base ** int(val)
        return base

    def atom(self) -> Polynomial:
        kind, val = self.take()
        if kind == "num":
            return self.ring.const(Fraction(val))
        if kind == "name":
            if val not in self.index:
                raise ParseError(f"unknown variable {val!r}", self.line)
            return self.ring.gen(self.index[val])
        if val == "(":
            v = self.expr()
            if self.take() != ("op", ")"):
                raise ParseError("expected ')'", self.line)
            return v
        raise ParseError(f"unexpected token {val!r}", self.line)
