"""Buchberger's algorithm, normal forms, Hilbert series and tangent cones.

The engine works on an internal representation: every basis element is monic
and stored as its leading monomial plus a tail of ``(mono, key, coef)``
triples sorted descending.  Because order keys are additive, shifting a tail
by a monomial only needs integer additions.  Reduction keeps the working
polynomial in a dict keyed by order key together with a max-heap of pending
keys; pairs are selected by sugar degree and pruned with the Gebauer-Moeller
criteria.
"""

from __future__ import annotations

import hashlib
import heapq
import os
import tempfile
import time
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

from .errors import GroebnerTimeout, ParseError, RingMismatch
from .polyring import EXP_BITS, MonomialOrder, Polynomial, PolyRing, homogenize

_FIELD = (1 << EXP_BITS) - 1


class _Engine:
    """Mutable Buchberger state over one ring."""

    def __init__(self, ring: PolyRing, deadline: float | None = None):
        self.ring = ring
        self.p = ring.field.p
        self.field = ring.field
        self.key = ring.key
        self.guard = ring.guard
        self.deadline = deadline
        self.lm: list[int] = []
        self.lkey: list[int] = []
        self.tail: list[tuple[tuple[int, int, object], ...]] = []
        self.sugar: list[int] = []
        self.reducers: list[int] = []  # indices usable for reduction, insertion order
        self._hit: dict[int, int] = {}
        self._miss: set[int] = set()
        self.steps = 0

    # -- time budget ---------------------------------------------------
    def tick(self) -> None:
        self.steps += 1
        if self.deadline is not None and not self.steps & 255 and time.monotonic() > self.deadline:
            raise GroebnerTimeout("Groebner basis computation exceeded its time budget")

    # -- reducer lookup ------------------------------------------------
    def find(self, m: int) -> int | None:
        r = self._hit.get(m)
        if r is not None:
            return r
        if m in self._miss:
            return None
        guard = self.guard
        lm = self.lm
        for i in self.reducers:
            if not ((m - lm[i]) & guard):
                self._hit[m] = i
                return i
        self._miss.add(m)
        return None

    def add(self, terms: list[tuple[int, int, object]], sugar: int, reducer: bool = True) -> int:
        """Store a monic polynomial given as sorted (mono, key, coef) triples."""
        i = len(self.lm)
        self.lm.append(terms[0][0])
        self.lkey.append(terms[0][1])
        self.tail.append(tuple(terms[1:]))
        self.sugar.append(sugar)
        if reducer:
            self.reducers.append(i)
            self._miss.clear()
        return i

    # -- reduction -----------------------------------------------------
    def reduce(self, acc: dict[int, object], monos: dict[int, int], full: bool = True) -> list[tuple[int, int, object]]:
        """Reduce the polynomial ``{key: coef}`` (with ``monos[key]`` its monomial)
        and return the remainder as sorted triples (not normalized)."""
        heap = [-k for k in acc]
        heapq.heapify(heap)
        out: list[tuple[int, int, object]] = []
        p = self.p
        find = self.find
        lm, lkey, tails = self.lm, self.lkey, self.tail
        pop, push = heapq.heappop, heapq.heappush
        get = acc.get
        while heap:
            k = -pop(heap)
            c = acc.pop(k)
            m = monos.pop(k)
            if not c:
                continue
            r = find(m)
            if r is None:
                out.append((m, k, c))
                if not full:
                    # only top reduction requested: move the rest over verbatim
                    for k2 in sorted((-x for x in heap), reverse=True):
                        c2 = acc.pop(k2)
                        if c2:
                            out.append((monos.pop(k2), k2, c2))
                    break
                continue
            self.tick()
            dm = m - lm[r]
            dk = k - lkey[r]
            if p:
                for tm, tk, tc in tails[r]:
                    nk = tk + dk
                    v = get(nk)
                    if v is None:
                        acc[nk] = -c * tc % p
                        monos[nk] = tm + dm
                        push(heap, -nk)
                    else:
                        acc[nk] = (v - c * tc) % p
            else:
                for tm, tk, tc in tails[r]:
                    nk = tk + dk
                    v = get(nk)
                    if v is None:
                        acc[nk] = -c * tc
                        monos[nk] = tm + dm
                        push(heap, -nk)
                    else:
                        acc[nk] = v - c * tc
        return out

    def monic(self, terms: list[tuple[int, int, object]]) -> list[tuple[int, int, object]]:
        c0 = terms[0][2]
        if c0 == 1:
            return terms
        inv = self.field.inv(c0)
        if self.p:
            p = self.p
            return [(m, k, c * inv % p) for m, k, c in terms]
        return [(m, k, c * inv) for m, k, c in terms]

    def load(self, f: Polynomial) -> tuple[dict[int, object], dict[int, int]]:
        key = self.key
        acc: dict[int, object] = {}
        monos: dict[int, int] = {}
        for m, c in f.terms.items():
            k = key(m)
            acc[k] = c
            monos[k] = m
        return acc, monos

    def spoly(self, i: int, j: int, lcm: int) -> tuple[dict[int, object], dict[int, int]]:
        acc: dict[int, object] = {}
        monos: dict[int, int] = {}
        p = self.p
        lk = self.key(lcm)
        di, dki = lcm - self.lm[i], lk - self.lkey[i]
        for tm, tk, tc in self.tail[i]:
            acc[tk + dki] = tc
            monos[tk + dki] = tm + di
        dj, dkj = lcm - self.lm[j], lk - self.lkey[j]
        for tm, tk, tc in self.tail[j]:
            nk = tk + dkj
            v = acc.get(nk)
            if v is None:
                acc[nk] = -tc % p if p else -tc
                monos[nk] = tm + dj
            else:
                acc[nk] = (v - tc) % p if p else v - tc
        return acc, monos

    def to_poly(self, i: int) -> Polynomial:
        terms = {self.lm[i]: self.field.one()}
        for m, _, c in self.tail[i]:
            terms[m] = c
        return Polynomial(self.ring, terms)


def _lcm(a: int, b: int, nvars: int) -> int:
    out = 0
    for s in range(0, EXP_BITS * nvars, EXP_BITS):
        x, y = (a >> s) & _FIELD, (b >> s) & _FIELD
        out |= (x if x > y else y) << s
    return out


def _gm_update(ring: PolyRing, eng: _Engine, G: list[int], pairs: dict, h: int, heap: list, counter: list[int]) -> list[int]:
    """Gebauer-Moeller update: insert pairs for new element h, prune old pairs,
    and return the new list of active basis indices."""
    n = ring.n
    guard = ring.guard
    lm = eng.lm
    lh = lm[h]

    def divides(a: int, b: int) -> bool:
        return not ((b - a) & guard)

    cands = [(g, _lcm(lh, lm[g], n)) for g in G]
    coprime = {g: (lh + lm[g]) == lc for g, lc in cands}
    # chain criterion among new pairs; equal lcms keep the last one
    kept: list[tuple[int, int]] = []
    for idx, (g, lc) in enumerate(cands):
        if coprime[g]:
            kept.append((g, lc))
            continue
        redundant = False
        for g2, lc2 in cands[idx + 1:]:
            if divides(lc2, lc):
                redundant = True
                break
        if not redundant:
            for g2, lc2 in kept:
                if divides(lc2, lc):
                    redundant = True
                    break
        if not redundant:
            kept.append((g, lc))
    new_pairs = [(g, lc) for g, lc in kept if not coprime[g]]
    # prune old pairs whose lcm is a proper multiple witnessed by h
    for pid, (a, b, lc) in list(pairs.items()):
        if divides(lh, lc) and _lcm(lm[a], lh, n) != lc and _lcm(lh, lm[b], n) != lc:
            del pairs[pid]
    for g, lc in new_pairs:
        sug = max(eng.sugar[h] + ring.deg(lc) - ring.deg(lh), eng.sugar[g] + ring.deg(lc) - ring.deg(lm[g]))
        pid = counter[0]
        counter[0] += 1
        pairs[pid] = (g, h, lc)
        heapq.heappush(heap, (sug, ring.key(lc), pid))
    return [g for g in G if not divides(lh, lm[g])] + [h]


def _buchberger(ring: PolyRing, gens: Sequence[Polynomial], timeout: float | None) -> list[Polynomial]:
    deadline = time.monotonic() + timeout if timeout else None
    eng = _Engine(ring, deadline)
    polys = [g for g in gens if g]
    if not polys:
        return []
    # insert generators in increasing order of degree, each reduced against the previous ones
    polys.sort(key=lambda f: (f.degree(), ring.key(f.leading_monomial()), len(f)))
    G: list[int] = []
    pairs: dict[int, tuple[int, int, int]] = {}
    heap: list = []
    counter = [0]

    def insert(terms: list, sugar: int) -> None:
        nonlocal G
        terms = eng.monic(terms)
        h = eng.add(terms, sugar)
        G = _gm_update(ring, eng, G, pairs, h, heap, counter)

    pending = [(f.degree(), i, f) for i, f in enumerate(polys)]
    heapq.heapify(pending)
    while pending or heap:
        # interleave generators with pairs by sugar so low degrees finish first
        next_pair_sugar = heap[0][0] if heap else None
        if pending and (next_pair_sugar is None or pending[0][0] <= next_pair_sugar):
            deg, _, f = heapq.heappop(pending)
            acc, monos = eng.load(f)
            r = eng.reduce(acc, monos)
            if r:
                insert(r, deg)
            continue
        sug, _, pid = heapq.heappop(heap)
        pr = pairs.pop(pid, None)
        if pr is None:
            continue
        a, b, lc = pr
        acc, monos = eng.spoly(a, b, lc)
        r = eng.reduce(acc, monos)
        if r:
            insert(r, sug)
    return _interreduce(ring, eng, G, deadline)


def _interreduce(ring: PolyRing, eng: _Engine, G: list[int], deadline: float | None) -> list[Polynomial]:
    # G is minimal (GM removes elements whose leading monomial becomes divisible)
    G = sorted(G, key=lambda i: eng.lkey[i])
    fin = _Engine(ring, deadline)
    for i in G:
        fin.add([(eng.lm[i], eng.lkey[i], eng.field.one())] + list(eng.tail[i]), eng.sugar[i])
    out: list[Polynomial] = []
    for idx in range(len(G)):
        # reduce the tail of element idx by all the others
        fin.reducers = [j for j in range(len(G)) if j != idx]
        fin._hit.clear()
        fin._miss.clear()
        acc: dict[int, object] = {}
        monos: dict[int, int] = {}
        for m, k, c in fin.tail[idx]:
            acc[k] = c
            monos[k] = m
        rest = fin.reduce(acc, monos)
        fin.tail[idx] = tuple(rest)
        terms = {fin.lm[idx]: ring.field.one()}
        for m, _, c in rest:
            terms[m] = c
        out.append(Polynomial(ring, terms))
    return out


# ---------------------------------------------------------------------------
# public types


class Ideal:
    """An ideal given by generators in a common ring."""

    def __init__(self, ring: PolyRing, gens: Iterable[Polynomial]):
        self.ring = ring
        gs = []
        for g in gens:
            g = ring(g)
            if g:
                gs.append(g)
        self.gens = tuple(gs)
        self._gb: GroebnerBasis | None = None

    def __repr__(self) -> str:
        return f"Ideal({len(self.gens)} generators in {self.ring})"

    def is_homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.gens)

    def groebner(self, timeout: float | None = None, cache: "GBCache | None" = None) -> "GroebnerBasis":
        if self._gb is None:
            self._gb = buchberger(self, timeout=timeout, cache=cache)
        return self._gb

    def contains(self, f: Polynomial, timeout: float | None = None) -> bool:
        return self.groebner(timeout).contains(f)

    def hilbert(self, timeout: float | None = None) -> "HilbertData":
        return dimension_and_degree(self.groebner(timeout))

    def to_text(self) -> str:
        return "\n".join([self.ring.header()] + [g.to_text() for g in self.gens]) + "\n"


class GroebnerBasis:
    """Reduced Groebner basis: monic, sorted by increasing leading monomial."""

    def __init__(self, ring: PolyRing, polys: Sequence[Polynomial], cache_hit: bool = False):
        self.ring = ring
        self.polys = tuple(polys)
        self.cache_hit = cache_hit
        self._eng: _Engine | None = None

    def __len__(self) -> int:
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GroebnerBasis) and self.ring == other.ring and self.polys == other.polys

    def __hash__(self) -> int:
        return hash(self.polys)

    @property
    def leading_monomials(self) -> list[int]:
        return [g.leading_monomial() for g in self.polys]

    def leading_exponents(self) -> list[tuple[int, ...]]:
        return [self.ring.exps(m) for m in self.leading_monomials]

    def _engine(self) -> _Engine:
        if self._eng is None:
            eng = _Engine(self.ring)
            key = self.ring.key
            for g in self.polys:
                eng.add([(m, key(m), c) for m, c in g.sorted_terms()], g.degree())
            self._eng = eng
        return self._eng

    def normal_form(self, f: Polynomial) -> Polynomial:
        if f.ring != self.ring:
            raise RingMismatch("polynomial and basis live in different rings")
        eng = self._engine()
        acc, monos = eng.load(f)
        rest = eng.reduce(acc, monos)
        return Polynomial(self.ring, {m: c for m, _, c in rest})

    def contains(self, f: Polynomial) -> bool:
        return not self.normal_form(f)

    def is_unit(self) -> bool:
        return len(self.polys) == 1 and self.polys[0].is_constant()

    def to_text(self) -> str:
        return "\n".join([self.ring.header()] + [g.to_text() for g in self.polys]) + "\n"

    def check_buchberger_criterion(self) -> bool:
        """Independent check by plain multivariate division: every S-polynomial
        of basis pairs reduces to zero and the basis is reduced."""
        polys = self.polys
        lms = [g.leading_monomial() for g in polys]
        ring = self.ring
        for i, g in enumerate(polys):
            if g.leading_coefficient() != 1:
                return False
            for j, h in enumerate(polys):
                if i != j and any(ring.divides(lms[j], m) for m in g.terms):
                    return False
        for i in range(len(polys)):
            for j in range(i + 1, len(polys)):
                lc = ring.lcm(lms[i], lms[j])
                s = polys[i].mul_monomial(lc - lms[i]) - polys[j].mul_monomial(lc - lms[j])
                if division_remainder(s, polys):
                    return False
        return True


def division_remainder(f: Polynomial, divisors: Sequence[Polynomial]) -> Polynomial:
    """Textbook multivariate division using only :class:`Polynomial` arithmetic."""
    ring = f.ring
    fld = ring.field
    lms = [(g.leading_monomial(), g.leading_coefficient(), g) for g in divisors if g]
    rem: dict[int, object] = {}
    while f:
        m = f.leading_monomial()
        c = f.leading_coefficient()
        for lm, lc, g in lms:
            if ring.divides(lm, m):
                f = f - g.mul_monomial(m - lm, fld.div(c, lc))
                break
        else:
            rem[m] = c
            f = f - Polynomial(ring, {m: c})
    return Polynomial(ring, rem)


def buchberger(ideal: Ideal, timeout: float | None = None, cache: "GBCache | None" = None) -> GroebnerBasis:
    """Reduced Groebner basis of ``ideal`` in its ring's order."""
    ring = ideal.ring
    if cache is not None:
        hit = cache.get(ideal)
        if hit is not None:
            return hit
    polys = _buchberger(ring, ideal.gens, timeout)
    gb = GroebnerBasis(ring, polys)
    if cache is not None:
        cache.put(ideal, gb)
    return gb


def groebner(gens: Sequence[Polynomial], ring: PolyRing | None = None, timeout: float | None = None) -> GroebnerBasis:
    ring = ring or gens[0].ring
    return buchberger(Ideal(ring, gens), timeout=timeout)


def normal_form(f: Polynomial, gb: GroebnerBasis) -> Polynomial:
    return gb.normal_form(f)


def ideal_equal(a: Ideal, b: Ideal, timeout: float | None = None) -> bool:
    """Mutual containment of generators."""
    if a.ring != b.ring:
        raise RingMismatch("ideals in different rings")
    ga, gb = a.groebner(timeout), b.groebner(timeout)
    return all(gb.contains(g) for g in a.gens) and all(ga.contains(g) for g in b.gens)


def ideal_contains(big: Ideal, small: Ideal, timeout: float | None = None) -> bool:
    g = big.groebner(timeout)
    return all(g.contains(f) for f in small.gens)


# ---------------------------------------------------------------------------
# Hilbert series of monomial ideals


def _minimalize(gens: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    gens = sorted(set(gens), key=lambda e: (sum(e), e))
    out: list[tuple[int, ...]] = []
    for g in gens:
        if not any(all(a <= b for a, b in zip(h, g)) for h in out):
            out.append(g)
    return out


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_add(a: list[int], b: list[int]) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, y in enumerate(b):
        out[i] += y
    return out


def hilbert_numerator(gens: Sequence[Sequence[int]], nvars: int) -> list[int]:
    """Numerator N(t) with sum_t dim (R/I)_t t^t = N(t) / (1-t)^nvars,
    by pivot splitting N(I) = N(I + (x^e)) + t^e N(I : x^e)."""
    memo: dict[frozenset, list[int]] = {}

    def rec(gs: list[tuple[int, ...]]) -> list[int]:
        gs = _minimalize(gs)
        key = frozenset(gs)
        hit = memo.get(key)
        if hit is not None:
            return hit
        if not gs:
            res = [1]
        elif any(sum(g) == 0 for g in gs):
            res = [0]
        else:
            # pairwise coprime supports: product formula
            used = [0] * nvars
            coprime = True
            for g in gs:
                for i, e in enumerate(g):
                    if e:
                        used[i] += 1
                        if used[i] > 1:
                            coprime = False
            if coprime:
                res = [1]
                for g in gs:
                    d = sum(g)
                    res = _poly_mul(res, [1] + [0] * (d - 1) + [-1])
            else:
                # pivot on the most frequent variable, exponent = smallest positive one
                v = max(range(nvars), key=lambda i: (used[i], -i))
                exps = sorted(g[v] for g in gs if g[v])
                e = exps[len(exps) // 2] if len(exps) > 2 else exps[0]
                piv = tuple(e if i == v else 0 for i in range(nvars))
                added = rec(gs + [piv])
                quot = rec([tuple(max(x - (e if i == v else 0), 0) for i, x in enumerate(g)) for g in gs])
                res = _poly_add(added, [0] * e + quot)
        while len(res) > 1 and res[-1] == 0:
            res = res[:-1]
        memo[key] = res
        return res

    return rec([tuple(g) for g in gens])


@dataclass(frozen=True)
class HilbertData:
    """Hilbert series numerator, Hilbert polynomial, projective dimension and degree."""

    nvars: int
    numerator: tuple[int, ...]
    polynomial: tuple[Fraction, ...]  # coefficients of P(t), constant first
    dim: int
    degree: int

    def series_value(self, t: int) -> int:
        """dim_k (R/I)_t from the series."""
        n = self.nvars
        if n == 0:
            return self.numerator[t] if t < len(self.numerator) else 0
        return sum(c * comb(t - i + n - 1, n - 1) for i, c in enumerate(self.numerator) if t - i >= 0)

    def poly_value(self, t: int) -> Fraction:
        return sum((c * t**i for i, c in enumerate(self.polynomial)), Fraction(0))

    def format_polynomial(self) -> str:
        return format_tpoly(self.polynomial)

    def __str__(self) -> str:
        return f"dim {self.dim} degree {self.degree} P(t)={self.format_polynomial()}"

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "degree": self.degree,
            "hilbert_polynomial": self.format_polynomial(),
            "numerator": list(self.numerator),
        }


def format_tpoly(coeffs: Sequence[Fraction]) -> str:
    terms = [(i, Fraction(c)) for i, c in enumerate(coeffs) if c]
    if not terms:
        return "0"
    out = ""
    for i, c in reversed(terms):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if i == 0:
            body = str(mag)
        else:
            cs = "" if mag == 1 else (str(mag) if mag.denominator == 1 else f"({mag})")
            body = cs + ("t" if i == 1 else f"t^{i}")
        if not out:
            out = ("-" if sign == "-" else "") + body
        else:
            out += sign + body
    return out


def hilbert_data_from_monomials(gens: Sequence[Sequence[int]], nvars: int) -> HilbertData:
    num = hilbert_numerator(gens, nvars)
    q = list(num)
    k = nvars
    # divide by (1 - t) while t = 1 is a root
    while k > 0 and sum(q) == 0 and any(q):
        # synthetic division of q(t) by (1 - t): q = (1 - t) r
        r = []
        acc = 0
        for c in q[:-1]:
            acc += c
            r.append(acc)
        q = r
        k -= 1
    if not any(q):
        return HilbertData(nvars, tuple(num), (), -1, 0)
    degree = sum(q)
    if k == 0:
        return HilbertData(nvars, tuple(num), (), -1, 0)
    # P(t) = sum_i q_i * binom(t - i + k - 1, k - 1) as a polynomial in t
    poly = [Fraction(0)] * k
    for i, c in enumerate(q):
        if not c:
            continue
        # binom(t - i + k - 1, k - 1) = prod_{j=1}^{k-1} (t - i + j) / (k-1)!
        term = [Fraction(1)]
        for j in range(1, k):
            a = -i + j
            term = [Fraction(0)] + term  # multiply by t
            for idx in range(len(term) - 1):
                term[idx] += a * term[idx + 1]
        fact = 1
        for j in range(2, k):
            fact *= j
        for idx, v in enumerate(term):
            poly[idx] += c * v / fact
    while poly and poly[-1] == 0:
        poly.pop()
    return HilbertData(nvars, tuple(num), tuple(poly), k - 1, degree)


def saturate_variable(gens: Sequence[Polynomial], i: int, timeout: float | None = None) -> list[Polynomial]:
    """Generators of I : x_i^infinity for a homogeneous ideal I.

    With x_i moved to the last (smallest) grevlex position, dividing every
    element of the reduced basis by its largest power of x_i generates the
    saturation (Bayer's criterion)."""
    ring = gens[0].ring
    if ring.order.name != "grevlex":
        raise ValueError("saturation needs a grevlex ring")
    n = ring.n
    perm = list(range(n))
    perm[i], perm[n - 1] = perm[n - 1], perm[i]
    moved = [g.rename(ring, perm) for g in gens if g]
    gb = buchberger(Ideal(ring, moved), timeout=timeout)
    last = n - 1
    out = []
    for g in gb.polys:
        k = min(ring.exps(m)[last] for m in g.terms)
        if k:
            g = Polynomial.from_dict(ring, {m - (k << (EXP_BITS * last)): c for m, c in g.terms.items()})
        out.append(g.rename(ring, perm))
    return out


def standard_monomial_count(gb: GroebnerBasis) -> int | None:
    """dim_k R/I for a zero-dimensional affine ideal (number of standard
    monomials); None when there are infinitely many."""
    q = hilbert_numerator(gb.leading_exponents(), gb.ring.n)
    k = gb.ring.n
    while k > 0 and sum(q) == 0 and any(q):
        r = []
        acc = 0
        for c in q[:-1]:
            acc += c
            r.append(acc)
        q = r
        k -= 1
    if not any(q):
        return 0
    return sum(q) if k == 0 else None


def dimension_and_degree(gb: GroebnerBasis) -> HilbertData:
    if not all(g.is_homogeneous() for g in gb.polys):
        raise ValueError("Hilbert data needs a homogeneous ideal")
    return hilbert_data_from_monomials(gb.leading_exponents(), gb.ring.n)


# ---------------------------------------------------------------------------
# Jacobian ideals and tangent cones


def poly_det(rows: Sequence[Sequence[Polynomial]]) -> Polynomial:
    """Determinant by Laplace expansion along rows, memoized on column sets."""
    n = len(rows)
    if n == 0:
        raise ValueError("empty matrix")
    ring = rows[0][0].ring
    memo: dict[tuple[int, ...], Polynomial] = {}

    def rec(r: int, cols: tuple[int, ...]) -> Polynomial:
        if r == n:
            return ring.one()
        hit = memo.get(cols)
        if hit is not None:
            return hit
        total = ring.zero()
        for idx, c in enumerate(cols):
            a = rows[r][c]
            if a:
                sub = rec(r + 1, cols[:idx] + cols[idx + 1:])
                total = total - a * sub if idx % 2 else total + a * sub
        memo[cols] = total
        return total

    return rec(0, tuple(range(len(rows[0]))))


def jacobian_ideal(gens: Sequence[Polynomial] | Polynomial, codim: int | None = None) -> Ideal:
    """Hypersurface: f and all partials.  Ideal of codimension c: the generators
    plus all c x c minors of the Jacobian matrix."""
    from itertools import combinations

    if isinstance(gens, Polynomial):
        f = gens
        return Ideal(f.ring, [f] + [f.derivative(i) for i in range(f.ring.n)])
    gens = list(gens)
    ring = gens[0].ring
    c = codim if codim is not None else len(gens)
    jac = [[g.derivative(i) for i in range(ring.n)] for g in gens]
    minors = []
    for rs in combinations(range(len(gens)), c):
        for cs in combinations(range(ring.n), c):
            m = poly_det([[jac[r][col] for col in cs] for r in rs])
            if m:
                minors.append(m)
    return Ideal(ring, gens + minors)


def tangent_cone(gens: Sequence[Polynomial], timeout: float | None = None) -> list[Polynomial]:
    """Generators of the tangent cone at the origin of the affine scheme
    defined by ``gens`` (Lazard's homogenization method)."""
    ring = gens[0].ring
    n = ring.n
    hring = PolyRing(n + 1, ring.field, MonomialOrder.block_local(n + 1))
    index_map = list(range(1, n + 1))
    hom = [homogenize(g, hring, 0, index_map) for g in gens if g]
    gb = buchberger(Ideal(hring, hom), timeout=timeout)
    out = []
    back = ring
    for g in gb.polys:
        terms: dict[int, object] = {}
        for m, c in g.terms.items():
            nm = m >> EXP_BITS  # drop h (index 0)
            terms[nm] = back.field.add(terms.get(nm, back.field.zero()), c)
        deh = Polynomial.from_dict(back, terms)
        if deh:
            out.append(deh.lowest_form())
    return out


def tangent_cone_at_point(gens: Sequence[Polynomial], chart: int, point: Sequence, timeout: float | None = None) -> list[Polynomial]:
    """Tangent cone of the projective scheme ``V(gens)`` at ``point`` (with
    ``point[chart] == 1``); the result lives in the same ring and does not
    involve ``x_chart``."""
    from .polyring import PolyMap, compose
    from .errors import PointNotOnVariety

    ring = gens[0].ring
    pt = [ring.field(x) for x in point]
    if pt[chart] != 1:
        raise PointNotOnVariety("point must be normalized on the chart")
    for g in gens:
        if g.evaluate(pt) != 0:
            raise PointNotOnVariety("a generator does not vanish at the point")
    images = [ring.one() if i == chart else ring.gen(i) + pt[i] for i in range(ring.n)]
    pm = PolyMap(images, ring)
    return tangent_cone([compose(pm, g) for g in gens], timeout)


def multiplicity_at_point(gens: Sequence[Polynomial], chart: int, point: Sequence, timeout: float | None = None) -> int:
    cone = tangent_cone_at_point(gens, chart, point, timeout)
    return Ideal(gens[0].ring, cone).hilbert(timeout).degree


# ---------------------------------------------------------------------------
# text I/O and caching


def parse_ring_header(line: str, lineno: int = 1) -> PolyRing:
    from .field import FieldSpec

    parts = line.split()
    if len(parts) != 4 or parts[0] != "ring":
        raise ParseError("expected header 'ring <p|Q> <n> <order>'", lineno)
    _, fs, ns, order = parts
    try:
        field = FieldSpec.rationals() if fs == "Q" else FieldSpec.prime(int(fs))
        n = int(ns)
    except (ValueError, TypeError) as exc:
        raise ParseError(f"bad ring header: {exc}", lineno) from None
    if order not in ("grevlex", "lex"):
        raise ParseError(f"unsupported order {order!r}", lineno)
    return PolyRing(n, field, order)


def parse_polynomials(text: str) -> tuple[PolyRing, list[Polynomial]]:
    """Parse ``ring`` header plus one polynomial per non-empty line."""
    lines = text.splitlines()
    idx = 0
    while idx < len(lines) and (not lines[idx].strip() or lines[idx].lstrip().startswith("#")):
        idx += 1
    if idx == len(lines):
        raise ParseError("empty input", 1)
    ring = parse_ring_header(lines[idx], idx + 1)
    polys = []
    for j in range(idx + 1, len(lines)):
        s = lines[j].strip()
        if not s or s.startswith("#"):
            continue
        polys.append(ring.parse_canonical(s, line=j + 1))
    return ring, polys


def serialize_polynomials(ring: PolyRing, polys: Sequence[Polynomial]) -> str:
    return "\n".join([ring.header()] + [p.to_text() for p in polys]) + "\n"


class GBCache:
    """Directory of reduced Groebner bases keyed by a hash of the input."""

    def __init__(self, directory: str):
        self.directory = directory
        os.makedirs(directory, exist_ok=True)

    @staticmethod
    def key(ideal: Ideal) -> str:
        h = hashlib.sha256()
        ring = ideal.ring
        h.update(ring.header().encode())
        h.update(repr(ring.order.weights).encode())
        h.update(repr(ring.field.to_json()).encode())
        for g in ideal.gens:
            h.update(b"\n" + g.to_text().encode())
        return h.hexdigest()

    def path(self, ideal: Ideal) -> str:
        return os.path.join(self.directory, self.key(ideal) + ".gb")

    def get(self, ideal: Ideal) -> GroebnerBasis | None:
        path = self.path(ideal)
        if not os.path.exists(path):
            return None
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
        ring = ideal.ring
        polys = [ring.parse_canonical(s, line=i + 2) for i, s in enumerate(lines[1:]) if s.strip()]
        return GroebnerBasis(ring, polys, cache_hit=True)

    def put(self, ideal: Ideal, gb: GroebnerBasis) -> None:
        path = self.path(ideal)
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(gb.to_text())
        os.replace(tmp, path)
