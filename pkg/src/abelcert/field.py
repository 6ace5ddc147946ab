"""Exact scalar fields: prime fields F_p (p odd) and the rationals.

Scalars are plain Python values: ``int`` in ``range(p)`` for a prime field and
:class:`fractions.Fraction` for the rationals.  A :class:`FieldSpec` carries
the arithmetic and, for prime fields, designated roots of unity.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Union

from .errors import NoSuchRoot, PreconditionError, ZeroInverse

Scalar = Union[int, Fraction]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic Miller-Rabin for n < 3.3e24
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    q = 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out


def multiplicative_order(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroInverse("0 has no multiplicative order")
    n = p - 1
    for q in prime_factors(p - 1):
        while n % q == 0 and pow(a, n // q, p) == 1:
            n //= q
    return n


def fp_inv(a: int, p: int) -> int:
    """Inverse of ``a`` modulo the prime ``p``."""
    a %= p
    if a == 0:
        raise ZeroInverse(f"0 is not invertible mod {p}")
    return pow(a, p - 2, p)


def find_root_of_unity(p: int, n: int) -> int:
    """Smallest element of F_p of exact multiplicative order ``n``."""
    if n < 1 or (p - 1) % n:
        raise NoSuchRoot(f"{n} does not divide {p} - 1")
    qs = prime_factors(n)
    for z in range(1, p):
        if pow(z, n, p) == 1 and all(pow(z, n // q, p) != 1 for q in qs):
            return z
    raise NoSuchRoot(f"no element of order {n} mod {p}")  # unreachable for prime p


@dataclass(frozen=True)
class FieldSpec:
    """A prime field (``kind == "prime"``) or the rationals (``kind == "rationals"``).

    ``roots`` maps an order n to the designated element of exact order n.
    """

    kind: str
    p: int | None = None
    roots: tuple[tuple[int, int], ...] = dc_field(default=())

    def __post_init__(self) -> None:
        if self.kind == "prime":
            if self.p is None or self.p == 2 or not is_prime(self.p):
                raise PreconditionError(f"prime field needs an odd prime, got {self.p}")
            for n, z in self.roots:
                if (self.p - 1) % n or multiplicative_order(z, self.p) != n:
                    raise NoSuchRoot(f"{z} is not of exact order {n} mod {self.p}")
        elif self.kind == "rationals":
            if self.p is not None or self.roots:
                raise PreconditionError("the rationals carry no prime and no roots")
        else:
            raise PreconditionError(f"unknown field kind {self.kind!r}")

    @classmethod
    def prime(cls, p: int, roots: Iterable[int] = ()) -> "FieldSpec":
        """F_p with the smallest primitive n-th root designated for every n in ``roots``."""
        if p == 2 or not is_prime(p):
            raise PreconditionError(f"prime field needs an odd prime, got {p}")
        rs = tuple(sorted((n, find_root_of_unity(p, n)) for n in set(roots)))
        return cls("prime", p, rs)

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls("rationals")

    def with_root(self, n: int, z: int) -> "FieldSpec":
        rs = dict(self.roots)
        rs[n] = z % self.p
        return FieldSpec("prime", self.p, tuple(sorted(rs.items())))

    # -- queries -------------------------------------------------------
    @property
    def is_prime_field(self) -> bool:
        return self.kind == "prime"

    @property
    def characteristic(self) -> int:
        return self.p or 0

    def root(self, n: int) -> int:
        """The designated primitive n-th root of unity."""
        if n == 1:
            return 1
        if n == 2 and self.is_prime_field:
            return self.p - 1
        for m, z in self.roots:
            if m == n:
                return z
        if self.is_prime_field and n > 0 and (self.p - 1) % n == 0:
            # derive from a designated root of a multiple of n when available
            for m, z in self.roots:
                if m % n == 0:
                    return pow(z, m // n, self.p)
        raise NoSuchRoot(f"no designated root of order {n} in {self}")

    def __str__(self) -> str:
        return str(self.p) if self.is_prime_field else "Q"

    def to_json(self) -> dict:
        return {"kind": self.kind, "p": self.p, "roots": {str(n): z for n, z in self.roots}}

    # -- arithmetic ----------------------------------------------------
    def __call__(self, c) -> Scalar:
        """Canonical representative of an int or Fraction."""
        if self.p:
            if isinstance(c, Fraction):
                return c.numerator * fp_inv(c.denominator, self.p) % self.p
            return int(c) % self.p
        return Fraction(c)

    def zero(self) -> Scalar:
        return self(0)

    def one(self) -> Scalar:
        return self(1)

    def add(self, a: Scalar, b: Scalar) -> Scalar:
        return (a + b) % self.p if self.p else a + b

    def sub(self, a: Scalar, b: Scalar) -> Scalar:
        return (a - b) % self.p if self.p else a - b

    def mul(self, a: Scalar, b: Scalar) -> Scalar:
        return a * b % self.p if self.p else a * b

    def neg(self, a: Scalar) -> Scalar:
        return -a % self.p if self.p else -a

    def inv(self, a: Scalar) -> Scalar:
        if self.p:
            return fp_inv(a, self.p)
        if a == 0:
            raise ZeroInverse("0 is not invertible in Q")
        return 1 / Fraction(a)

    def div(self, a: Scalar, b: Scalar) -> Scalar:
        return self.mul(a, self.inv(b))

    def pow(self, a: Scalar, e: int) -> Scalar:
        if self.p:
            if e < 0:
                return pow(fp_inv(a, self.p), -e, self.p)
            return pow(a, e, self.p)
        return Fraction(a) ** e

    def elements(self) -> range:
        if not self.p:
            raise PreconditionError("the rationals are not enumerable")
        return range(self.p)

    def format(self, c: Scalar) -> str:
        return str(c)

    def parse_scalar(self, text: str) -> Scalar:
        return self(Fraction(text))
