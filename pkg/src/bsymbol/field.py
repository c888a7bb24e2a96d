"""Exact arithmetic in the tower F_p <= F_q <= F_{q^r}.

Elements are packed integers: an element of F_{p^m} is the integer
``sum(c_j * p**j)`` of its coordinate vector over F_p.  The tower is
nested consistently, so an element of F_q (``t`` digits) is literally the
same integer when viewed inside F_{q^r} (``t*r`` digits), and addition in
every level is digit-wise addition mod p.  Multiplication goes through
discrete-log tables built from a primitive element.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Literal, Sequence

import numpy as np

from .errors import (
    DegreeMismatchError,
    NonDivisorError,
    NonPrimePError,
    NonPrimitivePolynomialError,
    NotCoprimeError,
    ZeroElementError,
)

__all__ = [
    "FieldSpec",
    "FieldTables",
    "GaloisField",
    "build_field",
    "class_index",
    "default_poly_q",
    "default_poly_qr",
    "default_spec",
    "factorize",
    "is_prime",
    "mult_order",
    "subfield",
    "trace_to",
]

#: largest field order the table builder accepts
MAX_FIELD_ORDER = 1 << 24

_TRACE_CHUNK = 1 << 16


# --------------------------------------------------------------------------
# integer helpers


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of ``n >= 1`` by trial division."""
    out: dict[int, int] = {}
    f = 2
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _totient(n: int) -> int:
    phi = n
    for ell in factorize(n):
        phi = phi // ell * (ell - 1)
    return phi


def mult_order(w: int, v: int) -> int:
    """Multiplicative order of ``w`` modulo ``v``.

    Starts from the group order phi(v) and strips prime factors while the
    power stays congruent to 1.
    """
    if v < 1:
        raise ValueError(f"modulus must be positive, got {v}")
    if gcd(v, w) != 1:
        raise NotCoprimeError(f"gcd({v}, {w}) != 1")
    if v == 1:
        return 1
    e = _totient(v)
    for ell in factorize(e):
        while e % ell == 0 and pow(w, e // ell, v) == 1:
            e //= ell
    return e


# --------------------------------------------------------------------------
# field levels


class _PrimeField:
    """F_p with plain modular arithmetic; only used as the bottom of a tower."""

    def __init__(self, p: int):
        self.p = p
        self.m = 1
        self.order = p

    def add(self, x: int, y: int) -> int:
        return (x + y) % self.p

    def neg(self, x: int) -> int:
        return (-x) % self.p

    def mul(self, x: int, y: int) -> int:
        return (x * y) % self.p


class GaloisField:
    """One level of the tower: a simple extension with log/antilog tables.

    ``poly`` is the ascending, monic coefficient list of the defining
    polynomial over ``base``; its root is the primitive element whose
    powers fill ``antilog``.
    """

    def __init__(self, base, poly: Sequence[int]):
        self.base = base
        self.poly = tuple(int(c) for c in poly)
        self.degree = len(self.poly) - 1
        self.p = base.p
        self.m = base.m * self.degree
        self.order = base.order ** self.degree
        antilog = _walk_powers(base, self.poly, self.order)
        self._exp: list[int] = antilog
        self._log: list[int] = [-1] * self.order
        for k, x in enumerate(antilog):
            self._log[x] = k
        self.antilog = np.asarray(antilog, dtype=np.int64)
        self.log_table = np.asarray(self._log, dtype=np.int64)
        self._pows = [self.p ** j for j in range(self.m)]

    def __repr__(self) -> str:
        return f"GaloisField(p={self.p}, m={self.m}, poly={self.poly})"

    # additive structure (digit-wise mod p)
    def add(self, x: int, y: int) -> int:
        p = self.p
        if p == 2:
            return x ^ y
        out, scale = 0, 1
        while x or y:
            out += ((x % p + y % p) % p) * scale
            x //= p
            y //= p
            scale *= p
        return out

    def neg(self, x: int) -> int:
        p = self.p
        if p == 2:
            return x
        out, scale = 0, 1
        while x:
            out += ((-(x % p)) % p) * scale
            x //= p
            scale *= p
        return out

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    # multiplicative structure (log tables)
    def exp(self, k: int) -> int:
        return self._exp[k % (self.order - 1)]

    def log(self, x: int) -> int:
        if x == 0:
            raise ZeroElementError("log of zero")
        return self._log[x]

    def mul(self, x: int, y: int) -> int:
        if x == 0 or y == 0:
            return 0
        return self._exp[(self._log[x] + self._log[y]) % (self.order - 1)]

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroElementError("inverse of zero")
        return self._exp[(-self._log[x]) % (self.order - 1)]

    def div(self, x: int, y: int) -> int:
        return self.mul(x, self.inv(y))

    def pow(self, x: int, e: int) -> int:
        if x == 0:
            if e < 0:
                raise ZeroElementError("negative power of zero")
            return 1 if e == 0 else 0
        return self._exp[(self._log[x] * e) % (self.order - 1)]

    def digits(self, x: int) -> list[int]:
        return [(x // s) % self.p for s in self._pows]

    def absolute_trace(self, x: int) -> int:
        """Trace down to the prime field: sum of x^(p^j), j < m."""
        acc = 0
        for j in range(self.m):
            acc = self.add(acc, self.pow(x, self.p ** j))
        return acc


def _walk_powers(base, poly: tuple[int, ...], order: int) -> list[int]:
    """Powers 1, x, x^2, ... of x modulo ``poly``; fails unless x is primitive."""
    deg = len(poly) - 1
    if poly[0] == 0:
        raise NonPrimitivePolynomialError(f"{poly}: zero constant term")
    qb = base.order
    negpoly = [base.neg(c) for c in poly[:-1]]
    place = [qb ** j for j in range(deg)]
    coords = [1] + [0] * (deg - 1)
    out = [0] * (order - 1)
    for k in range(order - 1):
        packed = sum(c * s for c, s in zip(coords, place))
        if k and packed == 1:
            raise NonPrimitivePolynomialError(
                f"{poly}: root has order {k} < {order - 1}")
        out[k] = packed
        top = coords[-1]
        coords = [0] + coords[:-1]
        if top:
            for j in range(deg):
                coords[j] = base.add(coords[j], base.mul(top, negpoly[j]))
    if sum(c * s for c, s in zip(coords, place)) != 1:
        raise NonPrimitivePolynomialError(f"{poly}: root is not a unit of order {order - 1}")
    return out


# --------------------------------------------------------------------------
# primitive polynomial search


def _polymulmod(base, a: list[int], b: list[int], neg_tail: list[int]) -> list[int]:
    deg = len(neg_tail)
    prod = [0] * (2 * deg - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    prod[i + j] = base.add(prod[i + j], base.mul(ai, bj))
    # x^deg == sum(neg_tail[j] x^j)
    for k in range(len(prod) - 1, deg - 1, -1):
        top = prod[k]
        if top:
            prod[k] = 0
            for j in range(deg):
                prod[k - deg + j] = base.add(prod[k - deg + j], base.mul(top, neg_tail[j]))
    return prod[:deg]


def _x_power(base, poly: tuple[int, ...], e: int) -> list[int]:
    deg = len(poly) - 1
    neg_tail = [base.neg(c) for c in poly[:-1]]
    result = [1] + [0] * (deg - 1)
    if deg == 1:
        sq = [neg_tail[0]]
    else:
        sq = [0, 1] + [0] * (deg - 2)
    while e:
        if e & 1:
            result = _polymulmod(base, result, sq, neg_tail)
        e >>= 1
        if e:
            sq = _polymulmod(base, sq, sq, neg_tail)
    return result


def _is_primitive(base, poly: tuple[int, ...]) -> bool:
    if poly[0] == 0:
        return False
    deg = len(poly) - 1
    e = base.order ** deg - 1
    one = [1] + [0] * (deg - 1)
    if _x_power(base, poly, e) != one:
        return False
    return all(_x_power(base, poly, e // ell) != one for ell in factorize(e))


def smallest_primitive_poly(base, degree: int) -> tuple[int, ...]:
    """Lexicographically smallest monic primitive polynomial of ``degree``.

    Coefficient tuples are compared from the constant term upwards, with
    base-field elements ordered by their packed integer value.
    """
    for tail in itertools.product(range(base.order), repeat=degree):
        if tail[0] == 0:
            continue
        poly = tail + (1,)
        if _is_primitive(base, poly):
            return poly
    raise NonPrimitivePolynomialError(f"no primitive polynomial of degree {degree}")


# --------------------------------------------------------------------------
# the tower


@dataclass(frozen=True)
class FieldSpec:
    """Defining data for F_p <= F_q = F_{p^t} <= F_{q^r}.

    ``poly_q`` has entries in [0, p); ``poly_qr`` has entries that are
    packed F_q elements.  Both are ascending and monic.
    """

    p: int
    t: int
    r: int
    poly_q: tuple[int, ...]
    poly_qr: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p ** self.t

    @property
    def order(self) -> int:
        return self.q ** self.r

    def as_dict(self) -> dict:
        return {"p": self.p, "t": self.t, "r": self.r,
                "poly_q": list(self.poly_q), "poly_qr": list(self.poly_qr)}


def _check_degrees(p: int, t: int, r: int) -> None:
    if not is_prime(p):
        raise NonPrimePError(f"p={p} is not prime")
    if t < 1 or r < 1:
        raise DegreeMismatchError(f"extension degrees must be >= 1 (t={t}, r={r})")
    if (p ** t) ** r > MAX_FIELD_ORDER:
        raise DegreeMismatchError(f"q^r = {(p ** t) ** r} exceeds {MAX_FIELD_ORDER}")


def subfield(p: int, poly_q: Sequence[int]) -> GaloisField:
    """F_q = F_p[x]/(poly_q), cached; also validates ``poly_q``."""
    if not is_prime(p):
        raise NonPrimePError(f"p={p} is not prime")
    poly_q = tuple(int(c) for c in poly_q)
    if len(poly_q) < 2 or poly_q[-1] != 1 or any(not 0 <= c < p for c in poly_q):
        raise DegreeMismatchError(f"poly_q must be monic with coefficients in [0, {p}): {poly_q}")
    return _cached_level(p, poly_q)


@lru_cache(maxsize=None)
def default_poly_q(p: int, t: int) -> tuple[int, ...]:
    return smallest_primitive_poly(_PrimeField(p), t)


@lru_cache(maxsize=None)
def default_poly_qr(p: int, poly_q: tuple[int, ...], r: int) -> tuple[int, ...]:
    return smallest_primitive_poly(subfield(p, poly_q), r)


def default_spec(p: int, t: int, r: int, poly_q: Sequence[int] | None = None) -> FieldSpec:
    """FieldSpec using the smallest primitive polynomial at each level left unspecified."""
    _check_degrees(p, t, r)
    pq = default_poly_q(p, t) if poly_q is None else tuple(poly_q)
    return FieldSpec(p, t, r, pq, default_poly_qr(p, pq, r))


@lru_cache(maxsize=64)
def _cached_level(p: int, poly_q: tuple[int, ...]) -> GaloisField:
    return GaloisField(_PrimeField(p), poly_q)


@dataclass(eq=False)
class FieldTables:
    """Arithmetic context for one tower, with precomputed trace tables.

    ``trace_q[k]`` and ``trace_p[k]`` hold Tr_{q^r/q}(gamma^k) and
    Tr_{q^r/p}(gamma^k), each obtained by summing the Galois orbit.
    Instances are read-only after construction.
    """

    spec: FieldSpec
    fq: GaloisField
    field: GaloisField
    trace_q: np.ndarray = field(repr=False)
    trace_p: np.ndarray = field(repr=False)

    @property
    def p(self) -> int:
        return self.spec.p

    @property
    def t(self) -> int:
        return self.spec.t

    @property
    def r(self) -> int:
        return self.spec.r

    @property
    def q(self) -> int:
        return self.spec.q

    @property
    def order(self) -> int:
        return self.field.order

    @property
    def Delta(self) -> int:
        return (self.order - 1) // (self.q - 1)

    @property
    def antilog(self) -> np.ndarray:
        return self.field.antilog

    # thin delegation so callers rarely need ``.field``
    def add(self, x: int, y: int) -> int:
        return self.field.add(x, y)

    def sub(self, x: int, y: int) -> int:
        return self.field.sub(x, y)

    def neg(self, x: int) -> int:
        return self.field.neg(x)

    def mul(self, x: int, y: int) -> int:
        return self.field.mul(x, y)

    def inv(self, x: int) -> int:
        return self.field.inv(x)

    def pow(self, x: int, e: int) -> int:
        return self.field.pow(x, e)

    def gamma(self, k: int = 1) -> int:
        """gamma^k as a packed element."""
        return self.field.exp(k)

    def log(self, x: int) -> int:
        return self.field.log(x)

    def trace_to(self, x: int, target: Literal["q", "p"] = "q") -> int:
        return trace_to(self, x, target)

    def class_index(self, x: int, u: int) -> int:
        return class_index(self, x, u)


def _orbit_trace(gf: GaloisField, frob: int, steps: int, keep_digits: int) -> np.ndarray:
    """sum_{j<steps} gamma^(k * frob^j) for every k, packed to ``keep_digits``."""
    n1 = gf.order - 1
    p, m = gf.p, gf.m
    pows = np.asarray([p ** j for j in range(m)], dtype=np.int64)
    mults = [pow(frob, j, n1) if n1 > 1 else 0 for j in range(steps)]
    out = np.empty(n1, dtype=np.int64)
    for lo in range(0, n1, _TRACE_CHUNK):
        ks = np.arange(lo, min(lo + _TRACE_CHUNK, n1), dtype=np.int64)
        acc = np.zeros((ks.size, m), dtype=np.int64)
        for mult in mults:
            vals = gf.antilog[(ks * mult) % n1]
            acc += (vals[:, None] // pows) % p
        acc %= p
        if np.any(acc[:, keep_digits:]):
            raise RuntimeError("trace left the target subfield; tables are inconsistent")
        out[lo:lo + ks.size] = acc[:, :keep_digits] @ pows[:keep_digits]
    return out


def build_field(spec: FieldSpec) -> FieldTables:
    """Validate ``spec`` and build log/antilog and trace tables.

    Cached per spec, so repeated calls share one immutable table set.
    """
    return _build_field_cached(spec)


@lru_cache(maxsize=32)
def _build_field_cached(spec: FieldSpec) -> FieldTables:
    p, t, r = spec.p, spec.t, spec.r
    _check_degrees(p, t, r)
    if len(spec.poly_q) != t + 1 or spec.poly_q[-1] != 1:
        raise DegreeMismatchError(f"poly_q must be monic of degree {t}: {spec.poly_q}")
    if len(spec.poly_qr) != r + 1 or spec.poly_qr[-1] != 1:
        raise DegreeMismatchError(f"poly_qr must be monic of degree {r}: {spec.poly_qr}")
    if any(not 0 <= c < p for c in spec.poly_q):
        raise DegreeMismatchError(f"poly_q coefficients must lie in [0, {p})")
    q = p ** t
    if any(not 0 <= c < q for c in spec.poly_qr):
        raise DegreeMismatchError(f"poly_qr coefficients must be F_{q} elements in [0, {q})")

    fq = subfield(p, spec.poly_q)
    big = GaloisField(fq, spec.poly_qr)

    delta = (big.order - 1) // (q - 1)
    g = big.exp(delta)
    if g >= q or (q > 2 and gcd(fq.log(g), q - 1) != 1):
        raise RuntimeError("gamma^Delta does not generate F_q^*")

    trace_q = _orbit_trace(big, q, r, t)
    trace_p = _orbit_trace(big, p, r * t, 1)
    return FieldTables(spec, fq, big, trace_q, trace_p)


def trace_to(tables: FieldTables, x: int, target: Literal["q", "p"] = "q") -> int:
    """Trace of ``x`` from F_{q^r} down to F_q or F_p."""
    if x == 0:
        return 0
    k = tables.field.log(x)
    if target == "q":
        return int(tables.trace_q[k])
    if target == "p":
        return int(tables.trace_p[k])
    raise ValueError(f"target must be 'q' or 'p', got {target!r}")


def class_index(tables: FieldTables, x: int, u: int) -> int:
    """Index i with x in the cyclotomic class gamma^i <gamma^u>."""
    if x == 0:
        raise ZeroElementError("zero lies in no cyclotomic class")
    if u < 1 or (tables.order - 1) % u:
        raise NonDivisorError(f"u={u} does not divide q^r - 1 = {tables.order - 1}")
    return tables.field.log(x) % u
