"""Closed forms for one-weight and semiprimitive two-weight codes.

Everything here is integer arithmetic.  Quantities that involve
q^(r/2) are rewritten with q^(r/2) = p^(s*d), which is an integer
whenever u > 1, and every division is checked for exactness.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from math import gcd
from typing import Iterable, Iterator

from .code import CodeParams, WeightEnumerator, check_b
from .errors import (
    CardinalityError,
    NonIntegralWeightError,
    NotCoprimeError,
    NotSemiprimitiveError,
    ParityError,
    UNotOneError,
)
from .field import is_prime, mult_order

__all__ = [
    "MdsReport",
    "MuProfile",
    "PbSet",
    "SemiprimitiveData",
    "build_P",
    "bsymbol_enumerator_closed",
    "bsymbol_weight_value",
    "bsymbol_weights",
    "gaussian_period_closed",
    "hamming_enumerator_closed",
    "hamming_weights",
    "mds_check",
    "mu_profile",
    "one_weight_enumerator",
    "semiprimitive_instances",
    "semiprimitivity",
    "theory_params",
]


def _exact_div(num: int, den: int, what: str) -> int:
    quo, rem = divmod(num, den)
    if rem:
        raise NonIntegralWeightError(f"{what}: {num}/{den} is not an integer")
    return quo


@dataclass(frozen=True)
class SemiprimitiveData:
    u: int
    d: int
    s: int
    delta: int

    def flipped(self) -> "SemiprimitiveData":
        """Copy with delta moved by u//2; a deliberately wrong input for negative controls."""
        return replace(self, delta=(self.delta + self.u // 2) % self.u)

    def as_dict(self) -> dict:
        return {"u": self.u, "d": self.d, "s": self.s, "delta": self.delta}


def semiprimitivity(p: int, u: int) -> int | None:
    """Smallest d >= 1 with u | p^d + 1, or None if p is not semiprimitive mod u."""
    if gcd(p, u) != 1:
        raise NotCoprimeError(f"gcd({p}, {u}) != 1")
    if u <= 2:
        return 1
    e = mult_order(p, u)
    if e % 2 == 0 and pow(p, e // 2, u) == u - 1:
        return e // 2
    return None


def theory_params(params: CodeParams) -> SemiprimitiveData:
    """(u, d, s, delta) for a one-weight or semiprimitive code."""
    p, u = params.p, params.u
    if u == 1:
        return SemiprimitiveData(u=1, d=1, s=1, delta=0)
    d = semiprimitivity(p, u)
    if d is None:
        raise NotSemiprimitiveError(
            f"p={p} is not semiprimitive modulo u={u}; exceptional codes are not covered")
    rt = params.r * params.t
    if rt % (2 * d):
        raise ParityError(f"rt={rt} is not divisible by 2d={2 * d}")
    s = rt // (2 * d)
    if p > 2 and s % 2 == 1 and ((p ** d + 1) // u) % 2 == 1:
        delta = u // 2
    else:
        delta = 0
    return SemiprimitiveData(u=u, d=d, s=s, delta=delta)


def _sqrt_order(params: CodeParams, sp: SemiprimitiveData) -> int:
    # q^(r/2) = p^(sd), valid once rt = 2sd
    return params.p ** (sp.s * sp.d)


def gaussian_period_closed(i: int, sp: SemiprimitiveData, params: CodeParams) -> int:
    """Gaussian period eta_i of order u, from the semiprimitive two-value formula."""
    u = sp.u
    if u == 1:
        return -1
    root = _sqrt_order(params, sp)
    sign = -1 if sp.s % 2 else 1  # (-1)^s
    if (i - sp.delta) % u == 0:
        scaled = -sign * (u - 1) * root
    else:
        scaled = sign * root
    return _exact_div(scaled - 1, u, f"eta_{i}")


def hamming_weights(params: CodeParams, sp: SemiprimitiveData) -> tuple[int, int | None]:
    """(W_A, W_B); W_B is None in the one-weight case u = 1."""
    n, q, r, Delta = params.n, params.q, params.r, params.Delta
    if sp.u == 1:
        return _exact_div(n * q ** (r - 1), Delta, "W_A"), None
    root = _sqrt_order(params, sp)
    sign = -1 if sp.s % 2 else 1
    c_a = -sign * (sp.u - 1)
    c_b = sign
    w_a = _exact_div(n * (q ** r - c_a * root), q * Delta, "W_A")
    w_b = _exact_div(n * (q ** r - c_b * root), q * Delta, "W_B")
    return w_a, w_b


def hamming_enumerator_closed(params: CodeParams, sp: SemiprimitiveData) -> WeightEnumerator:
    w_a, w_b = hamming_weights(params, sp)
    m, u = params.size - 1, sp.u
    terms = [(0, 1), (w_a, m // u)]
    if w_b is not None:
        terms.append((w_b, m * (u - 1) // u))
    return WeightEnumerator(terms)


@dataclass(frozen=True)
class PbSet:
    """The set P(b), stored as sorted discrete logs of its members."""

    b: int
    exponents: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.exponents)

    def __contains__(self, k: int) -> bool:
        return k in self.exponents


def build_P(params: CodeParams, b: int) -> PbSet:
    """P(b): for j = 1..b-1 the affine sets
    gamma^((j-1)N) + span_Fq(gamma^(jN), ..., gamma^((b-1)N)),
    together with the single element gamma^((b-1)N).
    """
    check_b(params, b)
    F = params.field
    N, q = params.N, params.q
    # spans[j] = span of gamma^(jN) .. gamma^((b-1)N); spans[b] = {0}
    spans: dict[int, list[int]] = {b: [0]}
    for j in range(b - 1, 0, -1):
        g = F.gamma(j * N)
        multiples = [F.mul(x, g) for x in range(q)]
        spans[j] = [F.add(mx, v) for mx in multiples for v in spans[j + 1]]
    members: set[int] = set()
    for j in range(1, b):
        lead = F.gamma((j - 1) * N)
        members.update(F.add(lead, v) for v in spans[j])
    members.add(F.gamma((b - 1) * N))
    expected = (q ** b - 1) // (q - 1)
    if 0 in members or len(members) != expected:
        raise CardinalityError(f"|P({b})| = {len(members)}, expected {expected}")
    return PbSet(b, tuple(sorted(F.log(x) for x in members)))


@dataclass(frozen=True)
class MuProfile:
    b: int
    mu: tuple[int, ...]

    def __getitem__(self, i: int) -> int:
        return self.mu[i % len(self.mu)]

    @property
    def size(self) -> int:
        return sum(self.mu)


def mu_profile(params: CodeParams, b: int, P: PbSet | None = None) -> MuProfile:
    """Counts of P(b) members in each cyclotomic class of order u."""
    if P is None:
        P = build_P(params, b)
    counts = [0] * params.u
    for k in P.exponents:
        counts[k % params.u] += 1
    return MuProfile(b, tuple(counts))


def bsymbol_weight_value(i: int, params: CodeParams, sp: SemiprimitiveData,
                         mu: MuProfile, b: int) -> int:
    """W_i^(b): b-symbol weight of c(a) for a in the class gamma^i <gamma^u>.

    Evaluated as [mu*W_A + (|P(b)| - mu)*W_B] / q^(b-1) with
    mu = mu_((delta - i) mod u)(b).
    """
    if mu.b != b:
        raise ValueError(f"mu profile is for b={mu.b}, not b={b}")
    w_a, w_b = hamming_weights(params, sp)
    m = mu[(sp.delta - i) % sp.u]
    size = mu.size
    total = m * w_a + ((size - m) * w_b if w_b is not None else 0)
    if w_b is None and m != size:
        raise NonIntegralWeightError("u = 1 but the mu profile is not concentrated")
    return _exact_div(total, params.q ** (b - 1), f"W_{i}^({b})")


def bsymbol_weights(params: CodeParams, sp: SemiprimitiveData, b: int,
                    mu: MuProfile | None = None) -> tuple[int, ...]:
    check_b(params, b)
    if mu is None:
        mu = mu_profile(params, b)
    return tuple(bsymbol_weight_value(i, params, sp, mu, b) for i in range(sp.u))


def bsymbol_enumerator_closed(params: CodeParams, sp: SemiprimitiveData, b: int,
                              mu: MuProfile | None = None) -> WeightEnumerator:
    weights = bsymbol_weights(params, sp, b, mu)
    per_class = (params.size - 1) // sp.u
    return WeightEnumerator([(0, 1)] + [(w, per_class) for w in weights])


def one_weight_enumerator(params: CodeParams, b: int) -> WeightEnumerator:
    if params.u != 1:
        raise UNotOneError(f"u = {params.u}; the one-weight form needs u = 1")
    check_b(params, b)
    q, r = params.q, params.r
    w = _exact_div(q ** r - q ** (r - b), params.N, "one-weight W")
    return WeightEnumerator([(0, 1), (w, q ** r - 1)])


@dataclass(frozen=True)
class MdsReport:
    b: int
    min_distance: int
    log_size: int
    singleton_exponent: int
    bound_holds: bool
    is_mds: bool
    all_weights_n: bool | None

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def mds_check(params: CodeParams, sp: SemiprimitiveData, b: int) -> MdsReport:
    """Singleton-type bound q^r <= q^(n - d_b + b), compared by exponents."""
    weights = bsymbol_weights(params, sp, b)
    d_b = min(weights)
    exponent = params.n - d_b + b
    return MdsReport(
        b=b,
        min_distance=d_b,
        log_size=params.r,
        singleton_exponent=exponent,
        bound_holds=params.r <= exponent,
        is_mds=params.r == exponent,
        all_weights_n=all(w == params.n for w in weights) if b == params.r else None,
    )


def _divisors(m: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= m:
        if m % d == 0:
            small.append(d)
            if d * d != m:
                large.append(m // d)
        d += 1
    return small + large[::-1]


def semiprimitive_instances(max_order: int,
                            primes: Iterable[int] | None = None,
                            ts: Iterable[int] | None = None,
                            rs: Iterable[int] | None = None,
                            min_order: int = 2) -> Iterator[tuple[int, int, int, int]]:
    """All (p, t, r, N) with min_order <= q^r <= max_order that define a code
    with Ord_n(q) = r, n > r, and either u = 1 or p semiprimitive mod u.

    Only integer conditions are tested; no field tables are built.
    """
    prime_list = sorted(primes) if primes is not None else [
        p for p in range(2, max_order + 1) if is_prime(p)]
    t_allowed = set(ts) if ts is not None else None
    r_allowed = set(rs) if rs is not None else None
    for p in prime_list:
        for t in itertools.count(1):
            q = p ** t
            if q > max_order:
                break
            if t_allowed is not None and t not in t_allowed:
                continue
            for r in itertools.count(1):
                order = q ** r
                if order > max_order:
                    break
                if order < min_order or (r_allowed is not None and r not in r_allowed):
                    continue
                m = order - 1
                Delta = m // (q - 1)
                for N in _divisors(m):
                    n = m // N
                    if n <= r or mult_order(q, n) != r:
                        continue
                    u = gcd(Delta, N)
                    if u == 1 or semiprimitivity(p, u) is not None:
                        yield p, t, r, N
