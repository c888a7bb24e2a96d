"""Irreducible cyclic codes as trace evaluations, and weight functions.

A code is fixed by a field tower and a divisor N of q^r - 1; its
codewords are c(a) = (Tr(a * gamma^(N*i)))_{i<n} with n = (q^r - 1)/N.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    BOutOfRangeError,
    DegenerateLengthError,
    LengthMismatchError,
    NonDivisorError,
    OrderMismatchError,
)
from .field import FieldTables, mult_order

__all__ = [
    "CodeParams",
    "Codeword",
    "WeightEnumerator",
    "b_distance",
    "b_symbol_weight",
    "check_b",
    "codeword",
    "codeword_matrix",
    "hamming_weight",
    "validate_params",
    "window_weights",
]


@dataclass(frozen=True, eq=False)
class CodeParams:
    """A validated [n, r] irreducible cyclic code over F_q."""

    field: FieldTables
    N: int
    n: int
    Delta: int
    u: int

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def t(self) -> int:
        return self.field.t

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def r(self) -> int:
        return self.field.r

    @property
    def size(self) -> int:
        """Number of codewords, q^r."""
        return self.field.order

    @property
    def max_b(self) -> int:
        return min(self.r, self.n - 1)

    def as_dict(self) -> dict:
        out = self.field.spec.as_dict()
        out.update(q=self.q, N=self.N, n=self.n, Delta=self.Delta, u=self.u)
        return out

    def __repr__(self) -> str:
        return (f"CodeParams(p={self.p}, t={self.t}, r={self.r}, N={self.N}, "
                f"n={self.n}, Delta={self.Delta}, u={self.u})")


def validate_params(field: FieldTables, N: int) -> CodeParams:
    """Check n*N = q^r - 1 and Ord_n(q) = r, and derive n, Delta, u."""
    m = field.order - 1
    if N < 1 or m % N:
        raise NonDivisorError(f"N={N} does not divide q^r - 1 = {m}")
    n = m // N
    order = mult_order(field.q, n)
    if order != field.r:
        raise OrderMismatchError(
            f"Ord_{n}({field.q}) = {order} != r = {field.r}; the code lives in a smaller extension")
    if n <= field.r:
        raise DegenerateLengthError(f"length n={n} leaves no window size 1 <= b <= min(r, n-1)")
    Delta = field.Delta
    return CodeParams(field, N, n, Delta, gcd(Delta, N))


def check_b(params: CodeParams, b: int) -> None:
    if not 1 <= b <= params.max_b:
        raise BOutOfRangeError(f"b={b} outside [1, min(r, n-1)] = [1, {params.max_b}]")


@dataclass(frozen=True)
class Codeword:
    coords: tuple[int, ...]
    source: int

    def __len__(self) -> int:
        return len(self.coords)


def codeword(params: CodeParams, a: int) -> Codeword:
    """c(a) = (Tr_{q^r/q}(a * gamma^(N*i)))_{i<n} for a packed element ``a``."""
    if a == 0:
        return Codeword((0,) * params.n, 0)
    k = params.field.log(a)
    row = codeword_matrix(params, np.asarray([k]))[0]
    return Codeword(tuple(int(x) for x in row), a)


def codeword_matrix(params: CodeParams, exponents: np.ndarray) -> np.ndarray:
    """Rows c(gamma^k) for each exponent k, as packed F_q symbols."""
    m = params.field.order - 1
    idx = (np.asarray(exponents, dtype=np.int64)[:, None]
           + params.N * np.arange(params.n, dtype=np.int64)) % m
    return params.field.trace_q[idx]


def _coords(v) -> Sequence[int]:
    return v.coords if isinstance(v, Codeword) else v


def hamming_weight(v: Codeword | Sequence[int]) -> int:
    return sum(1 for x in _coords(v) if x)


def b_symbol_weight(v: Codeword | Sequence[int], b: int) -> int:
    """Number of cyclic length-b windows of ``v`` that are not all zero."""
    x = _coords(v)
    n = len(x)
    if not 1 <= b < n:
        raise BOutOfRangeError(f"b={b} outside [1, n-1] for n={n}")
    return sum(1 for i in range(n) if any(x[(i + j) % n] for j in range(b)))


def b_distance(x: Codeword | Sequence[int], y: Codeword | Sequence[int], b: int) -> int:
    """d_b(x, y) = w_b(x - y).

    Only the zero pattern of x - y matters, and x_i - y_i = 0 iff x_i == y_i.
    """
    xs, ys = _coords(x), _coords(y)
    if len(xs) != len(ys):
        raise LengthMismatchError(f"lengths {len(xs)} and {len(ys)} differ")
    return b_symbol_weight([int(a != c) for a, c in zip(xs, ys)], b)


def window_weights(rows: np.ndarray, bs: Iterable[int]) -> dict[int, np.ndarray]:
    """Vectorized b-symbol weights of each row, for every b in ``bs``.

    Window i for size b covers positions i..i+b-1 (mod n); the all-zero
    test is built up one extra position per step.
    """
    wanted = sorted(set(bs))
    if not wanted:
        return {}
    nz = np.asarray(rows) != 0
    n = nz.shape[1]
    if wanted[0] < 1 or wanted[-1] >= n:
        raise BOutOfRangeError(f"window sizes {wanted} outside [1, {n - 1}]")
    out: dict[int, np.ndarray] = {}
    cover = nz.copy()
    for b in range(1, wanted[-1] + 1):
        if b > 1:
            cover |= np.roll(nz, -(b - 1), axis=1)
        if b in wanted:
            out[b] = cover.sum(axis=1)
    return out


class WeightEnumerator:
    """Sparse weight distribution: weight -> number of codewords.

    Merging with ``+`` adds counts pointwise; the empty enumerator is the
    identity.  Zero counts are dropped.
    """

    __slots__ = ("_counts",)

    def __init__(self, counts: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = counts.items() if isinstance(counts, Mapping) else counts
        acc: dict[int, int] = {}
        for w, c in items:
            acc[int(w)] = acc.get(int(w), 0) + int(c)
        self._counts = {w: acc[w] for w in sorted(acc) if acc[w]}

    @property
    def counts(self) -> dict[int, int]:
        return dict(self._counts)

    @property
    def total(self) -> int:
        return sum(self._counts.values())

    def __getitem__(self, weight: int) -> int:
        return self._counts.get(weight, 0)

    def __iter__(self):
        return iter(self._counts.items())

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeightEnumerator):
            return NotImplemented
        return self._counts == other._counts

    def __hash__(self) -> int:
        return hash(tuple(self._counts.items()))

    def __add__(self, other: "WeightEnumerator") -> "WeightEnumerator":
        merged = dict(self._counts)
        for w, c in other._counts.items():
            merged[w] = merged.get(w, 0) + c
        return WeightEnumerator(merged)

    def __repr__(self) -> str:
        return f"WeightEnumerator({self._counts})"

    def nonzero_weights(self) -> list[int]:
        return [w for w in self._counts if w]

    def min_nonzero_weight(self) -> int:
        return min(self.nonzero_weights())

    def difference(self, other: "WeightEnumerator") -> dict[int, tuple[int, int]]:
        """Weights where the two disagree, mapped to (self, other) counts."""
        keys = sorted(set(self._counts) | set(other._counts))
        return {w: (self[w], other[w]) for w in keys if self[w] != other[w]}

    def to_text(self, var: str = "T") -> str:
        terms = []
        for w, c in self._counts.items():
            if w == 0:
                terms.append(str(c))
                continue
            mono = var if w == 1 else f"{var}^{w}"
            terms.append(mono if c == 1 else f"{c}{mono}")
        return " + ".join(terms) if terms else "0"

    def to_json(self) -> dict:
        return {
            "enumerator": [{"weight": w, "count": c} for w, c in self._counts.items() if w],
            "constant_term": self[0],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "WeightEnumerator":
        pairs = [(e["weight"], e["count"]) for e in data["enumerator"]]
        pairs.append((0, data.get("constant_term", 0)))
        return cls(pairs)
